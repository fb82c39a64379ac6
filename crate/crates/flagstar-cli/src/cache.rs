//! Content-addressed cache for the filtered operator basis.
//!
//! Basis construction dominates runtime; the echelon rows, degrees, weights,
//! and provenance round-trip through a versioned text format keyed by an
//! FNV-1a hash of the configuration.

use std::path::PathBuf;

use flagstar::dmodule::{FilteredBasisD, Provenance};
use flagstar::flag::FlagConfig;
use flagstar::quant::QuantEngine;
use flagstar::scalar::{parse_scalar, GaussianRational};
use flagstar::weyl::parse_weyl_op;

const FORMAT: &str = "flagstar-basis/1";

fn fnv1a(data: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in data.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn cache_key(config: &FlagConfig, depth: u32) -> String {
    let dims: Vec<String> = config.dims.iter().map(|d| d.to_string()).collect();
    format!(
        "{FORMAT}|{}|{}|{}",
        config.n,
        dims.join(","),
        flagstar::quant::pairing_depth(depth)
    )
}

fn cache_path(config: &FlagConfig, depth: u32) -> PathBuf {
    let key = cache_key(config, depth);
    PathBuf::from(".flagstar-cache").join(format!("{:016x}.basis", fnv1a(&key)))
}

/// Serializes the filtered basis of a built engine.
pub fn store(engine: &QuantEngine) -> std::io::Result<()> {
    let path = cache_path(&engine.model.config, engine.depth);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let fb = &engine.fb;
    let mut out = String::new();
    out.push_str(&format!(
        "{}\nkey {}\nm {}\nmax_degree {}\nrows {}\n",
        FORMAT,
        cache_key(&engine.model.config, engine.depth),
        fb.m,
        fb.max_degree,
        fb.len()
    ));
    for i in 0..fb.len() {
        let w: Vec<String> = fb.weights[i].iter().map(|x| x.to_string()).collect();
        let prov = match &fb.provenance[i] {
            Provenance::Unit => "unit".to_string(),
            Provenance::Word {
                gen,
                src,
                combo,
                scale,
            } => {
                let combo_txt: Vec<String> = combo
                    .iter()
                    .map(|(l, c)| format!("{l}:{c}"))
                    .collect();
                format!("word {gen} {src} {scale} [{}]", combo_txt.join(";"))
            }
        };
        out.push_str(&format!(
            "row {} | {} | {} | {}\n",
            fb.degrees[i],
            w.join(","),
            prov,
            fb.op(i)
        ));
    }
    std::fs::write(path, out)
}

/// Loads a cached basis when present and structurally valid.
pub fn load(config: &FlagConfig, depth: u32) -> Option<FilteredBasisD> {
    let path = cache_path(config, depth);
    let text = std::fs::read_to_string(path).ok()?;
    parse(&text, config, depth)
}

fn parse(text: &str, config: &FlagConfig, depth: u32) -> Option<FilteredBasisD> {
    let mut lines = text.lines();
    if lines.next()? != FORMAT {
        return None;
    }
    let key_line = lines.next()?;
    if key_line != format!("key {}", cache_key(config, depth)) {
        return None;
    }
    let m: usize = lines.next()?.strip_prefix("m ")?.parse().ok()?;
    let max_degree: u32 = lines.next()?.strip_prefix("max_degree ")?.parse().ok()?;
    let count: usize = lines.next()?.strip_prefix("rows ")?.parse().ok()?;
    let mut rows = Vec::with_capacity(count);
    for line in lines {
        let body = line.strip_prefix("row ")?;
        let mut parts = body.splitn(4, " | ");
        let degree: u32 = parts.next()?.trim().parse().ok()?;
        let weight: Vec<i64> = {
            let w = parts.next()?.trim();
            if w.is_empty() {
                Vec::new()
            } else {
                w.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?
            }
        };
        let prov_txt = parts.next()?.trim();
        let prov = if prov_txt == "unit" {
            Provenance::Unit
        } else {
            let body = prov_txt.strip_prefix("word ")?;
            let mut it = body.splitn(4, ' ');
            let gen: usize = it.next()?.parse().ok()?;
            let src: usize = it.next()?.parse().ok()?;
            let scale: GaussianRational = parse_scalar(it.next()?).ok()?;
            let combo_txt = it.next()?.trim().strip_prefix('[')?.strip_suffix(']')?;
            let mut combo = Vec::new();
            if !combo_txt.is_empty() {
                for entry in combo_txt.split(';') {
                    let (l, c) = entry.split_once(':')?;
                    combo.push((l.parse().ok()?, parse_scalar(c).ok()?));
                }
            }
            Provenance::Word {
                gen,
                src,
                combo,
                scale,
            }
        };
        let op = parse_weyl_op(parts.next()?.trim(), m).ok()?;
        rows.push((degree, weight, prov, op));
    }
    if rows.len() != count {
        return None;
    }
    FilteredBasisD::from_rows(m, max_degree, rows).ok()
}
