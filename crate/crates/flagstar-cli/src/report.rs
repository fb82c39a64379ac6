//! Report bundle: machine-readable JSON summary, CSV tables, and the
//! serialized per-degree quantization data. Output is canonical and
//! byte-identical across runs and thread counts.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::Serialize;

use flagstar::quant::QuantEngine;
use flagstar::verify::Verification;

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    config: ConfigOut,
    summary: Summary,
    checks: Vec<CheckOut>,
    probe: Vec<ProbeOut>,
    tables: Tables,
}

#[derive(Serialize)]
struct ConfigOut {
    n: usize,
    dims: Vec<usize>,
    max_degree: u32,
}

#[derive(Serialize)]
struct Summary {
    pass: usize,
    fail: usize,
    info: usize,
    /// `T(eta^a eta^b) = kappa * (x_a, x_b)`.
    kappa: Option<String>,
    /// `Lambda^x(mu^y) = c * (x, y)`.
    lambda_constant: Option<String>,
    casimir_scalars: Vec<String>,
    /// Trace of products of generators, keyed `a,b`.
    trace_generator_pairing: BTreeMap<String, String>,
    graded_dimensions: Vec<(u32, usize, usize, usize)>,
}

#[derive(Serialize)]
struct CheckOut {
    name: String,
    anchor: String,
    status: &'static str,
    witness: String,
}

#[derive(Serialize)]
struct ProbeOut {
    generator: String,
    feasible: bool,
    max_order: u32,
    coeff_degree_cap: u32,
    depth: u32,
    witness: Option<String>,
}

#[derive(Serialize)]
struct Tables {
    dims: &'static str,
    gram_pivots: &'static str,
    lambda_pairing: &'static str,
    quantization: &'static str,
}

/// Weight vector as a CSV-safe label.
pub fn weight_label(w: &[i64]) -> String {
    if w.is_empty() {
        return "()".into();
    }
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(";"))
}

pub fn write_bundle(out: &Path, engine: &QuantEngine, v: &Verification) -> io::Result<()> {
    std::fs::create_dir_all(out)?;

    // trace pairing of generators
    let mut pairing_map = BTreeMap::new();
    for a in 0..engine.model.sl.dim {
        for b in 0..engine.model.sl.dim {
            let t = engine
                .trace
                .eval(
                    &engine.model.eta[a].compose(&engine.model.eta[b]),
                    &engine.model.z_weights,
                )
                .map_err(|e| io::Error::other(e.to_string()))?;
            pairing_map.insert(
                format!("{},{}", engine.model.sl.names[a], engine.model.sl.names[b]),
                t.to_string(),
            );
        }
    }

    let report = Report {
        schema: "flagstar/1",
        config: ConfigOut {
            n: engine.model.config.n,
            dims: engine.model.config.dims.clone(),
            max_degree: engine.depth,
        },
        summary: Summary {
            pass: v
                .checks
                .iter()
                .filter(|c| c.status == flagstar::verify::CheckStatus::Pass)
                .count(),
            fail: v.failures,
            info: v
                .checks
                .iter()
                .filter(|c| c.status == flagstar::verify::CheckStatus::Info)
                .count(),
            kappa: v.kappa.as_ref().map(|k| k.to_string()),
            lambda_constant: v.lambda_constant.as_ref().map(|k| k.to_string()),
            casimir_scalars: v.casimir_scalars.iter().map(|s| s.to_string()).collect(),
            trace_generator_pairing: pairing_map,
            graded_dimensions: v.dims_table.clone(),
        },
        checks: v
            .checks
            .iter()
            .map(|c| CheckOut {
                name: c.name.clone(),
                anchor: c.anchor.clone(),
                status: c.status.as_str(),
                witness: c.witness.clone(),
            })
            .collect(),
        probe: v
            .probe
            .iter()
            .map(|p| ProbeOut {
                generator: p.generator.clone(),
                feasible: p.feasible,
                max_order: p.max_order,
                coeff_degree_cap: p.coeff_degree_cap,
                depth: p.depth,
                witness: p.witness.clone(),
            })
            .collect(),
        tables: Tables {
            dims: "dims.csv",
            gram_pivots: "gram_pivots.csv",
            lambda_pairing: "lambda_pairing.csv",
            quantization: "quantization_data.txt",
        },
    };
    let mut json = serde_json::to_string_pretty(&report).expect("serializable report");
    json.push('\n');
    std::fs::write(out.join("report.json"), json)?;

    // dims.csv
    let mut dims = String::from("degree,dim_sym,dim_ideal,dim_symbols\n");
    for (d, s, i, r) in &v.dims_table {
        dims.push_str(&format!("{d},{s},{i},{r}\n"));
    }
    std::fs::write(out.join("dims.csv"), dims)?;

    // gram_pivots.csv
    let mut pivots = String::from("side,degree,weight,index,pivot\n");
    for (w, ps) in &engine.gram_d_pivots {
        for (i, p) in ps.iter().enumerate() {
            pivots.push_str(&format!(
                "operators,{},{},{},{}\n",
                engine.depth,
                weight_label(w),
                i,
                p
            ));
        }
    }
    for (d, per_degree) in engine.gram_r_pivots.iter().enumerate() {
        for (w, ps) in per_degree {
            for (i, p) in ps.iter().enumerate() {
                pivots.push_str(&format!("symbols,{d},{},{},{}\n", weight_label(w), i, p));
            }
        }
    }
    std::fs::write(out.join("gram_pivots.csv"), pivots)?;

    // lambda_pairing.csv
    let mut lp = String::from("x,y,value\n");
    for a in 0..engine.model.sl.dim {
        for b in 0..engine.model.sl.dim {
            lp.push_str(&format!(
                "{},{},{}\n",
                engine.model.sl.names[a],
                engine.model.sl.names[b],
                v.lambda_pairing.at(a, b)
            ));
        }
    }
    std::fs::write(out.join("lambda_pairing.csv"), lp)?;

    // quantization_data.txt: per-degree bases, quantized images, Gram data,
    // certificates, and annihilation matrices
    let mut qd = String::from("flagstar-quantization/1\n");
    qd.push_str(&format!(
        "config n={} dims={} max_degree={}\n",
        engine.model.config.n,
        engine
            .model
            .config
            .dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
        engine.depth
    ));
    for d in 0..=engine.depth {
        let dim = engine.rb.dim(d);
        qd.push_str(&format!("degree {d} dim {dim}\n"));
        for (i, b) in engine.rb.degrees[d as usize].elems.iter().enumerate() {
            qd.push_str(&format!("  basis {i}: {b}\n"));
        }
        for (i, op) in engine.bq_basis_ops[d as usize].iter().enumerate() {
            qd.push_str(&format!("  bq {i}: {op}\n"));
        }
        let gram = &engine.gram_r[d as usize];
        for i in 0..dim {
            for j in 0..dim {
                let val = gram.at(i, j);
                if !val.is_zero() {
                    qd.push_str(&format!("  gram {i},{j}: {val}\n"));
                }
            }
        }
        for (w, ps) in &engine.gram_r_pivots[d as usize] {
            let txt: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
            qd.push_str(&format!("  pivots {}: {}\n", weight_label(w), txt.join(", ")));
        }
        if d >= 1 {
            for a in 0..engine.model.sl.dim {
                let lam = &engine.lambda_ops[d as usize][a];
                for i in 0..lam.rows {
                    for j in 0..lam.cols {
                        let val = lam.at(i, j);
                        if !val.is_zero() {
                            qd.push_str(&format!(
                                "  lambda {} {i},{j}: {val}\n",
                                engine.model.sl.names[a]
                            ));
                        }
                    }
                }
            }
        }
    }
    std::fs::write(out.join("quantization_data.txt"), qd)?;
    Ok(())
}
