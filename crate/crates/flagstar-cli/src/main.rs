//! Batch command-line surface for the exact quantization pipeline.
//!
//! `flagstar <command> --config <file> [--degree D] [--out DIR] [--jobs K]
//! [--no-cache] [--max-order K]`
//!
//! Commands: `run`, `star`, `lambda`, `gram`, `probe-rpn`, `dims`.
//! Exit codes: 0 all checks pass, 1 check failure or violated exact
//! identity, 2 usage or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use flagstar::exprs::parse_momentum_expr;
use flagstar::flag::FlagConfig;
use flagstar::quant::{probe_vertical_presentation, QuantEngine};
use flagstar::verify::{verify, CheckStatus, VerifyOptions};

mod cache;
mod report;

#[derive(Debug, Clone, serde::Deserialize)]
struct FileConfig {
    n: usize,
    dims: Vec<usize>,
    max_degree: u32,
    #[serde(default = "default_probe")]
    probe: bool,
    #[serde(default = "default_max_order")]
    max_order: u32,
    /// Default report directory for `run`; the `--out` flag overrides.
    #[serde(default)]
    out: Option<PathBuf>,
    /// Basis cache toggle; `--no-cache` overrides.
    #[serde(default = "default_cache")]
    cache: bool,
}

fn default_probe() -> bool {
    true
}

fn default_max_order() -> u32 {
    4
}

fn default_cache() -> bool {
    true
}

struct Args {
    command: String,
    config_path: Option<PathBuf>,
    degree: Option<u32>,
    out: Option<PathBuf>,
    jobs: usize,
    no_cache: bool,
    max_order: Option<u32>,
    positional: Vec<String>,
}

const USAGE: &str = "usage: flagstar <run|star|lambda|gram|probe-rpn|dims> --config <file.json> \
[--degree D] [--out DIR] [--jobs K] [--no-cache] [--max-order K] [args...]

commands:
  run              full pipeline: certificates, property suites, report bundle
  star PHI PSI     star-product coefficients of two momentum expressions
  lambda           scalar pairing matrix of the annihilation operators
  gram             positivity certificate pivots of both Gram forms
  probe-rpn        bounded-order feasibility probe for a vertical presentation
  dims             graded dimension table

config file: {\"n\": 2, \"dims\": [1], \"max_degree\": 4} with optional
\"probe\" (bool), \"max_order\" (int), \"out\" (dir), \"cache\" (bool) fields.";

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let command = argv.next().ok_or_else(|| USAGE.to_string())?;
    if command == "-h" || command == "--help" || command == "help" {
        return Err(USAGE.to_string());
    }
    let mut args = Args {
        command,
        config_path: None,
        degree: None,
        out: None,
        jobs: 1,
        no_cache: false,
        max_order: None,
        positional: Vec::new(),
    };
    let mut rest: Vec<String> = argv.collect();
    while !rest.is_empty() {
        let arg = rest.remove(0);
        let mut take_value = |flag: &str| -> Result<String, String> {
            if rest.is_empty() {
                return Err(format!("{flag} needs a value"));
            }
            Ok(rest.remove(0))
        };
        match arg.as_str() {
            "--config" => args.config_path = Some(PathBuf::from(take_value("--config")?)),
            "--degree" => {
                let v = take_value("--degree")?;
                args.degree = Some(v.parse().map_err(|_| format!("bad degree `{v}`"))?);
            }
            "--out" => args.out = Some(PathBuf::from(take_value("--out")?)),
            "--jobs" => {
                let v = take_value("--jobs")?;
                args.jobs = v.parse().map_err(|_| format!("bad job count `{v}`"))?;
                if args.jobs == 0 {
                    return Err("--jobs must be at least 1".into());
                }
            }
            "--no-cache" => args.no_cache = true,
            "--max-order" => {
                let v = take_value("--max-order")?;
                args.max_order = Some(v.parse().map_err(|_| format!("bad order `{v}`"))?);
            }
            other if other.starts_with("--") => {
                return Err(format!("unknown flag `{other}`"));
            }
            _ => args.positional.push(arg),
        }
    }
    Ok(args)
}

fn load_config(args: &Args) -> Result<FileConfig, String> {
    let path = args
        .config_path
        .as_ref()
        .ok_or_else(|| "--config <file.json> is required".to_string())?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut cfg: FileConfig =
        serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
    if let Some(d) = args.degree {
        cfg.max_degree = d;
    }
    if let Some(o) = args.max_order {
        cfg.max_order = o;
    }
    Ok(cfg)
}

fn build_engine(cfg: &FileConfig, args: &Args) -> Result<QuantEngine, String> {
    let flag = FlagConfig::new(cfg.n, cfg.dims.clone()).map_err(|e| e.to_string())?;
    let use_cache = cfg.cache && !args.no_cache;
    let cached = if use_cache {
        cache::load(&flag, cfg.max_degree)
    } else {
        None
    };
    let had_cache = cached.is_some();
    let engine = QuantEngine::build_with_basis(flag, cfg.max_degree, cached)
        .map_err(|e| e.to_string())?;
    if use_cache && !had_cache {
        if let Err(e) = cache::store(&engine) {
            eprintln!("warning: could not write basis cache: {e}");
        }
    }
    Ok(engine)
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(args: &Args) -> Result<ExitCode, String> {
    let cfg = load_config(args)?;
    match args.command.as_str() {
        "run" => cmd_run(args, &cfg),
        "star" => cmd_star(args, &cfg),
        "lambda" => cmd_lambda(args, &cfg),
        "gram" => cmd_gram(args, &cfg),
        "probe-rpn" => cmd_probe(args, &cfg),
        "dims" => cmd_dims(args, &cfg),
        other => Err(format!("unknown command `{other}`\n{USAGE}")),
    }
}

fn cmd_run(args: &Args, cfg: &FileConfig) -> Result<ExitCode, String> {
    let engine = build_engine(cfg, args)?;
    let opts = VerifyOptions {
        probe: cfg.probe,
        probe_max_order: cfg.max_order,
        jobs: args.jobs,
    };
    let v = verify(&engine, &opts).map_err(|e| e.to_string())?;
    for c in &v.checks {
        println!("{} {} [{}] {}", c.status.as_str(), c.name, c.anchor, c.witness);
    }
    let pass = v.checks.iter().filter(|c| c.status == CheckStatus::Pass).count();
    let info = v.checks.iter().filter(|c| c.status == CheckStatus::Info).count();
    println!("summary: {pass} pass, {} fail, {info} info", v.failures);
    if let Some(out) = args.out.as_ref().or(cfg.out.as_ref()) {
        report::write_bundle(out, &engine, &v)
            .map_err(|e| format!("cannot write report bundle: {e}"))?;
        println!("report bundle written to {}", out.display());
    }
    Ok(if v.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_star(args: &Args, cfg: &FileConfig) -> Result<ExitCode, String> {
    if args.positional.len() != 2 {
        return Err("star needs two expressions, e.g. `star E12 E21`".into());
    }
    let engine = build_engine(cfg, args)?;
    let phi = parse_momentum_expr(&args.positional[0], &engine.model).map_err(|e| e.to_string())?;
    let psi = parse_momentum_expr(&args.positional[1], &engine.model).map_err(|e| e.to_string())?;
    let coeffs = engine
        .star_coeffs_mixed(&phi, &psi)
        .map_err(|e| e.to_string())?;
    for (p, c) in coeffs.iter().enumerate() {
        println!("C_{p} = {c}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lambda(args: &Args, cfg: &FileConfig) -> Result<ExitCode, String> {
    let engine = build_engine(cfg, args)?;
    let pairing = engine.lambda_mu_pairing().map_err(|e| e.to_string())?;
    println!("x,y,value");
    for a in 0..engine.model.sl.dim {
        for b in 0..engine.model.sl.dim {
            println!(
                "{},{},{}",
                engine.model.sl.names[a],
                engine.model.sl.names[b],
                pairing.at(a, b)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gram(args: &Args, cfg: &FileConfig) -> Result<ExitCode, String> {
    use flagstar::linalg::all_pivots_positive;
    let engine = build_engine(cfg, args)?;
    println!("side,degree,weight,index,pivot");
    let mut all_positive = true;
    for (w, pivots) in &engine.gram_d_pivots {
        all_positive &= all_pivots_positive(pivots);
        for (i, p) in pivots.iter().enumerate() {
            println!(
                "operators,{},{},{},{}",
                engine.depth,
                report::weight_label(w),
                i,
                p
            );
        }
    }
    for (d, per_degree) in engine.gram_r_pivots.iter().enumerate() {
        for (w, pivots) in per_degree {
            all_positive &= all_pivots_positive(pivots);
            for (i, p) in pivots.iter().enumerate() {
                println!("symbols,{d},{},{},{}", report::weight_label(w), i, p);
            }
        }
    }
    Ok(if all_positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_probe(args: &Args, cfg: &FileConfig) -> Result<ExitCode, String> {
    let engine = build_engine(cfg, args)?;
    let reports =
        probe_vertical_presentation(&engine, cfg.max_order).map_err(|e| e.to_string())?;
    for r in &reports {
        println!(
            "{}: {} (order <= {}, coefficient degrees <= {}, depth {})",
            r.generator,
            if r.feasible { "feasible" } else { "infeasible" },
            r.max_order,
            r.coeff_degree_cap,
            r.depth
        );
        if let Some(w) = &r.witness {
            println!("  witness: {w}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dims(args: &Args, cfg: &FileConfig) -> Result<ExitCode, String> {
    let engine = build_engine(cfg, args)?;
    println!("degree,dim_sym,dim_ideal,dim_symbols");
    for d in 0..=engine.depth {
        println!(
            "{d},{},{},{}",
            engine.ideal.dim_sym(d),
            engine.ideal.dim_ideal(d),
            engine.rb.dim(d)
        );
    }
    Ok(ExitCode::SUCCESS)
}
