//! End-to-end command behavior: outputs, exit codes, cache equivalence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_flagstar")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flagstar-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, n: usize, dims: &[usize], d: u32) -> PathBuf {
    let path = dir.join("config.json");
    let dims_txt: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
    std::fs::write(
        &path,
        format!(
            "{{\"n\":{n},\"dims\":[{}],\"max_degree\":{d}}}",
            dims_txt.join(",")
        ),
    )
    .unwrap();
    path
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn flagstar")
}

#[test]
fn star_command_matches_worked_example() {
    let dir = workdir("star");
    let cfg = write_config(&dir, 2, &[1], 3);
    let out = run_in(&dir, &["star", "--config", cfg.to_str().unwrap(), "E12", "E21"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // C0 = mu^e mu^f = -z1^2 p1^2, C1 = mu^h/2 = -z1 p1, C2 = -1/6
    assert!(text.contains("C_0 = (-1)*z1^2*p1^2"), "got: {text}");
    assert!(text.contains("C_1 = (-1)*z1*p1"), "got: {text}");
    assert!(text.contains("C_2 = (-1/6)"), "got: {text}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn star_unit_absorbs() {
    let dir = workdir("star-unit");
    let cfg = write_config(&dir, 2, &[1], 3);
    let out = run_in(
        &dir,
        &["star", "--config", cfg.to_str().unwrap(), "1", "E12*E12"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("C_0 = (1)*p1^2"));
    for rest in lines {
        assert!(rest.ends_with("= (0)"), "expected zero coefficient: {rest}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn star_zero_bracket_kills_first_order() {
    let dir = workdir("star-same");
    let cfg = write_config(&dir, 2, &[1], 3);
    let out = run_in(
        &dir,
        &["star", "--config", cfg.to_str().unwrap(), "E12", "E12"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let c1 = text.lines().find(|l| l.starts_with("C_1")).unwrap();
    assert_eq!(c1, "C_1 = (0)");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = workdir("errors");
    let cfg = write_config(&dir, 2, &[1], 2);
    // unknown command
    assert_eq!(run_in(&dir, &["bogus", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    // missing config
    assert_eq!(run_in(&dir, &["run"]).status.code(), Some(2));
    // bad expression
    assert_eq!(
        run_in(&dir, &["star", "--config", cfg.to_str().unwrap(), "E13", "E12"]).status.code(),
        Some(2)
    );
    // degree beyond the built depth
    assert_eq!(
        run_in(
            &dir,
            &["star", "--config", cfg.to_str().unwrap(), "E12*E12", "E12*E21"]
        )
        .status
        .code(),
        Some(2)
    );
    // invalid flag dims
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\":3,\"dims\":[2,1],\"max_degree\":2}").unwrap();
    assert_eq!(
        run_in(&dir, &["dims", "--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn trivial_depth_zero_run() {
    let dir = workdir("depth0");
    let cfg = write_config(&dir, 2, &[1], 0);
    let out = run_in(
        &dir,
        &["run", "--config", cfg.to_str().unwrap(), "--out", "out"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.join("out/report.json")).unwrap();
    assert!(report.contains("\"fail\": 0"));
    assert!(report.contains("<1|1> = 1"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn degree_flag_overrides_config() {
    let dir = workdir("degree-override");
    let cfg = write_config(&dir, 2, &[1], 1);
    let out = run_in(
        &dir,
        &[
            "dims",
            "--config",
            cfg.to_str().unwrap(),
            "--degree",
            "3",
        ],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("3,")), "got: {text}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cache_and_no_cache_agree() {
    let dir = workdir("cache");
    let cfg = write_config(&dir, 2, &[1], 2);
    let a = run_in(
        &dir,
        &["run", "--config", cfg.to_str().unwrap(), "--out", "out-a"],
    );
    assert!(a.status.success());
    assert!(dir.join(".flagstar-cache").exists(), "cache directory written");
    // second run hits the cache; third bypasses it
    let b = run_in(
        &dir,
        &["run", "--config", cfg.to_str().unwrap(), "--out", "out-b"],
    );
    assert!(b.status.success());
    let c = run_in(
        &dir,
        &[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "out-c",
            "--no-cache",
        ],
    );
    assert!(c.status.success());
    for name in ["report.json", "dims.csv", "gram_pivots.csv", "lambda_pairing.csv"] {
        let fa = std::fs::read(dir.join("out-a").join(name)).unwrap();
        let fb = std::fs::read(dir.join("out-b").join(name)).unwrap();
        let fc = std::fs::read(dir.join("out-c").join(name)).unwrap();
        assert_eq!(fa, fb, "{name} differs with cache");
        assert_eq!(fa, fc, "{name} differs without cache");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn probe_command_reports_outcomes() {
    let dir = workdir("probe");
    let cfg = write_config(&dir, 2, &[1], 3);
    let out = run_in(
        &dir,
        &["probe-rpn", "--config", cfg.to_str().unwrap(), "--max-order", "4"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for gen in ["E12", "E21", "H1"] {
        assert!(text.contains(&format!("{gen}: ")), "missing {gen} in: {text}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn lambda_command_symmetry() {
    let dir = workdir("lambda");
    let cfg = write_config(&dir, 2, &[1], 2);
    let out = run_in(&dir, &["lambda", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text: String = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("E12,E21,-1/6"));
    assert!(text.contains("H1,H1,-1/3"));
    let _ = std::fs::remove_dir_all(&dir);
}
