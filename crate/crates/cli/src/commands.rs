//! The subcommands. Each returns the JSON document to print.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use loopfact::assembly::{assemble_loop, assemble_triangular};
use loopfact::experiment::{random_coordinates, trial_rng, RoundtripReport};
use loopfact::factorization::{birkhoff_factor_with, triangular_from_birkhoff};
use loopfact::oracle::OracleFixture;
use loopfact::solver::solve_all;
use loopfact::{LaurentSeries, MatrixLoop, RootSubgroupCoordinates, VERSION};

use crate::config::{ConfigArgs, Mode, RunConfig};
use crate::CliError;

const DEFAULT_FIXTURES: &str = "fixtures/oracle";

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// A bare loop, or any document carrying one under `"loop"` (such as the
/// output of `forward`).
fn read_loop(path: &Path) -> Result<MatrixLoop<Complex64>, CliError> {
    let v = read_json(path)?;
    let body = v.get("loop").unwrap_or(&v);
    Ok(MatrixLoop::from_json(body)?)
}

fn header(cfg: &RunConfig) -> Value {
    json!({"version": VERSION, "config": cfg.to_json()})
}

fn with_header(cfg: &RunConfig, body: Value) -> Value {
    let mut out = header(cfg);
    if let (Some(o), Value::Object(b)) = (out.as_object_mut(), body) {
        o.extend(b);
    }
    out
}

pub fn forward(coords: Option<&Path>, args: &ConfigArgs) -> Result<Value, CliError> {
    let given = match coords {
        Some(p) => Some(RootSubgroupCoordinates::from_json(&read_json(p)?)?.padded()),
        None => None,
    };
    let cfg = RunConfig::resolve(args, Mode::Float, given.as_ref().map(|c| c.degree()))?;
    cfg.require_float("forward")?;
    let coords = given.unwrap_or_else(|| random_coordinates(&mut trial_rng(cfg.seed, 0), cfg.degree, cfg.rho));
    let g = assemble_loop(&coords, None);
    let t = assemble_triangular(&coords, None);
    let det_residual = g.det_full().sub(&LaurentSeries::one()).max_abs();
    Ok(with_header(
        &cfg,
        json!({
            "coordinates": coords.to_json(),
            "loop": g.to_json(),
            "triangular": t.to_json(),
            "diagnostics": {
                "unitary_defect": g.unitary_defect(cfg.grid_size),
                "det_residual": det_residual,
            },
        }),
    ))
}

pub fn factor(input: &Path, args: &ConfigArgs) -> Result<Value, CliError> {
    let g = read_loop(input)?;
    let cfg = RunConfig::resolve(args, Mode::Float, None)?;
    cfg.require_float("factor")?;
    let opts = cfg.solve_options();
    let b = birkhoff_factor_with(&g, opts.toeplitz_size, opts.condition_limit)?;
    let t = triangular_from_birkhoff(&b)?;
    Ok(with_header(&cfg, json!({"birkhoff": b.to_json(), "triangular": t.to_json()})))
}

pub fn solve(input: &Path, args: &ConfigArgs) -> Result<Value, CliError> {
    let g = read_loop(input)?;
    let cfg = RunConfig::resolve(args, Mode::Float, None)?;
    cfg.require_float("solve")?;
    let out = solve_all(&g, &cfg.solve_options())?;
    Ok(with_header(&cfg, out.to_json()))
}

pub fn roundtrip(args: &ConfigArgs, timings: bool) -> Result<Value, CliError> {
    let cfg = RunConfig::resolve(args, Mode::Float, None)?;
    cfg.require_float("roundtrip")?;
    let report = RoundtripReport::run(cfg.seed, cfg.trials, cfg.rho, &cfg.solve_options());
    Ok(with_header(&cfg, report.to_json(timings)))
}

/// Fixture files named by `paths`; directories contribute their `*.json`
/// files in name order.
fn fixture_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let defaulted = paths.is_empty();
    let roots = if defaulted { vec![PathBuf::from(DEFAULT_FIXTURES)] } else { paths.to_vec() };
    let mut files = Vec::new();
    for root in roots {
        if root.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(&root)
                .map_err(|e| CliError::input(format!("cannot list {}: {e}", root.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            found.sort();
            files.extend(found);
        } else if root.is_file() {
            files.push(root);
        } else if !defaulted {
            return Err(CliError::input(format!("no such fixture path {}", root.display())));
        }
    }
    Ok(files)
}

pub fn verify(paths: &[PathBuf], args: &ConfigArgs) -> Result<Value, CliError> {
    let cfg = RunConfig::resolve(args, Mode::Exact, None)?;
    if cfg.mode != Mode::Exact {
        return Err(CliError::input("verify runs in exact mode only"));
    }
    let files = fixture_files(paths)?;
    if files.is_empty() {
        eprintln!("warning: no oracle fixtures found; nothing to check");
    }
    let mut fixtures = Vec::new();
    let mut checks = Vec::new();
    let mut ok = true;
    for file in &files {
        let fixture = OracleFixture::from_json(&read_json(file)?)?;
        let report = fixture.run()?;
        let name = file.display().to_string();
        ok &= report.ok();
        fixtures.push(json!({
            "path": name,
            "mutation": fixture.mutation,
            "points": fixture.points.len(),
            "ok": report.ok(),
            "first_mismatch": report.first_mismatch(),
        }));
        for mut c in report.to_json()["checks"].as_array().cloned().unwrap_or_default() {
            c["fixture"] = json!(name);
            checks.push(c);
        }
    }
    let out = with_header(&cfg, json!({"ok": ok, "fixtures": fixtures, "checks": checks}));
    if ok {
        Ok(out)
    } else {
        Err(CliError::mismatch(out))
    }
}
