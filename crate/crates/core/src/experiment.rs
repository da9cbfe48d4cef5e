//! Seeded random coordinates and forward/inverse round trips.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use crate::assembly::assemble_loop;
use crate::rootsub::RootSubgroupCoordinates;
use crate::solver::{solve_all, SolveOptions};

/// Generator for trial `index` of a run seeded with `seed`: one ChaCha
/// stream per trial, so trials are independent of evaluation order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw(rng: &mut impl Rng, bound: f64) -> Complex64 {
    let r: f64 = rng.random();
    let theta: f64 = rng.random_range(-PI..PI);
    Complex64::from_polar(bound * r, theta)
}

/// `|ηₙ|, |ζₙ|, |χₙ| = ρⁿ·U(0,1)` with uniform phases, `χ₀ = i·U(−π, π)`.
pub fn random_coordinates(rng: &mut impl Rng, degree: usize, rho: f64) -> RootSubgroupCoordinates {
    let eta = (0..=degree).map(|n| draw(rng, rho.powi(n as i32))).collect();
    let zeta = (1..=degree).map(|n| draw(rng, rho.powi(n as i32))).collect();
    let chi_plus = (1..=degree).map(|n| draw(rng, rho.powi(n as i32))).collect();
    let chi0_im = rng.random_range(-PI..PI);
    RootSubgroupCoordinates { eta, zeta, chi0_im, chi_plus }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub index: u64,
    /// Max coordinate error over `η, ζ, χ`; `None` when the solve failed.
    pub error: Option<f64>,
    pub failure: Option<String>,
    pub condition_estimate: Option<f64>,
    pub chi_discrepancy: Option<f64>,
    pub seconds: f64,
}

/// Samples coordinates, assembles the loop, solves it back.
pub fn run_trial(seed: u64, index: u64, rho: f64, opts: &SolveOptions) -> TrialResult {
    let mut rng = trial_rng(seed, index);
    let coords = random_coordinates(&mut rng, opts.degree, rho);
    let start = Instant::now();
    let g = assemble_loop(&coords, None);
    let solved = solve_all(&g, opts);
    let seconds = start.elapsed().as_secs_f64();
    match solved {
        Ok(out) => {
            let mut err = coords.max_abs_diff(&out.coordinates());
            if out.chi.is_none() && !opts.zeta_only {
                err = f64::INFINITY;
            }
            TrialResult {
                index,
                error: Some(err),
                failure: if out.chi.is_none() { Some("chi unavailable".into()) } else { None },
                condition_estimate: Some(out.diagnostics.condition_estimate),
                chi_discrepancy: out.diagnostics.chi_discrepancy,
                seconds,
            }
        }
        Err(e) => TrialResult {
            index,
            error: None,
            failure: Some(e.to_string()),
            condition_estimate: None,
            chi_discrepancy: None,
            seconds,
        },
    }
}

/// Nearest-rank percentile of a sorted slice.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    pub seed: u64,
    pub rho: f64,
    pub trials: Vec<TrialResult>,
}

impl RoundtripReport {
    pub fn run(seed: u64, trials: u64, rho: f64, opts: &SolveOptions) -> Self {
        RoundtripReport { seed, rho, trials: (0..trials).map(|i| run_trial(seed, i, rho, opts)).collect() }
    }

    pub fn errors_sorted(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.trials.iter().map(|t| t.error.unwrap_or(f64::INFINITY)).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn seconds_sorted(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.trials.iter().map(|t| t.seconds).collect();
        s.sort_by(f64::total_cmp);
        s
    }

    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| t.error.is_none_or(|e| !e.is_finite())).count()
    }

    /// Report body. Wall-clock fields are added only with `timings`, so the
    /// default report is reproducible byte for byte.
    pub fn to_json(&self, timings: bool) -> Value {
        let errs = self.errors_sorted();
        let pct = |p| {
            let v = percentile(&errs, p);
            if v.is_finite() {
                json!(v)
            } else {
                Value::Null
            }
        };
        let trials: Vec<Value> = self
            .trials
            .iter()
            .map(|t| {
                let mut v = json!({
                    "index": t.index,
                    "error": t.error.filter(|e| e.is_finite()),
                    "failure": t.failure,
                    "condition_estimate": t.condition_estimate,
                    "chi_discrepancy": t.chi_discrepancy,
                });
                if timings {
                    v["seconds"] = json!(t.seconds);
                }
                v
            })
            .collect();
        let mut out = json!({
            "seed": self.seed,
            "rho": self.rho,
            "trials": trials,
            "summary": {
                "count": self.trials.len(),
                "failures": self.failures(),
                "error_p50": pct(50.0),
                "error_p90": pct(90.0),
                "error_p100": pct(100.0),
            },
        });
        if timings {
            let s = self.seconds_sorted();
            out["summary"]["seconds_p50"] = json!(percentile(&s, 50.0));
            out["summary"]["seconds_p100"] = json!(percentile(&s, 100.0));
        }
        out
    }
}
