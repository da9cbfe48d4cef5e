//! Inverse map: recover `(η, χ, ζ)` from triangular or Birkhoff data.
//!
//! `ζ` is peeled off the Taylor coefficients `ξₙ` of `u₂₁/u₂₂`, `η` off the
//! coefficients `ψₙ` of `l₂₁*/l₁₁*`. In both cases the `n`-th coefficient is
//! `−v̄ₙ∏_{s<n}(1+|v_s|²)` plus a polynomial in the earlier coordinates, and
//! that polynomial is the `n`-th ratio coefficient of the product built from
//! the coordinates already found.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::assembly::TriangularFactorization;
use crate::error::{Error, Result};
use crate::factorization::{birkhoff_factor_with, triangular_from_birkhoff, DEFAULT_CONDITION_LIMIT};
use crate::loops::MatrixLoop;
use crate::rootsub::{norm_constants, RootSubgroupCoordinates};
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, Orientation, Part, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// `l₂₁*/l₁₁* = β₁/α₁`, coefficients from `z⁰`.
    Psi,
    /// `u₂₁/u₂₂ = γ₂/δ₂`, coefficients from `z¹`.
    Xi,
}

/// Taylor coefficients of one of the two ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSeries<C> {
    pub kind: RatioKind,
    pub coeffs: LaurentSeries<C>,
}

impl<C: Scalar> RatioSeries<C> {
    pub fn coeff(&self, n: i64) -> C {
        self.coeffs.coeff(n)
    }

    pub fn from_coeffs(kind: RatioKind, first: i64, values: Vec<C>) -> Self {
        RatioSeries { kind, coeffs: LaurentSeries::new(first, values) }
    }
}

fn ratio<C: Scalar>(num: &LaurentSeries<C>, den: &LaurentSeries<C>, degree: i64) -> Result<LaurentSeries<C>> {
    let inv = den.invert(Orientation::PowerSeriesInZ, degree)?;
    let out = Window::new(0, degree.max(0));
    Ok(num.project(Part::Nonnegative).mul(&inv, out).restrict(out))
}

/// `source₂₁/source₂₂` to `out_degree`, for `source = u` or `g₊`.
pub fn xi_series<C: Scalar>(source: &MatrixLoop<C>, out_degree: i64) -> Result<RatioSeries<C>> {
    let coeffs = ratio(source.entry(1, 0), source.entry(1, 1), out_degree)?;
    Ok(RatioSeries { kind: RatioKind::Xi, coeffs })
}

/// `l₂₁*/l₁₁*` to `out_degree`.
pub fn psi_series<C: Scalar>(l: &MatrixLoop<C>, out_degree: i64) -> Result<RatioSeries<C>> {
    let coeffs = ratio(&l.entry(1, 0).star(), &l.entry(0, 0).star(), out_degree)?;
    Ok(RatioSeries { kind: RatioKind::Psi, coeffs })
}

// Shared peeling loop. `factor(n, v)` is the unnormalized factor of index n;
// `num`/`den` pick the ratio entries of the prefix product.
fn peel<C: Scalar>(
    target: &RatioSeries<C>,
    first: i64,
    last: i64,
    factor: impl Fn(i64, &C) -> MatrixLoop<C>,
    entries: (usize, usize, usize, usize),
) -> Vec<C> {
    let (nr, nc, dr, dc) = entries;
    let mut prefix = MatrixLoop::<C>::identity();
    let mut weight = C::one();
    let mut out = Vec::new();
    for n in first..=last {
        let num = prefix.entry(nr, nc).restrict(Window::new(0, n.max(prefix.window().hi)));
        let den = prefix.entry(dr, dc);
        let c = ratio(&num, den, n).expect("prefix products have unit constant term").coeff(n);
        let v = -((target.coeff(n) - c) / weight.clone()).conj();
        weight = weight * (C::one() + v.norm_sqr());
        if !v.is_zero() {
            prefix = factor(n, &v).mul_full(&prefix);
        }
        out.push(v);
    }
    out
}

/// `ζ₁, …, ζ_N` from `ξ₁, …, ξ_N`.
pub fn solve_zeta<C: Scalar>(xi: &RatioSeries<C>, n: usize) -> Vec<C> {
    peel(
        xi,
        1,
        n as i64,
        |k, z| {
            MatrixLoop::new([
                [LaurentSeries::one(), LaurentSeries::monomial(-k, z.clone())],
                [LaurentSeries::monomial(k, -z.conj()), LaurentSeries::one()],
            ])
        },
        (1, 0, 1, 1),
    )
}

/// `η₀, …, η_N` from `ψ₀, …, ψ_N`.
pub fn solve_eta<C: Scalar>(psi: &RatioSeries<C>, n: usize) -> Vec<C> {
    peel(
        psi,
        0,
        n as i64,
        |k, e| {
            MatrixLoop::new([
                [LaurentSeries::one(), LaurentSeries::monomial(k, -e.conj())],
                [LaurentSeries::monomial(-k, e.clone()), LaurentSeries::one()],
            ])
        },
        (0, 1, 0, 0),
    )
}

/// `χ` recovered from the moduli of the triangular factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSolution {
    pub chi0_im: f64,
    pub chi_plus: Vec<Complex64>,
    /// Largest grid difference between the `l`- and `u`-based `Re χ₊`.
    pub discrepancy: f64,
    /// Largest Fourier coefficient of `Re χ₊` outside `[−N, N]` and at `z⁰`.
    pub tail: f64,
}

/// `Re χ₊ = log a₂ − ½log(|u₂₁|²+|u₂₂|²)` sampled on `grid_size` points and
/// Fourier-inverted: `χⱼ = 2·ĉⱼ`, `χ₀ = i·arg m₀`. Fails with `NotUnitary`
/// when `−log a₁ − ½log(|l₁₁|²+|l₂₁|²)` differs by more than `tol`.
pub fn solve_chi(
    t: &TriangularFactorization,
    a1: f64,
    a2: f64,
    grid_size: usize,
    degree: usize,
    tol: f64,
) -> Result<ChiSolution> {
    if grid_size < 2 * degree + 1 {
        return Err(Error::GridTooSmall { grid: grid_size, width: 2 * degree + 1 });
    }
    let su = (t.u.entry(1, 0).sample(grid_size), t.u.entry(1, 1).sample(grid_size));
    let sl = (t.l.entry(0, 0).sample(grid_size), t.l.entry(1, 0).sample(grid_size));
    let mut re_u = Vec::with_capacity(grid_size);
    let mut discrepancy = 0.0f64;
    for k in 0..grid_size {
        let ru = a2.ln() - 0.5 * (su.0[k].norm_sqr() + su.1[k].norm_sqr()).ln();
        let rl = -a1.ln() - 0.5 * (sl.0[k].norm_sqr() + sl.1[k].norm_sqr()).ln();
        let d = (ru - rl).abs();
        discrepancy = if d.is_nan() { f64::INFINITY } else { discrepancy.max(d) };
        re_u.push(Complex64::new(ru, 0.0));
    }
    if discrepancy > tol {
        return Err(Error::NotUnitary { discrepancy });
    }
    let half = (grid_size as i64 - 1) / 2;
    let f = LaurentSeries::from_samples(&re_u, Window::symmetric(half))?;
    let d = degree as i64;
    let tail = f.iter().filter(|(n, _)| n.abs() > d || *n == 0).map(|(_, c)| c.norm()).fold(0.0, f64::max);
    Ok(ChiSolution { chi0_im: t.m0.arg(), chi_plus: (1..=d).map(|j| f.coeff(j) * 2.0).collect(), discrepancy, tail })
}

/// Settings for [`solve_all`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Truncation degree `N`.
    pub degree: usize,
    /// Toeplitz section size `M`.
    pub toeplitz_size: usize,
    pub grid_size: usize,
    /// Unitarity tolerance of the `χ` stage.
    pub tol: f64,
    pub condition_limit: f64,
    /// Recover `ζ` from `g₊` alone and skip `η` and `χ`.
    pub zeta_only: bool,
}

impl SolveOptions {
    /// `M = 2N + 8`, grid `8N` (at least 64).
    pub fn for_degree(degree: usize) -> Self {
        SolveOptions {
            degree,
            toeplitz_size: 2 * degree + 8,
            grid_size: (8 * degree).max(64),
            tol: 1e-8,
            condition_limit: DEFAULT_CONDITION_LIMIT,
            zeta_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveDiagnostics {
    pub condition_estimate: f64,
    pub birkhoff_positive_residual: f64,
    /// `None` when the `χ` stage was skipped.
    pub chi_discrepancy: Option<f64>,
    pub chi_tail: Option<f64>,
    /// `|a₀ − a₁a₂|` with `a₁, a₂` from the recovered coordinates.
    pub a0_residual: Option<f64>,
    pub unitary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutput {
    /// `None` in `zeta_only` mode.
    pub eta: Option<Vec<Complex64>>,
    pub zeta: Vec<Complex64>,
    /// `(chi0_im, chi_plus)`; `None` when skipped or not unitary.
    pub chi: Option<(f64, Vec<Complex64>)>,
    pub diagnostics: SolveDiagnostics,
}

impl SolveOutput {
    /// The recovered triple with missing parts set to zero.
    pub fn coordinates(&self) -> RootSubgroupCoordinates {
        let (chi0_im, chi_plus) = self.chi.clone().unwrap_or((0.0, vec![Complex64::new(0.0, 0.0); self.zeta.len()]));
        RootSubgroupCoordinates {
            eta: self.eta.clone().unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.zeta.len() + 1]),
            zeta: self.zeta.clone(),
            chi0_im,
            chi_plus,
        }
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[Complex64]| v.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>();
        let d = &self.diagnostics;
        let mut out = json!({
            "eta": self.eta.as_deref().map(list),
            "zeta": list(&self.zeta),
            "diagnostics": {
                "residuals": {
                    "birkhoff_positive": d.birkhoff_positive_residual,
                    "chi_discrepancy": d.chi_discrepancy,
                    "chi_tail": d.chi_tail,
                    "a0": d.a0_residual,
                },
                "unitary": d.unitary,
                "condition_estimate": d.condition_estimate,
            },
        });
        match &self.chi {
            Some((t, cp)) => {
                out["chi0_im"] = json!(t);
                out["chi_plus"] = json!(list(cp));
            }
            None => {
                out["chi0_im"] = Value::Null;
                out["chi_plus"] = Value::Null;
                out["chi"] = Value::Null;
            }
        }
        out
    }
}

/// Birkhoff factorization, triangular factorization, then `ζ` from `ξ`,
/// `η` from `ψ` and `χ` from the moduli. A `NotUnitary` failure of the `χ`
/// stage is reported in the diagnostics instead of as an error.
pub fn solve_all(g: &MatrixLoop<Complex64>, opts: &SolveOptions) -> Result<SolveOutput> {
    let n = opts.degree;
    let b = birkhoff_factor_with(g, opts.toeplitz_size, opts.condition_limit)?;
    let mut diagnostics = SolveDiagnostics {
        condition_estimate: b.condition_estimate.unwrap_or(1.0),
        birkhoff_positive_residual: b.positive_residual,
        chi_discrepancy: None,
        chi_tail: None,
        a0_residual: None,
        unitary: false,
    };
    if opts.zeta_only {
        let zeta = solve_zeta(&xi_series(&b.g_plus, n as i64)?, n);
        return Ok(SolveOutput { eta: None, zeta, chi: None, diagnostics });
    }
    let t = triangular_from_birkhoff(&b)?;
    let zeta = solve_zeta(&xi_series(&t.u, n as i64)?, n);
    let eta = solve_eta(&psi_series(&t.l, n as i64)?, n);
    let (a1, a2) = norm_constants(&eta, &zeta);
    diagnostics.a0_residual = Some((t.a0 - a1 * a2).abs());
    let chi = match solve_chi(&t, a1, a2, opts.grid_size, n, opts.tol) {
        Ok(s) => {
            diagnostics.chi_discrepancy = Some(s.discrepancy);
            diagnostics.chi_tail = Some(s.tail);
            diagnostics.unitary = true;
            Some((s.chi0_im, s.chi_plus))
        }
        Err(Error::NotUnitary { discrepancy }) => {
            diagnostics.chi_discrepancy = Some(discrepancy);
            None
        }
        Err(e) => return Err(e),
    };
    Ok(SolveOutput { eta: Some(eta), zeta, chi, diagnostics })
}
