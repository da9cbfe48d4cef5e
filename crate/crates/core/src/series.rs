//! Truncated Laurent series over a [`Scalar`] field.
//!
//! A series stores the coefficients on an index window `[lo, hi]` together
//! with a *reliable* sub-window on which the stored values agree with the
//! series being approximated, and a flag per side telling whether the
//! approximated series has any terms beyond the stored window on that side.
//! A polynomial built from literal coefficients is closed on both sides and
//! reliable everywhere; a truncated inverse or exponential is open on the
//! truncated side.
//!
//! Reliability propagates conservatively. For a product, unknown
//! coefficients above the reliable window of one factor contaminate every
//! output index from `reliable_hi + other.lo` upward, which is the rule
//! `[ra_lo + rb_lo, min(ra_hi + b_lo, a_lo + rb_hi)]` for series truncated
//! above; the mirrored rule applies to series truncated below. Contributions
//! pairing two discarded tails are not tracked.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default threshold below which an inexact leading coefficient counts as zero.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Closed integer index range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    /// Symmetric window `[-radius, radius]`.
    pub const fn symmetric(radius: i64) -> Self {
        Window { lo: -radius, hi: radius }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn intersect(&self, other: &Window) -> Window {
        Window::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn width(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }
}

/// Which part of a series [`LaurentSeries::project`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// Powers `n < 0`; the `(·)₋` projection.
    StrictNegative,
    /// Powers `n ≤ 0`.
    Nonpositive,
    /// Powers `n ≥ 0`; the `(·)₊` projection.
    Nonnegative,
    /// Powers `n > 0`.
    StrictPositive,
    /// The `z⁰` coefficient only.
    Constant,
}

impl Part {
    fn range(self) -> (Option<i64>, Option<i64>) {
        match self {
            Part::StrictNegative => (None, Some(-1)),
            Part::Nonpositive => (None, Some(0)),
            Part::Nonnegative => (Some(0), None),
            Part::StrictPositive => (Some(1), None),
            Part::Constant => (Some(0), Some(0)),
        }
    }
}

/// Half-line on which a power series lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `Σ_{n≥0} a_n zⁿ`
    PowerSeriesInZ,
    /// `Σ_{n≥0} a_n z⁻ⁿ`
    PowerSeriesInZInverse,
}

/// A truncated Laurent series.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries<C> {
    lo: i64,
    coeffs: Vec<C>,
    reliable: Window,
    closed_below: bool,
    closed_above: bool,
}

// Effective reliable bounds: `None` means no unknown coefficients on that side.
type Bound = Option<i64>;

fn max_bound(a: Bound, b: Bound) -> Bound {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    }
}

fn min_bound(a: Bound, b: Bound) -> Bound {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

impl<C: Scalar> LaurentSeries<C> {
    /// Exact Laurent polynomial `Σ coeffs[k] z^{lo+k}`.
    pub fn new(lo: i64, coeffs: Vec<C>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![C::zero()] } else { coeffs };
        let hi = lo + coeffs.len() as i64 - 1;
        LaurentSeries { lo, coeffs, reliable: Window::new(lo, hi), closed_below: true, closed_above: true }
    }

    pub fn zero() -> Self {
        Self::new(0, vec![C::zero()])
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(0, vec![c])
    }

    /// `c·zⁿ`
    pub fn monomial(n: i64, c: C) -> Self {
        Self::new(n, vec![c])
    }

    /// Series with explicit truncation state. `reliable` is clipped to the window.
    pub fn truncated(lo: i64, coeffs: Vec<C>, reliable: Window, closed_below: bool, closed_above: bool) -> Self {
        let mut s = Self::new(lo, coeffs);
        s.closed_below = closed_below;
        s.closed_above = closed_above;
        let w = s.window();
        s.set_bounds(
            if closed_below && reliable.lo <= w.lo { None } else { Some(reliable.lo) },
            if closed_above && reliable.hi >= w.hi { None } else { Some(reliable.hi) },
        );
        s
    }

    /// Builds from `(power, coefficient)` pairs; repeated powers accumulate.
    pub fn from_terms(terms: &[(i64, C)]) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (n, c) in terms {
            let k = (n - lo) as usize;
            coeffs[k] = coeffs[k].clone() + c.clone();
        }
        Self::new(lo, coeffs)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn window(&self) -> Window {
        Window::new(self.lo, self.hi())
    }

    pub fn reliable_window(&self) -> Window {
        self.reliable
    }

    pub fn is_closed_below(&self) -> bool {
        self.closed_below
    }

    pub fn is_closed_above(&self) -> bool {
        self.closed_above
    }

    /// True when the series is a Laurent polynomial known exactly on its window.
    pub fn is_complete(&self) -> bool {
        self.eff_lo().is_none() && self.eff_hi().is_none()
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `zⁿ`; zero outside the stored window.
    pub fn coeff(&self, n: i64) -> C {
        if n < self.lo || n > self.hi() {
            C::zero()
        } else {
            self.coeffs[(n - self.lo) as usize].clone()
        }
    }

    fn coeff_ref(&self, n: i64) -> Option<&C> {
        if n < self.lo || n > self.hi() {
            None
        } else {
            Some(&self.coeffs[(n - self.lo) as usize])
        }
    }

    /// Iterates `(power, coefficient)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> {
        (self.lo..).zip(self.coeffs.iter())
    }

    fn eff_lo(&self) -> Bound {
        if self.closed_below && self.reliable.lo <= self.lo {
            None
        } else {
            Some(self.reliable.lo)
        }
    }

    fn eff_hi(&self) -> Bound {
        if self.closed_above && self.reliable.hi >= self.hi() {
            None
        } else {
            Some(self.reliable.hi)
        }
    }

    fn set_bounds(&mut self, lo: Bound, hi: Bound) {
        let w = self.window();
        let rlo = lo.map_or(w.lo, |x| x.clamp(w.lo, w.hi + 1));
        let rhi = hi.map_or(w.hi, |x| x.clamp(w.lo - 1, w.hi));
        self.reliable = Window::new(rlo, rhi);
    }

    /// Marks the stored window as the complete series. Used once the caller
    /// has verified that the discarded tails are negligible.
    pub fn assume_complete(mut self) -> Self {
        self.closed_below = true;
        self.closed_above = true;
        self.reliable = self.window();
        self
    }

    /// Narrows the reliable window (never widens it).
    pub fn with_reliable_limit(mut self, limit: Window) -> Self {
        let lo = max_bound(self.eff_lo(), Some(limit.lo));
        let hi = min_bound(self.eff_hi(), Some(limit.hi));
        self.set_bounds(lo, hi);
        self
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(f).collect(),
            reliable: self.reliable,
            closed_below: self.closed_below,
            closed_above: self.closed_above,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Re-windows to `w` without changing the approximated series: entries
    /// outside the old window are zero-padded, entries outside `w` dropped.
    pub fn restrict(&self, w: Window) -> Self {
        assert!(!w.is_empty(), "restrict to empty window");
        let coeffs = (w.lo..=w.hi).map(|n| self.coeff(n)).collect();
        let mut out = LaurentSeries {
            lo: w.lo,
            coeffs,
            reliable: w,
            closed_below: self.closed_below && w.lo <= self.lo,
            closed_above: self.closed_above && w.hi >= self.hi(),
        };
        let lo = if out.closed_below { self.eff_lo() } else { max_bound(self.eff_lo(), Some(w.lo)) };
        let hi = if out.closed_above { self.eff_hi() } else { min_bound(self.eff_hi(), Some(w.hi)) };
        out.set_bounds(lo, hi);
        out
    }

    /// Coefficientwise sum on the union window.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let coeffs = (lo..=hi).map(|n| f(self.coeff(n), other.coeff(n))).collect();
        let mut out = LaurentSeries {
            lo,
            coeffs,
            reliable: Window::new(lo, hi),
            closed_below: self.closed_below && other.closed_below,
            closed_above: self.closed_above && other.closed_above,
        };
        out.set_bounds(max_bound(self.eff_lo(), other.eff_lo()), min_bound(self.eff_hi(), other.eff_hi()));
        out
    }

    /// Cauchy product restricted to `out`.
    pub fn mul(&self, other: &Self, out: Window) -> Self {
        let natural = Window::new(self.lo + other.lo, self.hi() + other.hi());
        let mut w = natural.intersect(&out);
        if w.is_empty() {
            // Keep one slot at the nearest edge of `out`.
            let n = if natural.hi < out.lo { out.lo } else { out.hi };
            w = Window::new(n, n);
        }
        let mut coeffs = vec![C::zero(); w.width()];
        for (i, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            let jlo = other.lo.max(w.lo - i);
            let jhi = other.hi().min(w.hi - i);
            for j in jlo..=jhi {
                let b = &other.coeffs[(j - other.lo) as usize];
                let k = (i + j - w.lo) as usize;
                coeffs[k] = coeffs[k].clone() + a.clone() * b.clone();
            }
        }
        let lo_bound = max_bound(self.eff_lo().map(|x| x + other.hi()), other.eff_lo().map(|x| x + self.hi()));
        let hi_bound = min_bound(self.eff_hi().map(|x| x + other.lo), other.eff_hi().map(|x| x + self.lo));
        let closed_below = self.closed_below && other.closed_below && w.lo <= natural.lo;
        let closed_above = self.closed_above && other.closed_above && w.hi >= natural.hi;
        let mut s = LaurentSeries { lo: w.lo, coeffs, reliable: w, closed_below, closed_above };
        let lo_bound = if closed_below { lo_bound } else { max_bound(lo_bound, Some(w.lo)) };
        let hi_bound = if closed_above { hi_bound } else { min_bound(hi_bound, Some(w.hi)) };
        s.set_bounds(lo_bound, hi_bound);
        s
    }

    /// Product on the full natural window.
    pub fn mul_full(&self, other: &Self) -> Self {
        self.mul(other, Window::new(self.lo + other.lo, self.hi() + other.hi()))
    }

    /// `f*(z) = conj(f(1/z̄))`: coefficient `c_n` moves to `conj(c_n)` at `-n`.
    pub fn star(&self) -> Self {
        let mut coeffs: Vec<C> = self.coeffs.iter().map(|c| c.conj()).collect();
        coeffs.reverse();
        self.mirrored(coeffs)
    }

    /// `f(1/z)` without conjugation.
    pub fn reflect(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        self.mirrored(coeffs)
    }

    fn mirrored(&self, coeffs: Vec<C>) -> Self {
        let mut s = LaurentSeries {
            lo: -self.hi(),
            coeffs,
            reliable: self.reliable,
            closed_below: self.closed_above,
            closed_above: self.closed_below,
        };
        s.set_bounds(self.eff_hi().map(|x| -x), self.eff_lo().map(|x| -x));
        s
    }

    /// Zeroes every coefficient outside the selected part.
    pub fn project(&self, part: Part) -> Self {
        let (plo, phi) = part.range();
        let lo = plo.map_or(self.lo, |p| self.lo.max(p));
        let hi = phi.map_or(self.hi(), |p| self.hi().min(p));
        let w = if lo <= hi {
            Window::new(lo, hi)
        } else {
            let n = plo.or(phi).unwrap();
            Window::new(n, n)
        };
        let coeffs = (w.lo..=w.hi).map(|n| self.coeff(n)).collect();
        let mut s = LaurentSeries {
            lo: w.lo,
            coeffs,
            reliable: w,
            closed_below: self.closed_below || plo.is_some(),
            closed_above: self.closed_above || phi.is_some(),
        };
        let lo_bound = match (self.eff_lo(), plo) {
            (Some(x), Some(p)) if x <= p => None,
            (b, _) => b,
        };
        let hi_bound = match (self.eff_hi(), phi) {
            (Some(x), Some(p)) if x >= p => None,
            (b, _) => b,
        };
        s.set_bounds(lo_bound, hi_bound);
        s
    }

    /// Largest `|c|` over the stored window.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference over `w` (missing entries count as zero).
    pub fn max_abs_diff_on(&self, other: &Self, w: Window) -> f64 {
        if w.is_empty() {
            return 0.0;
        }
        (w.lo..=w.hi).map(|n| (self.coeff(n) - other.coeff(n)).abs_f64()).fold(0.0, f64::max)
    }

    /// Multiplicative inverse as a power series on the given half-line,
    /// truncated at `out_degree`.
    pub fn invert(&self, orientation: Orientation, out_degree: i64) -> Result<Self> {
        self.invert_with_eps(orientation, out_degree, DEFAULT_EPS)
    }

    pub fn invert_with_eps(&self, orientation: Orientation, out_degree: i64, eps: f64) -> Result<Self> {
        match orientation {
            Orientation::PowerSeriesInZ => self.invert_in_z(out_degree, eps),
            Orientation::PowerSeriesInZInverse => Ok(self.reflect().invert_in_z(out_degree, eps)?.reflect()),
        }
    }

    fn check_power_series(&self, eps: f64) -> Result<()> {
        for (n, c) in self.iter() {
            if n < 0 && !c.is_negligible(if C::EXACT { 0.0 } else { eps }) {
                return Err(Error::WrongOrientation { index: n });
            }
        }
        Ok(())
    }

    fn invert_in_z(&self, out_degree: i64, eps: f64) -> Result<Self> {
        self.check_power_series(eps)?;
        let a0 = self.coeff(0);
        if a0.is_negligible(if C::EXACT { 0.0 } else { eps }) {
            return Err(Error::ZeroConstantTerm { modulus: a0.abs_f64() });
        }
        let d = out_degree.max(0);
        let inv0 = C::one() / a0;
        let mut b: Vec<C> = Vec::with_capacity(d as usize + 1);
        b.push(inv0.clone());
        for k in 1..=d {
            let mut acc = C::zero();
            for j in 1..=k.min(self.hi()) {
                if let Some(a) = self.coeff_ref(j) {
                    if !a.is_zero() {
                        acc = acc + a.clone() * b[(k - j) as usize].clone();
                    }
                }
            }
            b.push(-(inv0.clone() * acc));
        }
        let constant = self.hi() <= 0 && self.eff_hi().is_none();
        let hi_bound = match (self.eff_lo(), self.eff_hi()) {
            (Some(x), _) if x > 0 => Some(-1),
            (_, Some(h)) => Some(h.min(d)),
            _ => None,
        };
        let mut s =
            LaurentSeries { lo: 0, coeffs: b, reliable: Window::new(0, d), closed_below: true, closed_above: constant };
        s.set_bounds(None, if constant { hi_bound } else { Some(hi_bound.unwrap_or(d).min(d)) });
        Ok(s)
    }

    /// Truncated exponential of a power series with zero constant term.
    pub fn exp(&self, orientation: Orientation, out_degree: i64) -> Result<Self> {
        match orientation {
            Orientation::PowerSeriesInZ => self.exp_in_z(out_degree),
            Orientation::PowerSeriesInZInverse => Ok(self.reflect().exp_in_z(out_degree)?.reflect()),
        }
    }

    fn exp_in_z(&self, out_degree: i64) -> Result<Self> {
        self.check_power_series(DEFAULT_EPS)?;
        let a0 = self.coeff(0);
        if !a0.is_negligible(if C::EXACT { 0.0 } else { DEFAULT_EPS }) {
            return Err(Error::NonzeroConstant { modulus: a0.abs_f64() });
        }
        let d = out_degree.max(0);
        let mut e: Vec<C> = Vec::with_capacity(d as usize + 1);
        e.push(C::one());
        for k in 1..=d {
            let mut acc = C::zero();
            for j in 1..=k.min(self.hi()) {
                if let Some(a) = self.coeff_ref(j) {
                    if !a.is_zero() {
                        acc = acc + C::from_i64(j) * a.clone() * e[(k - j) as usize].clone();
                    }
                }
            }
            e.push(acc / C::from_i64(k));
        }
        let trivial = self.coeffs.iter().all(|c| c.is_zero()) && self.eff_hi().is_none();
        let hi_bound = match self.eff_hi() {
            Some(h) => Some(h.min(d)),
            None => Some(d),
        };
        let mut s =
            LaurentSeries { lo: 0, coeffs: e, reliable: Window::new(0, d), closed_below: true, closed_above: trivial };
        s.set_bounds(None, if trivial { None } else { hi_bound });
        Ok(s)
    }

    /// JSON form `{"lo", "hi", "coeffs": [[re, im], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "lo": self.lo,
            "hi": self.hi(),
            "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    /// Parses the JSON form; the result is an exact polynomial.
    pub fn from_json(v: &Value) -> Result<Self> {
        let lo =
            v.get("lo").and_then(Value::as_i64).ok_or_else(|| Error::Input("series: missing integer 'lo'".into()))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("series: missing 'coeffs'".into()))?
            .iter()
            .map(|c| C::from_json(c).ok_or_else(|| Error::Input(format!("series: bad coefficient {c}"))))
            .collect::<Result<Vec<C>>>()?;
        if let Some(hi) = v.get("hi").and_then(Value::as_i64) {
            if hi - lo + 1 != coeffs.len() as i64 {
                return Err(Error::Input(format!(
                    "series: window [{lo}, {hi}] does not match {} coefficients",
                    coeffs.len()
                )));
            }
        }
        Ok(Self::new(lo, coeffs))
    }
}

impl<C: Scalar> std::ops::Neg for LaurentSeries<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

impl LaurentSeries<Complex64> {
    /// Values at the `grid_size` points `e^{2πik/grid_size}`.
    pub fn sample(&self, grid_size: usize) -> Vec<Complex64> {
        assert!(grid_size > 0, "empty grid");
        let g = grid_size as i64;
        let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
        for (n, c) in self.iter() {
            buf[n.rem_euclid(g) as usize] += *c;
        }
        FftPlanner::new().plan_fft_inverse(grid_size).process(&mut buf);
        buf
    }

    /// Discrete Fourier inversion of equally spaced circle samples, restricted
    /// to `window`.
    pub fn from_samples(samples: &[Complex64], window: Window) -> Result<Self> {
        let g = samples.len();
        if g == 0 || g < window.width() {
            return Err(Error::GridTooSmall { grid: g, width: window.width() });
        }
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(g).process(&mut buf);
        let scale = 1.0 / g as f64;
        let coeffs = (window.lo..=window.hi).map(|n| buf[n.rem_euclid(g as i64) as usize] * scale).collect();
        Ok(Self::new(window.lo, coeffs))
    }
}
