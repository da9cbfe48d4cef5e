//! Root subgroup coordinates, the products `k₁(η)` and `k₂(ζ)`, and the
//! multi-index sums describing their coefficients.
//!
//! Indexing: `η` starts at 0, `ζ` at 1. Slices passed to the functions here
//! hold `η₀, η₁, …` and `ζ₁, ζ₂, …` respectively.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::loops::MatrixLoop;
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, Orientation, Part, Window};

/// Which root subgroup product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `k₁(η) = ∏ a(ηₙ)[[1, −η̄ₙzⁿ],[ηₙz⁻ⁿ, 1]]`, `n = N, …, 0`.
    K1,
    /// `k₂(ζ) = ∏ a(ζₙ)[[1, ζₙz⁻ⁿ],[−ζ̄ₙzⁿ, 1]]`, `n = N, …, 1`.
    K2,
}

impl Side {
    /// Smallest index carried by the side's variables.
    pub fn first_index(self) -> i64 {
        match self {
            Side::K1 => 0,
            Side::K2 => 1,
        }
    }
}

/// The coordinate triple `(η, χ, ζ)` of a loop, truncated at a common degree.
///
/// `χ` is `iℝ`-valued on the circle, so only `χ₀ = i·chi0_im` and `χ₁, χ₂, …`
/// are stored; `χ₋ⱼ = −conj(χⱼ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSubgroupCoordinates {
    /// `η₀, η₁, …, η_N`
    pub eta: Vec<Complex64>,
    /// `ζ₁, …, ζ_N`
    pub zeta: Vec<Complex64>,
    pub chi0_im: f64,
    /// `χ₁, …, χ_N`
    pub chi_plus: Vec<Complex64>,
}

impl RootSubgroupCoordinates {
    pub fn zero(degree: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        RootSubgroupCoordinates {
            eta: vec![z; degree + 1],
            zeta: vec![z; degree],
            chi0_im: 0.0,
            chi_plus: vec![z; degree],
        }
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.eta.len().saturating_sub(1).max(self.zeta.len()).max(self.chi_plus.len())
    }

    /// Zero-pads all three sequences to the common degree.
    pub fn padded(&self) -> Self {
        let n = self.degree();
        let z = Complex64::new(0.0, 0.0);
        let pad = |v: &[Complex64], len: usize| {
            let mut v = v.to_vec();
            v.resize(len, z);
            v
        };
        RootSubgroupCoordinates {
            eta: pad(&self.eta, n + 1),
            zeta: pad(&self.zeta, n),
            chi0_im: self.chi0_im,
            chi_plus: pad(&self.chi_plus, n),
        }
    }

    /// Largest difference between two coordinate triples. `χ₀` is compared
    /// modulo `2π`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (a, b) = (self.padded(), other.padded());
        let n = a.degree().max(b.degree());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
        let mut m = 0.0f64;
        for k in 0..=n {
            m = m.max((get(&a.eta, k) - get(&b.eta, k)).norm());
            m = m.max((get(&a.zeta, k) - get(&b.zeta, k)).norm());
            m = m.max((get(&a.chi_plus, k) - get(&b.chi_plus, k)).norm());
        }
        let d = (a.chi0_im - b.chi0_im).rem_euclid(std::f64::consts::TAU);
        m.max(d.min(std::f64::consts::TAU - d))
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[Complex64]| v.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>();
        json!({
            "eta": list(&self.eta),
            "zeta": list(&self.zeta),
            "chi0_im": self.chi0_im,
            "chi_plus": list(&self.chi_plus),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let list = |key: &str| -> Result<Vec<Complex64>> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|c| Complex64::from_json(c).ok_or_else(|| Error::Input(format!("{key}: bad value {c}"))))
                    .collect(),
                Some(other) => Err(Error::Input(format!("{key}: expected a list, got {other}"))),
            }
        };
        let chi0_im = match v.get("chi0_im") {
            None | Some(Value::Null) => 0.0,
            Some(x) => x.as_f64().ok_or_else(|| Error::Input("chi0_im: expected a number".into()))?,
        };
        if !v.is_object() {
            return Err(Error::Input("coordinates: expected a JSON object".into()));
        }
        Ok(RootSubgroupCoordinates { eta: list("eta")?, zeta: list("zeta")?, chi0_im, chi_plus: list("chi_plus")? })
    }
}

fn normalizer<C: Scalar>(values: &[C]) -> Result<C> {
    let mut s = C::one();
    for (k, v) in values.iter().enumerate() {
        let r = (C::one() + v.norm_sqr()).sqrt_real().ok_or(Error::IrrationalNormalizer { index: k })?;
        s = s / r;
    }
    Ok(s)
}

/// `k₂(ζ)`, index-`N` factor leftmost. The unnormalized product omits every
/// `a(ζₙ) = (1+|ζₙ|²)^{-1/2}`.
pub fn k2_product<C: Scalar>(zeta: &[C], normalized: bool) -> Result<MatrixLoop<C>> {
    let mut k = MatrixLoop::identity();
    for (idx, z) in zeta.iter().enumerate() {
        let n = idx as i64 + 1;
        if z.is_zero() {
            continue;
        }
        let f = MatrixLoop::new([
            [LaurentSeries::one(), LaurentSeries::monomial(-n, z.clone())],
            [LaurentSeries::monomial(n, -z.conj()), LaurentSeries::one()],
        ]);
        k = f.mul_full(&k);
    }
    if normalized {
        k = k.scale(&normalizer(zeta)?);
    }
    Ok(k)
}

/// `k₁(η)`, index-`N` factor leftmost, ending with the constant `η₀` factor.
pub fn k1_product<C: Scalar>(eta: &[C], normalized: bool) -> Result<MatrixLoop<C>> {
    let mut k = MatrixLoop::identity();
    for (idx, e) in eta.iter().enumerate() {
        let n = idx as i64;
        if e.is_zero() {
            continue;
        }
        let f = MatrixLoop::new([
            [LaurentSeries::one(), LaurentSeries::monomial(n, -e.conj())],
            [LaurentSeries::monomial(-n, e.clone()), LaurentSeries::one()],
        ]);
        k = f.mul_full(&k);
    }
    if normalized {
        k = k.scale(&normalizer(eta)?);
    }
    Ok(k)
}

/// `(a₁, a₂)` with `a₁ = ∏(1+|ηₙ|²)^{-1/2}` and `a₂ = ∏(1+|ζₙ|²)^{1/2}`,
/// the diagonal entries of the triangular factorizations of `k₁` and `k₂`.
pub fn norm_constants(eta: &[Complex64], zeta: &[Complex64]) -> (f64, f64) {
    let p = |v: &[Complex64]| v.iter().map(|c| 1.0 + c.norm_sqr()).product::<f64>();
    (p(eta).sqrt().recip(), p(zeta).sqrt())
}

/// One factor of a multi-index word: `ζⱼ` (plain) or `−ζ̄ᵢ` (conjugated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: i64,
    pub conj: bool,
}

impl Letter {
    pub fn plain(index: i64) -> Self {
        Letter { index, conj: false }
    }
    pub fn barred(index: i64) -> Self {
        Letter { index, conj: true }
    }

    /// `vars[index - first]` or `−conj(·)`; zero beyond the slice.
    pub fn value<C: Scalar>(&self, vars: &[C], first: i64) -> C {
        let k = self.index - first;
        if k < 0 || k as usize >= vars.len() {
            return C::zero();
        }
        let v = &vars[k as usize];
        if self.conj {
            -v.conj()
        } else {
            v.clone()
        }
    }
}

/// An ordered product of letters.
pub type Word = Vec<Letter>;

pub fn word_value<C: Scalar>(word: &[Letter], vars: &[C], first: i64) -> C {
    word.iter().fold(C::one(), |acc, l| acc * l.value(vars, first))
}

pub fn format_word(word: &[Letter], symbol: &str) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(|l| if l.conj { format!("(-{symbol}bar_{})", l.index) } else { format!("{symbol}_{}", l.index) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Constraints on the Lemma index sequences. The true expansion uses strict
/// interlacing; relaxing it yields a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaConstraints {
    /// `j_s < i_{s+1}` (γ) and `j_s < i_s` (δ) strictly.
    pub strict_interlace: bool,
}

impl Default for LemmaConstraints {
    fn default() -> Self {
        LemmaConstraints { strict_interlace: true }
    }
}

/// Increasing alternating index sequences of the product expansion:
/// `γ`-words `0<i₁<j₁<…<j_r<i_{r+1}` and `δ`-words `0<j₁<i₁<…<i_r`, with
/// `Σi − Σj = n`, all indices at most `top`.
pub fn lemma_words(gamma: bool, n: i64, first: i64, top: i64) -> Vec<Word> {
    lemma_words_with(gamma, n, first, top, LemmaConstraints::default())
}

pub fn lemma_words_with(gamma: bool, n: i64, first: i64, top: i64, c: LemmaConstraints) -> Vec<Word> {
    struct Ctx {
        gamma: bool,
        n: i64,
        top: i64,
        strict: bool,
    }
    fn rec(out: &mut Vec<Word>, word: &mut Word, next_min: i64, need_conj: bool, degree: i64, ctx: &Ctx) {
        // A word is complete when it ends on a conjugated letter (γ) or is even (δ).
        let complete = if ctx.gamma { word.last().is_some_and(|l| l.conj) } else { word.len().is_multiple_of(2) };
        if complete && degree == ctx.n {
            out.push(word.clone());
        }
        for idx in next_min..=ctx.top {
            let d = if need_conj { degree + idx } else { degree - idx };
            // Each further (plain, conjugated) pair adds i − j ≥ 0, so a
            // degree above n after a conjugated letter is final.
            if need_conj && d > ctx.n {
                continue;
            }
            word.push(Letter { index: idx, conj: need_conj });
            let next = if !need_conj && !ctx.strict { idx } else { idx + 1 };
            rec(out, word, next, !need_conj, d, ctx);
            word.pop();
        }
    }
    let ctx = Ctx { gamma, n, top, strict: c.strict_interlace };
    let mut out = Vec::new();
    let mut word = Vec::new();
    rec(&mut out, &mut word, first.max(1), gamma, 0, &ctx);
    out
}

/// `γ₂,ₙ` of the unnormalized `k₂(ζ)` product, by enumeration.
pub fn gamma2_coeff<C: Scalar>(zeta: &[C], n: i64) -> C {
    let top = zeta.len() as i64;
    lemma_words(true, n, 1, top).iter().fold(C::zero(), |acc, w| acc + word_value(w, zeta, 1))
}

/// `δ₂,ₙ` of the unnormalized `k₂(ζ)` product, by enumeration (`δ₂,₀ = 1`).
pub fn delta2_coeff<C: Scalar>(zeta: &[C], n: i64) -> C {
    let top = zeta.len() as i64;
    lemma_words(false, n, 1, top).iter().fold(C::zero(), |acc, w| acc + word_value(w, zeta, 1))
}

/// Constraints on the ratio-coefficient index tuples. Both hold for the
/// true expansion; switching one off yields a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioConstraints {
    /// `j_s < i_s`
    pub j_below_i: bool,
    /// `j_s ≤ i_{s−1}`
    pub j_at_most_prev_i: bool,
}

impl Default for RatioConstraints {
    fn default() -> Self {
        RatioConstraints { j_below_i: true, j_at_most_prev_i: true }
    }
}

/// A signed term `(−1)^r (−v̄_{i₀}) (v_{j₁}(−v̄_{i₁})) ⋯ (v_{j_r}(−v̄_{i_r}))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatioTerm {
    pub negative: bool,
    pub word: Word,
}

/// Index tuples with `Σi − Σj = n` for the Taylor coefficients of the
/// product ratio. Indices run over `first..=min(n, top)`; with the true
/// constraints no larger index can occur.
pub fn ratio_terms(n: i64, first: i64, top: i64, c: RatioConstraints) -> Vec<RatioTerm> {
    let cap = if c == RatioConstraints::default() { top.min(n) } else { top };
    let max_r = n + 1;
    let mut out = Vec::new();
    let mut word = Vec::new();
    fn rec(
        out: &mut Vec<RatioTerm>,
        word: &mut Word,
        prev_i: i64,
        remaining: i64,
        r: i64,
        ctx: (i64, i64, i64, RatioConstraints),
    ) {
        let (first, cap, max_r, c) = ctx;
        if remaining == 0 {
            out.push(RatioTerm { negative: r % 2 == 1, word: word.clone() });
        }
        if r >= max_r {
            return;
        }
        let j_hi = if c.j_at_most_prev_i { prev_i.min(cap) } else { cap };
        for j in first..=j_hi {
            let i_lo = if c.j_below_i { j + 1 } else { first };
            for i in i_lo..=cap {
                let rem = remaining - (i - j);
                if rem < 0 || (c.j_below_i && rem < 0) {
                    continue;
                }
                word.push(Letter::plain(j));
                word.push(Letter::barred(i));
                rec(out, word, i, rem, r + 1, ctx);
                word.pop();
                word.pop();
            }
        }
    }
    if cap < first {
        return out;
    }
    for i0 in first..=cap {
        if i0 > n {
            break;
        }
        word.push(Letter::barred(i0));
        rec(&mut out, &mut word, i0, n - i0, 0, (first, cap, max_r, c));
        word.pop();
    }
    out
}

fn ratio_sum<C: Scalar>(vars: &[C], first: i64, n: i64, c: RatioConstraints) -> C {
    let top = first + vars.len() as i64 - 1;
    ratio_terms(n, first, top, c).iter().fold(C::zero(), |acc, t| {
        let v = word_value(&t.word, vars, first);
        if t.negative {
            acc - v
        } else {
            acc + v
        }
    })
}

/// `ξₙ`, the `zⁿ` coefficient of `γ₂/δ₂`, from the signed index tuples.
pub fn xi_enum<C: Scalar>(zeta: &[C], n: i64) -> C {
    ratio_sum(zeta, 1, n, RatioConstraints::default())
}

/// `ψₙ`, the `zⁿ` coefficient of `β₁/α₁`, from the signed index tuples.
pub fn psi_enum<C: Scalar>(eta: &[C], n: i64) -> C {
    ratio_sum(eta, 0, n, RatioConstraints::default())
}

/// Same sums under modified constraints.
pub fn ratio_enum_with<C: Scalar>(vars: &[C], side: Side, n: i64, c: RatioConstraints) -> C {
    ratio_sum(vars, side.first_index(), n, c)
}

/// The special triangular data of `k₁` or `k₂`:
/// `k₂ = [[1, x*],[0,1]]·diag(a₂, a₂⁻¹)·[[α₂,β₂],[γ₂,δ₂]]` and
/// `k₁ = [[1, 0],[y*,1]]·diag(a₁, a₁⁻¹)·[[α₁,β₁],[γ₁,δ₁]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTriangularData<C> {
    pub side: Side,
    /// `a₁` or `a₂`.
    pub a: C,
    /// `y*` (powers ≤ 0) for `k₁`, `x*` (powers < 0) for `k₂`.
    pub lower_or_upper: LaurentSeries<C>,
    /// `[[α, β], [γ, δ]]`, a power series in `z`.
    pub unitary_part: MatrixLoop<C>,
}

impl<C: Scalar> FactorTriangularData<C> {
    /// Multiplies the three factors back together.
    pub fn recompose(&self) -> MatrixLoop<C> {
        let d = MatrixLoop::diag(
            LaurentSeries::constant(self.a.clone()),
            LaurentSeries::constant(C::one() / self.a.clone()),
        );
        let t = match self.side {
            Side::K1 => MatrixLoop::lower_unipotent(self.lower_or_upper.clone()),
            Side::K2 => MatrixLoop::upper_unipotent(self.lower_or_upper.clone()),
        };
        t.mul_full(&d).mul_full(&self.unitary_part)
    }
}

/// Reads the triangular data off a normalized `k₁` or `k₂` product.
pub fn extract_factor_data<C: Scalar>(k: &MatrixLoop<C>, side: Side) -> Result<FactorTriangularData<C>> {
    let [[k11, k12], [k21, k22]] = k.entries();
    let w = k.window();
    let degree = (-w.lo).max(w.hi).max(0);
    let nonneg = |s: LaurentSeries<C>| s.project(Part::Nonnegative);
    match side {
        Side::K2 => {
            let c = k22.coeff(0);
            if c.is_zero() {
                return Err(Error::NonInvertibleCorner);
            }
            let a = C::one() / c;
            let inv = k22.invert(Orientation::PowerSeriesInZ, degree).map_err(|_| Error::NonInvertibleCorner)?;
            let x_star = k12.mul(&inv, Window::new(w.lo, 0)).project(Part::StrictNegative);
            let out = Window::new(2 * w.lo, 2 * w.hi);
            let a_inv = C::one() / a.clone();
            let alpha = nonneg(k11.sub(&x_star.mul(k21, out)).scale(&a_inv)).restrict(Window::new(0, w.hi.max(0)));
            let beta = nonneg(k12.sub(&x_star.mul(k22, out)).scale(&a_inv)).restrict(Window::new(0, w.hi.max(0)));
            let gamma = k21.scale(&a);
            let delta = k22.scale(&a);
            Ok(FactorTriangularData {
                side,
                a,
                lower_or_upper: x_star,
                unitary_part: MatrixLoop::new([[alpha, beta], [gamma, delta]]),
            })
        }
        Side::K1 => {
            let a = k11.coeff(0);
            if a.is_zero() {
                return Err(Error::NonInvertibleCorner);
            }
            let inv = k11.invert(Orientation::PowerSeriesInZ, degree).map_err(|_| Error::NonInvertibleCorner)?;
            let y_star = k21.mul(&inv, Window::new(w.lo, 0)).project(Part::Nonpositive);
            let out = Window::new(2 * w.lo, 2 * w.hi);
            let a_inv = C::one() / a.clone();
            let alpha = k11.scale(&a_inv);
            let beta = k12.scale(&a_inv);
            let gamma = nonneg(k21.sub(&y_star.mul(k11, out)).scale(&a)).restrict(Window::new(0, w.hi.max(0)));
            let delta = nonneg(k22.sub(&y_star.mul(k12, out)).scale(&a)).restrict(Window::new(0, w.hi.max(0)));
            Ok(FactorTriangularData {
                side,
                a,
                lower_or_upper: y_star,
                unitary_part: MatrixLoop::new([[alpha, beta], [gamma, delta]]),
            })
        }
    }
}
