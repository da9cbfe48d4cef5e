//! Forward map: the loop `g = k₁(η)*·diag(e^χ, e^{−χ})·k₂(ζ)` and its
//! triangular factorization `g = l·diag(m₀a₀, (m₀a₀)⁻¹)·u`, both built
//! directly from root subgroup coordinates.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::loops::MatrixLoop;
use crate::rootsub::{extract_factor_data, k1_product, k2_product, RootSubgroupCoordinates, Side};
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, Orientation, Part, Window};

/// Coefficients of `e^{p}` below this are dropped once the tail is provably
/// decreasing.
pub const EXP_TAIL_TOL: f64 = 1e-20;

const EXP_MAX_DEGREE: i64 = 1 << 14;

/// `g = l·diag(m₀a₀, (m₀a₀)⁻¹)·u` with `l(∞)` lower and `u(0)` upper
/// unitriangular.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularFactorization {
    pub l: MatrixLoop<Complex64>,
    pub m0: Complex64,
    pub a0: f64,
    pub u: MatrixLoop<Complex64>,
}

impl TriangularFactorization {
    pub fn identity() -> Self {
        TriangularFactorization {
            l: MatrixLoop::identity(),
            m0: Complex64::new(1.0, 0.0),
            a0: 1.0,
            u: MatrixLoop::identity(),
        }
    }

    /// `m₀a₀`
    pub fn diagonal(&self) -> Complex64 {
        self.m0 * self.a0
    }

    /// `l·diag(m₀a₀, (m₀a₀)⁻¹)·u`
    pub fn recompose(&self) -> MatrixLoop<Complex64> {
        let d = self.diagonal();
        let mid = MatrixLoop::diag(LaurentSeries::constant(d), LaurentSeries::constant(d.inv()));
        self.l.mul_full(&mid).mul_full(&self.u)
    }

    /// Largest entrywise coefficient difference of `l`, `u` and the diagonal
    /// data, over the union of the windows.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let span = |a: &MatrixLoop<Complex64>, b: &MatrixLoop<Complex64>| {
            let (wa, wb) = (a.window(), b.window());
            a.max_abs_diff_on(b, Window::new(wa.lo.min(wb.lo), wa.hi.max(wb.hi)))
        };
        span(&self.l, &other.l)
            .max(span(&self.u, &other.u))
            .max((self.m0 - other.m0).norm())
            .max((self.a0 - other.a0).abs())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l.to_json(),
            "m0": [self.m0.re, self.m0.im],
            "a0": self.a0,
            "u": self.u.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Input(format!("triangular factorization: missing '{k}'")));
        let m0 = Complex64::from_json(field("m0")?).ok_or_else(|| Error::Input("m0: expected [re, im]".into()))?;
        let a0 = field("a0")?.as_f64().ok_or_else(|| Error::Input("a0: expected a number".into()))?;
        Ok(TriangularFactorization {
            l: MatrixLoop::from_json(field("l")?)?,
            m0,
            a0,
            u: MatrixLoop::from_json(field("u")?)?,
        })
    }
}

/// `e^p` for a polynomial `p` in `z` with zero constant term. The result is
/// a polynomial that is marked complete: it is cut where the remaining
/// coefficients are below [`EXP_TAIL_TOL`] and provably decreasing.
pub fn exp_polynomial(p: &LaurentSeries<Complex64>) -> LaurentSeries<Complex64> {
    let deg = p.hi().max(1);
    let s: f64 = p.iter().map(|(j, c)| j.max(0) as f64 * c.norm()).sum();
    let mut d = (4 * deg).max(32);
    loop {
        let e =
            p.exp(Orientation::PowerSeriesInZ, d).expect("exp_polynomial needs a power series with zero constant term");
        if d as f64 > s && (d - deg + 1..=d).all(|k| e.coeff(k).norm() <= EXP_TAIL_TOL) {
            let hi = (0..=d).rev().find(|&k| e.coeff(k).norm() > EXP_TAIL_TOL).unwrap_or(0);
            return e.restrict(Window::new(0, hi)).assume_complete();
        }
        if d >= EXP_MAX_DEGREE {
            return e;
        }
        d *= 2;
    }
}

struct ChiFactors {
    /// `e^{χ₀}`
    e0: Complex64,
    /// `e^{χ₊}`, `e^{−χ₊}`, `e^{2χ₊}`
    plus: LaurentSeries<Complex64>,
    plus_inv: LaurentSeries<Complex64>,
    plus_sq: LaurentSeries<Complex64>,
}

impl ChiFactors {
    fn new(coords: &RootSubgroupCoordinates) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0)];
        c.extend_from_slice(&coords.chi_plus);
        let chi = LaurentSeries::new(0, c);
        let two = Complex64::new(2.0, 0.0);
        ChiFactors {
            e0: Complex64::new(0.0, coords.chi0_im).exp(),
            plus: exp_polynomial(&chi),
            plus_inv: exp_polynomial(&-chi.clone()),
            plus_sq: exp_polynomial(&chi.scale(&two)),
        }
    }

    // χ₋ = −(χ₊)*, so e^{χ₋} = (e^{−χ₊})*, e^{−χ₋} = (e^{χ₊})*, e^{−2χ₋} = (e^{2χ₊})*.
    fn minus(&self) -> LaurentSeries<Complex64> {
        self.plus_inv.star()
    }
    fn minus_inv(&self) -> LaurentSeries<Complex64> {
        self.plus.star()
    }
    fn minus_inv_sq(&self) -> LaurentSeries<Complex64> {
        self.plus_sq.star()
    }
}

fn restrict_opt(g: MatrixLoop<Complex64>, out: Option<Window>) -> MatrixLoop<Complex64> {
    match out {
        Some(w) => g.restrict(w),
        None => g,
    }
}

/// `k₁(η)*·diag(e^χ, e^{−χ})·k₂(ζ)` with both products normalized; `χ₋`
/// is reconstructed as `−conj(χⱼ)` at `z⁻ʲ`. `None` keeps the full window.
pub fn assemble_loop(coords: &RootSubgroupCoordinates, out_window: Option<Window>) -> MatrixLoop<Complex64> {
    let k1 = k1_product(&coords.eta, true).expect("float normalization cannot fail");
    let k2 = k2_product(&coords.zeta, true).expect("float normalization cannot fail");
    let x = ChiFactors::new(coords);
    let e = x.minus().mul_full(&x.plus).scale(&x.e0);
    let e_inv = x.minus_inv().mul_full(&x.plus_inv).scale(&x.e0.inv());
    let g = k1.star().mul_full(&MatrixLoop::diag(e, e_inv)).mul_full(&k2);
    restrict_opt(g, out_window)
}

/// The triangular factorization of [`assemble_loop`]`(coords)`, assembled
/// from the special triangular forms of `k₁` and `k₂`.
///
/// With `Y = a₁²y`, `X* = a₂⁻²x*`, `A = a₁a₂` the middle factor splits as
/// `l = U₁*·diag(e^{χ₋}, e^{−χ₋})·[[1, P],[0,1]]`, `m₀a₀ = A·e^{χ₀}` and
/// `u = [[1, Q],[0,1]]·diag(e^{χ₊}, e^{−χ₊})·U₂`, where
/// `P = (e^{−2χ₋}Y + A²e^{2(χ₀+χ₊)}X*)₋` and
/// `Q = (A⁻²e^{−2(χ₋+χ₀)}Y + e^{2χ₊}X*)₊`.
pub fn assemble_triangular(coords: &RootSubgroupCoordinates, out_window: Option<Window>) -> TriangularFactorization {
    let k1 = k1_product(&coords.eta, true).expect("float normalization cannot fail");
    let k2 = k2_product(&coords.zeta, true).expect("float normalization cannot fail");
    let d1 = extract_factor_data(&k1, Side::K1).expect("k1 corner is positive");
    let d2 = extract_factor_data(&k2, Side::K2).expect("k2 corner is positive");
    let (a1, a2) = (d1.a.re, d2.a.re);
    let x = ChiFactors::new(coords);
    let big_a = a1 * a2;

    let y_hat = d1.lower_or_upper.star();
    let e0_sq = x.e0 * x.e0;
    let f = x
        .plus_sq
        .mul_full(&d2.lower_or_upper)
        .add(&x.minus_inv_sq().mul_full(&y_hat).scale(&e0_sq.inv()))
        .scale(&Complex64::new(a2.powi(-2), 0.0));
    let diag = x.e0 * big_a;
    let p = f.project(Part::StrictNegative).scale(&(diag * diag));
    let q = f.project(Part::Nonnegative);

    let l = d1
        .unitary_part
        .star()
        .mul_full(&MatrixLoop::diag(x.minus(), x.minus_inv()))
        .mul_full(&MatrixLoop::upper_unipotent(p));
    let u = MatrixLoop::upper_unipotent(q)
        .mul_full(&MatrixLoop::diag(x.plus.clone(), x.plus_inv.clone()))
        .mul_full(&d2.unitary_part);
    TriangularFactorization {
        l: restrict_opt(l.restrict(nonpositive(l.window())), out_window),
        m0: x.e0,
        a0: big_a,
        u: restrict_opt(u.restrict(nonnegative(u.window())), out_window),
    }
}

fn nonpositive(w: Window) -> Window {
    Window::new(w.lo.min(0), 0)
}

fn nonnegative(w: Window) -> Window {
    Window::new(0, w.hi.max(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_coords() -> RootSubgroupCoordinates {
        RootSubgroupCoordinates {
            eta: vec![c(0.3, -0.2), c(0.1, 0.25), c(-0.05, 0.1)],
            zeta: vec![c(0.4, 0.1), c(-0.2, 0.15), c(0.0, 0.08)],
            chi0_im: 0.7,
            chi_plus: vec![c(0.2, 0.1), c(-0.1, 0.05), c(0.03, 0.0)],
        }
    }

    fn full(a: &MatrixLoop<Complex64>, b: &MatrixLoop<Complex64>) -> f64 {
        let (wa, wb) = (a.window(), b.window());
        a.max_abs_diff_on(b, Window::new(wa.lo.min(wb.lo), wa.hi.max(wb.hi)))
    }

    #[test]
    fn exp_polynomial_is_complete_and_accurate() {
        let p = LaurentSeries::new(0, vec![c(0.0, 0.0), c(0.5, 0.2), c(-0.1, 0.3)]);
        let e = exp_polynomial(&p);
        assert!(e.is_complete());
        let v = e.sample(16);
        let w = p.sample(16);
        for (a, b) in v.iter().zip(w.iter()) {
            assert!((a - b.exp()).norm() < 1e-14);
        }
        assert_eq!(exp_polynomial(&LaurentSeries::zero()).coeffs(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn zero_coordinates() {
        let z = RootSubgroupCoordinates::zero(3);
        let g = assemble_loop(&z, None);
        assert!(full(&g, &MatrixLoop::identity()) < 1e-15);
        let t = assemble_triangular(&z, None);
        assert!(t.max_abs_diff(&TriangularFactorization::identity()) < 1e-15);
    }

    #[test]
    fn single_zeta() {
        let z1 = c(0.5, -0.3);
        let mut co = RootSubgroupCoordinates::zero(1);
        co.zeta[0] = z1;
        let a = (1.0 + z1.norm_sqr()).sqrt();
        let g = assemble_loop(&co, None);
        let expect = MatrixLoop::new([
            [LaurentSeries::one(), LaurentSeries::monomial(-1, z1)],
            [LaurentSeries::monomial(1, -z1.conj()), LaurentSeries::one()],
        ])
        .scale(&c(1.0 / a, 0.0));
        assert!(full(&g, &expect) < 1e-15);
        let t = assemble_triangular(&co, None);
        let want = TriangularFactorization {
            l: MatrixLoop::upper_unipotent(LaurentSeries::monomial(-1, z1)),
            m0: c(1.0, 0.0),
            a0: a,
            u: MatrixLoop::lower_unipotent(LaurentSeries::monomial(1, -z1.conj())),
        };
        assert!(t.max_abs_diff(&want) < 1e-15);
        assert!(full(&t.recompose(), &g) < 1e-15);
    }

    #[test]
    fn loop_is_special_unitary() {
        let g = assemble_loop(&sample_coords(), None);
        assert!(g.unitary_defect(256) < 1e-13);
        let det = g.det_full();
        assert!(det.max_abs_diff_on(&LaurentSeries::one(), det.window()) < 1e-13);
    }

    #[test]
    fn triangular_recomposes_and_has_normalized_corners() {
        let co = sample_coords();
        let g = assemble_loop(&co, None);
        let t = assemble_triangular(&co, None);
        assert!(full(&t.recompose(), &g) < 1e-12);
        assert!((t.m0 - c(0.0, 0.7).exp()).norm() < 1e-15);
        let (a1, a2) = crate::rootsub::norm_constants(&co.eta, &co.zeta);
        assert!((t.a0 - a1 * a2).abs() < 1e-15);
        let one = c(1.0, 0.0);
        assert!((t.u.entry(0, 0).coeff(0) - one).norm() < 1e-14);
        assert!((t.u.entry(1, 1).coeff(0) - one).norm() < 1e-14);
        assert!(t.u.entry(1, 0).coeff(0).norm() < 1e-14);
        assert!((t.l.entry(0, 0).coeff(0) - one).norm() < 1e-14);
        assert!((t.l.entry(1, 1).coeff(0) - one).norm() < 1e-14);
        assert!(t.l.entry(0, 1).coeff(0).norm() < 1e-14);
        for m in [&t.l, &t.u] {
            let d = m.det_full();
            assert!(d.max_abs_diff_on(&LaurentSeries::one(), d.window()) < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let t = assemble_triangular(&sample_coords(), None);
        let back = TriangularFactorization::from_json(&t.to_json()).unwrap();
        assert_eq!(back.max_abs_diff(&t), 0.0);
    }
}
