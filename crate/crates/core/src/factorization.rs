//! Birkhoff factorization `g = g₋·g₀·g₊` from finite sections of the block
//! Toeplitz operator, and the triangular factorization derived from it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::assembly::TriangularFactorization;
use crate::error::{Error, Result};
use crate::loops::{mat_det, mat_inv, mat_mul, Mat2, MatrixLoop};
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, Orientation, Part, Window};

/// Condition estimates above this reject the loop as outside the top stratum.
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e12;

/// `|g₀₁₁|` below this (relative to `‖g₀‖`) has no LDU factorization.
pub const LDU_EPS: f64 = 1e-12;

/// `det g₀` farther than this from 1 is carried by the second row of `u`.
/// Rounding alone moves `det g₀` of an SU(2) loop by up to ~1e-11, so the
/// threshold sits at the factorization tolerance rather than near machine
/// precision.
const DET_ONE_TOL: f64 = 1e-9;

/// The `2(M+1) × 2(M+1)` finite section of `A(g)`: block `(k, j)` is the
/// Fourier coefficient `g_{k−j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSection {
    pub section_size: usize,
    pub matrix: DMatrix<Complex64>,
}

pub fn toeplitz_section(g: &MatrixLoop<Complex64>, m: usize) -> ToeplitzSection {
    let n = 2 * (m + 1);
    let coeffs: Vec<Mat2<Complex64>> = (-(m as i64)..=m as i64).map(|k| g.coeff(k)).collect();
    let matrix = DMatrix::from_fn(n, n, |r, c| {
        let (k, a) = (r / 2, r % 2);
        let (j, b) = (c / 2, c % 2);
        coeffs[(k as i64 - j as i64 + m as i64) as usize][a][b]
    });
    ToeplitzSection { section_size: m, matrix }
}

/// `g = g₋·g₀·g₊` with `g₋ = I + O(z⁻¹)` and `g₊ = I + O(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffFactorization {
    pub g_minus: MatrixLoop<Complex64>,
    pub g_zero: Mat2<Complex64>,
    pub g_plus: MatrixLoop<Complex64>,
    /// `‖A‖₁‖A⁻¹‖₁` of the section; `None` when no section was solved.
    pub condition_estimate: Option<f64>,
    /// Largest coefficient of `g·h` at positive powers or of `g₋⁻¹·g` at
    /// negative powers; both vanish for an exact factorization.
    pub positive_residual: f64,
}

impl BirkhoffFactorization {
    pub fn recompose(&self) -> MatrixLoop<Complex64> {
        self.g_minus.right_mul_const(&self.g_zero).mul_full(&self.g_plus)
    }

    pub fn to_json(&self) -> Value {
        let row = |r: &[Complex64; 2]| json!([[r[0].re, r[0].im], [r[1].re, r[1].im]]);
        json!({
            "g_minus": self.g_minus.to_json(),
            "g0": [row(&self.g_zero[0]), row(&self.g_zero[1])],
            "g_plus": self.g_plus.to_json(),
            "condition_estimate": self.condition_estimate,
            "positive_residual": self.positive_residual,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Input(format!("birkhoff factorization: missing '{k}'")));
        let bad = || Error::Input("g0: expected a 2×2 array of [re, im]".into());
        let g0 = field("g0")?.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut g_zero = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in g0.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for (j, x) in row.iter().enumerate() {
                g_zero[i][j] = Complex64::from_json(x).ok_or_else(bad)?;
            }
        }
        Ok(BirkhoffFactorization {
            g_minus: MatrixLoop::from_json(field("g_minus")?)?,
            g_zero,
            g_plus: MatrixLoop::from_json(field("g_plus")?)?,
            condition_estimate: v.get("condition_estimate").and_then(Value::as_f64),
            positive_residual: v.get("positive_residual").and_then(Value::as_f64).unwrap_or(0.0),
        })
    }
}

/// [`birkhoff_factor_with`] at [`DEFAULT_CONDITION_LIMIT`].
pub fn birkhoff_factor(g: &MatrixLoop<Complex64>, m: usize) -> Result<BirkhoffFactorization> {
    birkhoff_factor_with(g, m, DEFAULT_CONDITION_LIMIT)
}

/// Solves `A_M(g)·h = e₁, e₂` for the columns of `h = (g₀g₊)⁻¹`, takes
/// `g₋ = (g·h)₋` normalized to `g₋(∞) = I`, and reads `g₀` and `g₊` off
/// `g₋⁻¹·g`.
pub fn birkhoff_factor_with(
    g: &MatrixLoop<Complex64>,
    m: usize,
    condition_limit: f64,
) -> Result<BirkhoffFactorization> {
    let section = toeplitz_section(g, m);
    let a = &section.matrix;
    let n = a.nrows();
    let lu = a.clone().lu();
    let inv = lu.try_inverse().ok_or(Error::NotTopStratum { condition: f64::INFINITY })?;
    let condition = norm1(a) * norm1(&inv);
    if !condition.is_finite() || condition > condition_limit {
        return Err(Error::NotTopStratum { condition });
    }
    let solve = |col: usize| -> Result<DVector<Complex64>> {
        let mut e = DVector::from_element(n, Complex64::new(0.0, 0.0));
        e[col] = Complex64::new(1.0, 0.0);
        lu.solve(&e).ok_or(Error::NotTopStratum { condition })
    };
    let (x, y) = (solve(0)?, solve(1)?);
    let entry = |v: &DVector<Complex64>, row: usize| {
        LaurentSeries::truncated(0, (0..=m).map(|k| v[2 * k + row]).collect(), Window::new(0, m as i64), true, false)
    };
    let h = MatrixLoop::new([[entry(&x, 0), entry(&y, 0)], [entry(&x, 1), entry(&y, 1)]]);

    // g₋ = (g·h)₋, renormalized so that g₋(∞) = I exactly.
    let gw = g.window();
    let gh = g.mul(&h, Window::new(gw.lo.min(0), gw.hi + m as i64));
    let positive_residual = (1..=gh.window().hi).map(|k| mat_max_abs(&gh.coeff(k))).fold(0.0, f64::max);
    let raw_minus = gh.map_entries(|s| s.project(Part::Nonpositive)).restrict(Window::new(gw.lo.min(0), 0));
    let g_minus = raw_minus.right_mul_const(&mat_inv(&raw_minus.coeff(0)));

    // g₀g₊ = (g₋⁻¹·g)₊. The finite-section error of hₖ grows like the
    // reciprocal of the decay rate to the power 2M − k, so g₊ is not taken as
    // g₀⁻¹h⁻¹: going through g₋ keeps every coefficient of g₊ at the accuracy
    // of the low coefficients of h.
    let inv_minus = invert_matrix_series(&g_minus, Orientation::PowerSeriesInZInverse, gw.hi.max(0))?;
    let f = inv_minus.mul(g, Window::new(-(m as i64), gw.hi.max(0)));
    let negative_residual = (-(m as i64)..0).map(|k| mat_max_abs(&f.coeff(k))).fold(0.0, f64::max);
    let g_zero = f.coeff(0);
    let g_plus = f
        .map_entries(|s| s.project(Part::Nonnegative))
        .restrict(Window::new(0, gw.hi.max(0)))
        .left_mul_const(&mat_inv(&g_zero));
    let positive_residual = positive_residual.max(negative_residual);
    Ok(BirkhoffFactorization {
        g_minus: settled(&g_minus, false, true),
        g_zero,
        g_plus: settled(&g_plus, true, false),
        condition_estimate: Some(condition),
        positive_residual,
    })
}

// The product rule would bound the factors' reliable windows by the extent
// of g, which for an assembled loop runs far into negligible tail
// coefficients and leaves nothing. The factors come from a solve, and their
// accuracy is what the residuals measure, so their whole window counts as
// reliable. Only the side facing away from the truncation is closed.
fn settled(m: &MatrixLoop<Complex64>, closed_below: bool, closed_above: bool) -> MatrixLoop<Complex64> {
    m.map_entries(|s| {
        let w = s.window();
        LaurentSeries::truncated(w.lo, s.coeffs().to_vec(), w, closed_below, closed_above)
    })
}

fn norm1(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn mat_max_abs(m: &Mat2<Complex64>) -> f64 {
    m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

// adj(h)/det(h) as a power series on the given half-line.
fn invert_matrix_series(
    h: &MatrixLoop<Complex64>,
    orientation: Orientation,
    degree: i64,
) -> Result<MatrixLoop<Complex64>> {
    let out = match orientation {
        Orientation::PowerSeriesInZ => Window::new(0, degree),
        Orientation::PowerSeriesInZInverse => Window::new(-degree, 0),
    };
    let det = h.det(out);
    let inv_det = det.invert(orientation, degree).map_err(|_| Error::NotTopStratum { condition: f64::INFINITY })?;
    let [[a, b], [c, d]] = h.entries();
    let adj = MatrixLoop::new([[d.clone(), -b.clone()], [-c.clone(), a.clone()]]);
    Ok(adj.map_entries(|s| s.mul(&inv_det, out)))
}

/// `g₀ = L0·D0·U0` with `L0₂₁ = g₂₁/g₁₁`, `D0 = diag(g₁₁, det/g₁₁)`,
/// `U0₁₂ = g₁₂/g₁₁`.
pub fn ldu_2x2<C: Scalar>(g0: &Mat2<C>) -> Result<(Mat2<C>, Mat2<C>, Mat2<C>)> {
    let scale = g0.iter().flatten().map(|x| x.abs_f64()).fold(1.0, f64::max);
    let eps = if C::EXACT { 0.0 } else { LDU_EPS * scale };
    let p = g0[0][0].clone();
    if p.is_negligible(eps) {
        return Err(Error::NoTriangularFactorization { modulus: p.abs_f64() });
    }
    let (o, z) = (C::one(), C::zero());
    let l = [[o.clone(), z.clone()], [g0[1][0].clone() / p.clone(), o.clone()]];
    let d = [[p.clone(), z.clone()], [z.clone(), mat_det(g0) / p.clone()]];
    let u = [[o.clone(), g0[0][1].clone() / p], [z, o]];
    Ok((l, d, u))
}

/// Triangular factorization via [`birkhoff_factor`] and [`ldu_2x2`].
pub fn triangular_factor(g: &MatrixLoop<Complex64>, m: usize) -> Result<TriangularFactorization> {
    triangular_from_birkhoff(&birkhoff_factor(g, m)?)
}

/// `l = g₋·L0`, `m₀a₀ = D0₁₁`, `u = U0·g₊`. If `det g₀ ≠ 1` the factor
/// `det g₀` is carried by the second row of `u`, which leaves `u₂₁/u₂₂`
/// unchanged.
pub fn triangular_from_birkhoff(b: &BirkhoffFactorization) -> Result<TriangularFactorization> {
    let (l0, d0, u0) = ldu_2x2(&b.g_zero)?;
    let d = d0[0][0];
    let det = mat_det(&b.g_zero);
    let mut u = b.g_plus.left_mul_const(&u0);
    if (det - 1.0).norm() > DET_ONE_TOL {
        let zero = Complex64::new(0.0, 0.0);
        u = u.left_mul_const(&[[Complex64::new(1.0, 0.0), zero], [zero, det]]);
    }
    Ok(TriangularFactorization { l: b.g_minus.right_mul_const(&l0), m0: d / d.norm(), a0: d.norm(), u })
}

/// `g₋ = l·[[1,0],[−l₂₁(∞),1]]`, `g₀ = [[1,0],[l₂₁(∞),1]]·diag(m₀a₀, (m₀a₀)⁻¹)·[[1,u₁₂(0)],[0,1]]`,
/// `g₊ = [[1,−u₁₂(0)],[0,1]]·u`.
pub fn triangular_to_birkhoff(t: &TriangularFactorization) -> BirkhoffFactorization {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let l_inf = t.l.entry(1, 0).coeff(0);
    let u_0 = t.u.entry(0, 1).coeff(0);
    let dg = t.diagonal();
    let g_zero = mat_mul(&mat_mul(&[[o, z], [l_inf, o]], &[[dg, z], [z, dg.inv()]]), &[[o, u_0], [z, o]]);
    BirkhoffFactorization {
        g_minus: t.l.right_mul_const(&[[o, z], [-l_inf, o]]),
        g_zero,
        g_plus: t.u.left_mul_const(&[[o, -u_0], [z, o]]),
        condition_estimate: None,
        positive_residual: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_loop, assemble_triangular};
    use crate::rootsub::{k2_product, RootSubgroupCoordinates};
    use crate::scalar::{exact_real, Exact};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn span(a: &MatrixLoop<Complex64>, b: &MatrixLoop<Complex64>) -> f64 {
        let (wa, wb) = (a.window(), b.window());
        a.max_abs_diff_on(b, Window::new(wa.lo.min(wb.lo), wa.hi.max(wb.hi)))
    }

    fn coords() -> RootSubgroupCoordinates {
        RootSubgroupCoordinates {
            eta: vec![c(0.3, -0.2), c(0.1, 0.25), c(-0.05, 0.1)],
            zeta: vec![c(0.4, 0.1), c(-0.2, 0.15), c(0.0, 0.08)],
            chi0_im: -1.1,
            chi_plus: vec![c(0.2, 0.1), c(-0.1, 0.05), c(0.03, 0.0)],
        }
    }

    #[test]
    fn section_of_identity() {
        let s = toeplitz_section(&MatrixLoop::identity(), 2);
        assert_eq!(s.matrix, DMatrix::identity(6, 6));
    }

    #[test]
    fn section_shift_structure() {
        let g = MatrixLoop::diag(LaurentSeries::monomial(1, c(1.0, 0.0)), LaurentSeries::monomial(-1, c(1.0, 0.0)));
        let a = toeplitz_section(&g, 1).matrix;
        // Block (1,0) is g₁ = diag(1,0); block (0,1) is g₋₁ = diag(0,1).
        assert_eq!(a[(2, 0)], c(1.0, 0.0));
        assert_eq!(a[(1, 3)], c(1.0, 0.0));
        assert_eq!(a.iter().filter(|x| x.norm() > 0.0).count(), 2);
    }

    #[test]
    fn section_of_single_factor() {
        let z1 = c(0.5, 0.2);
        let g = k2_product(&[z1], true).unwrap();
        let a = toeplitz_section(&g, 3).matrix;
        let s = (1.0 + z1.norm_sqr()).sqrt().recip();
        assert!((a[(0, 0)] - s).norm() < 1e-15);
        assert!((a[(0, 3)] - z1 * s).norm() < 1e-15);
        assert!((a[(3, 0)] + z1.conj() * s).norm() < 1e-15);
    }

    #[test]
    fn birkhoff_identity_and_power_series() {
        let b = birkhoff_factor(&MatrixLoop::identity(), 4).unwrap();
        assert!(span(&b.g_minus, &MatrixLoop::identity()) < 1e-15);
        assert!(span(&b.g_plus, &MatrixLoop::identity()) < 1e-15);
        let g = MatrixLoop::new([
            [LaurentSeries::new(0, vec![c(1.0, 0.0), c(0.3, 0.1)]), LaurentSeries::monomial(2, c(0.2, 0.0))],
            [LaurentSeries::monomial(1, c(-0.4, 0.0)), LaurentSeries::one()],
        ]);
        let b = birkhoff_factor(&g, 12).unwrap();
        assert!(span(&b.g_minus, &MatrixLoop::identity()) < 1e-12);
        assert!(span(&b.g_plus.restrict(Window::new(0, 6)), &g.restrict(Window::new(0, 6))) < 1e-12);
    }

    #[test]
    fn birkhoff_single_factor_closed_form() {
        let z1 = c(0.5, -0.25);
        let a2 = (1.0 + z1.norm_sqr()).sqrt();
        let g = k2_product(&[z1], true).unwrap();
        let b = birkhoff_factor(&g, 16).unwrap();
        assert!(span(&b.g_minus, &MatrixLoop::upper_unipotent(LaurentSeries::monomial(-1, z1))) < 1e-12);
        let want = [[c(a2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0 / a2, 0.0)]];
        assert!(crate::loops::mat_max_abs_diff(&b.g_zero, &want) < 1e-12);
        let gp = MatrixLoop::lower_unipotent(LaurentSeries::monomial(1, -z1.conj()));
        assert!(span(&b.g_plus, &gp) < 1e-12);
        assert!(span(&b.recompose(), &g) < 1e-12);
    }

    #[test]
    fn ldu_examples() {
        let i = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert_eq!(ldu_2x2(&i).unwrap(), (i, i, i));
        let r = |p| exact_real(p, 1);
        let (l, d, u) = ldu_2x2::<Exact>(&[[r(2), r(2)], [r(1), r(2)]]).unwrap();
        assert_eq!(l[1][0], exact_real(1, 2));
        assert_eq!((d[0][0].clone(), d[1][1].clone()), (r(2), r(1)));
        assert_eq!(u[0][1], r(1));
        let e = ldu_2x2(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]).unwrap_err();
        assert!(matches!(e, Error::NoTriangularFactorization { .. }));
    }

    #[test]
    fn non_top_stratum_is_rejected() {
        let g = MatrixLoop::diag(LaurentSeries::monomial(1, c(1.0, 0.0)), LaurentSeries::monomial(-1, c(1.0, 0.0)));
        assert!(matches!(birkhoff_factor(&g, 6), Err(Error::NotTopStratum { .. })));
    }

    #[test]
    fn constant_rotation_has_no_triangular_factorization() {
        let g = MatrixLoop::constant(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]);
        assert!(birkhoff_factor(&g, 4).is_ok());
        assert!(matches!(triangular_factor(&g, 4), Err(Error::NoTriangularFactorization { .. })));
    }

    #[test]
    fn triangular_agrees_with_assembly() {
        let co = coords();
        let g = assemble_loop(&co, None);
        let t = triangular_factor(&g, 24).unwrap();
        let want = assemble_triangular(&co, None);
        let w = Window::new(-12, 12);
        assert!(t.l.max_abs_diff_on(&want.l, w) < 1e-10);
        assert!(t.u.max_abs_diff_on(&want.u, w) < 1e-10);
        assert!((t.m0 - want.m0).norm() < 1e-12);
        assert!((t.a0 - want.a0).abs() < 1e-12);
    }

    #[test]
    fn triangular_to_birkhoff_round_trip() {
        let t = assemble_triangular(&coords(), None);
        let b = triangular_to_birkhoff(&t);
        assert!(span(&b.recompose(), &t.recompose()) < 1e-12);
        assert!(b.g_plus.entry(1, 0) == t.u.entry(1, 0));
        let ident = triangular_to_birkhoff(&TriangularFactorization::identity());
        assert!(span(&ident.g_plus, &MatrixLoop::identity()) == 0.0);
        let from_section = birkhoff_factor(&assemble_loop(&coords(), None), 24).unwrap();
        let w = Window::new(-10, 10);
        assert!(from_section.g_plus.max_abs_diff_on(&b.g_plus, w) < 1e-10);
        assert!(from_section.g_minus.max_abs_diff_on(&b.g_minus, w) < 1e-10);
        assert!(crate::loops::mat_max_abs_diff(&from_section.g_zero, &b.g_zero) < 1e-10);
    }

    #[test]
    fn json_round_trip() {
        let b = birkhoff_factor(&assemble_loop(&coords(), None), 10).unwrap();
        let back = BirkhoffFactorization::from_json(&b.to_json()).unwrap();
        assert_eq!(back.g_zero, b.g_zero);
        assert_eq!(span(&back.g_plus, &b.g_plus), 0.0);
        assert_eq!(back.condition_estimate, b.condition_estimate);
    }
}
