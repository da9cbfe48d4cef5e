//! 2×2 matrix-valued Laurent series.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{LaurentSeries, Window};

/// A constant 2×2 matrix.
pub type Mat2<C> = [[C; 2]; 2];

/// A loop into GL(2): four Laurent series sharing one window and one
/// reliable window.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixLoop<C> {
    entries: [[LaurentSeries<C>; 2]; 2],
}

impl<C: Scalar> MatrixLoop<C> {
    /// Aligns the four entries onto their union window and the intersection
    /// of their reliable windows.
    pub fn new(entries: [[LaurentSeries<C>; 2]; 2]) -> Self {
        let all = entries.iter().flatten();
        let lo = all.clone().map(|s| s.lo()).min().unwrap();
        let hi = all.clone().map(|s| s.hi()).max().unwrap();
        let w = Window::new(lo, hi);
        let [[a, b], [c, d]] = entries.map(|row| row.map(|s| s.restrict(w)));
        let rel = [&a, &b, &c, &d].iter().map(|s| s.reliable_window()).fold(w, |acc, r| acc.intersect(&r));
        let fix = |s: LaurentSeries<C>| s.with_reliable_limit(rel);
        MatrixLoop { entries: [[fix(a), fix(b)], [fix(c), fix(d)]] }
    }

    pub fn identity() -> Self {
        Self::constant(&[[C::one(), C::zero()], [C::zero(), C::one()]])
    }

    pub fn constant(m: &Mat2<C>) -> Self {
        Self::new([
            [LaurentSeries::constant(m[0][0].clone()), LaurentSeries::constant(m[0][1].clone())],
            [LaurentSeries::constant(m[1][0].clone()), LaurentSeries::constant(m[1][1].clone())],
        ])
    }

    pub fn diag(a: LaurentSeries<C>, d: LaurentSeries<C>) -> Self {
        Self::new([[a, LaurentSeries::zero()], [LaurentSeries::zero(), d]])
    }

    /// `[[1, x], [0, 1]]`
    pub fn upper_unipotent(x: LaurentSeries<C>) -> Self {
        Self::new([[LaurentSeries::one(), x], [LaurentSeries::zero(), LaurentSeries::one()]])
    }

    /// `[[1, 0], [x, 1]]`
    pub fn lower_unipotent(x: LaurentSeries<C>) -> Self {
        Self::new([[LaurentSeries::one(), LaurentSeries::zero()], [x, LaurentSeries::one()]])
    }

    /// Entry `(i, j)`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> &LaurentSeries<C> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[LaurentSeries<C>; 2]; 2] {
        &self.entries
    }

    pub fn into_entries(self) -> [[LaurentSeries<C>; 2]; 2] {
        self.entries
    }

    pub fn window(&self) -> Window {
        self.entries[0][0].window()
    }

    pub fn reliable_window(&self) -> Window {
        self.entries[0][0].reliable_window()
    }

    /// Matrix coefficient of `zⁿ`.
    pub fn coeff(&self, n: i64) -> Mat2<C> {
        [
            [self.entries[0][0].coeff(n), self.entries[0][1].coeff(n)],
            [self.entries[1][0].coeff(n), self.entries[1][1].coeff(n)],
        ]
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentSeries<C>) -> LaurentSeries<C>) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new([[f(a), f(b)], [f(c), f(d)]])
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_entries(|s| s.scale(c))
    }

    pub fn restrict(&self, w: Window) -> Self {
        self.map_entries(|s| s.restrict(w))
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = |i: usize, j: usize| self.entries[i][j].add(&other.entries[i][j]);
        Self::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let e = |i: usize, j: usize| self.entries[i][j].sub(&other.entries[i][j]);
        Self::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Matrix product with every entry restricted to `out`.
    pub fn mul(&self, other: &Self, out: Window) -> Self {
        let a = &self.entries;
        let b = &other.entries;
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j], out).add(&a[i][1].mul(&b[1][j], out));
        Self::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Product on the full natural window.
    pub fn mul_full(&self, other: &Self) -> Self {
        let (w1, w2) = (self.window(), other.window());
        self.mul(other, Window::new(w1.lo + w2.lo, w1.hi + w2.hi))
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul_const(&self, m: &Mat2<C>) -> Self {
        Self::constant(m).mul(self, self.window())
    }

    /// Right multiplication by a constant matrix.
    pub fn right_mul_const(&self, m: &Mat2<C>) -> Self {
        self.mul(&Self::constant(m), self.window())
    }

    /// Entry `(i, j)` of the result is `star` of entry `(j, i)`; on the unit
    /// circle this is the pointwise Hermitian adjoint.
    pub fn star(&self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new([[a.star(), c.star()], [b.star(), d.star()]])
    }

    pub fn det(&self, out: Window) -> LaurentSeries<C> {
        let [[a, b], [c, d]] = &self.entries;
        a.mul(d, out).sub(&b.mul(c, out))
    }

    pub fn det_full(&self) -> LaurentSeries<C> {
        let w = self.window();
        self.det(Window::new(2 * w.lo, 2 * w.hi))
    }

    /// Largest entrywise coefficient difference over `w`.
    pub fn max_abs_diff_on(&self, other: &Self, w: Window) -> f64 {
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| self.entries[i][j].max_abs_diff_on(&other.entries[i][j], w))
            .fold(0.0, f64::max)
    }

    /// JSON form `{"window": [lo, hi], "entries": [[s, s], [s, s]]}`.
    pub fn to_json(&self) -> Value {
        let w = self.window();
        let e = |i: usize, j: usize| self.entries[i][j].to_json();
        json!({
            "window": [w.lo, w.hi],
            "entries": [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::Input("loop: 'entries' must be a 2x2 array".into()))?;
        let mut parsed = Vec::with_capacity(4);
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| Error::Input("loop: each row must have 2 entries".into()))?;
            for s in row {
                parsed.push(LaurentSeries::from_json(s)?);
            }
        }
        let mut it = parsed.into_iter();
        let mut next = || it.next().unwrap();
        let m = Self::new([[next(), next()], [next(), next()]]);
        if let Some(w) = v.get("window").and_then(Value::as_array) {
            if let (Some(lo), Some(hi)) = (w.first().and_then(Value::as_i64), w.get(1).and_then(Value::as_i64)) {
                return Ok(m.restrict(Window::new(lo.min(m.window().lo), hi.max(m.window().hi))));
            }
        }
        Ok(m)
    }
}

/// Constant 2×2 helpers.
pub fn mat_mul<C: Scalar>(a: &Mat2<C>, b: &Mat2<C>) -> Mat2<C> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_det<C: Scalar>(a: &Mat2<C>) -> C {
    a[0][0].clone() * a[1][1].clone() - a[0][1].clone() * a[1][0].clone()
}

pub fn mat_inv<C: Scalar>(a: &Mat2<C>) -> Mat2<C> {
    let d = mat_det(a);
    [[a[1][1].clone() / d.clone(), -a[0][1].clone() / d.clone()], [-a[1][0].clone() / d.clone(), a[0][0].clone() / d]]
}

pub fn mat_max_abs_diff<C: Scalar>(a: &Mat2<C>, b: &Mat2<C>) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j].clone() - b[i][j].clone()).abs_f64());
        }
    }
    m
}

impl MatrixLoop<Complex64> {
    /// `max_z ‖A(z)A(z)* − I‖₂` over `grid_size` equally spaced circle points.
    pub fn unitary_defect(&self, grid_size: usize) -> f64 {
        let s: Vec<Vec<Complex64>> = self.entries.iter().flatten().map(|e| e.sample(grid_size)).collect();
        (0..grid_size).map(|k| hermitian_defect(s[0][k], s[1][k], s[2][k], s[3][k])).fold(0.0, f64::max)
    }

    /// Values of the four entries at circle samples.
    pub fn sample(&self, grid_size: usize) -> Vec<Mat2<Complex64>> {
        let s: Vec<Vec<Complex64>> = self.entries.iter().flatten().map(|e| e.sample(grid_size)).collect();
        (0..grid_size).map(|k| [[s[0][k], s[1][k]], [s[2][k], s[3][k]]]).collect()
    }
}

// Spectral norm of [[a,b],[c,d]]·[[a,b],[c,d]]* − I, closed form for a
// Hermitian 2×2 matrix.
fn hermitian_defect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let p = a.norm_sqr() + b.norm_sqr() - 1.0;
    let s = c.norm_sqr() + d.norm_sqr() - 1.0;
    let q = a * c.conj() + b * d.conj();
    let mean = 0.5 * (p + s);
    let rad = (0.25 * (p - s) * (p - s) + q.norm_sqr()).sqrt();
    mean.abs() + rad
}
