//! Coefficient fields.
//!
//! Every series in the crate is generic over [`Scalar`], which is implemented
//! for inexact complex doubles ([`Complex64`]) and for exact Gaussian
//! rationals ([`Exact`]).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Complex number with rational real and imaginary parts.
pub type Exact = Complex<BigRational>;

/// A complex coefficient field, either floating or exact.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn conj(&self) -> Self;
    /// `|x|²`, returned as an element of the field with zero imaginary part.
    fn norm_sqr(&self) -> Self;
    /// True when the value is zero (exact) or below `eps` in modulus (inexact).
    fn is_negligible(&self, eps: f64) -> bool;
    /// Modulus as a double, for diagnostics.
    fn abs_f64(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    /// Real square root of a nonnegative real element, when it exists in the field.
    fn sqrt_real(&self) -> Option<Self>;
    /// `[re, im]`; exact values as `"p/q"` strings.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;

    fn is_zero(&self) -> bool {
        self.is_negligible(0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn norm_sqr(&self) -> Self {
        Complex64::new(Complex::norm_sqr(self), 0.0)
    }
    fn is_negligible(&self, eps: f64) -> bool {
        self.norm() <= eps
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn sqrt_real(&self) -> Option<Self> {
        if self.re < 0.0 {
            None
        } else {
            Some(Complex64::new(self.re.sqrt(), 0.0))
        }
    }
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Array(pair) if pair.len() == 2 => {
                let re = json_f64(&pair[0])?;
                let im = json_f64(&pair[1])?;
                Some(Complex64::new(re, im))
            }
            Value::Number(_) => Some(Complex64::new(v.as_f64()?, 0.0)),
            _ => None,
        }
    }
}

fn json_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_rational(s).map(|r| rational_to_f64(&r)),
        _ => None,
    }
}

fn json_rational(v: &Value) -> Option<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(|i| BigRational::from_integer(i.into())),
        _ => None,
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn norm_sqr(&self) -> Self {
        Complex::new(&self.re * &self.re + &self.im * &self.im, BigRational::zero())
    }
    fn is_negligible(&self, _eps: f64) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn sqrt_real(&self) -> Option<Self> {
        if !self.im.is_zero() || self.re.is_negative() {
            return None;
        }
        rational_sqrt(&self.re).map(|r| Complex::new(r, BigRational::zero()))
    }
    fn to_json(&self) -> Value {
        json!([format_rational(&self.re), format_rational(&self.im)])
    }
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Array(pair) if pair.len() == 2 => {
                Some(Complex::new(json_rational(&pair[0])?, json_rational(&pair[1])?))
            }
            other => json_rational(other).map(|re| Complex::new(re, BigRational::zero())),
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Builds an exact value from `(p_re, q_re, p_im, q_im)`.
pub fn exact(p_re: i64, q_re: i64, p_im: i64, q_im: i64) -> Exact {
    Complex::new(BigRational::new(p_re.into(), q_re.into()), BigRational::new(p_im.into(), q_im.into()))
}

/// Exact real rational `p/q`.
pub fn exact_real(p: i64, q: i64) -> Exact {
    exact(p, q, 0, 1)
}

/// Formats a rational always as `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or an integer `p`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Product `∏ (1 + |v|²)` over a slice, the positive denominators of the
/// peeling recursion.
pub fn one_plus_norm_product<C: Scalar>(values: &[C]) -> C {
    values.iter().fold(C::one(), |acc, v| acc * (C::one() + v.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_perfect_squares() {
        let r = BigRational::new(25.into(), 16.into());
        assert_eq!(rational_sqrt(&r), Some(BigRational::new(5.into(), 4.into())));
        let r = BigRational::new(2.into(), 1.into());
        assert_eq!(rational_sqrt(&r), None);
    }

    #[test]
    fn exact_norm_and_conj() {
        let z = exact(3, 5, 4, 5);
        assert_eq!(Scalar::norm_sqr(&z), <Exact as Scalar>::one());
        assert_eq!(z.conj(), exact(3, 5, -4, 5));
    }

    #[test]
    fn parse_and_format_rationals() {
        let r = parse_rational("-3/6").unwrap();
        assert_eq!(format_rational(&r), "-1/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7/1");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
