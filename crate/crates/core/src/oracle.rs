//! Exact brute-force checks of the combinatorial formulas.
//!
//! Every check compares two independently computed exact values: a
//! coefficient of an expanded product (or a Taylor quotient of one) against
//! a sum over enumerated index tuples. All comparisons are exact equality.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::loops::MatrixLoop;
use crate::rootsub::{
    format_word, k1_product, k2_product, lemma_words_with, ratio_terms, word_value, LemmaConstraints, RatioConstraints,
    Side, Word,
};
use crate::scalar::{exact, Exact, Scalar};
use crate::series::{LaurentSeries, Orientation, Part, Window};

/// Exact values of the `ζ` (side `K2`, from index 1) or `η` (side `K1`,
/// from index 0) variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPoint {
    pub side: Side,
    pub values: Vec<Exact>,
}

impl ExactPoint {
    pub fn zeta(values: Vec<Exact>) -> Self {
        ExactPoint { side: Side::K2, values }
    }

    pub fn eta(values: Vec<Exact>) -> Self {
        ExactPoint { side: Side::K1, values }
    }

    /// Highest index carried.
    pub fn top(&self) -> i64 {
        self.side.first_index() + self.values.len() as i64 - 1
    }

    /// Value of the variable with the given index (zero beyond the point).
    pub fn get(&self, index: i64) -> Exact {
        let k = index - self.side.first_index();
        if k < 0 {
            return Exact::zero();
        }
        self.values.get(k as usize).cloned().unwrap_or_else(Exact::zero)
    }

    /// Copy with variable `index` set to `v`, zero-padding as needed.
    pub fn with(&self, index: i64, v: Exact) -> Self {
        let k = (index - self.side.first_index()) as usize;
        let mut values = self.values.clone();
        if values.len() <= k {
            values.resize(k + 1, Exact::zero());
        }
        values[k] = v;
        ExactPoint { side: self.side, values }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "side": match self.side { Side::K1 => "eta", Side::K2 => "zeta" },
            "values": self.values.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let side = match v.get("side").and_then(Value::as_str) {
            Some("zeta") | Some("k2") => Side::K2,
            Some("eta") | Some("k1") => Side::K1,
            other => return Err(Error::Input(format!("point side must be 'zeta' or 'eta', got {other:?}"))),
        };
        let values = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("point: missing 'values'".into()))?
            .iter()
            .map(|x| Exact::from_json(x).ok_or_else(|| Error::Input(format!("point: bad exact value {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactPoint { side, values })
    }
}

/// One exact comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    /// Name of the fixture point, when run from a fixture file.
    pub point: String,
    pub n: i64,
    pub ok: bool,
    pub lhs: Value,
    pub rhs: Value,
}

impl Check {
    fn exact(label: &str, n: i64, lhs: &Exact, rhs: &Exact) -> Self {
        Check { label: label.into(), point: String::new(), n, ok: lhs == rhs, lhs: lhs.to_json(), rhs: rhs.to_json() }
    }
}

/// A list of checks; passes when all of them do.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// `Err(MismatchAt)` for the first failing check.
    pub fn into_result(self) -> Result<Report> {
        match self.checks.iter().find(|c| !c.ok) {
            None => Ok(self),
            Some(c) => Err(Error::MismatchAt { n: c.n, lhs: c.lhs.to_string(), rhs: c.rhs.to_string() }),
        }
    }

    pub fn first_mismatch(&self) -> Option<i64> {
        self.checks.iter().find(|c| !c.ok).map(|c| c.n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks.iter().map(|c| json!({
                "check": c.label,
                "point": c.point,
                "n": c.n,
                "ok": c.ok,
                "lhs": c.lhs,
                "rhs": c.rhs,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Which enumeration rules the checks use. [`Enumerators::default`] is the
/// true expansion; the others are negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Enumerators {
    pub lemma: LemmaConstraints,
    pub ratio: RatioConstraints,
}

impl Enumerators {
    /// Named negative controls, as used in fixture files.
    pub fn mutation(name: &str) -> Option<Self> {
        let mut e = Enumerators::default();
        match name {
            "none" => {}
            "drop_j_lt_i" => e.ratio.j_below_i = false,
            "drop_j_le_prev_i" => e.ratio.j_at_most_prev_i = false,
            "lemma_nonstrict" => e.lemma.strict_interlace = false,
            _ => return None,
        }
        Some(e)
    }
}

/// The exact finite product `k₁(η)` or `k₂(ζ)`.
pub fn expand_product_exact(point: &ExactPoint, normalized: bool) -> Result<MatrixLoop<Exact>> {
    match point.side {
        Side::K1 => k1_product(&point.values, normalized),
        Side::K2 => k2_product(&point.values, normalized),
    }
}

fn lemma_sum(point: &ExactPoint, gamma: bool, n: i64, c: LemmaConstraints) -> Exact {
    lemma_words_with(gamma, n, 1, point.top(), c)
        .iter()
        .fold(Exact::zero(), |acc, w| acc + word_value(w, &point.values, 1))
}

/// Entries (2,1), (2,2) of the unnormalized `k₂(ζ)` against the `γ₂`/`δ₂`
/// enumerations for `n ≤ n_max`, and the shape
/// `[[δ₂*, −γ₂*], [γ₂, δ₂]]`.
pub fn verify_lemma_coeffs(point: &ExactPoint, n_max: i64, e: Enumerators) -> Result<Report> {
    if point.side != Side::K2 {
        return Err(Error::Input("the Lemma concerns the ζ product".into()));
    }
    let k = expand_product_exact(point, false)?;
    let mut r = Report::default();
    for n in 0..=n_max {
        let g = lemma_sum(point, true, n, e.lemma);
        let d = lemma_sum(point, false, n, e.lemma);
        r.checks.push(Check::exact("lemma gamma", n, &k.entry(1, 0).coeff(n), &g));
        r.checks.push(Check::exact("lemma delta", n, &k.entry(1, 1).coeff(n), &d));
        r.checks.push(Check::exact("shape (1,1) = delta*", n, &k.entry(0, 0).coeff(-n), &d.conj()));
        r.checks.push(Check::exact("shape (1,2) = -gamma*", n, &k.entry(0, 1).coeff(-n), &-g.conj()));
    }
    let w = k.window();
    let stray = (w.lo..0).any(|n| !k.entry(1, 0).coeff(n).is_zero() || !k.entry(1, 1).coeff(n).is_zero());
    r.checks.push(Check {
        label: "row 2 is a power series".into(),
        point: String::new(),
        n: 0,
        ok: !stray,
        lhs: json!(stray),
        rhs: json!(false),
    });
    Ok(r)
}

/// Taylor coefficients `0..=n_max` of `K₂₁/K₂₂` (k₂) or `K₁₂/K₁₁` (k₁) of
/// the unnormalized product.
pub fn product_ratio(point: &ExactPoint, n_max: i64) -> Result<LaurentSeries<Exact>> {
    let k = expand_product_exact(point, false)?;
    let (num, den) = match point.side {
        Side::K2 => (k.entry(1, 0), k.entry(1, 1)),
        Side::K1 => (k.entry(0, 1), k.entry(0, 0)),
    };
    let out = Window::new(0, n_max.max(0));
    let inv = den.invert(Orientation::PowerSeriesInZ, n_max.max(0))?;
    Ok(num.project(Part::Nonnegative).mul(&inv, out).restrict(out))
}

fn ratio_enum(point: &ExactPoint, n: i64, c: RatioConstraints) -> Exact {
    let first = point.side.first_index();
    ratio_terms(n, first, point.top(), c).iter().fold(Exact::zero(), |acc, t| {
        let v = word_value(&t.word, &point.values, first);
        if t.negative {
            acc - v
        } else {
            acc + v
        }
    })
}

// ξₙ + v̄ₙ∏_{s<n}(1+|v_s|²), from the exact product ratio.
fn leading_remainder(point: &ExactPoint, n: i64) -> Result<Exact> {
    let ratio = product_ratio(point, n)?.coeff(n);
    let first = point.side.first_index();
    let w = (first..n).fold(Exact::one(), |acc, s| acc * (Exact::one() + point.get(s).norm_sqr()));
    Ok(ratio + point.get(n).conj() * w)
}

/// The product ratio against `xi_enum`/`psi_enum`, plus the two-point check
/// that `ξₙ + v̄ₙ∏_{s<n}(1+|v_s|²)` does not depend on `vₙ`.
pub fn verify_ratio_coeffs(point: &ExactPoint, n_max: i64, e: Enumerators) -> Result<Report> {
    let ratio = product_ratio(point, n_max)?;
    let first = point.side.first_index();
    let name = match point.side {
        Side::K2 => "xi",
        Side::K1 => "psi",
    };
    let mut r = Report::default();
    for n in first..=n_max {
        let lhs = ratio.coeff(n);
        let rhs = ratio_enum(point, n, e.ratio);
        r.checks.push(Check::exact(&format!("{name} ratio vs enumeration"), n, &lhs, &rhs));
    }
    if point.side == Side::K2 {
        r.checks.push(Check::exact("xi_0 = 0", 0, &ratio.coeff(0), &Exact::zero()));
    }
    for n in first..=n_max {
        let shifted = point.get(n) + exact(1, 2, 1, 3);
        let a = leading_remainder(point, n)?;
        let b = leading_remainder(&point.with(n, shifted), n)?;
        r.checks.push(Check::exact(&format!("{name} leading term"), n, &a, &b));
    }
    Ok(r)
}

/// Signed multiset of words.
pub type WordSum = BTreeMap<Word, i64>;

/// Expands `γ·Σₛ(−(δ − 1))ˢ` at order `n` word by word and cancels equal
/// words. Each `δ − 1` word has degree at least one, so `s < n` suffices.
pub fn cancellation_survivors(point: &ExactPoint, n: i64, c: LemmaConstraints) -> WordSum {
    let top = point.top();
    let mut sum = WordSum::new();
    // (prefix, remaining degree, sign) states, extended by one factor at a time.
    let mut frontier: Vec<(Word, i64, i64)> = Vec::new();
    for d0 in 1..=n {
        for w in lemma_words_with(true, d0, 1, top, c) {
            frontier.push((w, n - d0, 1));
        }
    }
    while let Some((word, rem, sign)) = frontier.pop() {
        if rem == 0 {
            *sum.entry(word).or_insert(0) += sign;
            continue;
        }
        for d in 1..=rem {
            for w in lemma_words_with(false, d, 1, top, c) {
                let mut next = word.clone();
                next.extend(w);
                frontier.push((next, rem - d, -sign));
            }
        }
    }
    sum.retain(|_, v| *v != 0);
    sum
}

/// The signed words of `ξₙ`.
pub fn xi_words(point: &ExactPoint, n: i64, c: RatioConstraints) -> WordSum {
    let mut sum = WordSum::new();
    for t in ratio_terms(n, 1, point.top(), c) {
        *sum.entry(t.word).or_insert(0) += if t.negative { -1 } else { 1 };
    }
    sum.retain(|_, v| *v != 0);
    sum
}

fn format_sum(s: &WordSum) -> Value {
    json!(s.iter().map(|(w, c)| format!("{c:+}*{}", format_word(w, "zeta"))).collect::<Vec<_>>())
}

/// Confirms that the alternating expansion of `γ/δ` at order `n` leaves
/// exactly the signed words of `ξₙ`, and that the surviving sum equals the
/// product ratio at the point.
pub fn verify_cancellation(point: &ExactPoint, n: i64, e: Enumerators) -> Result<Report> {
    if point.side != Side::K2 {
        return Err(Error::Input("cancellation is checked on the ζ side".into()));
    }
    let survivors = cancellation_survivors(point, n, e.lemma);
    let expected = xi_words(point, n, e.ratio);
    let mut r = Report::default();
    r.checks.push(Check {
        label: "surviving words".into(),
        point: String::new(),
        n,
        ok: survivors == expected,
        lhs: format_sum(&survivors),
        rhs: format_sum(&expected),
    });
    let net =
        survivors.iter().fold(Exact::zero(), |acc, (w, c)| acc + Exact::from_i64(*c) * word_value(w, &point.values, 1));
    r.checks.push(Check::exact("surviving sum vs ratio", n, &net, &product_ratio(point, n)?.coeff(n)));
    Ok(r)
}

/// The displayed Taylor coefficients of `c/d` through `z⁴` (with the sign
/// and conjugation of the last group corrected) and of `b/a` through `z¹`.
pub fn displayed_coefficient(point: &ExactPoint, n: i64) -> Option<Exact> {
    let v = |k: i64| point.get(k);
    let vb = |k: i64| point.get(k).conj();
    let w = |k: i64| Exact::one() + point.get(k).norm_sqr();
    let two = Exact::from_i64(2);
    match (point.side, n) {
        (Side::K1, 0) => Some(-vb(0)),
        (Side::K1, 1) => Some(-vb(1) * w(0)),
        (Side::K2, 1) => Some(-vb(1)),
        (Side::K2, 2) => Some(-vb(2) * w(1)),
        (Side::K2, 3) => Some(-vb(3) * w(1) * w(2) - v(1) * vb(2) * vb(2) * w(1)),
        (Side::K2, 4) => Some(
            -vb(4) * w(1) * w(2) * w(3)
                - w(1)
                    * (v(2) * vb(3) * vb(3) * w(2)
                        + two * v(1) * vb(2) * vb(3) * w(2)
                        + v(1) * v(1) * vb(2) * vb(2) * vb(2)),
        ),
        _ => None,
    }
}

/// The printed `z⁴` coefficient of `c/d`, verbatim.
pub fn printed_xi4(point: &ExactPoint) -> Exact {
    let v = |k: i64| point.get(k);
    let vb = |k: i64| point.get(k).conj();
    let w = |k: i64| Exact::one() + point.get(k).norm_sqr();
    -vb(4) * w(1) * w(2) * w(3)
        + w(1)
            * (v(2) * vb(3) * vb(3) * w(2)
                + Exact::from_i64(2) * v(1) * vb(2) * vb(3) * w(2)
                + vb(1) * vb(1) * vb(2) * vb(2) * vb(2))
}

/// Displayed coefficients against the product ratio and the enumeration.
pub fn verify_displayed(point: &ExactPoint) -> Result<Report> {
    let ratio = product_ratio(point, 4)?;
    let mut r = Report::default();
    let first = point.side.first_index();
    for n in first..=4 {
        if let Some(d) = displayed_coefficient(point, n) {
            r.checks.push(Check::exact("display vs ratio", n, &d, &ratio.coeff(n)));
            r.checks.push(Check::exact(
                "display vs enumeration",
                n,
                &d,
                &ratio_enum(point, n, RatioConstraints::default()),
            ));
        }
    }
    Ok(r)
}

/// Runs the Lemma (ζ points only), ratio and cancellation checks at one point.
pub fn verify_point(point: &ExactPoint, n_max: i64, cancellation_n: i64, e: Enumerators) -> Result<Report> {
    let mut r = Report::default();
    if point.side == Side::K2 {
        r.extend(verify_lemma_coeffs(point, n_max, e)?);
    }
    r.extend(verify_ratio_coeffs(point, n_max, e)?);
    if point.side == Side::K2 {
        for n in 1..=cancellation_n {
            r.extend(verify_cancellation(point, n, e)?);
        }
    }
    Ok(r)
}

/// One point of an oracle fixture file.
#[derive(Debug, Clone, PartialEq)]
pub struct FixturePoint {
    pub name: String,
    pub point: ExactPoint,
    pub n_max: i64,
    /// Orders `1..=cancellation_n` get the word-level cancellation check.
    pub cancellation_n: i64,
    /// Also check the displayed low-order coefficients.
    pub displayed: bool,
}

/// A fixture file: exact points plus the enumerators to check them with.
///
/// ```json
/// {"mutation": "none",
///  "points": [{"name": "p", "side": "zeta", "values": [["1/2", "0"]],
///              "n_max": 8, "cancellation_n": 4, "displayed": false}]}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct OracleFixture {
    pub mutation: String,
    pub points: Vec<FixturePoint>,
}

impl OracleFixture {
    pub fn from_json(v: &Value) -> Result<Self> {
        let mutation = v.get("mutation").and_then(Value::as_str).unwrap_or("none").to_string();
        if Enumerators::mutation(&mutation).is_none() {
            return Err(Error::Input(format!("unknown mutation '{mutation}'")));
        }
        let raw = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("fixture: missing 'points'".into()))?;
        let int = |p: &Value, key: &str, default: i64| -> Result<i64> {
            match p.get(key) {
                None | Some(Value::Null) => Ok(default),
                Some(x) => x.as_i64().filter(|k| *k >= 0).ok_or_else(|| Error::Input(format!("fixture: bad '{key}'"))),
            }
        };
        let points = raw
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok(FixturePoint {
                    name: p.get("name").and_then(Value::as_str).map_or_else(|| format!("point{k}"), str::to_string),
                    point: ExactPoint::from_json(p)?,
                    n_max: int(p, "n_max", 8)?,
                    cancellation_n: int(p, "cancellation_n", 0)?,
                    displayed: p.get("displayed").and_then(Value::as_bool).unwrap_or(false),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OracleFixture { mutation, points })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mutation": self.mutation,
            "points": self.points.iter().map(|p| {
                let mut v = p.point.to_json();
                v["name"] = json!(p.name);
                v["n_max"] = json!(p.n_max);
                v["cancellation_n"] = json!(p.cancellation_n);
                v["displayed"] = json!(p.displayed);
                v
            }).collect::<Vec<_>>(),
        })
    }

    /// All checks for every point, tagged with the point name.
    pub fn run(&self) -> Result<Report> {
        let e = Enumerators::mutation(&self.mutation)
            .ok_or_else(|| Error::Input(format!("unknown mutation '{}'", self.mutation)))?;
        let mut out = Report::default();
        for p in &self.points {
            let mut r = verify_point(&p.point, p.n_max, p.cancellation_n, e)?;
            if p.displayed {
                r.extend(verify_displayed(&p.point)?);
            }
            for c in &mut r.checks {
                c.point = p.name.clone();
            }
            out.extend(r);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact_real;

    fn ones(k: usize) -> ExactPoint {
        ExactPoint::zeta(vec![exact_real(1, 1); k])
    }

    #[test]
    fn expansion_examples() {
        let k = expand_product_exact(&ExactPoint::zeta(vec![]), false).unwrap();
        assert_eq!(k.coeff(0), [[Exact::one(), Exact::zero()], [Exact::zero(), Exact::one()]]);
        let k = expand_product_exact(&ones(1), false).unwrap();
        assert_eq!(k.entry(0, 1).coeff(-1), Exact::one());
        assert_eq!(k.entry(1, 0).coeff(1), -Exact::one());
        let e = expand_product_exact(&ones(1), true).unwrap_err();
        assert_eq!(e, Error::IrrationalNormalizer { index: 0 });
    }

    #[test]
    fn lemma_passes_and_negative_control_fails() {
        assert!(verify_lemma_coeffs(&ones(1), 4, Enumerators::default()).unwrap().ok());
        assert!(verify_lemma_coeffs(&ones(3), 8, Enumerators::default()).unwrap().ok());
        let bad = verify_lemma_coeffs(&ones(3), 8, Enumerators::mutation("lemma_nonstrict").unwrap()).unwrap();
        assert!(!bad.ok());
        assert!(matches!(bad.into_result(), Err(Error::MismatchAt { .. })));
    }

    #[test]
    fn ratio_examples() {
        let p = ExactPoint::zeta(vec![exact_real(1, 2)]);
        let r = verify_ratio_coeffs(&p, 3, Enumerators::default()).unwrap();
        assert!(r.ok());
        assert_eq!(product_ratio(&p, 1).unwrap().coeff(1), exact_real(-1, 2));
        let p = ExactPoint::eta(vec![exact(0, 1, 1, 1), exact_real(1, 3)]);
        let ratio = product_ratio(&p, 4).unwrap();
        assert_eq!(ratio.coeff(0), exact(0, 1, 1, 1));
        assert_eq!(ratio.coeff(1), exact_real(-2, 3));
        assert!(verify_ratio_coeffs(&p, 4, Enumerators::default()).unwrap().ok());
    }

    #[test]
    fn ratio_negative_controls() {
        let p = ones(3);
        for m in ["drop_j_lt_i", "drop_j_le_prev_i"] {
            let r = verify_ratio_coeffs(&p, 6, Enumerators::mutation(m).unwrap()).unwrap();
            assert!(!r.ok(), "{m}");
        }
        let r = verify_ratio_coeffs(&p, 6, Enumerators::mutation("drop_j_le_prev_i").unwrap()).unwrap();
        assert_eq!(r.first_mismatch(), Some(2));
        // j = i pairs have degree zero, so they already disturb order 1.
        let r = verify_ratio_coeffs(&p, 6, Enumerators::mutation("drop_j_lt_i").unwrap()).unwrap();
        assert_eq!(r.first_mismatch(), Some(1));
        let r = verify_lemma_coeffs(&p, 6, Enumerators::mutation("lemma_nonstrict").unwrap()).unwrap();
        assert_eq!(r.first_mismatch(), Some(0));
    }

    #[test]
    fn cancellation_examples() {
        let p = ones(5);
        let s = cancellation_survivors(&p, 1, LemmaConstraints::default());
        assert_eq!(s, [(vec![crate::rootsub::Letter::barred(1)], 1)].into_iter().collect());
        let s = cancellation_survivors(&p, 2, LemmaConstraints::default());
        assert_eq!(s.len(), 2);
        assert!(verify_cancellation(&p, 2, Enumerators::default()).unwrap().ok());
        assert!(verify_cancellation(&p, 5, Enumerators::default()).unwrap().ok());
        assert!(!verify_cancellation(&p, 3, Enumerators::mutation("drop_j_le_prev_i").unwrap()).unwrap().ok());
    }

    #[test]
    fn displayed_coefficients() {
        let p = ExactPoint::zeta(vec![exact(1, 2, -1, 3), exact(2, 5, 1, 7), exact(-1, 4, 1, 1), exact(3, 8, 0, 1)]);
        assert!(verify_displayed(&p).unwrap().ok());
        assert_ne!(printed_xi4(&p), product_ratio(&p, 4).unwrap().coeff(4));
        let q = ExactPoint::eta(vec![exact(1, 3, 2, 5), exact(-3, 4, 1, 2)]);
        assert!(verify_displayed(&q).unwrap().ok());
    }

    #[test]
    fn fixture_runs_and_round_trips() {
        let v = json!({"points": [
            {"name": "a", "side": "zeta", "values": [["1/2", "0"], ["0", "-1/3"]], "n_max": 5, "cancellation_n": 3},
            {"name": "b", "side": "eta", "values": ["1", ["0", "1"]], "n_max": 4, "displayed": true},
        ]});
        let f = OracleFixture::from_json(&v).unwrap();
        assert_eq!(OracleFixture::from_json(&f.to_json()).unwrap(), f);
        let r = f.run().unwrap();
        assert!(r.ok());
        assert!(r.checks.iter().any(|c| c.point == "b"));
        let mut bad = f.clone();
        bad.mutation = "drop_j_le_prev_i".into();
        bad.points[0].point = ExactPoint::zeta(vec![exact_real(1, 1); 3]);
        assert!(matches!(bad.run().unwrap().into_result(), Err(Error::MismatchAt { n: 2, .. })));
        assert!(OracleFixture::from_json(&json!({"points": [], "mutation": "nope"})).is_err());
    }

    #[test]
    fn point_json_round_trip() {
        let p = ExactPoint::zeta(vec![exact(3, 5, -1, 2)]);
        assert_eq!(ExactPoint::from_json(&p.to_json()).unwrap(), p);
    }
}
