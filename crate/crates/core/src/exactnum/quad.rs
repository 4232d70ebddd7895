use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, rational_sqrt, serde_q, to_f64, Rational};
use crate::error::{Error, Result};

/// A real number `a + b*sqrt(d)` with rational `a`, `b` and radicand `d >= 0`.
///
/// Canonical form: whenever `d` is the square of a rational (including 0) or
/// `b = 0`, the value is folded into `a` and both `b` and `d` are zero. Radicands
/// are *not* reduced to square-free form, so `sqrt(8)` and `2*sqrt(2)` are
/// different representations; arithmetic between them is rejected. Derived
/// equality is structural, use [`quad_compare`] for value comparisons across
/// representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    a: Rational,
    b: Rational,
    d: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Smaller,
    Larger,
}

/// Builds the canonical representative of `a + b*sqrt(d)`.
pub fn quad_normalize(a: Rational, b: Rational, d: Rational) -> Result<QuadNumber> {
    if d.is_negative() {
        return Err(Error::Domain(format!(
            "negative radicand {}",
            format_rational(&d)
        )));
    }
    if b.is_zero() {
        return Ok(QuadNumber::rational(a));
    }
    if let Some(r) = rational_sqrt(&d) {
        return Ok(QuadNumber::rational(a + b * r));
    }
    Ok(QuadNumber { a, b, d })
}

/// Exact ordering of two quadratic numbers sharing a radicand.
pub fn quad_compare(x: &QuadNumber, y: &QuadNumber) -> Result<Ordering> {
    Ok(x.sub(y)?.signum())
}

/// Root of `p t^2 + q t + r = 0`.
///
/// With `p = 0` the equation is linear and both branches coincide.
pub fn quad_solve(p: &Rational, q: &Rational, r: &Rational, branch: Branch) -> Result<QuadNumber> {
    if p.is_zero() {
        if q.is_zero() {
            return Err(Error::Domain("degenerate quadratic: p = q = 0".into()));
        }
        return Ok(QuadNumber::rational(-r / q));
    }
    let disc = q * q - Rational::from_integer(4.into()) * p * r;
    if disc.is_negative() {
        return Err(Error::NoRealRoot(format_rational(&disc)));
    }
    let two_p = p + p;
    let center = -q / &two_p;
    // sqrt(disc) / |2p| = sqrt(disc / 4p^2)
    let radicand = &disc / (&two_p * &two_p);
    let sign = match branch {
        Branch::Larger => Rational::one(),
        Branch::Smaller => -Rational::one(),
    };
    quad_normalize(center, sign, radicand)
}

impl QuadNumber {
    pub fn rational(a: Rational) -> Self {
        QuadNumber {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Radicand shared by `self` and `other`, or `None` when they live in
    /// different extensions.
    fn common_radicand(&self, other: &Self) -> Option<Rational> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Some(Rational::zero()),
            (true, false) => Some(other.d.clone()),
            (false, true) => Some(self.d.clone()),
            (false, false) => (self.d == other.d).then(|| self.d.clone()),
        }
    }

    fn incompatible(&self, other: &Self) -> Error {
        Error::Domain(format!(
            "incompatible radicands {} and {}",
            format_rational(&self.d),
            format_rational(&other.d)
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self
            .common_radicand(other)
            .ok_or_else(|| self.incompatible(other))?;
        quad_normalize(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self
            .common_radicand(other)
            .ok_or_else(|| self.incompatible(other))?;
        let a = &self.a * &other.a + &self.b * &other.b * &d;
        let b = &self.a * &other.b + &self.b * &other.a;
        quad_normalize(a, b, d)
    }

    pub fn neg(&self) -> Self {
        QuadNumber {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        QuadNumber {
            a: &self.a * s,
            b: &self.b * s,
            d: self.d.clone(),
        }
    }

    pub fn add_rational(&self, s: &Rational) -> Self {
        QuadNumber {
            a: &self.a + s,
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// `c0 + c1 * self`, the evaluation of an affine law at this point.
    pub fn affine(&self, c0: &Rational, c1: &Rational) -> Self {
        self.scale(c1).add_rational(c0)
    }

    /// Exact sign. Isolates the surd and squares with sign tracking.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            (Ordering::Greater, Ordering::Less) => {
                sign_of(&(&self.a * &self.a - &self.b * &self.b * &self.d))
            }
            _ => sign_of(&(&self.b * &self.b * &self.d - &self.a * &self.a)),
        }
    }

    /// Decimal approximation for display. Never used in decisions.
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.d).sqrt()
    }
}

fn sign_of(x: &Rational) -> Ordering {
    x.cmp(&Rational::zero())
}

impl From<Rational> for QuadNumber {
    fn from(a: Rational) -> Self {
        QuadNumber::rational(a)
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{} + ", self.a)?;
        }
        write!(f, "{}*sqrt({})", self.b, self.d)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    #[serde(with = "serde_q")]
    a: Rational,
    #[serde(with = "serde_q")]
    b: Rational,
    #[serde(with = "serde_q")]
    d: Rational,
}

impl Serialize for QuadNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadRepr {
            a: self.a.clone(),
            b: self.b.clone(),
            d: self.d.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = QuadRepr::deserialize(d)?;
        quad_normalize(r.a, r.b, r.d).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};

    #[test]
    fn normalize_examples() {
        let x = quad_normalize(q(2), q(0), q(5)).unwrap();
        assert_eq!((x.a(), x.b(), x.d()), (&q(2), &q(0), &q(0)));
        let x = quad_normalize(q(0), q(1), q(9)).unwrap();
        assert_eq!((x.a(), x.b(), x.d()), (&q(3), &q(0), &q(0)));
        let x = quad_normalize(q(1), q(2), q(2)).unwrap();
        assert_eq!((x.a(), x.b(), x.d()), (&q(1), &q(2), &q(2)));
        assert!(matches!(
            quad_normalize(q(0), q(1), q(-1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn compare_examples() {
        let sqrt7 = quad_normalize(q(0), q(1), q(7)).unwrap();
        // 7 * 64 = 448 > 441 = 21^2
        assert_eq!(
            quad_compare(&sqrt7, &qf(21, 8).into()).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            quad_compare(&q(3).into(), &q(3).into()).unwrap(),
            Ordering::Equal
        );
        let sqrt2 = quad_normalize(q(0), q(1), q(2)).unwrap();
        assert_eq!(
            quad_compare(&QuadNumber::zero(), &sqrt2).unwrap(),
            Ordering::Less
        );
        assert!(quad_compare(&sqrt2, &sqrt7).is_err());
    }

    #[test]
    fn solve_examples() {
        let r = quad_solve(&qf(-1, 7), &q(0), &q(1), Branch::Larger).unwrap();
        assert_eq!(r, quad_normalize(q(0), q(1), q(7)).unwrap());
        let r = quad_solve(&q(1), &q(-5), &q(6), Branch::Smaller).unwrap();
        assert_eq!(r, q(2).into());
        let r = quad_solve(&q(1), &qf(-16, 3), &qf(64, 9), Branch::Larger).unwrap();
        assert_eq!(r, qf(8, 3).into());
    }

    #[test]
    fn solve_errors() {
        assert!(matches!(
            quad_solve(&q(1), &q(0), &q(1), Branch::Larger),
            Err(Error::NoRealRoot(_))
        ));
        assert!(matches!(
            quad_solve(&q(0), &q(0), &q(1), Branch::Larger),
            Err(Error::Domain(_))
        ));
        assert_eq!(
            quad_solve(&q(0), &q(2), &q(-3), Branch::Smaller).unwrap(),
            qf(3, 2).into()
        );
    }

    #[test]
    fn signum_mixed_signs() {
        // 3 - sqrt(8) > 0, 2 - sqrt(5) < 0, -3 + sqrt(8) < 0
        assert_eq!(
            quad_normalize(q(3), q(-1), q(8)).unwrap().signum(),
            Ordering::Greater
        );
        assert_eq!(
            quad_normalize(q(2), q(-1), q(5)).unwrap().signum(),
            Ordering::Less
        );
        assert_eq!(
            quad_normalize(q(-3), q(1), q(8)).unwrap().signum(),
            Ordering::Less
        );
    }

    #[test]
    fn json_shape() {
        let x = quad_normalize(qf(1, 2), q(-1), q(7)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"1/2","b":"-1","d":"7"}"#);
        let back: QuadNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let folded: QuadNumber = serde_json::from_str(r#"{"a":"1","b":"1","d":"4"}"#).unwrap();
        assert_eq!(folded, q(3).into());
    }
}
