//! Exact scalars: rationals and elements of a real quadratic field `Q(sqrt D)`.
//!
//! Sign and order are decided exactly. For `a + b sqrt(D)` with `a` and `b` of
//! opposite signs the comparison reduces to `a^2` against `b^2 D`, which is a
//! pair of big-integer cross multiplications. No floating point is involved.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Discriminant used by the named golden-ratio instances.
pub const DEFAULT_DISCRIMINANT: u32 = 5;

/// `a + b sqrt(D)` with rational `a`, `b` and a fixed non-square `D > 1`.
#[derive(Clone, Debug)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    d: u32,
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self> {
        check_discriminant(d)?;
        Ok(QuadScalar { a, b, d })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn discriminant(&self) -> u32 {
        self.d
    }

    /// Field norm `a^2 - b^2 D`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn conjugate(&self) -> QuadScalar {
        QuadScalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn signum(&self) -> Ordering {
        quad_sign(&self.a, &self.b, self.d)
    }
}

fn check_discriminant(d: u32) -> Result<()> {
    let r = d.sqrt();
    if d < 2 || r * r == d {
        return Err(Error::BadDiscriminant(d));
    }
    Ok(())
}

fn rat_sign(x: &Rational) -> Ordering {
    x.numer().sign().cmp(&num_bigint::Sign::NoSign)
}

fn quad_sign(a: &Rational, b: &Rational, d: u32) -> Ordering {
    let sa = rat_sign(a);
    let sb = rat_sign(b);
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // Opposite signs: compare a^2 with b^2 D by integer cross multiplication.
    // a^2 = p^2/q^2, b^2 D = r^2 D/s^2; equality is impossible for non-square D.
    let lhs = a.numer() * a.numer() * b.denom() * b.denom();
    let rhs = b.numer() * b.numer() * BigInt::from(d) * a.denom() * a.denom();
    if lhs > rhs {
        sa
    } else {
        sb
    }
}

/// Element of `Q` or of a single real quadratic field.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Quadratic(QuadScalar),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rational(Rational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `p/q`; panics on `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        Scalar::Rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn quad(a: Rational, b: Rational, d: u32) -> Result<Scalar> {
        Ok(Scalar::Quadratic(QuadScalar::new(a, b, d)?))
    }

    /// `p1/q1 + (p2/q2) sqrt(d)`.
    pub fn quad_ratio(p1: i64, q1: i64, p2: i64, q2: i64, d: u32) -> Result<Scalar> {
        Scalar::quad(rat(p1, q1), rat(p2, q2), d)
    }

    /// The golden ratio `(1 + sqrt 5)/2`.
    pub fn golden() -> Scalar {
        Scalar::quad_ratio(1, 2, 1, 2, 5).expect("5 is a valid discriminant")
    }

    /// The silver ratio `1 + sqrt 2`.
    pub fn silver() -> Scalar {
        Scalar::quad_ratio(1, 1, 1, 1, 2).expect("2 is a valid discriminant")
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: u32) -> Result<Scalar> {
        Scalar::quad(Rational::zero(), Rational::one(), d)
    }

    /// Discriminant of the quadratic context, `None` for plain rationals.
    pub fn context(&self) -> Option<u32> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quadratic(q) => Some(q.d),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        match self {
            Scalar::Rational(r) => r,
            Scalar::Quadratic(q) => &q.a,
        }
    }

    /// Coefficient of `sqrt D`; zero for rationals.
    pub fn irrational_part(&self) -> Rational {
        match self {
            Scalar::Rational(_) => Rational::zero(),
            Scalar::Quadratic(q) => q.b.clone(),
        }
    }

    /// The value as a rational, if its irrational part vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Quadratic(q) if q.b.is_zero() => Some(q.a.clone()),
            Scalar::Quadratic(_) => None,
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Rational(r) => rat_sign(r),
            Scalar::Quadratic(q) => q.signum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Exact comparison; fails only when the two values live in different
    /// quadratic fields.
    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum())
    }

    fn join(&self, other: &Scalar) -> Result<Option<u32>> {
        match (self.context(), other.context()) {
            (Some(x), Some(y)) if x != y => Err(Error::ContextMismatch(x, y)),
            (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
            (None, None) => Ok(None),
        }
    }

    fn build(a: Rational, b: Rational, ctx: Option<u32>) -> Scalar {
        match ctx {
            None => Scalar::Rational(a),
            Some(d) => Scalar::Quadratic(QuadScalar { a, b, d }),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        let ctx = self.join(other)?;
        Ok(Scalar::build(
            self.rational_part() + other.rational_part(),
            self.irrational_part() + other.irrational_part(),
            ctx,
        ))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        let ctx = self.join(other)?;
        Ok(Scalar::build(
            self.rational_part() - other.rational_part(),
            self.irrational_part() - other.irrational_part(),
            ctx,
        ))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        let ctx = self.join(other)?;
        let (a1, b1) = (self.rational_part(), self.irrational_part());
        let (a2, b2) = (other.rational_part(), other.irrational_part());
        let d = Rational::from_integer(BigInt::from(ctx.unwrap_or(0)));
        Ok(Scalar::build(
            a1 * a2 + &b1 * &b2 * d,
            a1 * &b2 + a2 * &b1,
            ctx,
        ))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = self.join(other)?;
        match other {
            Scalar::Rational(r) => Ok(Scalar::build(
                self.rational_part() / r,
                self.irrational_part() / r,
                ctx,
            )),
            Scalar::Quadratic(q) => {
                let norm = q.norm();
                let num = self.checked_mul(&Scalar::Quadratic(q.conjugate()))?;
                Ok(Scalar::build(
                    num.rational_part() / &norm,
                    num.irrational_part() / &norm,
                    ctx,
                ))
            }
        }
    }

    /// Multiply by an integer; never changes the context.
    pub fn scale(&self, k: i64) -> Scalar {
        let k = Rational::from_integer(BigInt::from(k));
        match self {
            Scalar::Rational(r) => Scalar::Rational(r * k),
            Scalar::Quadratic(q) => Scalar::Quadratic(QuadScalar {
                a: &q.a * &k,
                b: &q.b * k,
                d: q.d,
            }),
        }
    }

    /// Largest integer not exceeding the value, decided exactly.
    pub fn floor(&self) -> BigInt {
        match self {
            Scalar::Rational(r) => r.floor().to_integer(),
            Scalar::Quadratic(_) => {
                let approx = self.to_f64().floor();
                let mut k = BigInt::from(approx as i64);
                let ks = |k: &BigInt| Scalar::Rational(Rational::from_integer(k.clone()));
                while ks(&k).try_cmp(self).expect("rational vs quadratic") == Ordering::Greater {
                    k -= 1;
                }
                while ks(&(&k + 1)).try_cmp(self).expect("rational vs quadratic")
                    != Ordering::Greater
                {
                    k += 1;
                }
                k
            }
        }
    }

    /// Fractional part `x - floor(x)`.
    pub fn fract(&self) -> Scalar {
        let f = Scalar::Rational(Rational::from_integer(self.floor()));
        self - &f
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational_part().to_f64().unwrap_or(f64::NAN);
        match self {
            Scalar::Rational(_) => a,
            Scalar::Quadratic(q) => a + q.b.to_f64().unwrap_or(f64::NAN) * f64::from(q.d).sqrt(),
        }
    }

    /// Canonical rational text: `p` or `p/q`, reduced.
    pub fn rational_text(r: &Rational) -> String {
        r.to_string()
    }
}

pub(crate) fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        let (b1, b2) = (self.irrational_part(), other.irrational_part());
        if !b1.is_zero() && !b2.is_zero() && self.context() != other.context() {
            return false;
        }
        self.rational_part() == other.rational_part() && b1 == b2
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Scalar {
        Scalar::Rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quadratic(q) => {
                if q.b.is_negative() {
                    write!(f, "{}-{}*sqrt({})", q.a, -q.b.clone(), q.d)
                } else {
                    write!(f, "{}+{}*sqrt({})", q.a, q.b, q.d)
                }
            }
        }
    }
}

// Operator forms panic on mixed quadratic contexts. Every IET validates its
// context once at construction, so inside the engine they cannot fire.
macro_rules! scalar_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_op!(Add, add, checked_add);
scalar_op!(Sub, sub, checked_sub);
scalar_op!(Mul, mul, checked_mul);
scalar_op!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Quadratic(q) => Scalar::Quadratic(QuadScalar {
                a: -q.a.clone(),
                b: -q.b.clone(),
                d: q.d,
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Exact three-way comparison of two scalars.
pub fn scalar_cmp(x: &Scalar, y: &Scalar) -> Result<Ordering> {
    x.try_cmp(y)
}

#[derive(Serialize)]
struct QuadOut {
    a: String,
    b: String,
    #[serde(rename = "D")]
    d: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatIn {
    Text(String),
    Int(i64),
}

impl RatIn {
    fn into_rational(self) -> Result<Rational> {
        match self {
            RatIn::Text(t) => parse_rational(&t),
            RatIn::Int(n) => Ok(Rational::from_integer(BigInt::from(n))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarIn {
    Rat(RatIn),
    Quad {
        a: RatIn,
        b: RatIn,
        #[serde(rename = "D")]
        d: u32,
    },
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => s.serialize_str(&r.to_string()),
            Scalar::Quadratic(q) => QuadOut {
                a: q.a.to_string(),
                b: q.b.to_string(),
                d: q.d,
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Scalar, D::Error> {
        let parsed = match ScalarIn::deserialize(de)? {
            ScalarIn::Rat(r) => r.into_rational().map(Scalar::Rational),
            ScalarIn::Quad { a, b, d } => a
                .into_rational()
                .and_then(|a| Ok((a, b.into_rational()?)))
                .and_then(|(a, b)| Scalar::quad(a, b, d)),
        };
        parsed.map_err(D::Error::custom)
    }
}
