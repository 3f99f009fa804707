//! Exact rational scalars.
//!
//! [`Rational`] is a thin newtype over [`BigRational`] that is always kept in
//! lowest terms with a positive denominator, so structural equality and hashing
//! agree with numeric equality. The textual form is `"p/q"` and is used as the
//! interchange format everywhere (JSON, CSV, reports).

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}, expected \"p/q\"")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Arbitrary-precision rational number in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to lowest terms.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `1/2`, which shows up often enough to deserve a name.
    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `self^exp` for a non-negative integer exponent.
    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Midpoint `(a + b) / 2`.
    pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
        (a + b) * Rational::half()
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Lossy conversion, for plotting and human-facing summaries only.
    pub fn to_f64(&self) -> f64 {
        // Scale down huge numerators/denominators together before converting.
        let n = self.numer();
        let d = self.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = n >> shift;
        let d = d >> shift;
        let nf = big_to_f64(&n);
        let df = big_to_f64(&d);
        nf / df
    }

    /// Decimal expansion rounded to `sig` significant digits, e.g. `0.33333333333333333333`.
    ///
    /// Exact (computed with big integers) and deterministic; it still is an
    /// approximation of the rational value and is never parsed back.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        let ten = BigInt::from(10);

        // Find exponent e such that 10^e <= |x| < 10^(e+1).
        let mut exp: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
        loop {
            let (lo_n, lo_d) = scaled(&BigInt::one(), &BigInt::one(), exp);
            // |x| >= 10^exp  <=>  num * lo_d >= lo_n * den
            if &num * &lo_d < &lo_n * &den {
                exp -= 1;
                continue;
            }
            let (hi_n, hi_d) = scaled(&BigInt::one(), &BigInt::one(), exp + 1);
            if &num * &hi_d >= &hi_n * &den {
                exp += 1;
                continue;
            }
            break;
        }
        // digits = round(|x| * 10^(sig-1-exp))
        let shift = sig as i64 - 1 - exp;
        let (sn, sd) = scaled(&num, &den, shift);
        let (q, r) = sn.div_rem(&sd);
        let mut digits = if &r * 2 >= sd { q + 1 } else { q };
        if digits.to_string().len() > sig {
            digits /= &ten;
            exp += 1;
        }
        let ds = digits.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if exp >= 0 {
            let int_len = (exp + 1) as usize;
            if ds.len() <= int_len {
                out.push_str(&ds);
                out.push_str(&"0".repeat(int_len - ds.len()));
            } else {
                out.push_str(&ds[..int_len]);
                out.push('.');
                out.push_str(&ds[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-exp - 1) as usize));
            out.push_str(&ds);
        }
        out
    }
}

fn scaled(num: &BigInt, den: &BigInt, pow10: i64) -> (BigInt, BigInt) {
    let p = num_traits::pow(BigInt::from(10), pow10.unsigned_abs() as usize);
    if pow10 >= 0 {
        (num * p, den.clone())
    } else {
        (num.clone(), den * p)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    let (sign, digits) = x.to_u64_digits();
    let mut acc = 0.0f64;
    for d in digits.iter().rev() {
        acc = acc * 18446744073709551616.0 + *d as f64;
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = n
            .parse()
            .map_err(|_| ParseRationalError::Syntax(s.to_string()))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| ParseRationalError::Syntax(s.to_string()))?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand for `Rational::new(n, d)`, mostly for tests and built-in specs.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

impl PartialOrd<Rational> for &Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some((*self).cmp(other))
    }
}

impl PartialEq<Rational> for &Rational {
    fn eq(&self, other: &Rational) -> bool {
        (*self).eq(other)
    }
}
