//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_biguint(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v.clone()))
}

/// Generalized binomial `a (a-1) ... (a-n+1) / n!` for a rational upper argument.
pub fn rational_binomial(a: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut top = a.clone();
    for i in 1..=n {
        if top.is_zero() {
            return Rational::zero();
        }
        acc *= &top;
        acc /= int(i as i64);
        top -= Rational::one();
    }
    acc
}

pub fn binomial_u(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Lossy conversion that stays finite for huge numerators and denominators.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let num = r.numer().bits() as i64;
    let den = r.denom().bits() as i64;
    let shift = num - den - 60;
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_integer().to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// `numerator/denominator` in lowest terms.
pub fn display(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b` or `a`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Serde adapter writing rationals as `"num/den"` strings.
pub mod as_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::display(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
    }
}

/// Serialize-only adapter for a vector of rationals.
pub mod as_strings {
    use serde::Serializer;

    use super::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(super::display))
    }
}

/// Serialize-only adapter for a matrix of rationals.
pub mod as_string_rows {
    use serde::Serializer;

    use super::Rational;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| row.iter().map(super::display).collect::<Vec<_>>()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_with_rational_top() {
        assert_eq!(rational_binomial(&frac(3, 2), 2), frac(3, 8));
        assert_eq!(rational_binomial(&frac(7, 3), 0), int(1));
        assert_eq!(rational_binomial(&int(1), 2), int(0));
        assert_eq!(rational_binomial(&int(-1), 3), int(-1));
        assert_eq!(rational_binomial(&int(6), 3), int(20));
    }

    #[test]
    fn integer_binomial() {
        assert_eq!(binomial_u(6, 3), BigUint::from(20u32));
        assert_eq!(binomial_u(3, 5), BigUint::zero());
    }

    #[test]
    fn float_conversion_of_large_values() {
        let big = Rational::new(BigInt::from(10).pow(400), BigInt::from(3) * BigInt::from(10).pow(399));
        assert!((to_f64(&big) - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(display(&frac(6, 4)), "3/2");
        assert_eq!(display(&int(-4)), "-4");
    }
}
