//! Exact rational helpers. Every threshold in the crate is a [`Rational`];
//! hot loops compare by integer cross-multiplication instead of building
//! rationals.

use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Ratio of two counts; `den` must be nonzero.
pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::ParameterOutOfContract(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Always `numerator/denominator`, even for integers.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn check_unit_interval(name: &str, r: &Rational) -> Result<()> {
    if r.is_negative() || *r > Rational::one() {
        return Err(Error::ParameterOutOfContract(format!(
            "{name} = {} must lie in [0, 1]",
            fmt_rational(r)
        )));
    }
    Ok(())
}

/// A nonnegative rational as a machine fraction `num/den`, for use in kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub num: u128,
    pub den: u128,
}

impl Frac {
    pub fn from_rational(r: &Rational) -> Result<Frac> {
        if r.is_negative() {
            return Err(Error::ParameterOutOfContract(format!(
                "negative parameter {}",
                fmt_rational(r)
            )));
        }
        let num = r.numer().to_u128().ok_or(Error::Overflow("parameter numerator"))?;
        let den = r.denom().to_u128().ok_or(Error::Overflow("parameter denominator"))?;
        if num > 1 << 60 || den > 1 << 60 {
            return Err(Error::Overflow("parameter precision"));
        }
        Ok(Frac { num, den })
    }

    /// Smallest `k` with `k >= self * whole`.
    pub fn ceil_mul(&self, whole: usize) -> usize {
        let p = self.num * whole as u128;
        p.div_ceil(self.den) as usize
    }
}

/// Serde adapter writing a rational as its `p/q` string.
pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

pub fn ser_opt_rational<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}
