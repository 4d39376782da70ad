//! Exact integer and rational arithmetic with the small amount of polynomial
//! algebra the rest of the crate needs.

mod bpoly;
mod matrix;
mod upoly;

pub use bpoly::BivariatePoly;
pub use matrix::RationalMatrix;
pub use upoly::UnivariatePoly;

use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

pub type Integer = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;

/// Builds `p/q` in lowest terms with a positive denominator.
pub fn make_rational(p: Integer, q: Integer) -> Result<Rational> {
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(p, q))
}

/// Shorthand for a small rational constant.
pub fn ratio(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(p.into(), q.into())
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    // BigRational::to_f64 handles huge numerators and denominators without
    // overflowing to inf/inf.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
