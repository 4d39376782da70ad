use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{One, Zero};

use super::{format_rational, Rational};
use crate::{Error, Result};

/// 2×2 rational matrix `(a b; c d)`, acting on forms by
/// `F ↦ F(ax + by, cx + dy)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMatrix {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl RationalMatrix {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |v: i64| Rational::from_integer(v.into());
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|e| e.is_integer())
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let inv = det.recip();
        Ok(Self::new(
            &self.d * &inv,
            -&self.b * &inv,
            -&self.c * &inv,
            &self.a * &inv,
        ))
    }

    /// Image of the column vector `(x, y)`.
    pub fn apply(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    /// Multiplicative order, if it divides `limit`-many steps.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, r: Self) -> RationalMatrix {
        RationalMatrix::new(
            &self.a * &r.a + &self.b * &r.c,
            &self.a * &r.b + &self.b * &r.d,
            &self.c * &r.a + &self.d * &r.c,
            &self.c * &r.b + &self.d * &r.d,
        )
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {}; {} {})",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c),
            format_rational(&self.d)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn inverse_round_trip() {
        let m = RationalMatrix::new(ratio(1, 2), ratio(3, 2), ratio(-3, 4), ratio(1, 2));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn singular_rejected() {
        let m = RationalMatrix::from_ints(1, 2, 2, 4);
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn orders() {
        assert_eq!(RationalMatrix::from_ints(0, 1, -1, -1).order(12), Some(3));
        assert_eq!(RationalMatrix::from_ints(0, -1, 1, 1).order(12), Some(6));
        assert_eq!(RationalMatrix::from_ints(1, 1, 0, 1).order(12), None);
    }

    #[test]
    fn display() {
        let m = RationalMatrix::new(ratio(1, 2), ratio(0, 1), ratio(-3, 2), ratio(1, 1));
        assert_eq!(m.to_string(), "(1/2 0; -3/2 1)");
    }
}
