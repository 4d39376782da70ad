use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{One, Zero};

use super::{format_rational, Integer, Rational, RationalMatrix, UnivariatePoly};

/// Homogeneous bivariate polynomial of fixed degree `d`.
///
/// Only non-zero monomials are stored. The key `j` addresses the monomial
/// `x^(d-j) y^j`, so homogeneity holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    degree: usize,
    terms: BTreeMap<usize, Rational>,
}

impl BivariatePoly {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(j, coefficient)` pairs; `j` is the exponent of `y`.
    /// Repeated keys accumulate.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut out = Self::zero(degree);
        for (j, c) in terms {
            assert!(j <= degree, "monomial y^{j} exceeds degree {degree}");
            out.add_term(j, c);
        }
        out
    }

    /// Dense coefficient list, index = exponent of `y`.
    pub fn from_dense(coeffs: &[Rational]) -> Self {
        assert!(!coeffs.is_empty());
        Self::from_terms(coeffs.len() - 1, coeffs.iter().cloned().enumerate())
    }

    /// `a x + b y`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_terms(1, [(0, a), (1, b)])
    }

    fn add_term(&mut self, j: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(j).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&j);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^(d-j) y^j`.
    pub fn coeff(&self, j: usize) -> Rational {
        self.terms.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(&j, c)| (j, c))
    }

    pub fn dense(&self) -> Vec<Rational> {
        (0..=self.degree).map(|j| self.coeff(j)).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rational::is_integer)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.degree, self.terms().map(|(j, a)| (j, a * c)))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::from_terms(0, [(0, Rational::one())]);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `P(ax + by, cx + dy)`.
    pub fn substitute_linear(&self, m: &RationalMatrix) -> Self {
        let d = self.degree;
        let first = Self::linear(m.a.clone(), m.b.clone());
        let second = Self::linear(m.c.clone(), m.d.clone());
        let mut first_pows = vec![Self::from_terms(0, [(0, Rational::one())])];
        let mut second_pows = first_pows.clone();
        for k in 0..d {
            first_pows.push(&first_pows[k] * &first);
            second_pows.push(&second_pows[k] * &second);
        }
        let mut out = Self::zero(d);
        for (j, c) in self.terms() {
            let piece = &first_pows[d - j] * &second_pows[j];
            for (k, e) in piece.terms() {
                out.add_term(k, c * e);
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        // Homogeneous Horner: b_j = b_{j-1} x + a_j y^j.
        let mut acc = Rational::zero();
        let mut ypow = Rational::one();
        for j in 0..=self.degree {
            acc = acc * x + self.coeff(j) * &ypow;
            ypow *= y;
        }
        acc
    }

    pub fn eval_integer(&self, x: &Integer, y: &Integer) -> Rational {
        self.eval(
            &Rational::from_integer(x.clone()),
            &Rational::from_integer(y.clone()),
        )
    }

    /// `P(x, 1)` as a univariate polynomial in `x`.
    pub fn dehomogenize_y(&self) -> UnivariatePoly {
        UnivariatePoly::new((0..=self.degree).map(|i| self.coeff(self.degree - i)).collect())
    }

    /// `P(1, y)` as a univariate polynomial in `y`.
    pub fn dehomogenize_x(&self) -> UnivariatePoly {
        UnivariatePoly::new(self.dense())
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: Self) -> BivariatePoly {
        let mut out = BivariatePoly::zero(self.degree + rhs.degree);
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly::from_terms(self.degree, self.terms().map(|(j, c)| (j, -c)))
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: char, e: usize) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

/// Renders as e.g. `x^4 - 6x^2y^2 + y^4`, in decreasing powers of `x`.
impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (j, c)) in self.terms().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (idx == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if !mag.is_one() || self.degree == 0 {
                write!(f, "{}", format_rational(&mag))?;
            }
            write_power(f, 'x', self.degree - j)?;
            write_power(f, 'y', j)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use proptest::prelude::*;

    fn dense(c: &[i64]) -> BivariatePoly {
        BivariatePoly::from_dense(&c.iter().map(|&v| int(v)).collect::<Vec<_>>())
    }

    fn swap() -> RationalMatrix {
        RationalMatrix::from_ints(0, 1, 1, 0)
    }

    #[test]
    fn identity_substitution() {
        let p = dense(&[1, 0, -1]);
        assert_eq!(p.substitute_linear(&RationalMatrix::identity()), p);
    }

    #[test]
    fn swap_fixes_2xy() {
        let p = dense(&[0, 2, 0]);
        assert_eq!(p.substitute_linear(&swap()), p);
    }

    #[test]
    fn swap_negates_difference_of_squares() {
        let p = dense(&[1, 0, -1]);
        let q = p.substitute_linear(&swap());
        assert_eq!(q, -&p);
        assert_eq!(q.to_string(), "-x^2 + y^2");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(dense(&[1, 0, -1]).eval_integer(&3.into(), &2.into()), int(5));
        assert_eq!(dense(&[0, 2, 0]).eval_integer(&3.into(), &2.into()), int(12));
        assert_eq!(dense(&[3, -7, 1, 4]).eval_integer(&0.into(), &0.into()), int(0));
    }

    #[test]
    fn rational_substitution() {
        // (x + y)^2 at (x/2 + y/2, -3x/2 + y/2) = (-x + y)^2.
        let p = dense(&[1, 2, 1]);
        let m = RationalMatrix::new(ratio(1, 2), ratio(1, 2), ratio(-3, 2), ratio(1, 2));
        assert_eq!(p.substitute_linear(&m), dense(&[1, -2, 1]));
    }

    #[test]
    fn sparse_storage_drops_zeros() {
        let p = BivariatePoly::from_terms(3, [(1, int(2)), (1, int(-2)), (3, int(0))]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn dehomogenizations() {
        // 3x^2y - y^3
        let p = dense(&[0, 3, 0, -1]);
        assert_eq!(p.dehomogenize_y().to_string(), "3x^2 - 1");
        assert_eq!(p.dehomogenize_x().to_string(), "-x^3 + 3x");
    }

    fn small_form() -> impl Strategy<Value = BivariatePoly> {
        prop::collection::vec(-5i64..=5, 1..6).prop_map(|c| dense(&c))
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        let entry = (-4i64..=4, 1i64..=3).prop_map(|(p, q)| ratio(p, q));
        (entry.clone(), entry.clone(), entry.clone(), entry)
            .prop_map(|(a, b, c, d)| RationalMatrix::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn substitution_preserves_degree(p in small_form(), m in small_matrix()) {
            let q = p.substitute_linear(&m);
            prop_assert_eq!(q.degree(), p.degree());
            prop_assert!(q.terms().all(|(j, _)| j <= p.degree()));
        }

        #[test]
        fn composition_is_matrix_product(p in small_form(), a in small_matrix(), b in small_matrix()) {
            // (P_A)_B(v) = P_A(Bv) = P(ABv)
            let twice = p.substitute_linear(&a).substitute_linear(&b);
            let once = p.substitute_linear(&(&a * &b));
            prop_assert_eq!(twice, once);
        }

        #[test]
        fn eval_commutes_with_substitution(
            p in small_form(),
            m in small_matrix(),
            (xp, xq, yp, yq) in (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5),
        ) {
            let (x, y) = (ratio(xp, xq), ratio(yp, yq));
            let (u, v) = m.apply(&x, &y);
            prop_assert_eq!(p.substitute_linear(&m).eval(&x, &y), p.eval(&u, &v));
        }
    }
}
