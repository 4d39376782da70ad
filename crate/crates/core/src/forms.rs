//! The families `R_n` and `I_n`, their exact evaluation, their real linear
//! factorization and a squarefreeness test.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::{BivariatePoly, Integer, Rational, UnivariatePoly};
use crate::{Error, Result};

/// Which part of `(x + yi)^n` a form is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    /// Real part.
    Rn,
    /// Imaginary part.
    In,
}

impl FormKind {
    pub fn label(self) -> &'static str {
        match self {
            FormKind::Rn => "rn",
            FormKind::In => "in",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rn" | "r" => Some(FormKind::Rn),
            "in" | "i" => Some(FormKind::In),
            _ => None,
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Binary form with integer coefficients.
///
/// `coeffs[j]` multiplies `x^(d-j) y^j`. Members of the two families carry
/// their `(kind, n)` label; scaled or user-built forms do not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    family: Option<(FormKind, u32)>,
    coeffs: Vec<Integer>,
    poly: BivariatePoly,
}

impl BinaryForm {
    /// Builds a form from its dense integer coefficients (index = power of `y`).
    pub fn from_coefficients(coeffs: Vec<Integer>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("a form needs at least one coefficient".into()));
        }
        let poly = BivariatePoly::from_dense(
            &coeffs
                .iter()
                .cloned()
                .map(Rational::from_integer)
                .collect::<Vec<_>>(),
        );
        Ok(Self {
            family: None,
            coeffs,
            poly,
        })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::from_coefficients(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn poly(&self) -> &BivariatePoly {
        &self.poly
    }

    pub fn family(&self) -> Option<(FormKind, u32)> {
        self.family
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `c·F`; the result is no longer labelled as a family member.
    pub fn scaled(&self, c: &Integer) -> Self {
        Self::from_coefficients(self.coeffs.iter().map(|a| a * c).collect())
            .expect("non-empty coefficients")
    }

    pub fn eval(&self, x: &Integer, y: &Integer) -> Integer {
        eval_form(self, x, y)
    }

    /// Linear-factor data when the form is a family member.
    pub fn root_data(&self) -> Option<RootData> {
        self.family.map(|(kind, n)| root_angles(kind, n))
    }

    /// `max |a_j|`.
    pub fn height(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Integer::zero)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

fn binomial_row(n: u32) -> Vec<Integer> {
    let mut row = vec![Integer::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(Integer::one());
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(Integer::one());
        row = next;
    }
    row
}

fn build_family(kind: FormKind, n: u32) -> Result<BinaryForm> {
    if n == 0 {
        return Err(Error::OutOfRange {
            n: 0,
            expected: "n >= 1",
        });
    }
    let row = binomial_row(n);
    let coeffs = row
        .into_iter()
        .enumerate()
        .map(|(k, c)| match (kind, k % 2) {
            (FormKind::Rn, 0) if (k / 2) % 2 == 0 => c,
            (FormKind::Rn, 0) => -c,
            (FormKind::In, 1) if ((k - 1) / 2) % 2 == 0 => c,
            (FormKind::In, 1) => -c,
            _ => Integer::zero(),
        })
        .collect();
    let mut form = BinaryForm::from_coefficients(coeffs)?;
    form.family = Some((kind, n));
    Ok(form)
}

/// `R_n`: coefficients `(-1)^(k/2) C(n, k)` on `x^(n-k) y^k`, `k` even.
pub fn build_rn(n: u32) -> Result<BinaryForm> {
    build_family(FormKind::Rn, n)
}

/// `I_n`: coefficients `(-1)^((k-1)/2) C(n, k)` on `x^(n-k) y^k`, `k` odd.
pub fn build_in(n: u32) -> Result<BinaryForm> {
    build_family(FormKind::In, n)
}

pub fn build(kind: FormKind, n: u32) -> Result<BinaryForm> {
    build_family(kind, n)
}

/// Exact value `F(x, y)`.
pub fn eval_form(form: &BinaryForm, x: &Integer, y: &Integer) -> Integer {
    let mut acc = Integer::zero();
    let mut ypow = Integer::one();
    for c in &form.coeffs {
        acc = acc * x + c * &ypow;
        ypow *= y;
    }
    acc
}

/// Angles of the real linear factors `sin θ·x − cos θ·y` and the constant in
/// front of their product.
#[derive(Clone, Debug, PartialEq)]
pub struct RootData {
    pub kind: FormKind,
    pub n: u32,
    /// Strictly increasing, inside `(0, π]`.
    pub angles: Vec<f64>,
    /// `2^(n-1)`.
    pub leading_constant: f64,
}

pub fn root_angles(kind: FormKind, n: u32) -> RootData {
    let nf = f64::from(n);
    let angles = match kind {
        FormKind::Rn => (0..n)
            .map(|k| f64::from(2 * k + 1) * PI / (2.0 * nf))
            .collect(),
        FormKind::In => (1..n)
            .map(|k| f64::from(k) * PI / nf)
            .chain(std::iter::once(PI))
            .collect(),
    };
    RootData {
        kind,
        n,
        angles,
        leading_constant: 2f64.powi(n as i32 - 1),
    }
}

/// Expands `c·∏(sin θ_k x − cos θ_k y)` in double precision, dense in powers of `y`.
pub fn expand_factorization(data: &RootData) -> Vec<f64> {
    let mut acc = vec![data.leading_constant];
    for &theta in &data.angles {
        let (s, c) = theta.sin_cos();
        let mut next = vec![0.0; acc.len() + 1];
        for (j, a) in acc.iter().enumerate() {
            next[j] += a * s;
            next[j + 1] -= a * c;
        }
        acc = next;
    }
    acc
}

/// Largest absolute deviation between the numerically expanded linear
/// factorization and the exact coefficients.
pub fn factorization_residual(kind: FormKind, n: u32) -> Result<f64> {
    let form = build(kind, n)?;
    let expanded = expand_factorization(&root_angles(kind, n));
    Ok(expanded
        .iter()
        .zip(form.coefficients())
        .map(|(e, c)| (e - crate::exact::rational_to_f64(&Rational::from_integer(c.clone()))).abs())
        .fold(0.0, f64::max))
}

/// `factorization_residual` divided by the largest coefficient magnitude.
pub fn scaled_factorization_residual(kind: FormKind, n: u32) -> Result<f64> {
    let raw = factorization_residual(kind, n)?;
    let height = crate::exact::rational_to_f64(&Rational::from_integer(build(kind, n)?.height()));
    Ok(raw / height.max(1.0))
}

/// `(∏_{k<n} sin((2k+1)π/2n), ∏_{0<k<n} sin(kπ/n))`; expected `2^(1-n)` and `n·2^(1-n)`.
pub fn sine_products(n: u32) -> (f64, f64) {
    let nf = f64::from(n);
    let odd = (0..n)
        .map(|k| (f64::from(2 * k + 1) * PI / (2.0 * nf)).sin())
        .product();
    let all = (1..n).map(|k| (f64::from(k) * PI / nf).sin()).product();
    (odd, all)
}

/// True iff `F` has no repeated linear factor over ℂ.
///
/// Writes `F = y^m G` with `G(1, 0) ≠ 0`. A repeated factor is either `y^2`
/// (so `m ≥ 2`) or a repeated root of `G(x, 1)`.
pub fn is_squarefree(form: &BinaryForm) -> Result<bool> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = form.degree();
    // coefficient of x^d is coeffs[0]; y^m divides F iff coeffs[0..m] vanish.
    let m = form.coeffs.iter().take_while(|c| c.is_zero()).count();
    if m > 1 {
        return Ok(false);
    }
    if m == d {
        // F = c·y^d with d ≤ 1.
        return Ok(true);
    }
    let g = UnivariatePoly::new(
        (0..=d - m)
            .map(|i| Rational::from_integer(form.coeffs[d - i].clone()))
            .collect(),
    );
    let gcd = UnivariatePoly::gcd(&g, &g.derivative())?;
    Ok(gcd.is_constant())
}
