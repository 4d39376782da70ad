//! Fundamental-region areas `A_F = area{ |F(x, y)| ≤ 1 }`, the beta-function
//! closed form for `R_n` and `I_n`, and the density constant `C_F = W_F A_F`.
//!
//! Two quadratures are provided and share nothing beyond root locations:
//!
//! * the line integral `∫ |F(x, 1)|^(-2/d) dx`, split at `|x| = 1` with the
//!   outer part folded onto `∫_{-1}^{1} |F(1, u)|^(-2/d) du` by `x = 1/u`.
//!   Each root endpoint is removed with `s = |x − r|^(1−2/d)` and the
//!   remaining smooth integrand goes to adaptive Gauss–Kronrod;
//! * the polar integral `∫_0^π |F(cos θ, sin θ)|^(-2/d) dθ`, evaluated by
//!   tanh-sinh between consecutive angular roots with the vanishing factors
//!   computed from the endpoint offsets.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::autgroup::{power_of_two_weight, verify_claimed_aut};
use crate::exact::{rational_to_f64, Rational};
use crate::forms::{build, build_in, build_rn, is_squarefree, BinaryForm, FormKind};
use crate::quad::{gauss_kronrod, tanh_sinh};
use crate::roots::{horner, real_roots};
use crate::{Error, Result};

/// Default absolute tolerance on a quadrature error estimate.
pub const DEFAULT_TOL: f64 = 1e-8;

const MAX_PIECES: usize = 800;
const MAX_TANH_SINH_LEVEL: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AreaMethod {
    LineIntegral,
    PolarIntegral,
    ClosedForm,
}

impl AreaMethod {
    pub fn label(self) -> &'static str {
        match self {
            AreaMethod::LineIntegral => "line",
            AreaMethod::PolarIntegral => "polar",
            AreaMethod::ClosedForm => "closed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaResult {
    pub value: f64,
    pub method: AreaMethod,
    pub est_error: f64,
    pub degree: usize,
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`: Lanczos (g = 7, nine terms), reflected below 1/2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    Ok(log_gamma_positive(x))
}

fn log_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) Γ(1 − x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - log_gamma_positive(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `B(a, b) = Γ(a) Γ(b) / Γ(a + b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    let la = log_gamma(a)?;
    let lb = log_gamma(b)?;
    Ok((la + lb - log_gamma_positive(a + b)).exp())
}

/// `B(1/2 − 1/n, 1/2)`, the area for both `R_n` and `I_n`.
pub fn closed_form_area(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::OutOfRange {
            n: n.into(),
            expected: "n >= 3",
        });
    }
    beta(0.5 - 1.0 / f64::from(n), 0.5)
}

fn check_form(form: &BinaryForm) -> Result<usize> {
    let d = form.degree();
    if d < 3 {
        return Err(Error::DegreeTooSmall(d));
    }
    if !is_squarefree(form)? {
        return Err(Error::NotSquarefree);
    }
    Ok(d)
}

fn coeffs_f64(form: &BinaryForm, scale: f64) -> Vec<f64> {
    form.coefficients()
        .iter()
        .map(|c| scale * rational_to_f64(&Rational::from_integer(c.clone())))
        .collect()
}

/// `p(x) / (x − r)`, dropping the remainder.
fn deflate(p: &[f64], r: f64) -> Vec<f64> {
    let m = p.len() - 1;
    let mut q = vec![0.0; m];
    q[m - 1] = p[m];
    for k in (1..m).rev() {
        q[k - 1] = p[k] + r * q[k];
    }
    q
}

fn snap_chart_roots(roots: impl IntoIterator<Item = f64>, slack: f64) -> Vec<f64> {
    let mut out: Vec<f64> = roots
        .into_iter()
        .filter(|r| r.abs() <= 1.0 + slack)
        .map(|r| {
            if (r.abs() - 1.0).abs() <= slack {
                r.signum()
            } else {
                r
            }
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
    out
}

/// `∫_{-1}^{1} |p(x)|^(-e) dx` with known real roots of `p` inside `[-1, 1]`.
fn chart_integral(p: &[f64], roots: &[f64], e: f64, tol: f64) -> Result<(f64, f64)> {
    let alpha = 1.0 - e;
    let inv_alpha = 1.0 / alpha;
    let mut breaks: Vec<(f64, bool)> = Vec::with_capacity(roots.len() + 2);
    if roots.first() != Some(&-1.0) {
        breaks.push((-1.0, false));
    }
    breaks.extend(roots.iter().map(|&r| (r, true)));
    if roots.last() != Some(&1.0) {
        breaks.push((1.0, false));
    }

    // Pieces: (start, end, singular endpoint, deflated polynomial).
    let mut pieces: Vec<(f64, f64, Option<(f64, Vec<f64>)>)> = Vec::new();
    for w in breaks.windows(2) {
        let ((l, ls), (r, rs)) = (w[0], w[1]);
        if r <= l {
            continue;
        }
        match (ls, rs) {
            (false, false) => pieces.push((l, r, None)),
            (true, false) => pieces.push((l, r, Some((l, deflate(p, l))))),
            (false, true) => pieces.push((r, l, Some((r, deflate(p, r))))),
            (true, true) => {
                let mid = 0.5 * (l + r);
                pieces.push((l, mid, Some((l, deflate(p, l)))));
                pieces.push((r, mid, Some((r, deflate(p, r)))));
            }
        }
    }

    let piece_tol = tol / pieces.len().max(1) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for (start, end, singular) in &pieces {
        let res = match singular {
            None => gauss_kronrod(|x| horner(p, x).abs().powf(-e), *start, *end, piece_tol, MAX_PIECES),
            Some((root, q)) => {
                let dir = (end - start).signum();
                let span = (end - start).abs().powf(alpha);
                gauss_kronrod(
                    |s| inv_alpha * horner(q, root + dir * s.powf(inv_alpha)).abs().powf(-e),
                    0.0,
                    span,
                    piece_tol,
                    MAX_PIECES,
                )
            }
        };
        if !res.converged || !res.value.is_finite() {
            return Err(Error::QuadratureFailed {
                value: res.value,
                error: res.error,
                tol: piece_tol,
            });
        }
        value += res.value;
        error += res.error;
    }
    Ok((value, error))
}

/// Real roots of `F(x, 1)` and of `F(1, u)` that lie in `[-1, 1]`.
fn chart_roots(form: &BinaryForm, coeffs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    if let Some(data) = form.root_data() {
        let slack = 1e-12;
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for &theta in &data.angles {
            let (s, c) = theta.sin_cos();
            if c.abs() <= s.abs() * (1.0 + slack) {
                xs.push((c / s).clamp(-1.0, 1.0));
            }
            if s.abs() <= c.abs() * (1.0 + slack) {
                us.push((s / c).clamp(-1.0, 1.0));
            }
        }
        return (snap_chart_roots(xs, slack), snap_chart_roots(us, slack));
    }
    let in_x: Vec<f64> = coeffs.iter().rev().copied().collect();
    let slack = 1e-9;
    (
        snap_chart_roots(real_roots(&in_x), slack),
        snap_chart_roots(real_roots(coeffs), slack),
    )
}

fn line_area(form: &BinaryForm, scale: f64, tol: f64) -> Result<AreaResult> {
    let d = check_form(form)?;
    let coeffs = coeffs_f64(form, scale);
    let e = 2.0 / d as f64;
    // F(x, 1): coefficient of x^i is a_{d-i}. F(1, u): coefficient of u^j is a_j.
    let in_x: Vec<f64> = coeffs.iter().rev().copied().collect();
    let (x_roots, u_roots) = chart_roots(form, &coeffs);
    let (inner, inner_err) = chart_integral(&in_x, &x_roots, e, tol / 2.0)?;
    let (outer, outer_err) = chart_integral(&coeffs, &u_roots, e, tol / 2.0)?;
    Ok(AreaResult {
        value: inner + outer,
        method: AreaMethod::LineIntegral,
        est_error: inner_err + outer_err,
        degree: d,
    })
}

/// `∫_{-∞}^{∞} |F(x, 1)|^(-2/d) dx`.
pub fn quadrature_area_line(form: &BinaryForm, tol: f64) -> Result<AreaResult> {
    line_area(form, 1.0, tol)
}

/// Line integral for the real multiple `scale·F`.
pub fn quadrature_area_line_scaled(form: &BinaryForm, scale: f64, tol: f64) -> Result<AreaResult> {
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("scale {scale}")));
    }
    line_area(form, scale, tol)
}

/// `F / (sin θ·x − cos θ·y)` on dense coefficients indexed by the power of `y`.
fn deflate_homogeneous(f: &[f64], theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let e = f.len() - 1;
    let mut q = vec![0.0; e];
    if s.abs() >= c.abs() {
        q[0] = f[0] / s;
        for j in 1..e {
            q[j] = (f[j] + c * q[j - 1]) / s;
        }
    } else {
        q[e - 1] = -f[e] / c;
        for j in (1..e).rev() {
            q[j - 1] = (s * q[j] - f[j]) / c;
        }
    }
    q
}

fn eval_homogeneous(f: &[f64], x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    let mut ypow = 1.0;
    for &c in f {
        acc = acc * x + c * ypow;
        ypow *= y;
    }
    acc
}

/// Angular roots in `[0, π)`.
fn polar_angles(form: &BinaryForm, coeffs: &[f64]) -> Vec<f64> {
    let mut angles: Vec<f64> = match form.root_data() {
        Some(data) => data
            .angles
            .iter()
            .map(|&t| if t >= PI { t - PI } else { t })
            .collect(),
        None => {
            let in_x: Vec<f64> = coeffs.iter().rev().copied().collect();
            let mut a: Vec<f64> = real_roots(&in_x).iter().map(|&r| 1f64.atan2(r)).collect();
            if form.coefficients()[0] == 0.into() {
                a.push(0.0);
            }
            a
        }
    };
    angles.sort_by(f64::total_cmp);
    angles
}

fn polar_area(form: &BinaryForm, scale: f64, tol: f64) -> Result<AreaResult> {
    let d = check_form(form)?;
    let coeffs = coeffs_f64(form, scale);
    let e = 2.0 / d as f64;
    let angles = polar_angles(form, &coeffs);
    let mut rest = coeffs.clone();
    for &theta in &angles {
        rest = deflate_homogeneous(&rest, theta);
    }
    let m = angles.len();
    let mut value = 0.0;
    let mut error = 0.0;
    if m == 0 {
        let res = tanh_sinh(
            |t, _, _| eval_homogeneous(&rest, t.cos(), t.sin()).abs().powf(-e),
            0.0,
            PI,
            tol,
            MAX_TANH_SINH_LEVEL,
        );
        if !res.converged {
            return Err(Error::QuadratureFailed { value: res.value, error: res.error, tol });
        }
        value = res.value;
        error = res.error;
    }
    let piece_tol = tol / m.max(1) as f64;
    for j in 0..m {
        let lo = angles[j];
        let hi = if j + 1 < m { angles[j + 1] } else { angles[0] + PI };
        let next = (j + 1) % m;
        let integrand = |t: f64, da: f64, db: f64| {
            let mut prod = eval_homogeneous(&rest, t.cos(), t.sin()).abs();
            for (k, &theta) in angles.iter().enumerate() {
                let factor = if m == 1 {
                    da.min(db).sin()
                } else if k == j {
                    da.sin()
                } else if k == next {
                    db.sin()
                } else {
                    (theta - t).sin()
                };
                prod *= factor.abs();
            }
            prod.powf(-e)
        };
        let res = tanh_sinh(integrand, lo, hi, piece_tol, MAX_TANH_SINH_LEVEL);
        if !res.converged || !res.value.is_finite() {
            return Err(Error::QuadratureFailed {
                value: res.value,
                error: res.error,
                tol: piece_tol,
            });
        }
        value += res.value;
        error += res.error;
    }
    Ok(AreaResult {
        value,
        method: AreaMethod::PolarIntegral,
        est_error: error,
        degree: d,
    })
}

/// `(1/2) ∫_0^{2π} |F(cos θ, sin θ)|^(-2/d) dθ`.
pub fn quadrature_area_polar(form: &BinaryForm, tol: f64) -> Result<AreaResult> {
    polar_area(form, 1.0, tol)
}

pub fn quadrature_area_polar_scaled(form: &BinaryForm, scale: f64, tol: f64) -> Result<AreaResult> {
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidParameter(format!("scale {scale}")));
    }
    polar_area(form, scale, tol)
}

pub fn closed_form_result(n: u32) -> Result<AreaResult> {
    Ok(AreaResult {
        value: closed_form_area(n)?,
        method: AreaMethod::ClosedForm,
        est_error: 0.0,
        degree: n as usize,
    })
}

/// Area of `kind_n` by the requested method.
pub fn area(kind: FormKind, n: u32, method: AreaMethod, tol: f64) -> Result<AreaResult> {
    if n < 3 {
        return Err(Error::OutOfRange {
            n: n.into(),
            expected: "n >= 3",
        });
    }
    let form = build(kind, n)?;
    match method {
        AreaMethod::LineIntegral => quadrature_area_line(&form, tol),
        AreaMethod::PolarIntegral => quadrature_area_polar(&form, tol),
        AreaMethod::ClosedForm => closed_form_result(n),
    }
}

/// Max relative residual of `I_n(M_n v) + R_n(v)` over the given points,
/// `M_n` the clockwise rotation by `π/(2n)`.
pub fn rotation_identity_residual_at(n: u32, points: &[(f64, f64)]) -> Result<f64> {
    let r = build_rn(n)?;
    let i = build_in(n)?;
    let (rc, ic) = (coeffs_f64(&r, 1.0), coeffs_f64(&i, 1.0));
    let (s, c) = (PI / (2.0 * f64::from(n))).sin_cos();
    Ok(points
        .iter()
        .map(|&(x, y)| {
            let rotated = eval_homogeneous(&ic, x * c + y * s, -x * s + y * c);
            let rv = eval_homogeneous(&rc, x, y);
            (rotated + rv).abs() / rv.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

/// Same, over `sample_count` pseudo-random points of `[-1, 1]²` (fixed seed).
pub fn rotation_identity_residual(n: u32, sample_count: usize) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001 ^ u64::from(n));
    let points: Vec<(f64, f64)> = (0..sample_count)
        .map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    rotation_identity_residual_at(n, &points)
}

/// 2-adic valuation.
pub fn nu2(m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::InvalidParameter("the 2-adic order of 0 is undefined".into()));
    }
    Ok(m.trailing_zeros())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfReport {
    pub kind: FormKind,
    pub n: u32,
    pub area_quadrature: f64,
    pub area_quadrature_error: f64,
    pub area_polar: f64,
    pub area_closed: f64,
    pub weight: Rational,
    pub cf_computed: f64,
    pub cf_closed: f64,
    pub nu2_factor: Rational,
    pub tol: f64,
}

/// Assembles `C_F = W_F A_F` from the automorphism group and the line
/// quadrature, and checks it against `2^(-min(ν₂(2n), k)) B(1/2 − 1/n, 1/2)`
/// with `k = 3` for `R_n` and `k = 2` for `I_n`.
pub fn compute_cf(kind: FormKind, n: u32, tol: f64) -> Result<CfReport> {
    let aut = verify_claimed_aut(kind, n)?;
    let form = build(kind, n)?;
    let line = quadrature_area_line(&form, tol)?;
    let polar = quadrature_area_polar(&form, tol)?;
    let area_closed = closed_form_area(n)?;
    let cap = match kind {
        FormKind::Rn => 3,
        FormKind::In => 2,
    };
    let nu2_factor = power_of_two_weight(n, cap);
    let cf_computed = rational_to_f64(&aut.weight) * line.value;
    let cf_closed = rational_to_f64(&nu2_factor) * area_closed;
    if (cf_computed - cf_closed).abs() > tol * cf_closed {
        return Err(Error::VerificationFailed(format!(
            "C_F mismatch for {kind}_{n}: {cf_computed} vs {cf_closed}"
        )));
    }
    Ok(CfReport {
        kind,
        n,
        area_quadrature: line.value,
        area_quadrature_error: line.est_error,
        area_polar: polar.value,
        area_closed,
        weight: aut.weight,
        cf_computed,
        cf_closed,
        nu2_factor,
        tol,
    })
}
