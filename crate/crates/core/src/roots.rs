//! Real roots of univariate polynomials in double precision.
//!
//! Roots of `p'` split the line into intervals on which `p` is monotone, so
//! every sign change there brackets exactly one simple root. The derivative's
//! roots come from the same procedure one degree down.

/// `coeffs[i]` multiplies `x^i`.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let len = coeffs
        .iter()
        .rposition(|&c| c != 0.0)
        .map_or(0, |i| i + 1);
    &coeffs[..len]
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// Cauchy bound: every root satisfies `|x| < 1 + max |c_i / c_m|`.
fn root_bound(coeffs: &[f64]) -> f64 {
    let lead = *coeffs.last().expect("non-empty");
    1.0 + coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| (c / lead).abs())
        .fold(0.0, f64::max)
}

fn bisect(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = horner(coeffs, lo);
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = horner(coeffs, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (fl, fh) = (horner(coeffs, lo).abs(), horner(coeffs, hi).abs());
    if fl <= fh {
        lo
    } else {
        hi
    }
}

/// Real roots and real critical points of a polynomial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealStructure {
    /// Sorted real roots.
    pub roots: Vec<f64>,
    /// Sorted real roots of the derivative.
    pub critical: Vec<f64>,
}

/// Sorted real roots. Multiple roots may be reported once or missed; callers
/// check squarefreeness first.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    real_structure(coeffs).roots
}

pub fn real_structure(coeffs: &[f64]) -> RealStructure {
    let p = trim(coeffs);
    match p.len() {
        0 | 1 => RealStructure::default(),
        2 => RealStructure {
            roots: vec![-p[0] / p[1]],
            critical: Vec::new(),
        },
        _ => {
            let critical = real_roots(&derivative(p));
            let bound = root_bound(p);
            let mut marks = Vec::with_capacity(critical.len() + 2);
            marks.push(-bound);
            marks.extend(critical.iter().copied().filter(|c| c.abs() < bound));
            marks.push(bound);
            let mut roots: Vec<f64> = Vec::new();
            for w in marks.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let (flo, fhi) = (horner(p, lo), horner(p, hi));
                if flo == 0.0 {
                    if roots.last() != Some(&lo) {
                        roots.push(lo);
                    }
                    continue;
                }
                if fhi == 0.0 {
                    roots.push(hi);
                    continue;
                }
                if (flo < 0.0) != (fhi < 0.0) {
                    roots.push(bisect(p, lo, hi));
                }
            }
            roots.dedup();
            RealStructure { roots, critical }
        }
    }
}
