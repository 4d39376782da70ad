//! Counting the distinct non-zero integers `|v| ≤ Z` of the form `F(x, y)`
//! with `|x|, |y| ≤ M`.
//!
//! Rows are scanned y-major. For fixed `y` every connected piece of
//! `{x : |F(x, y)| ≤ Z}` contains a real root or a real critical point of
//! `x ↦ F(x, y)`, and the integers inside a piece are consecutive, so each
//! row is explored outward from those seeds only. The seeds are `y·ρ` for
//! the roots `ρ` of `F(x, 1)` and of its derivative.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::area::{compute_cf, DEFAULT_TOL};
use crate::exact::Integer;
use crate::forms::BinaryForm;
use crate::roots::real_structure;
use crate::Result;

const POSITIVE: u8 = 1;
const NEGATIVE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Count 0 (always attained at the origin).
    pub include_zero: bool,
    /// Process row stripes on the rayon pool.
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            include_zero: false,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub z: u64,
    pub box_size: u64,
    pub count: u64,
    /// `count / Z^(2/d)`.
    pub ratio: f64,
    pub cf_reference: Option<f64>,
    /// The count did not change when the box was last doubled.
    pub stable: bool,
}

/// Represented values keyed by `|v|`, with a bit per attained sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueSet {
    entries: Vec<(u64, u8)>,
}

impl ValueSet {
    fn from_map(map: HashMap<u64, u8>) -> Self {
        let mut entries: Vec<_> = map.into_iter().collect();
        entries.sort_unstable();
        Self { entries }
    }

    /// Number of distinct non-zero values with `|v| ≤ z`.
    pub fn count_up_to(&self, z: u64) -> u64 {
        let end = self.entries.partition_point(|&(v, _)| v <= z);
        self.entries[..end]
            .iter()
            .map(|&(_, mask)| u64::from(mask.count_ones()))
            .sum()
    }

    /// Sorted signed values.
    pub fn values(&self) -> Vec<i128> {
        let mut out: Vec<i128> = Vec::new();
        for &(v, mask) in &self.entries {
            if mask & POSITIVE != 0 {
                out.push(i128::from(v));
            }
            if mask & NEGATIVE != 0 {
                out.push(-i128::from(v));
            }
        }
        out.sort_unstable();
        out
    }
}

/// One row `x ↦ F(x, y)`, coefficients by power of `x`.
enum Row {
    Small(Vec<i128>),
    Big(Vec<Integer>),
}

struct Scanner<'a> {
    form: &'a BinaryForm,
    zmax: u64,
    m: i64,
    /// Roots and critical points of `F(x, 1)`.
    seeds: Vec<f64>,
    /// Degree of `F(x, 1)`.
    x_degree: usize,
}

impl<'a> Scanner<'a> {
    fn new(form: &'a BinaryForm, zmax: u64, m: u64) -> Self {
        let d = form.degree();
        let in_x: Vec<f64> = form
            .coefficients()
            .iter()
            .rev()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        let structure = real_structure(&in_x);
        let mut seeds = structure.roots;
        seeds.extend(structure.critical);
        let x_degree = (0..=d)
            .rev()
            .find(|&i| !form.coefficients()[d - i].is_zero())
            .unwrap_or(0);
        Self {
            form,
            zmax,
            m: i64::try_from(m).expect("box size fits in i64"),
            seeds,
            x_degree,
        }
    }

    fn row(&self, y: i64) -> Row {
        let d = self.form.degree();
        let mut small = Vec::with_capacity(d + 1);
        let mut ypow: Option<i128> = Some(1);
        // coefficient of x^(d-j) is a_j y^j
        for c in self.form.coefficients() {
            let term = match (ypow, c.to_i128()) {
                (Some(p), Some(a)) => a.checked_mul(p),
                _ => None,
            };
            match term {
                Some(t) => small.push(t),
                None => {
                    let yb = Integer::from(y);
                    let mut yp = Integer::from(1);
                    let mut big = Vec::with_capacity(d + 1);
                    for c in self.form.coefficients() {
                        big.push(c * &yp);
                        yp *= &yb;
                    }
                    big.reverse();
                    return Row::Big(big);
                }
            }
            ypow = ypow.and_then(|p| p.checked_mul(i128::from(y)));
        }
        small.reverse();
        Row::Small(small)
    }

    /// `Some(v)` when `|F(x, y)| ≤ zmax`.
    fn value(&self, row: &Row, x: i64) -> Option<i128> {
        let z = i128::from(self.zmax);
        match row {
            Row::Small(c) => {
                let x128 = i128::from(x);
                let mut acc: i128 = 0;
                let mut ok = true;
                for &a in c.iter().rev() {
                    match acc.checked_mul(x128).and_then(|v| v.checked_add(a)) {
                        Some(v) => acc = v,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return (acc.abs() <= z).then_some(acc);
                }
                let big: Vec<Integer> = c.iter().map(|&a| Integer::from(a)).collect();
                big_value(&big, x, self.zmax)
            }
            Row::Big(c) => big_value(c, x, self.zmax),
        }
    }

    fn scan_row(&self, y: i64, out: &mut HashMap<u64, u8>, mirror: bool) {
        let row = self.row(y);
        let mut record = |v: i128| {
            if v == 0 {
                return;
            }
            let mag = v.unsigned_abs() as u64;
            let mut bits = if v > 0 { POSITIVE } else { NEGATIVE };
            if mirror {
                bits |= if v > 0 { NEGATIVE } else { POSITIVE };
            }
            *out.entry(mag).or_insert(0) |= bits;
        };
        if y == 0 || self.x_degree == 0 {
            // Constant rows have a single value; row 0 is a_0 x^d, seeded at 0.
            if self.x_degree == 0 && y != 0 {
                if let Some(v) = self.value(&row, 0) {
                    record(v);
                }
                return;
            }
            self.explore(&row, 0.0, &mut record);
            return;
        }
        let yf = y as f64;
        for &s in &self.seeds {
            self.explore(&row, s * yf, &mut record);
        }
    }

    fn explore(&self, row: &Row, seed: f64, record: &mut impl FnMut(i128)) {
        let m = self.m;
        if !seed.is_finite() {
            return;
        }
        // A seed outside the box still marks a piece that may reach the edge.
        let f = seed.floor().clamp(-(m as f64), m as f64) as i64;
        let (lo, hi) = ((f - 1).max(-m), (f + 2).min(m));
        if lo > hi {
            return;
        }
        let mut lo_hit = false;
        let mut hi_hit = false;
        for x in lo..=hi {
            if let Some(v) = self.value(row, x) {
                record(v);
                lo_hit |= x == lo;
                hi_hit |= x == hi;
            }
        }
        if hi_hit {
            let mut x = hi + 1;
            while x <= m {
                match self.value(row, x) {
                    Some(v) => record(v),
                    None => break,
                }
                x += 1;
            }
        }
        if lo_hit {
            let mut x = lo - 1;
            while x >= -m {
                match self.value(row, x) {
                    Some(v) => record(v),
                    None => break,
                }
                x -= 1;
            }
        }
    }

    fn scan_stripe(&self, ys: std::ops::RangeInclusive<i64>) -> HashMap<u64, u8> {
        let mut out = HashMap::new();
        for y in ys {
            // (x, y) ↦ (−x, −y) maps row y onto row −y with values times (−1)^d.
            let mirror = y != 0 && self.form.degree() % 2 == 1;
            self.scan_row(y, &mut out, mirror);
        }
        out
    }
}

fn big_value(coeffs: &[Integer], x: i64, zmax: u64) -> Option<i128> {
    let xb = Integer::from(x);
    let mut acc = Integer::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &xb + c;
    }
    if acc.abs() <= Integer::from(zmax) {
        acc.to_i128()
    } else {
        None
    }
}

const STRIPE: i64 = 2048;

/// Distinct non-zero values `|F(x, y)| ≤ zmax` over the box `|x|, |y| ≤ m`.
///
/// Stripes of rows are scanned independently and merged in stripe order;
/// the result does not depend on `parallel`.
pub fn enumerate_values(form: &BinaryForm, zmax: u64, m: u64, parallel: bool) -> ValueSet {
    let scanner = Scanner::new(form, zmax, m);
    let m = scanner.m;
    // Rows −y are covered by mirroring row y.
    let stripes: Vec<std::ops::RangeInclusive<i64>> = (0..=m / STRIPE)
        .map(|k| (k * STRIPE)..=((k + 1) * STRIPE - 1).min(m))
        .collect();
    let partial: Vec<HashMap<u64, u8>> = if parallel {
        stripes
            .into_par_iter()
            .map(|s| scanner.scan_stripe(s))
            .collect()
    } else {
        stripes.into_iter().map(|s| scanner.scan_stripe(s)).collect()
    };
    let mut merged: HashMap<u64, u8> = HashMap::new();
    for part in partial {
        for (k, bits) in part {
            *merged.entry(k).or_insert(0) |= bits;
        }
    }
    ValueSet::from_map(merged)
}

fn ratio(count: u64, z: u64, degree: usize) -> f64 {
    count as f64 / (z as f64).powf(2.0 / degree as f64)
}

fn report(form: &BinaryForm, z: u64, m: u64, count: u64, stable: bool, cf: Option<f64>) -> CountReport {
    CountReport {
        z,
        box_size: m,
        count,
        ratio: ratio(count, z, form.degree()),
        cf_reference: cf,
        stable,
    }
}

/// Reference `C_F` for family members with `n ≥ 3`.
pub fn cf_reference(form: &BinaryForm) -> Option<f64> {
    match form.family() {
        Some((kind, n)) if n >= 3 => compute_cf(kind, n, DEFAULT_TOL).ok().map(|r| r.cf_closed),
        _ => None,
    }
}

/// Plain count in a fixed box; `stable` is false because nothing was doubled.
pub fn count_represented(form: &BinaryForm, z: u64, m: u64) -> CountReport {
    count_represented_with(form, z, m, &CountOptions::default())
}

pub fn count_represented_with(form: &BinaryForm, z: u64, m: u64, opts: &CountOptions) -> CountReport {
    let set = enumerate_values(form, z, m, opts.parallel);
    let count = set.count_up_to(z) + u64::from(opts.include_zero);
    report(form, z, m, count, false, None)
}

/// Doubles the box from `m0` until the count stops changing or
/// `max_doublings` is used up; `stable` tells which.
pub fn adaptive_count(form: &BinaryForm, z: u64, m0: u64, max_doublings: u32) -> CountReport {
    adaptive_count_with(form, z, m0, max_doublings, &CountOptions::default())
}

pub fn adaptive_count_with(
    form: &BinaryForm,
    z: u64,
    m0: u64,
    max_doublings: u32,
    opts: &CountOptions,
) -> CountReport {
    let run = AdaptiveRun::new(form, z, m0, max_doublings, opts.parallel);
    let count = run.current.count_up_to(z) + u64::from(opts.include_zero);
    report(form, z, run.m, count, run.stable, None)
}

struct AdaptiveRun {
    m: u64,
    current: ValueSet,
    previous: Option<ValueSet>,
    stable: bool,
}

impl AdaptiveRun {
    fn new(form: &BinaryForm, zmax: u64, m0: u64, max_doublings: u32, parallel: bool) -> Self {
        let mut m = m0.max(1);
        let mut current = enumerate_values(form, zmax, m, parallel);
        let mut previous = None;
        let mut stable = false;
        for _ in 0..max_doublings {
            let next_m = m * 2;
            let next = enumerate_values(form, zmax, next_m, parallel);
            // The box only grows, so equal counts mean equal sets.
            stable = next.count_up_to(zmax) == current.count_up_to(zmax);
            previous = Some(std::mem::replace(&mut current, next));
            m = next_m;
            if stable {
                break;
            }
        }
        Self {
            m,
            current,
            previous,
            stable,
        }
    }
}

/// Counts for every `Z` in `z_list`, sharing one adaptive run at the largest
/// `Z`. A `Z` is stable when its count agrees between the last two boxes.
pub fn convergence_sweep(
    form: &BinaryForm,
    z_list: &[u64],
    m0: u64,
    max_doublings: u32,
    opts: &CountOptions,
) -> Result<Vec<CountReport>> {
    if z_list.is_empty() || z_list.windows(2).any(|w| w[0] >= w[1]) || z_list[0] == 0 {
        return Err(crate::Error::InvalidParameter(
            "Z list must be non-empty, positive and strictly increasing".into(),
        ));
    }
    let zmax = *z_list.last().expect("non-empty");
    let run = AdaptiveRun::new(form, zmax, m0, max_doublings, opts.parallel);
    let cf = cf_reference(form);
    Ok(z_list
        .iter()
        .map(|&z| {
            let count = run.current.count_up_to(z);
            let stable = run
                .previous
                .as_ref()
                .is_some_and(|p| p.count_up_to(z) == count);
            report(form, z, run.m, count + u64::from(opts.include_zero), stable, cf)
        })
        .collect())
}

/// Rough number of form evaluations an enumeration with box `m` performs.
pub fn estimated_evaluations(form: &BinaryForm, z: u64, m: u64) -> f64 {
    let seeds = Scanner::new(form, z, m).seeds.len().max(1) as f64;
    let rows = m as f64 + 1.0;
    let width = (2.0 * m as f64 + 1.0).min(seeds * (4.0 + 2.0 * (z as f64).powf(1.0 / form.degree() as f64)));
    rows * width
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{build_in, build_rn};

    /// Every lattice point of the box, values kept in a sorted list.
    fn naive(form: &BinaryForm, z: u64, m: i64) -> Vec<i128> {
        let mut vals = Vec::new();
        for x in -m..=m {
            for y in -m..=m {
                let v = form.eval(&x.into(), &y.into()).to_i128().unwrap();
                if v != 0 && v.unsigned_abs() <= u128::from(z) {
                    vals.push(v);
                }
            }
        }
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    #[test]
    fn i3_small_count() {
        let i3 = build_in(3).unwrap();
        let r = count_represented(&i3, 10, 10);
        assert_eq!(r.count, 12);
        let set = enumerate_values(&i3, 10, 10, false);
        assert_eq!(set.values(), vec![-10, -9, -8, -7, -2, -1, 1, 2, 7, 8, 9, 10]);
    }

    #[test]
    fn r3_unit_count() {
        let r3 = build_rn(3).unwrap();
        assert_eq!(count_represented(&r3, 1, 10).count, 2);
    }

    #[test]
    fn empty_box() {
        let r5 = build_rn(5).unwrap();
        assert_eq!(count_represented(&r5, 100, 0).count, 0);
        let opts = CountOptions { include_zero: true, parallel: false };
        assert_eq!(count_represented_with(&r5, 100, 0, &opts).count, 1);
    }

    #[test]
    fn adaptive_i3() {
        let i3 = build_in(3).unwrap();
        let r = adaptive_count(&i3, 10, 4, 8);
        assert_eq!(r.count, 12);
        assert!(r.stable);
        assert!(r.box_size <= 16);
    }

    #[test]
    fn matches_naive_enumeration() {
        let forms = [
            build_in(3).unwrap(),
            build_rn(3).unwrap(),
            build_rn(4).unwrap(),
            build_in(4).unwrap(),
            build_in(5).unwrap(),
            build_rn(6).unwrap(),
            BinaryForm::from_i64(&[1, 0, 0, 1]).unwrap(), // x^3 + y^3
            BinaryForm::from_i64(&[1, 1, 0, 2]).unwrap(), // x^3 + x^2 y + 2 y^3
            BinaryForm::from_i64(&[2, 0, 1, 0, 3]).unwrap(), // definite quartic
            BinaryForm::from_i64(&[0, 0, 0, 5]).unwrap(), // 5 y^3
        ];
        for f in &forms {
            for (z, m) in [(1, 5), (10, 7), (100, 20), (57, 13)] {
                let fast = enumerate_values(f, z, m as u64, false).values();
                assert_eq!(fast, naive(f, z, m), "{f} Z={z} M={m}");
            }
        }
    }

    #[test]
    fn parallel_equals_serial() {
        let i3 = build_in(3).unwrap();
        let a = enumerate_values(&i3, 100_000, 9000, true);
        let b = enumerate_values(&i3, 100_000, 9000, false);
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_rejects_bad_lists() {
        let i3 = build_in(3).unwrap();
        let opts = CountOptions::default();
        assert!(convergence_sweep(&i3, &[], 4, 2, &opts).is_err());
        assert!(convergence_sweep(&i3, &[10, 10], 4, 2, &opts).is_err());
    }

    #[test]
    fn sweep_agrees_with_individual_counts_in_same_box() {
        let i3 = build_in(3).unwrap();
        let opts = CountOptions { include_zero: false, parallel: false };
        let sweep = convergence_sweep(&i3, &[10, 100, 1000], 8, 12, &opts).unwrap();
        for r in &sweep {
            assert_eq!(r.count, count_represented(&i3, r.z, r.box_size).count);
            assert!(r.cf_reference.is_some());
        }
        let last = sweep.last().unwrap();
        assert!(last.stable);
    }

    #[test]
    fn big_coefficient_rows_fall_back_to_big_integers() {
        // Large height forces the i128 row path to overflow on y^j.
        let f = build_rn(40).unwrap();
        let set = enumerate_values(&f, 1_000, 30, false);
        assert_eq!(set.values(), naive_small_height(&f, 1_000, 30));
    }

    fn naive_small_height(form: &BinaryForm, z: u64, m: i64) -> Vec<i128> {
        let mut vals = Vec::new();
        for x in -m..=m {
            for y in -m..=m {
                let v = form.eval(&x.into(), &y.into());
                if !v.is_zero() && v.abs() <= Integer::from(z) {
                    vals.push(v.to_i128().unwrap());
                }
            }
        }
        vals.sort_unstable();
        vals.dedup();
        vals
    }
}
