//! Substitution action of 2×2 rational matrices on forms, finite group
//! closure and classification, and the automorphism groups of `R_n`, `I_n`.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Zero};

pub use crate::exact::RationalMatrix;
use crate::exact::{int, ratio, BivariatePoly, Integer, Rational};
use crate::forms::{build, BinaryForm, FormKind};
use crate::{Error, Result};

/// Default bound on closure size.
pub const DEFAULT_CLOSURE_CAP: usize = 48;

/// `F_A`.
pub fn act(form: &BinaryForm, m: &RationalMatrix) -> BivariatePoly {
    form.poly().substitute_linear(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutStatus {
    /// `F_A = F`
    Fix,
    /// `F_A = −F`
    NegFix,
    No,
}

pub fn is_automorphism(form: &BinaryForm, m: &RationalMatrix) -> AutStatus {
    let image = act(form, m);
    if &image == form.poly() {
        AutStatus::Fix
    } else if image == -form.poly() {
        AutStatus::NegFix
    } else {
        AutStatus::No
    }
}

/// Conjugacy classes of finite subgroups of `GL2(Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupType {
    C1,
    C2,
    C3,
    C4,
    C6,
    D1,
    D2,
    D3,
    D4,
    D6,
}

impl GroupType {
    pub const ALL: [GroupType; 10] = [
        GroupType::C1,
        GroupType::C2,
        GroupType::C3,
        GroupType::C4,
        GroupType::C6,
        GroupType::D1,
        GroupType::D2,
        GroupType::D3,
        GroupType::D4,
        GroupType::D6,
    ];

    pub fn order(self) -> usize {
        match self {
            GroupType::C1 => 1,
            GroupType::C2 | GroupType::D1 => 2,
            GroupType::C3 => 3,
            GroupType::C4 | GroupType::D2 => 4,
            GroupType::C6 | GroupType::D3 => 6,
            GroupType::D4 => 8,
            GroupType::D6 => 12,
        }
    }

    /// Generators of the standard representative.
    pub fn representative_generators(self) -> Vec<RationalMatrix> {
        let m = RationalMatrix::from_ints;
        let swap = m(0, 1, 1, 0);
        match self {
            GroupType::C1 => vec![m(1, 0, 0, 1)],
            GroupType::C2 => vec![m(-1, 0, 0, -1)],
            GroupType::C3 => vec![m(0, 1, -1, -1)],
            GroupType::C4 => vec![m(0, 1, -1, 0)],
            GroupType::C6 => vec![m(0, -1, 1, 1)],
            GroupType::D1 => vec![swap],
            GroupType::D2 => vec![swap, m(-1, 0, 0, -1)],
            GroupType::D3 => vec![swap, m(0, 1, -1, -1)],
            GroupType::D4 => vec![swap, m(0, 1, -1, 0)],
            GroupType::D6 => vec![swap, m(0, 1, -1, 1)],
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `⟨diag(−1, 1), diag(1, −1)⟩`, the group of sign changes of the coordinates.
pub fn axis_reflections() -> Vec<RationalMatrix> {
    vec![
        RationalMatrix::from_ints(-1, 0, 0, 1),
        RationalMatrix::from_ints(1, 0, 0, -1),
    ]
}

/// Finite matrix group, elements kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    elements: Vec<RationalMatrix>,
    generators: Vec<RationalMatrix>,
}

impl MatrixGroup {
    pub fn elements(&self) -> &[RationalMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[RationalMatrix] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &RationalMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Wraps an explicit element list after checking it is a group.
    pub fn from_elements(elements: impl IntoIterator<Item = RationalMatrix>) -> Result<Self> {
        let set: BTreeSet<RationalMatrix> = elements.into_iter().collect();
        if !set.contains(&RationalMatrix::identity()) {
            return Err(Error::InvalidParameter("element set lacks the identity".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&(a * b)) {
                    return Err(Error::InvalidParameter(format!(
                        "element set not closed: {a} * {b}"
                    )));
                }
            }
        }
        let elements: Vec<_> = set.into_iter().collect();
        Ok(Self {
            generators: elements.clone(),
            elements,
        })
    }

    pub fn is_integral(&self) -> bool {
        self.elements.iter().all(RationalMatrix::is_integral)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a * b == b * a))
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        self.elements.iter().any(|g| g.order(n) == Some(n))
    }

    /// True iff `self` is a normal subgroup of `group`.
    pub fn is_normal_in(&self, group: &MatrixGroup) -> bool {
        self.elements.iter().all(|h| group.contains(h))
            && group.elements.iter().all(|g| {
                let inv = g.inverse().expect("group elements are invertible");
                self.elements.iter().all(|h| self.contains(&(&(g * h) * &inv)))
            })
    }
}

/// Smallest set containing the generators, closed under products.
///
/// For a finite group this is the generated group; `cap` bounds the search
/// so that generators of infinite order fail instead of looping.
pub fn group_closure(generators: &[RationalMatrix], cap: usize) -> Result<MatrixGroup> {
    if generators.iter().any(|g| g.det().is_zero()) {
        return Err(Error::SingularMatrix);
    }
    let identity = RationalMatrix::identity();
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(e) = queue.pop_front() {
        for g in generators {
            let p = &e * g;
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return Err(Error::NotFinite { cap });
                }
                queue.push_back(p);
            }
        }
    }
    Ok(MatrixGroup {
        elements: seen.into_iter().collect(),
        generators: generators.to_vec(),
    })
}

/// Conjugacy class among the ten finite subgroup types of `GL2(Q)`.
///
/// Order decides everything except 2 (is the involution `−I`?), 4 (cyclic?)
/// and 6 (abelian?); all three tests are conjugation invariant.
pub fn classify_group(group: &MatrixGroup) -> Result<GroupType> {
    let minus_identity = RationalMatrix::from_ints(-1, 0, 0, -1);
    Ok(match group.order() {
        1 => GroupType::C1,
        2 if group.contains(&minus_identity) => GroupType::C2,
        2 => GroupType::D1,
        3 => GroupType::C3,
        4 if group.is_cyclic() => GroupType::C4,
        4 => GroupType::D2,
        6 if group.is_abelian() => GroupType::C6,
        6 => GroupType::D3,
        8 => GroupType::D4,
        12 => GroupType::D6,
        order => return Err(Error::UnclassifiableGroup { order }),
    })
}

/// `W_F = 1/|G|`, valid when `G ⊆ GL2(Z)`.
pub fn weight(group: &MatrixGroup) -> Result<Rational> {
    if !group.is_integral() {
        return Err(Error::NonIntegralGroup);
    }
    Ok(ratio(1, group.order() as i64))
}

/// Everything known about `Aut F` and `Aut |F|` for a family member.
#[derive(Clone, Debug, PartialEq)]
pub struct AutReport {
    pub kind: FormKind,
    pub n: u32,
    /// Elements fixing the form.
    pub aut: MatrixGroup,
    /// Elements fixing the form up to sign.
    pub aut_abs: MatrixGroup,
    pub aut_order: usize,
    pub aut_type: GroupType,
    pub aut_abs_order: usize,
    pub aut_abs_type: GroupType,
    pub weight: Rational,
    pub integral_entries: bool,
    /// Expected type of `Aut F`.
    pub claimed_aut_type: GroupType,
    pub claimed_abs_type: GroupType,
}

impl AutReport {
    pub fn expected_types_agree(&self) -> bool {
        self.aut_type == self.claimed_aut_type && self.aut_abs_type == self.claimed_abs_type
    }
}

/// Expected orders and types: `((aut_order, aut_type), (abs_order, abs_type))`.
pub fn claimed_structure(kind: FormKind, n: u32) -> ((usize, GroupType), (usize, GroupType)) {
    match (kind, n % 2 == 1, n % 4 == 0) {
        (_, true, _) => ((2, GroupType::D1), (4, GroupType::D2)),
        (FormKind::In, false, _) => ((4, GroupType::D2), (8, GroupType::D4)),
        (FormKind::Rn, false, false) => ((4, GroupType::D2), (8, GroupType::D4)),
        (FormKind::Rn, false, true) => ((8, GroupType::D4), (8, GroupType::D4)),
    }
}

/// Establishes `Aut F` and `Aut |F|` for `R_n` / `I_n`, `n ≥ 3`.
///
/// The containing group is the coordinate sign changes for odd `n` and the
/// dihedral group of order 8 for even `n`. Its generators must fix the form
/// up to sign, and `Aut F` is read off by checking every element. Orders are
/// compared with the expected ones and a mismatch is an error; the expected group
/// type is recorded next to the computed one.
pub fn verify_claimed_aut(kind: FormKind, n: u32) -> Result<AutReport> {
    if n < 3 {
        return Err(Error::OutOfRange {
            n: n.into(),
            expected: "n >= 3",
        });
    }
    let form = build(kind, n)?;
    let ambient = if n % 2 == 1 {
        axis_reflections()
    } else {
        GroupType::D4.representative_generators()
    };
    for g in &ambient {
        if is_automorphism(&form, g) == AutStatus::No {
            return Err(Error::VerificationFailed(format!(
                "{g} does not fix {kind}_{n} up to sign"
            )));
        }
    }
    let aut_abs = group_closure(&ambient, DEFAULT_CLOSURE_CAP)?;
    let mut fixing = Vec::new();
    for g in aut_abs.elements() {
        match is_automorphism(&form, g) {
            AutStatus::Fix => fixing.push(g.clone()),
            AutStatus::NegFix => {}
            AutStatus::No => {
                return Err(Error::VerificationFailed(format!(
                    "closure element {g} does not fix {kind}_{n} up to sign"
                )))
            }
        }
    }
    let aut = MatrixGroup::from_elements(fixing)?;
    let aut_type = classify_group(&aut)?;
    let aut_abs_type = classify_group(&aut_abs)?;
    let ((claimed_order, claimed_aut_type), (claimed_abs_order, claimed_abs_type)) =
        claimed_structure(kind, n);
    if aut.order() != claimed_order || aut_abs.order() != claimed_abs_order {
        return Err(Error::VerificationFailed(format!(
            "{kind}_{n}: |Aut| = {}, |Aut|.|| = {}, expected {claimed_order} and {claimed_abs_order}",
            aut.order(),
            aut_abs.order()
        )));
    }
    if aut_abs_type != claimed_abs_type {
        return Err(Error::VerificationFailed(format!(
            "{kind}_{n}: Aut |F| has type {aut_abs_type}, expected {claimed_abs_type}"
        )));
    }
    if !aut.is_normal_in(&aut_abs) {
        return Err(Error::VerificationFailed(format!(
            "{kind}_{n}: Aut F is not normal in Aut |F|"
        )));
    }
    let integral_entries = aut.is_integral();
    Ok(AutReport {
        kind,
        n,
        aut_order: aut.order(),
        aut_abs_order: aut_abs.order(),
        weight: weight(&aut)?,
        aut,
        aut_abs,
        aut_type,
        aut_abs_type,
        integral_entries,
        claimed_aut_type,
        claimed_abs_type,
    })
}

/// Matrices `(0 t; −1/t 0)` and `(1/2 t/2; −3/(2t) 1/2)`: the two families a
/// strictly larger `Aut |F|` would have to contain for odd `n`.
pub fn elimination_candidates(t: &Rational) -> [RationalMatrix; 2] {
    let half = ratio(1, 2);
    [
        RationalMatrix::new(Rational::zero(), t.clone(), -t.recip(), Rational::zero()),
        RationalMatrix::new(
            half.clone(),
            t * &half,
            -(int(3) / (int(2) * t)),
            half,
        ),
    ]
}

/// True iff no sampled `t` makes either candidate fix the form up to sign.
pub fn elimination_probe(kind: FormKind, n: u32, t_samples: &[Rational]) -> Result<bool> {
    if n % 2 == 0 {
        return Err(Error::OutOfRange {
            n: n.into(),
            expected: "odd n",
        });
    }
    if t_samples.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("t must be non-zero".into()));
    }
    let form = build(kind, n)?;
    Ok(t_samples.iter().all(|t| {
        elimination_candidates(t)
            .iter()
            .all(|m| is_automorphism(&form, m) == AutStatus::No)
    }))
}

/// `{±1, ±2, ±1/2, ±3, ±2/3}`.
pub fn default_t_samples() -> Vec<Rational> {
    [(1, 1), (2, 1), (1, 2), (3, 1), (2, 3)]
        .iter()
        .flat_map(|&(p, q)| [ratio(p, q), ratio(-p, q)])
        .collect()
}

/// `(k, p/q)` for every `k` in `1..n` whose `cot(kπ/n)` is within `tol` of a
/// rational with denominator at most `denominator_bound`.
pub fn rational_cot_scan(n: u32, denominator_bound: u32, tol: f64) -> Vec<(u32, Rational)> {
    let mut hits = Vec::new();
    for k in 1..n {
        let theta = f64::from(k) * PI / f64::from(n);
        let cot = theta.cos() / theta.sin();
        for q in 1..=denominator_bound {
            let p = (cot * f64::from(q)).round();
            if (cot - p / f64::from(q)).abs() <= tol {
                hits.push((k, ratio(p as i64, i64::from(q))));
                break;
            }
        }
    }
    hits
}

/// Brute force over integer matrices with entries in `[−bound, bound]`:
/// returns `(fixing, negating)`, each sorted.
pub fn integer_automorphisms(form: &BinaryForm, bound: i64) -> (Vec<RationalMatrix>, Vec<RationalMatrix>) {
    // Cheap rejection at a few lattice points before the exact substitution.
    let probes: Vec<(Integer, Integer, Integer)> = [(1, 0), (0, 1), (1, 1), (2, -1), (3, 5)]
        .iter()
        .map(|&(x, y)| {
            let (x, y) = (Integer::from(x), Integer::from(y));
            let v = form.eval(&x, &y);
            (x, y, v)
        })
        .collect();
    let mut fix = Vec::new();
    let mut neg = Vec::new();
    let range = -bound..=bound;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    if a * d - b * c == 0 {
                        continue;
                    }
                    let (mut plus, mut minus) = (true, true);
                    for (x, y, v) in &probes {
                        let u = form.eval(&(x * a + y * b), &(x * c + y * d));
                        plus &= &u == v;
                        minus &= u == -v;
                    }
                    if !(plus || minus) {
                        continue;
                    }
                    let m = RationalMatrix::from_ints(a, b, c, d);
                    match is_automorphism(form, &m) {
                        AutStatus::Fix => fix.push(m),
                        AutStatus::NegFix => neg.push(m),
                        AutStatus::No => {}
                    }
                }
            }
        }
    }
    fix.sort();
    neg.sort();
    (fix, neg)
}

/// `2^(-min(ν₂(2n), cap))` as an exact rational.
pub fn power_of_two_weight(n: u32, cap: u32) -> Rational {
    let e = (2 * n).trailing_zeros().min(cap);
    Rational::new(Integer::one(), Integer::from(1u64 << e))
}
