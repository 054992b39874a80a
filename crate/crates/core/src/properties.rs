//! Decision procedures for the structural properties of a finite effect algebra.
//!
//! Every check scans exhaustively when its tuple space fits in the budget and
//! falls back to seeded sampling otherwise. A sampled scan that finds nothing
//! reports [`Verdict::HoldsSampled`], never a plain "holds". Failures always
//! carry a witness tuple that can be re-checked against the definition.

use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, Element};
use crate::scan::{first_hit, random_member, Plan, ScanBudget};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Rdp,
    Rip,
    Dmp,
    Homogeneous,
    Lattice,
    Antilattice,
    Omp,
    Mv,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Rdp,
        Property::Rip,
        Property::Dmp,
        Property::Homogeneous,
        Property::Lattice,
        Property::Antilattice,
        Property::Omp,
        Property::Mv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Rdp => "rdp",
            Property::Rip => "rip",
            Property::Dmp => "dmp",
            Property::Homogeneous => "homogeneous",
            Property::Lattice => "lattice",
            Property::Antilattice => "antilattice",
            Property::Omp => "omp",
            Property::Mv => "mv",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        let s = s.trim().to_ascii_lowercase();
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s || (s == "homog" && *p == Property::Homogeneous))
    }

    fn salt(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsExhaustive,
    /// No counterexample among the sampled tuples.
    HoldsSampled,
    Fails,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::HoldsExhaustive => "holds-exhaustive",
            Verdict::HoldsSampled => "holds-sampled",
            Verdict::Fails => "fails",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanStats {
    /// Tuples examined.
    pub checked: u64,
    /// Size of the full tuple space as estimated before the scan.
    pub estimated: u64,
    /// Outcome of the independent equivalent formulation, when one is run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub property: Property,
    pub verdict: Verdict,
    /// Failure witness; its layout depends on the property (see each check).
    pub witness: Option<Vec<Element>>,
    /// Which clause failed, for properties with several clauses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    pub stats: ScanStats,
}

impl PropertyResult {
    /// True unless a counterexample was found.
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Fails
    }

    pub fn exhaustive(&self) -> bool {
        self.verdict == Verdict::HoldsExhaustive
    }

    fn build(
        property: Property,
        exhaustive: bool,
        checked: u64,
        estimated: u64,
        witness: Option<Vec<Element>>,
    ) -> Self {
        let verdict = match (&witness, exhaustive) {
            (Some(_), _) => Verdict::Fails,
            (None, true) => Verdict::HoldsExhaustive,
            (None, false) => Verdict::HoldsSampled,
        };
        PropertyResult {
            property,
            verdict,
            witness,
            clause: None,
            stats: ScanStats {
                checked,
                estimated,
                cross_check: None,
            },
        }
    }

    fn with_clause(mut self, clause: Option<&str>) -> Self {
        if self.witness.is_some() {
            self.clause = clause.map(String::from);
        }
        self
    }
}

pub fn check(e: &EffectAlgebra, property: Property, budget: &ScanBudget) -> PropertyResult {
    match property {
        Property::Rdp => check_rdp(e, budget),
        Property::Rip => check_rip(e, budget),
        Property::Dmp => check_dmp(e, budget),
        Property::Homogeneous => check_homogeneous(e, budget),
        Property::Lattice => check_lattice(e, budget),
        Property::Antilattice => check_antilattice(e, budget),
        Property::Omp => check_omp(e, budget),
        Property::Mv => check_mv(e, budget),
    }
}

fn intersect(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut s = a.clone();
    s.intersect_with(b);
    s
}

/// Runs `test` over `0..n` outer indices exhaustively, or over `samples`
/// random draws when the estimate exceeds the budget.
fn scan<W: Send>(
    budget: &ScanBudget,
    estimated: u64,
    salt: u64,
    n: usize,
    exhaustive: impl Fn(usize) -> (u64, Option<W>) + Sync,
    sample: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Option<W>,
) -> (bool, u64, Option<W>) {
    match budget.plan(estimated) {
        Plan::Exhaustive => {
            let (work, hit) = first_hit(n, exhaustive);
            (true, work, hit)
        }
        Plan::Sampled(samples) => {
            let mut rng = budget.rng(salt);
            for i in 0..samples {
                if let Some(w) = sample(&mut rng) {
                    return (false, i + 1, Some(w));
                }
            }
            (false, samples, None)
        }
    }
}

// ---- RDP ----

/// Whether `a1 + a2 = b1 + b2` admits a 2x2 refinement matrix.
pub fn rdp_refines(e: &EffectAlgebra, a1: Element, a2: Element, b1: Element, b2: Element) -> bool {
    rdp_refinement(e, a1, a2, b1, b2).is_some()
}

/// A refinement `[c11, c12, c21, c22]` with `c11 + c12 = a1`, `c21 + c22 = a2`,
/// `c11 + c21 = b1` and `c12 + c22 = b2`.
pub fn rdp_refinement(e: &EffectAlgebra, a1: Element, a2: Element, b1: Element, b2: Element) -> Option<[Element; 4]> {
    let z = e.zero();
    if e.leq(a1, b1) {
        return Some([a1, z, e.diff_unchecked(b1, a1), b2]);
    }
    if e.leq(b1, a1) {
        return Some([b1, e.diff_unchecked(a1, b1), z, a2]);
    }
    if e.leq(a1, b2) {
        return Some([z, a1, b1, e.diff_unchecked(b2, a1)]);
    }
    if e.leq(b2, a1) {
        return Some([e.diff_unchecked(a1, b2), b2, a2, z]);
    }
    let common = intersect(e.down_set(a1), e.down_set(b1));
    for c11 in common.ones().map(Element::new) {
        let c12 = e.diff_unchecked(a1, c11);
        let c21 = e.diff_unchecked(b1, c11);
        if !e.leq(c21, a2) {
            continue;
        }
        let c22 = e.diff_unchecked(a2, c21);
        if e.plus(c12, c22) == Some(b2) {
            return Some([c11, c12, c21, c22]);
        }
    }
    None
}

/// The split form: whenever `a <= b + c` there are `a1 <= b`, `a2 <= c` with `a = a1 + a2`.
fn rdp_split(e: &EffectAlgebra, a: Element, b: Element, c: Element) -> bool {
    if e.leq(a, b) || e.leq(a, c) {
        return true;
    }
    intersect(e.down_set(a), e.down_set(b))
        .ones()
        .any(|a1| e.leq(e.diff_unchecked(a, Element::new(a1)), c))
}

/// Riesz decomposition. Witness `[a1, a2, b1, b2]` with `a1 + a2 = b1 + b2`
/// and no refinement. The split form is checked as well; `stats.cross_check`
/// records whether both forms agree.
pub fn check_rdp(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let estimated: u64 = e.elements().map(|s| (e.rank(s) as u64).pow(2)).sum();
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Rdp.salt(),
        e.len(),
        |a1| {
            let a1 = Element::new(a1);
            let mut work = 0;
            for (a2, s) in e.table().row(a1) {
                for b1 in e.down_set(s).ones().map(Element::new) {
                    work += 1;
                    let b2 = e.diff_unchecked(s, b1);
                    if !rdp_refines(e, a1, a2, b1, b2) {
                        return (work, Some(vec![a1, a2, b1, b2]));
                    }
                }
            }
            (work, None)
        },
        |rng| {
            let a1 = Element::new(rng.gen_range(0..e.len()));
            let a2 = Element::new(random_member(e.up_set(a1), rng)?);
            let a2 = e.diff_unchecked(a2, a1);
            let s = e.plus(a1, a2)?;
            let b1 = Element::new(random_member(e.down_set(s), rng)?);
            let b2 = e.diff_unchecked(s, b1);
            (!rdp_refines(e, a1, a2, b1, b2)).then(|| vec![a1, a2, b1, b2])
        },
    );
    let mut result = PropertyResult::build(Property::Rdp, exhaustive, checked, estimated, witness);

    // Split form over (b, c, a) with a <= b + c.
    let split_estimated: u64 = e.elements().map(|s| e.rank(s) as u64 * e.rank(s) as u64).sum();
    let (_, _, split_witness) = scan(
        budget,
        split_estimated,
        Property::Rdp.salt() << 8,
        e.len(),
        |b| {
            let b = Element::new(b);
            let mut work = 0;
            for (c, s) in e.table().row(b) {
                for a in e.down_set(s).ones().map(Element::new) {
                    work += 1;
                    if !rdp_split(e, a, b, c) {
                        return (work, Some(()));
                    }
                }
            }
            (work, None)
        },
        |rng| {
            let b = Element::new(rng.gen_range(0..e.len()));
            let s = Element::new(random_member(e.up_set(b), rng)?);
            let c = e.diff_unchecked(s, b);
            let a = Element::new(random_member(e.down_set(s), rng)?);
            (!rdp_split(e, a, b, c)).then_some(())
        },
    );
    // A sampled run can miss a counterexample that the other form found.
    result.stats.cross_check = Some(split_witness.is_none() == result.witness.is_none() || !exhaustive);
    result
}

// ---- RIP ----

/// An interpolant `z` with `x1, x2 <= z <= y1, y2`, if any.
pub fn rip_interpolant(e: &EffectAlgebra, x1: Element, x2: Element, y1: Element, y2: Element) -> Option<Element> {
    let mut s = intersect(e.up_set(x1), e.up_set(x2));
    s.intersect_with(e.down_set(y1));
    s.intersect_with(e.down_set(y2));
    s.ones().next().map(Element::new)
}

/// Riesz interpolation. Witness `[x1, x2, y1, y2]` with every `xi <= yj` and no interpolant.
/// On a finite carrier the countable variant coincides with this one.
pub fn check_rip(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let n = e.len() as u64;
    let avg_up = e.elements().map(|x| e.up_set(x).count_ones(..) as u64).sum::<u64>() / n;
    let estimated = n * n / 2 * (avg_up * avg_up / 2).max(1);
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Rip.salt(),
        e.len(),
        |x1| {
            let x1 = Element::new(x1);
            let mut work = 0;
            for x2 in (x1.index() + 1..e.len()).map(Element::new) {
                if e.comparable(x1, x2) {
                    continue;
                }
                let upper = intersect(e.up_set(x1), e.up_set(x2));
                let ys: Vec<Element> = upper.ones().map(Element::new).collect();
                for (i, &y1) in ys.iter().enumerate() {
                    for &y2 in &ys[i + 1..] {
                        work += 1;
                        if e.comparable(y1, y2) {
                            continue;
                        }
                        let mut s = intersect(&upper, e.down_set(y1));
                        s.intersect_with(e.down_set(y2));
                        if s.is_clear() {
                            return (work, Some(vec![x1, x2, y1, y2]));
                        }
                    }
                }
            }
            (work.max(1), None)
        },
        |rng| {
            let x1 = Element::new(rng.gen_range(0..e.len()));
            let x2 = Element::new(rng.gen_range(0..e.len()));
            let upper = intersect(e.up_set(x1), e.up_set(x2));
            let y1 = Element::new(random_member(&upper, rng)?);
            let y2 = Element::new(random_member(&upper, rng)?);
            rip_interpolant(e, x1, x2, y1, y2)
                .is_none()
                .then(|| vec![x1, x2, y1, y2])
        },
    );
    PropertyResult::build(Property::Rip, exhaustive, checked, estimated, witness)
}

// ---- DMP ----

/// The pieces of one difference-meet instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmpInstance {
    pub x_leq_y: bool,
    pub x_meet_z: Option<Element>,
    pub y_meet_z: Option<Element>,
    pub difference: Option<Element>,
    pub difference_meet_z: Option<Element>,
    /// `x <= y`, both meets exist and `(y - x) ^ z` does not.
    pub violates: bool,
}

/// Evaluates the difference-meet condition on one triple exactly.
pub fn check_dmp_witness(e: &EffectAlgebra, x: Element, y: Element, z: Element) -> DmpInstance {
    let x_leq_y = e.leq(x, y);
    let x_meet_z = e.meet(x, z);
    let y_meet_z = e.meet(y, z);
    let difference = x_leq_y.then(|| e.diff_unchecked(y, x));
    let difference_meet_z = difference.and_then(|d| e.meet(d, z));
    let violates = x_leq_y && x_meet_z.is_some() && y_meet_z.is_some() && difference_meet_z.is_none();
    DmpInstance {
        x_leq_y,
        x_meet_z,
        y_meet_z,
        difference,
        difference_meet_z,
        violates,
    }
}

/// Difference-meet property. Witness `[x, y, z]`.
pub fn check_dmp(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let n = e.len() as u64;
    let comparable: u64 = e.elements().map(|x| e.up_set(x).count_ones(..) as u64).sum();
    let estimated = comparable * n;
    let violates = |x: Element, y: Element, z: Element| {
        e.meet(x, z).is_some() && e.meet(y, z).is_some() && e.meet(e.diff_unchecked(y, x), z).is_none()
    };
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Dmp.salt(),
        e.len(),
        |x| {
            let x = Element::new(x);
            let mut work = 0;
            for y in e.up_set(x).ones().map(Element::new) {
                for z in e.elements() {
                    work += 1;
                    if violates(x, y, z) {
                        return (work, Some(vec![x, y, z]));
                    }
                }
            }
            (work, None)
        },
        |rng| {
            let x = Element::new(rng.gen_range(0..e.len()));
            let y = Element::new(random_member(e.up_set(x), rng)?);
            let z = Element::new(rng.gen_range(0..e.len()));
            violates(x, y, z).then(|| vec![x, y, z])
        },
    );
    PropertyResult::build(Property::Dmp, exhaustive, checked, estimated, witness)
}

// ---- homogeneity ----

/// A split `a = a1 + a2` with `a1 <= b`, `a2 <= c`, if any.
pub fn homogeneous_split(e: &EffectAlgebra, a: Element, b: Element, c: Element) -> Option<(Element, Element)> {
    if e.leq(a, b) {
        return Some((a, e.zero()));
    }
    if e.leq(a, c) {
        return Some((e.zero(), a));
    }
    intersect(e.down_set(a), e.down_set(b))
        .ones()
        .map(Element::new)
        .find_map(|a1| {
            let a2 = e.diff_unchecked(a, a1);
            e.leq(a2, c).then_some((a1, a2))
        })
}

/// Homogeneity. Witness `[a, b, c]` with `a <= b + c`, `a <= (b + c)'` and no split.
pub fn check_homogeneous(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let small: Vec<FixedBitSet> = e
        .elements()
        .map(|s| intersect(e.down_set(s), e.down_set(e.ortho(s))))
        .collect();
    let estimated: u64 = e
        .elements()
        .map(|s| e.rank(s) as u64 * small[s.index()].count_ones(..) as u64)
        .sum();
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Homogeneous.salt(),
        e.len(),
        |b| {
            let b = Element::new(b);
            let mut work = 0;
            for (c, s) in e.table().row(b) {
                for a in small[s.index()].ones().map(Element::new) {
                    work += 1;
                    if homogeneous_split(e, a, b, c).is_none() {
                        return (work, Some(vec![a, b, c]));
                    }
                }
            }
            (work, None)
        },
        |rng| {
            let b = Element::new(rng.gen_range(0..e.len()));
            let s = Element::new(random_member(e.up_set(b), rng)?);
            let c = e.diff_unchecked(s, b);
            let a = Element::new(random_member(&small[s.index()], rng)?);
            homogeneous_split(e, a, b, c).is_none().then(|| vec![a, b, c])
        },
    );
    PropertyResult::build(Property::Homogeneous, exhaustive, checked, estimated, witness)
}

// ---- lattice / antilattice ----

fn pair_estimate(e: &EffectAlgebra) -> u64 {
    let n = e.len() as u64;
    n * (n - 1) / 2 * (n / 64).max(1)
}

/// Every pair has a meet and a join. Witness `[a, b]`.
pub fn check_lattice(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let bad = |a: Element, b: Element| e.meet(a, b).is_none() || e.join(a, b).is_none();
    let estimated = pair_estimate(e);
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Lattice.salt(),
        e.len(),
        |a| {
            let a = Element::new(a);
            let hit = (a.index() + 1..e.len()).map(Element::new).find(|&b| bad(a, b));
            ((e.len() - a.index()) as u64, hit.map(|b| vec![a, b]))
        },
        |rng| {
            let a = Element::new(rng.gen_range(0..e.len()));
            let b = Element::new(rng.gen_range(0..e.len()));
            bad(a, b).then(|| vec![a.min(b), a.max(b)])
        },
    );
    PropertyResult::build(Property::Lattice, exhaustive, checked, estimated, witness)
}

/// Meets and joins exist exactly for comparable pairs. Witness `[a, b]`,
/// an incomparable pair with a meet or a join.
pub fn check_antilattice(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let bad = |a: Element, b: Element| !e.comparable(a, b) && (e.meet(a, b).is_some() || e.join(a, b).is_some());
    let estimated = pair_estimate(e);
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Antilattice.salt(),
        e.len(),
        |a| {
            let a = Element::new(a);
            let hit = (a.index() + 1..e.len()).map(Element::new).find(|&b| bad(a, b));
            ((e.len() - a.index()) as u64, hit.map(|b| vec![a, b]))
        },
        |rng| {
            let a = Element::new(rng.gen_range(0..e.len()));
            let b = Element::new(rng.gen_range(0..e.len()));
            bad(a, b).then(|| vec![a.min(b), a.max(b)])
        },
    );
    PropertyResult::build(Property::Antilattice, exhaustive, checked, estimated, witness)
}

// ---- orthomodular poset ----

pub const OMP_ORTHOGONAL_JOIN: &str = "orthogonal-join";
pub const OMP_EXCLUDED_MIDDLE: &str = "excluded-middle";
pub const OMP_ORTHOMODULAR_LAW: &str = "orthomodular-law";

/// Orthomodular poset with `a'` as orthocomplement. Involution and
/// antitonicity hold in every effect algebra; the remaining clauses are
/// scanned in order and the first failure is reported:
/// `a <= b'` implies `a v b` exists (witness `[a, b]`), `a v a' = 1`
/// (witness `[a]`), and `a <= b` implies `b = a v (a v b')'` (witness `[a, b]`).
pub fn check_omp(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let n = e.len() as u64;
    let estimated = 2 * n * n + n;
    // The clauses are cheap; one decision covers all three.
    let budget = &match budget.plan(estimated) {
        Plan::Exhaustive => ScanBudget {
            exhaustive: true,
            ..budget.clone()
        },
        Plan::Sampled(_) => ScanBudget {
            max_work: 0,
            ..budget.clone()
        },
    };
    let orthogonal_join = |a: Element, b: Element| e.leq(a, e.ortho(b)) && e.join(a, b).is_none();
    let excluded_middle = |a: Element| e.join(a, e.ortho(a)) != Some(e.one());
    let orthomodular =
        |a: Element, b: Element| e.leq(a, b) && e.join(a, e.ortho(b)).and_then(|j| e.join(a, e.ortho(j))) != Some(b);
    let pair_scan = |salt: u64, bad: &(dyn Fn(Element, Element) -> bool + Sync)| {
        scan(
            budget,
            n * n,
            salt,
            e.len(),
            |a| {
                let a = Element::new(a);
                (n, e.elements().find(|&b| bad(a, b)).map(|b| vec![a, b]))
            },
            |rng| {
                let a = Element::new(rng.gen_range(0..e.len()));
                let b = Element::new(rng.gen_range(0..e.len()));
                bad(a, b).then(|| vec![a, b])
            },
        )
    };

    let mut checked = 0;
    let (exhaustive, work, hit) = pair_scan(Property::Omp.salt(), &orthogonal_join);
    checked += work;
    if hit.is_some() {
        return PropertyResult::build(Property::Omp, exhaustive, checked, estimated, hit)
            .with_clause(Some(OMP_ORTHOGONAL_JOIN));
    }
    let hit = e.elements().find(|&a| excluded_middle(a)).map(|a| vec![a]);
    checked += n;
    if hit.is_some() {
        return PropertyResult::build(Property::Omp, exhaustive, checked, estimated, hit)
            .with_clause(Some(OMP_EXCLUDED_MIDDLE));
    }
    let (exhaustive, work, hit) = pair_scan(Property::Omp.salt() + 1, &orthomodular);
    checked += work;
    PropertyResult::build(Property::Omp, exhaustive, checked, estimated, hit).with_clause(Some(OMP_ORTHOMODULAR_LAW))
}

// ---- MV ----

pub const MV_LATTICE: &str = "lattice";
pub const MV_DIFFERENCE_LAW: &str = "difference-law";

/// MV-effect algebra: lattice ordered with `(x v y) - y = x - (x ^ y)`.
/// Witness `[x, y]`; `clause` tells which condition failed. When the check
/// holds exhaustively, the total operation `x (+) y = x + (y ^ x')` with `x* = x'`
/// is tested against the eight MV-algebra axioms, and against the partial
/// sum where that is defined; `stats.cross_check` records the outcome.
pub fn check_mv(e: &EffectAlgebra, budget: &ScanBudget) -> PropertyResult {
    let lattice = check_lattice(e, budget);
    if !lattice.holds() {
        let mut r = PropertyResult::build(
            Property::Mv,
            lattice.exhaustive(),
            lattice.stats.checked,
            lattice.stats.estimated,
            lattice.witness,
        );
        r.clause = Some(MV_LATTICE.into());
        return r;
    }
    let bad = |x: Element, y: Element| -> bool {
        let (Some(j), Some(m)) = (e.join(x, y), e.meet(x, y)) else {
            return true;
        };
        e.diff_unchecked(j, y) != e.diff_unchecked(x, m)
    };
    let estimated = (e.len() as u64).pow(2);
    let (exhaustive, checked, witness) = scan(
        budget,
        estimated,
        Property::Mv.salt(),
        e.len(),
        |x| {
            let x = Element::new(x);
            (e.len() as u64, e.elements().find(|&y| bad(x, y)).map(|y| vec![x, y]))
        },
        |rng| {
            let x = Element::new(rng.gen_range(0..e.len()));
            let y = Element::new(rng.gen_range(0..e.len()));
            bad(x, y).then(|| vec![x, y])
        },
    );
    let exhaustive = exhaustive && lattice.exhaustive();
    let mut r = PropertyResult::build(
        Property::Mv,
        exhaustive,
        checked + lattice.stats.checked,
        estimated,
        witness,
    )
    .with_clause(Some(MV_DIFFERENCE_LAW));
    if r.holds() && budget.plan((e.len() as u64).pow(3)) == Plan::Exhaustive {
        r.stats.cross_check = Some(mv_axioms_hold(e));
    }
    r
}

/// `x (+) y := x + (y ^ x')`, total on an MV-effect algebra.
pub fn mv_oplus(e: &EffectAlgebra, x: Element, y: Element) -> Option<Element> {
    e.meet(y, e.ortho(x)).and_then(|m| e.plus(x, m))
}

/// Tests the eight MV-algebra axioms for `(+)` and `*`, and that `(+)`
/// extends the partial sum.
pub fn mv_axioms_hold(e: &EffectAlgebra) -> bool {
    let n = e.len();
    let mut table = vec![Element::new(0); n * n];
    for x in e.elements() {
        for y in e.elements() {
            match mv_oplus(e, x, y) {
                Some(s) => table[x.index() * n + y.index()] = s,
                None => return false,
            }
        }
    }
    let op = |x: Element, y: Element| table[x.index() * n + y.index()];
    let star = |x: Element| e.ortho(x);
    let (zero, one) = (e.zero(), e.one());
    if star(zero) != one {
        return false;
    }
    e.elements().all(|a| {
        op(a, zero) == a
            && op(a, one) == one
            && star(star(a)) == a
            && op(a, star(a)) == one
            && e.elements().all(|b| {
                op(a, b) == op(b, a)
                    && op(star(op(star(a), b)), b) == op(star(op(a, star(b))), a)
                    && e.plus(a, b).map_or(true, |s| s == op(a, b))
                    && e.elements().all(|c| op(op(a, b), c) == op(a, op(b, c)))
            })
    })
}

/// Lazily evaluated property results for one algebra and budget.
pub struct Hypotheses<'a> {
    e: &'a EffectAlgebra,
    budget: ScanBudget,
    results: [OnceLock<PropertyResult>; 8],
}

impl<'a> Hypotheses<'a> {
    pub fn new(e: &'a EffectAlgebra, budget: &ScanBudget) -> Self {
        Hypotheses {
            e,
            budget: budget.clone(),
            results: Default::default(),
        }
    }

    pub fn algebra(&self) -> &'a EffectAlgebra {
        self.e
    }

    pub fn budget(&self) -> &ScanBudget {
        &self.budget
    }

    pub fn get(&self, p: Property) -> &PropertyResult {
        let slot = &self.results[Property::ALL.iter().position(|&q| q == p).unwrap()];
        slot.get_or_init(|| check(self.e, p, &self.budget))
    }

    pub fn holds(&self, p: Property) -> bool {
        self.get(p).holds()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{boolean_algebra, direct_product, horizontal_sum, mo, mv_chain};

    fn b() -> ScanBudget {
        ScanBudget::default()
    }

    #[test]
    fn chains_have_everything_but_omp() {
        for k in 1..6 {
            let e = mv_chain(k).unwrap();
            for p in [
                Property::Rdp,
                Property::Rip,
                Property::Dmp,
                Property::Homogeneous,
                Property::Lattice,
            ] {
                assert_eq!(
                    check(&e, p, &b()).verdict,
                    Verdict::HoldsExhaustive,
                    "{p} on L{}",
                    k + 1
                );
            }
            assert!(check_antilattice(&e, &b()).holds());
            let mv = check_mv(&e, &b());
            assert!(mv.holds());
            assert_eq!(mv.stats.cross_check, Some(true));
        }
        let l3 = mv_chain(2).unwrap();
        let omp = check_omp(&l3, &b());
        assert!(!omp.holds());
        assert_eq!(omp.clause.as_deref(), Some(OMP_EXCLUDED_MIDDLE));
        assert_eq!(omp.witness, Some(vec![l3.el("1/2")]));
    }

    #[test]
    fn mo2_fails_rdp_with_glued_decomposition() {
        let e = mo(2).unwrap();
        let r = check_rdp(&e, &b());
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.stats.cross_check, Some(true));
        let w = r.witness.unwrap();
        assert_eq!(e.plus(w[0], w[1]), e.plus(w[2], w[3]));
        assert_eq!(e.labels_of(&w), ["a1", "a1'", "a2", "a2'"]);
        assert!(check_lattice(&e, &b()).holds());
        assert!(check_omp(&e, &b()).holds());
        assert!(check_homogeneous(&e, &b()).holds());
        let mv = check_mv(&e, &b());
        assert!(!mv.holds());
        assert_eq!(mv.clause.as_deref(), Some(MV_DIFFERENCE_LAW));
    }

    #[test]
    fn booleans_and_products() {
        let e = boolean_algebra(3).unwrap();
        for p in Property::ALL {
            let r = check(&e, p, &b());
            assert_eq!(r.holds(), p != Property::Antilattice, "{p}");
        }
        let l3 = mv_chain(2).unwrap();
        let p = direct_product(&[l3.clone(), l3]).unwrap();
        assert!(check_rdp(&p, &b()).holds());
        assert!(check_mv(&p, &b()).holds());
    }

    #[test]
    fn hsum_of_chain_and_square() {
        let e = horizontal_sum(&[mv_chain(2).unwrap(), boolean_algebra(2).unwrap()]).unwrap();
        assert!(!check_rdp(&e, &b()).holds());
        assert!(check_lattice(&e, &b()).holds());
    }

    #[test]
    fn sampled_runs_are_labelled() {
        let e = boolean_algebra(4).unwrap();
        let tiny = ScanBudget {
            max_work: 1,
            samples: 200,
            ..ScanBudget::default()
        };
        let r = check_rdp(&e, &tiny);
        assert_eq!(r.verdict, Verdict::HoldsSampled);
        assert_eq!(r.stats.checked, 200);
        let m = mo(3).unwrap();
        assert_eq!(check_rdp(&m, &tiny).verdict, Verdict::Fails);
    }

    #[test]
    fn hypotheses_cache() {
        let e = mo(2).unwrap();
        let h = Hypotheses::new(&e, &b());
        assert!(!h.holds(Property::Rdp));
        assert!(std::ptr::eq(h.get(Property::Rdp), h.get(Property::Rdp)));
    }
}
