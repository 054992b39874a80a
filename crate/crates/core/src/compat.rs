//! Compatibility relations with explicit, re-checkable witnesses.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, Element};
use crate::error::{Error, Result};
use crate::properties::{Hypotheses, Property};

/// `a = a1 + c`, `b = b1 + c` with `a1 + b1 + c` defined; `strong` adds `a1 ^ b1 = 0`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatWitness {
    pub a1: Element,
    pub b1: Element,
    pub c: Element,
    pub strong: bool,
}

impl CompatWitness {
    /// Recomputes every claim of the witness for the pair `(a, b)`.
    pub fn verify(&self, e: &EffectAlgebra, a: Element, b: Element) -> bool {
        e.plus(self.a1, self.c) == Some(a)
            && e.plus(self.b1, self.c) == Some(b)
            && e.sum_family(&[self.a1, self.b1, self.c]).is_ok()
            && (!self.strong || e.meet(self.a1, self.b1) == Some(e.zero()))
    }

    /// The witness for `(b, a)`.
    pub fn swapped(self) -> Self {
        CompatWitness {
            a1: self.b1,
            b1: self.a1,
            ..self
        }
    }
}

/// Common lower bounds of `a` and `b`, largest rank first, ties by index.
fn common_lower_bounds(e: &EffectAlgebra, a: Element, b: Element) -> Vec<Element> {
    let mut s = e.down_set(a).clone();
    s.intersect_with(e.down_set(b));
    let mut v: Vec<Element> = s.ones().map(Element::new).collect();
    v.sort_by_key(|&c| (std::cmp::Reverse(e.rank(c)), c));
    v
}

fn search(e: &EffectAlgebra, a: Element, b: Element, strong: bool) -> Option<CompatWitness> {
    common_lower_bounds(e, a, b).into_iter().find_map(|c| {
        let a1 = e.diff_unchecked(a, c);
        let b1 = e.diff_unchecked(b, c);
        let total = e.plus(a1, b1).and_then(|s| e.plus(s, c));
        let ok = total.is_some() && (!strong || e.meet(a1, b1) == Some(e.zero()));
        ok.then_some(CompatWitness { a1, b1, c, strong })
    })
}

pub fn compatible(e: &EffectAlgebra, a: Element, b: Element) -> Option<CompatWitness> {
    search(e, a, b, false)
}

pub fn strongly_compatible(e: &EffectAlgebra, a: Element, b: Element) -> Option<CompatWitness> {
    search(e, a, b, true)
}

/// A summable list refining every target: target `i` is the sum of
/// `cs[j]` over `j` in `assignment[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementWitness {
    pub cs: Vec<Element>,
    pub assignment: Vec<Vec<usize>>,
}

impl RefinementWitness {
    pub fn verify(&self, e: &EffectAlgebra, targets: &[Element]) -> bool {
        e.is_summable(&self.cs)
            && self.assignment.len() == targets.len()
            && self.assignment.iter().zip(targets).all(|(idx, &t)| {
                let mut seen = HashSet::new();
                idx.iter().all(|&j| j < self.cs.len() && seen.insert(j))
                    && e.sum_family(&idx.iter().map(|&j| self.cs[j]).collect::<Vec<_>>()).ok() == Some(t)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum JointVerdict {
    Compatible {
        witness: RefinementWitness,
    },
    Incompatible,
    /// The search was cut off before it could decide.
    BudgetLimited {
        nodes: u64,
    },
}

impl JointVerdict {
    pub fn witness(&self) -> Option<&RefinementWitness> {
        match self {
            JointVerdict::Compatible { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn decided(&self) -> Option<bool> {
        match self {
            JointVerdict::Compatible { .. } => Some(true),
            JointVerdict::Incompatible => Some(false),
            JointVerdict::BudgetLimited { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatBudget {
    pub max_targets: usize,
    /// Search nodes before giving up with a budget-limited verdict.
    pub max_nodes: u64,
}

impl Default for CompatBudget {
    fn default() -> Self {
        CompatBudget {
            max_targets: 5,
            max_nodes: 2_000_000,
        }
    }
}

struct JointSearch<'a> {
    e: &'a EffectAlgebra,
    targets: &'a [Element],
    patterns: Vec<u32>,
    /// For each target, the position of the last pattern containing it.
    last: Vec<usize>,
    chosen: Vec<Element>,
    failed: HashSet<(usize, Vec<Element>, Element)>,
    nodes: u64,
    max_nodes: u64,
}

impl JointSearch<'_> {
    /// `rest[i]` is what target `i` still needs; `room` bounds the next part.
    fn dfs(&mut self, k: usize, rest: &mut Vec<Element>, room: Element) -> Option<bool> {
        if k == self.patterns.len() {
            return Some(true);
        }
        let key = (k, rest.clone(), room);
        if self.failed.contains(&key) {
            return Some(false);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return None;
        }
        let e = self.e;
        let sigma = self.patterns[k];
        let members: Vec<usize> = (0..self.targets.len()).filter(|i| sigma >> i & 1 == 1).collect();
        let forced = members.iter().find(|&&i| self.last[i] == k).map(|&i| rest[i]);
        let candidates: Vec<Element> = match forced {
            Some(f) => vec![f],
            None => {
                let mut s = e.down_set(room).clone();
                for &i in &members {
                    s.intersect_with(e.down_set(rest[i]));
                }
                let mut v: Vec<Element> = s.ones().map(Element::new).collect();
                v.sort_by_key(|&c| (std::cmp::Reverse(e.rank(c)), c));
                v
            }
        };
        for c in candidates {
            if !e.leq(c, room) || !members.iter().all(|&i| e.leq(c, rest[i])) {
                continue;
            }
            if members.iter().any(|&i| self.last[i] == k && rest[i] != c) {
                continue;
            }
            let saved = rest.clone();
            for &i in &members {
                rest[i] = e.diff_unchecked(rest[i], c);
            }
            self.chosen.push(c);
            match self.dfs(k + 1, rest, e.diff_unchecked(room, c)) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.chosen.pop();
            *rest = saved;
        }
        self.failed.insert(key);
        Some(false)
    }
}

/// Decides joint compatibility exactly. Any refinement can be regrouped by
/// which targets each part belongs to, so the search ranges over one part
/// per nonempty set of targets.
pub fn jointly_compatible(e: &EffectAlgebra, targets: &[Element], budget: &CompatBudget) -> Result<JointVerdict> {
    if targets.len() > budget.max_targets {
        return Err(Error::InvalidArgument(format!(
            "{} targets exceed the bound of {}",
            targets.len(),
            budget.max_targets
        )));
    }
    if targets.is_empty() {
        return Ok(JointVerdict::Compatible {
            witness: RefinementWitness {
                cs: vec![],
                assignment: vec![],
            },
        });
    }
    let m = targets.len();
    let mut patterns: Vec<u32> = (1..1u32 << m).collect();
    patterns.sort_by_key(|p| (std::cmp::Reverse(p.count_ones()), *p));
    let last = (0..m)
        .map(|i| patterns.iter().rposition(|p| p >> i & 1 == 1).unwrap())
        .collect();
    let mut search = JointSearch {
        e,
        targets,
        patterns,
        last,
        chosen: Vec::new(),
        failed: HashSet::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let mut rest = targets.to_vec();
    match search.dfs(0, &mut rest, e.one()) {
        None => Ok(JointVerdict::BudgetLimited { nodes: search.nodes }),
        Some(false) => Ok(JointVerdict::Incompatible),
        Some(true) => {
            let mut cs = Vec::new();
            let mut assignment = vec![Vec::new(); m];
            for (&sigma, &c) in search.patterns.iter().zip(&search.chosen) {
                if c == e.zero() {
                    continue;
                }
                for (i, a) in assignment.iter_mut().enumerate() {
                    if sigma >> i & 1 == 1 {
                        a.push(cs.len());
                    }
                }
                cs.push(c);
            }
            let witness = RefinementWitness { cs, assignment };
            debug_assert!(witness.verify(e, targets));
            Ok(JointVerdict::Compatible { witness })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum InternalVerdict {
    /// One refinement with parts in `M` covering all of `M`; its restriction
    /// serves every subset.
    Compatible {
        witness: RefinementWitness,
    },
    Incompatible,
    BudgetLimited {
        nodes: u64,
    },
}

impl InternalVerdict {
    pub fn decided(&self) -> Option<bool> {
        match self {
            InternalVerdict::Compatible { .. } => Some(true),
            InternalVerdict::Incompatible => Some(false),
            InternalVerdict::BudgetLimited { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&RefinementWitness> {
        match self {
            InternalVerdict::Compatible { witness } => Some(witness),
            _ => None,
        }
    }
}

struct InternalSearch<'a> {
    e: &'a EffectAlgebra,
    parts: Vec<Element>,
    goal: FixedBitSet,
    chosen: Vec<Element>,
    failed: HashSet<(usize, Element, Vec<usize>)>,
    nodes: u64,
    max_nodes: u64,
}

impl InternalSearch<'_> {
    /// Parts are taken as a multiset in nondecreasing position; `sums` holds
    /// every subfamily sum of the chosen parts.
    fn dfs(&mut self, from: usize, total: Element, sums: &FixedBitSet) -> Option<bool> {
        if self.goal.is_subset(sums) {
            return Some(true);
        }
        let key = (from, total, sums.as_slice().to_vec());
        if self.failed.contains(&key) {
            return Some(false);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return None;
        }
        let e = self.e;
        for k in from..self.parts.len() {
            let p = self.parts[k];
            let Some(next_total) = e.plus(total, p) else {
                continue;
            };
            let mut next = sums.clone();
            for s in sums.ones() {
                if let Some(t) = e.plus(Element::new(s), p) {
                    next.insert(t.index());
                }
            }
            self.chosen.push(p);
            match self.dfs(k, next_total, &next) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.chosen.pop();
        }
        self.failed.insert(key);
        Some(false)
    }
}

/// Indices of a subfamily of `cs` summing to `target`.
pub fn subfamily_for(e: &EffectAlgebra, cs: &[Element], target: Element) -> Option<Vec<usize>> {
    fn go(e: &EffectAlgebra, cs: &[Element], k: usize, acc: Element, target: Element, out: &mut Vec<usize>) -> bool {
        if acc == target {
            return true;
        }
        for j in k..cs.len() {
            if let Some(s) = e.plus(acc, cs[j]) {
                if e.leq(s, target) {
                    out.push(j);
                    if go(e, cs, j + 1, s, target, out) {
                        return true;
                    }
                    out.pop();
                }
            }
        }
        false
    }
    let mut out = Vec::new();
    go(e, cs, 0, e.zero(), target, &mut out).then_some(out)
}

/// Whether `M` refines into a summable list of its own members. Since `M` is
/// finite, a refinement of `M` itself restricts to every finite subset.
pub fn internally_compatible(e: &EffectAlgebra, m: &[Element], budget: &CompatBudget) -> InternalVerdict {
    let goal = e.subset_bits(m);
    let nonzero: Vec<Element> = e.sorted_subset(&goal).into_iter().filter(|&x| x != e.zero()).collect();
    // The minimal members usually are the refinement (ranges of observables).
    let minimal: Vec<Element> = nonzero
        .iter()
        .copied()
        .filter(|&x| !nonzero.iter().any(|&y| e.lt(y, x)))
        .collect();
    if e.is_summable(&minimal) {
        let mut sums = e.subset_bits(&[e.zero()]);
        for &p in &minimal {
            for s in e.sorted_subset(&sums) {
                if let Some(t) = e.plus(s, p) {
                    sums.insert(t.index());
                }
            }
        }
        if goal.is_subset(&sums) {
            let assignment = m
                .iter()
                .map(|&t| subfamily_for(e, &minimal, t).expect("covered sum"))
                .collect();
            return InternalVerdict::Compatible {
                witness: RefinementWitness {
                    cs: minimal,
                    assignment,
                },
            };
        }
    }
    let mut search = InternalSearch {
        e,
        parts: nonzero,
        goal,
        chosen: Vec::new(),
        failed: HashSet::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let start = e.subset_bits(&[e.zero()]);
    match search.dfs(0, e.zero(), &start) {
        None => InternalVerdict::BudgetLimited { nodes: search.nodes },
        Some(false) => InternalVerdict::Incompatible,
        Some(true) => {
            let cs = search.chosen;
            let assignment = m
                .iter()
                .map(|&t| subfamily_for(e, &cs, t).expect("covered sum"))
                .collect();
            InternalVerdict::Compatible {
                witness: RefinementWitness { cs, assignment },
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TheoremCheck<T> {
    /// Hypotheses hold and the conclusion was checked.
    Checked {
        ok: bool,
        detail: T,
    },
    NotApplicable {
        reason: String,
    },
}

impl<T> TheoremCheck<T> {
    pub fn ok(&self) -> Option<bool> {
        match self {
            TheoremCheck::Checked { ok, .. } => Some(*ok),
            TheoremCheck::NotApplicable { .. } => None,
        }
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        TheoremCheck::NotApplicable { reason: reason.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupremumDetail {
    /// `a_1 v ... v a_m`.
    pub join: Element,
    pub strong_with_join: bool,
    /// `b ^ (a_1 v ... v a_m)`.
    pub lhs: Option<Element>,
    /// `(b ^ a_1) v ... v (b ^ a_m)`.
    pub rhs: Option<Element>,
}

/// Strong compatibility is preserved by suprema of sequences, and meets
/// distribute over them: with RIP, prefix joins of `seq` existing and `b`
/// strongly compatible with every term, `b` is strongly compatible with the
/// join and `b ^ V a_n = V (b ^ a_n)`.
pub fn verify_supremum_distributivity(h: &Hypotheses, b: Element, seq: &[Element]) -> TheoremCheck<SupremumDetail> {
    let e = h.algebra();
    if seq.is_empty() {
        return TheoremCheck::not_applicable("empty sequence");
    }
    if !h.holds(Property::Rip) {
        return TheoremCheck::not_applicable("RIP fails");
    }
    let mut join = seq[0];
    for &a in &seq[1..] {
        match e.join(join, a) {
            Some(j) => join = j,
            None => return TheoremCheck::not_applicable("a prefix join does not exist"),
        }
    }
    if let Some(&a) = seq.iter().find(|&&a| strongly_compatible(e, b, a).is_none()) {
        return TheoremCheck::not_applicable(format!("b is not strongly compatible with {}", e.label(a)));
    }
    let strong_with_join = strongly_compatible(e, b, join).is_some();
    let lhs = e.meet(b, join);
    let meets: Option<Vec<Element>> = seq.iter().map(|&a| e.meet(b, a)).collect();
    let rhs = meets.and_then(|m| e.join_of(&m));
    let ok = strong_with_join && lhs.is_some() && lhs == rhs;
    TheoremCheck::Checked {
        ok,
        detail: SupremumDetail {
            join,
            strong_with_join,
            lhs,
            rhs,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementDetail {
    /// `a` strongly compatible with `b'`; `None` when `a` is not strongly compatible with `b`.
    pub with_complement: Option<bool>,
    /// `a` strongly compatible with `c - b`; `None` when that clause does not apply.
    pub with_difference: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementCheck {
    /// RDP and DMP both hold.
    pub rdp_dmp: bool,
    /// RIP and DMP both hold.
    pub rip_dmp: bool,
    pub result: TheoremCheck<ComplementDetail>,
}

/// Strong compatibility passes to complements and differences: under DMP with
/// RDP (or RIP; both readings are reported), `a` strongly compatible with `b`
/// gives `a` strongly compatible with `b'`, and if also with `c >= b`, with `c - b`.
pub fn verify_complement_compatibility(h: &Hypotheses, a: Element, b: Element, c: Element) -> ComplementCheck {
    let e = h.algebra();
    let dmp = h.holds(Property::Dmp);
    let rdp_dmp = dmp && h.holds(Property::Rdp);
    let rip_dmp = dmp && h.holds(Property::Rip);
    let result = if !(rdp_dmp || rip_dmp) {
        TheoremCheck::not_applicable("neither RDP+DMP nor RIP+DMP holds")
    } else if strongly_compatible(e, a, b).is_none() {
        TheoremCheck::not_applicable("a is not strongly compatible with b")
    } else {
        let with_complement = Some(strongly_compatible(e, a, e.ortho(b)).is_some());
        let with_difference = (e.leq(b, c) && strongly_compatible(e, a, c).is_some())
            .then(|| strongly_compatible(e, a, e.diff_unchecked(c, b)).is_some());
        let ok = with_complement == Some(true) && with_difference != Some(false);
        TheoremCheck::Checked {
            ok,
            detail: ComplementDetail {
                with_complement,
                with_difference,
            },
        }
    };
    ComplementCheck {
        rdp_dmp,
        rip_dmp,
        result,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{boolean_algebra, mo, mv_chain};
    use crate::scan::ScanBudget;

    #[test]
    fn comparable_pairs_are_strongly_compatible() {
        let e = mv_chain(4).unwrap();
        let (a, b) = (e.el("1/4"), e.el("3/4"));
        let w = strongly_compatible(&e, a, b).unwrap();
        assert_eq!((w.a1, w.b1, w.c), (e.zero(), e.el("1/2"), a));
        assert!(w.verify(&e, a, b));
        let w0 = strongly_compatible(&e, e.zero(), b).unwrap();
        assert_eq!((w0.a1, w0.b1, w0.c), (e.zero(), b, e.zero()));
    }

    #[test]
    fn mo2_cross_atoms() {
        let e = mo(2).unwrap();
        assert!(compatible(&e, e.el("a1"), e.el("a2")).is_none());
        assert!(strongly_compatible(&e, e.el("a1"), e.el("a1'")).is_some());
        let j = jointly_compatible(&e, &[e.el("a1"), e.el("a2")], &CompatBudget::default()).unwrap();
        assert_eq!(j, JointVerdict::Incompatible);
        let i = internally_compatible(&e, &[e.el("a1"), e.el("a2")], &CompatBudget::default());
        assert_eq!(i, InternalVerdict::Incompatible);
    }

    #[test]
    fn chain_refinement_telescopes() {
        let e = mv_chain(2).unwrap();
        let (h, one) = (e.el("1/2"), e.one());
        let j = jointly_compatible(&e, &[h, one], &CompatBudget::default()).unwrap();
        let w = j.witness().unwrap();
        assert_eq!(w.cs, vec![h, h]);
        assert!(w.verify(&e, &[h, one]));
        let i = internally_compatible(&e, &[e.zero(), h, one], &CompatBudget::default());
        assert!(i.witness().unwrap().verify(&e, &[e.zero(), h, one]));
        let t = internally_compatible(&e, &[e.zero(), one], &CompatBudget::default());
        assert_eq!(t.decided(), Some(true));
    }

    #[test]
    fn joint_pair_matches_pairwise() {
        let e = boolean_algebra(3).unwrap();
        for a in e.elements() {
            for b in e.elements() {
                let j = jointly_compatible(&e, &[a, b], &CompatBudget::default()).unwrap();
                assert_eq!(j.decided(), Some(compatible(&e, a, b).is_some()));
            }
        }
        let too_many = vec![e.zero(); 6];
        assert!(jointly_compatible(&e, &too_many, &CompatBudget::default()).is_err());
    }

    #[test]
    fn theorem_checks_on_booleans() {
        let e = boolean_algebra(3).unwrap();
        let h = Hypotheses::new(&e, &ScanBudget::default());
        let r = verify_supremum_distributivity(&h, e.el("ab"), &[e.el("a"), e.el("ac"), e.one()]);
        assert_eq!(r.ok(), Some(true));
        let c = verify_complement_compatibility(&h, e.el("a"), e.el("b"), e.el("bc"));
        assert!(c.rdp_dmp && c.rip_dmp);
        assert_eq!(c.result.ok(), Some(true));
    }
}
