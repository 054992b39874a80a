//! Finitely supported observables, their spectral families, and the
//! correspondence with jointly compatible families.

use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_homomorphism, EffectAlgebra, Element};
use crate::blocks::{enumerate_blocks, BlockBudget};
use crate::borel::BorelSetDesc;
use crate::compat::{internally_compatible, subfamily_for, CompatBudget, InternalVerdict, RefinementWitness};
use crate::constructors::{boolean_algebra, BOOLEAN_MAX_ATOMS};
use crate::error::{Error, Result};
use crate::properties::{Hypotheses, Property};
use crate::rational::{from_ints, Rational};
use crate::scan::{Plan, ScanBudget};

/// `x(A)` is the sum of the elements whose points lie in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscreteObservable {
    atoms: Vec<(Rational, Element)>,
}

impl DiscreteObservable {
    /// Sorts by point, drops zero atoms, and checks the elements sum to 1.
    pub fn new(e: &EffectAlgebra, mut atoms: Vec<(Rational, Element)>) -> Result<Self> {
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(
                "observable has two atoms at the same point".into(),
            ));
        }
        atoms.retain(|(_, c)| *c != e.zero());
        let elems: Vec<Element> = atoms.iter().map(|(_, c)| *c).collect();
        let total = e.sum_family(&elems)?;
        if total != e.one() {
            return Err(Error::InvalidArgument(format!(
                "observable atoms sum to {}, not 1",
                e.label(total)
            )));
        }
        Ok(DiscreteObservable { atoms })
    }

    /// The point mass at `p`.
    pub fn dirac(e: &EffectAlgebra, p: Rational) -> Self {
        DiscreteObservable {
            atoms: vec![(p, e.one())],
        }
    }

    pub fn atoms(&self) -> &[(Rational, Element)] {
        &self.atoms
    }

    pub fn points(&self) -> Vec<Rational> {
        self.atoms.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Union of the atom points selected by the bits of `mask`.
    pub fn point_set(&self, mask: u64) -> BorelSetDesc {
        BorelSetDesc::points(
            self.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, (p, _))| p.clone()),
        )
    }
}

pub fn observable_eval(e: &EffectAlgebra, x: &DiscreteObservable, a: &BorelSetDesc) -> Element {
    let hit: Vec<Element> = x.atoms.iter().filter(|(p, _)| a.contains(p)).map(|(_, c)| *c).collect();
    e.sum_family(&hit).expect("subfamily of a summable family")
}

/// `x_t` is the value at index `#{j : p_j < t}`, with value 0 before the first jump.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectralFamily {
    pub jumps: Vec<(Rational, Element)>,
}

impl SpectralFamily {
    pub fn value_at(&self, e: &EffectAlgebra, t: &Rational) -> Element {
        let k = self.jumps.iter().take_while(|(p, _)| p < t).count();
        if k == 0 {
            e.zero()
        } else {
            self.jumps[k - 1].1
        }
    }

    /// Strictly increasing points, a chain of values, and top value 1.
    pub fn validate(&self, e: &EffectAlgebra) -> Result<()> {
        if self.jumps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("jump points are not strictly increasing".into()));
        }
        let mut prev = e.zero();
        for (p, v) in &self.jumps {
            if !e.leq(prev, *v) {
                return Err(Error::Precondition(format!(
                    "values do not form a chain: {} is not below {} at {}",
                    e.label(prev),
                    e.label(*v),
                    crate::rational::format_rational(p)
                )));
            }
            prev = *v;
        }
        if prev != e.one() {
            return Err(Error::Precondition(format!("top value is {}, not 1", e.label(prev))));
        }
        Ok(())
    }

    /// Points where the family may change plus one probe inside every gap
    /// and beyond both ends; every rational behaves like one of these.
    pub fn probes(&self) -> Vec<Rational> {
        let pts: Vec<&Rational> = self.jumps.iter().map(|(p, _)| p).collect();
        let mut out = Vec::new();
        match (pts.first(), pts.last()) {
            (Some(first), Some(last)) => {
                out.push(*first - Rational::one());
                for w in pts.windows(2) {
                    out.push(w[0].clone());
                    out.push((w[0] + w[1]) / from_ints(2, 1));
                }
                out.push((*last).clone());
                out.push(*last + Rational::one());
            }
            _ => out.push(Rational::from_integer(0.into())),
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralLaws {
    pub monotone: bool,
    pub infimum_zero: bool,
    pub supremum_one: bool,
    pub left_continuous: bool,
}

impl SpectralLaws {
    pub fn all(&self) -> bool {
        self.monotone && self.infimum_zero && self.supremum_one && self.left_continuous
    }
}

/// Evaluates the monotonicity, limit and left-continuity laws on the probe points.
pub fn spectral_laws(e: &EffectAlgebra, f: &SpectralFamily) -> SpectralLaws {
    let probes = f.probes();
    let vals: Vec<Element> = probes.iter().map(|t| f.value_at(e, t)).collect();
    let monotone = vals.windows(2).all(|w| e.leq(w[0], w[1]));
    let infimum_zero = vals.first() == Some(&e.zero());
    let supremum_one = vals.last() == Some(&e.one());
    // For each probe s, the largest breakpoint below s bounds a stretch on
    // which x is constant; its midpoint with s stands for all t close to s.
    let left_continuous = probes.iter().all(|s| {
        let below = f
            .jumps
            .iter()
            .map(|(p, _)| p)
            .filter(|p| *p < s)
            .last()
            .cloned()
            .unwrap_or(s - Rational::one());
        let t = (&below + s) / from_ints(2, 1);
        f.value_at(e, &t) == f.value_at(e, s)
    });
    SpectralLaws {
        monotone,
        infimum_zero,
        supremum_one,
        left_continuous,
    }
}

/// Jumps at the atom points with the partial sums as values.
pub fn spectral_family_of(e: &EffectAlgebra, x: &DiscreteObservable) -> SpectralFamily {
    let mut acc = e.zero();
    let jumps = x
        .atoms
        .iter()
        .map(|(p, c)| {
            acc = e.plus(acc, *c).expect("atoms are summable");
            (p.clone(), acc)
        })
        .collect();
    SpectralFamily { jumps }
}

/// Which hypothesis combinations for unique reconstruction hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub rdp: bool,
    pub rip: bool,
    pub dmp: bool,
    pub homogeneous: bool,
    /// RDP together with DMP.
    pub rdp_dmp: bool,
    /// RIP together with DMP.
    pub rip_dmp: bool,
}

impl HypothesisReport {
    pub fn of(h: &Hypotheses) -> Self {
        let (rdp, rip, dmp, homogeneous) = (
            h.holds(Property::Rdp),
            h.holds(Property::Rip),
            h.holds(Property::Dmp),
            h.holds(Property::Homogeneous),
        );
        HypothesisReport {
            rdp,
            rip,
            dmp,
            homogeneous,
            rdp_dmp: rdp && dmp,
            rip_dmp: rip && dmp,
        }
    }

    pub fn any(&self) -> bool {
        self.rdp_dmp || self.rip_dmp || self.homogeneous
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    /// Each jump `v_{i-1} -> v_i` has exactly one difference element.
    pub differences_unique: bool,
    /// Any nonzero atom placed off the jump points changes some `x_t`.
    pub off_support_mismatch: bool,
}

impl UniquenessReport {
    pub fn unique(&self) -> bool {
        self.differences_unique && self.off_support_mismatch
    }
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub observable: DiscreteObservable,
    pub uniqueness: UniquenessReport,
    pub hypotheses: HypothesisReport,
    /// Whether the range lies in a single strong block; `None` above the block budget.
    pub range_in_block: Option<bool>,
}

/// Rebuilds the observable whose spectral family is `f`, by differences
/// along the chain of values.
pub fn observable_from_spectral(h: &Hypotheses, f: &SpectralFamily) -> Result<Reconstruction> {
    let e = h.algebra();
    f.validate(e)?;
    let mut atoms = Vec::with_capacity(f.jumps.len());
    let mut prev = e.zero();
    let mut differences_unique = true;
    for (p, v) in &f.jumps {
        atoms.push((p.clone(), e.diff(*v, prev)?));
        differences_unique &= e.elements().filter(|&c| e.plus(prev, c) == Some(*v)).count() == 1;
        prev = *v;
    }
    let observable = DiscreteObservable::new(e, atoms)?;
    let back = spectral_family_of(e, &observable);
    assert!(
        f.probes().iter().all(|t| back.value_at(e, t) == f.value_at(e, t)),
        "reconstruction reproduces every x_t"
    );

    // An extra atom c != 0 at an off-support point q makes x_t jump from
    // v to v + c just after q; cancellation forbids v + c = v.
    let mut values = vec![e.zero()];
    values.extend(f.jumps.iter().map(|(_, v)| *v));
    let off_support_mismatch = values
        .iter()
        .all(|&v| e.elements().all(|c| c == e.zero() || e.plus(v, c) != Some(v)));

    let range = range_of(e, &observable, &CompatBudget::default());
    let range_in_block = enumerate_blocks(e, &BlockBudget::default()).ok().map(|blocks| {
        blocks
            .iter()
            .any(|b| range.members.iter().all(|m| b.members.contains(m)))
    });
    Ok(Reconstruction {
        observable,
        uniqueness: UniquenessReport {
            differences_unique,
            off_support_mismatch,
        },
        hypotheses: HypothesisReport::of(h),
        range_in_block,
    })
}

/// Observable with atom `c_i` at integer point `i` and `c_0 = (c_1 + ... + c_k)'` at 0.
/// Target `j` is `x` of the points `assignment[j]` shifted by one.
pub fn observable_from_jointly_compatible(
    e: &EffectAlgebra,
    targets: &[Element],
    witness: &RefinementWitness,
) -> Result<DiscreteObservable> {
    if !witness.verify(e, targets) {
        return Err(Error::InvalidArgument(
            "refinement witness does not produce the targets".into(),
        ));
    }
    let total = e.sum_family(&witness.cs)?;
    let mut atoms = vec![(from_ints(0, 1), e.ortho(total))];
    atoms.extend(
        witness
            .cs
            .iter()
            .enumerate()
            .map(|(i, &c)| (from_ints(i as i64 + 1, 1), c)),
    );
    // Distinct points, so no merging is needed.
    DiscreteObservable::new(e, atoms)
}

/// The point set representing target `j` in an observable built from `witness`.
pub fn target_set(witness: &RefinementWitness, j: usize) -> BorelSetDesc {
    BorelSetDesc::points(witness.assignment[j].iter().map(|&i| from_ints(i as i64 + 1, 1)))
}

#[derive(Clone, Debug)]
pub struct Range {
    pub members: Vec<Element>,
    pub internal: InternalVerdict,
}

/// `{x(A)}` over all sets of atom points, with its internal-compatibility verdict.
pub fn range_of(e: &EffectAlgebra, x: &DiscreteObservable, budget: &CompatBudget) -> Range {
    let mut sums = e.subset_bits(&[e.zero()]);
    for (_, c) in &x.atoms {
        let current = e.sorted_subset(&sums);
        for s in current {
            sums.insert(e.plus(s, *c).expect("disjoint atoms").index());
        }
    }
    let members = e.sorted_subset(&sums);
    // The atoms themselves refine the range; search only if that fails to verify.
    let cs: Vec<Element> = x.atoms.iter().map(|(_, c)| *c).collect();
    let assignment: Option<Vec<Vec<usize>>> = members.iter().map(|&m| subfamily_for(e, &cs, m)).collect();
    let internal = match assignment.map(|assignment| RefinementWitness { cs, assignment }) {
        Some(w) if w.verify(e, &members) => InternalVerdict::Compatible { witness: w },
        _ => internally_compatible(e, &members, budget),
    };
    debug_assert_ne!(internal.decided(), Some(false), "ranges are internally compatible");
    Range { members, internal }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableLaws {
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub complement: bool,
    pub additivity: bool,
    pub difference: bool,
    /// Mask-to-sum map out of the Boolean algebra on the atoms; `None` above the size cap.
    pub homomorphism: Option<bool>,
}

/// Checks `x(R \ A) = x(A)'`, additivity on disjoint sets and
/// `x(B \ A) = x(B) - x(A)` for `A` inside `B`, with sets drawn from
/// unions of atom points and one extra point off the support.
pub fn observable_laws(e: &EffectAlgebra, x: &DiscreteObservable, budget: &ScanBudget) -> ObservableLaws {
    let m = x.atoms.len().min(62);
    let sets = 1u64 << m;
    let eval = |a: &BorelSetDesc| observable_eval(e, x, a);
    let mut laws = ObservableLaws {
        pairs_checked: 0,
        exhaustive: true,
        complement: true,
        additivity: true,
        difference: true,
        homomorphism: None,
    };
    // Point sets and their values, cached for small supports.
    let cache: Vec<(BorelSetDesc, Element)> = if m <= 12 {
        (0..sets)
            .map(|a| x.point_set(a))
            .map(|s| {
                let v = eval(&s);
                (s, v)
            })
            .collect()
    } else {
        Vec::new()
    };
    let lookup = |a: u64| match cache.get(a as usize) {
        Some((s, v)) => (s.clone(), *v),
        None => {
            let s = x.point_set(a);
            let v = eval(&s);
            (s, v)
        }
    };
    let pair = |a: u64, b: u64, with_complement: bool, laws: &mut ObservableLaws| {
        let ((sa, xa), (sb, xb)) = (lookup(a), lookup(b));
        if with_complement {
            laws.complement &= eval(&sa.complement()) == e.ortho(xa);
        }
        if a & b == 0 {
            laws.additivity &= e.plus(xa, xb) == Some(eval(&sa.union(&sb)));
        }
        if a & b == a {
            laws.difference &= e.diff(xb, xa).ok() == Some(eval(&sb.difference(&sa)));
        }
        laws.pairs_checked += 1;
    };
    let plan = if m >= 32 {
        Plan::Sampled(budget.samples)
    } else {
        budget.plan(sets * sets)
    };
    match plan {
        Plan::Exhaustive => {
            for a in 0..sets {
                for b in 0..sets {
                    pair(a, b, b == 0, &mut laws);
                }
            }
        }
        Plan::Sampled(k) => {
            laws.exhaustive = false;
            let mut rng = budget.rng(0x0b5);
            let mask = if m == 64 { u64::MAX } else { sets - 1 };
            for _ in 0..k {
                let (a, b) = (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask);
                pair(a, b, true, &mut laws);
                pair(a & b, b, true, &mut laws);
                pair(a & !b, b, true, &mut laws);
            }
        }
    }
    if m <= BOOLEAN_MAX_ATOMS {
        let b = boolean_algebra(m).expect("within the Boolean cap");
        let map: Vec<Element> = (0..1u64 << m).map(|mask| lookup(mask).1).collect();
        laws.homomorphism = Some(is_homomorphism(&b, e, &map));
    }
    laws
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::{jointly_compatible, JointVerdict};
    use crate::constructors::{mo, mv_chain};

    fn q(p: i64) -> Rational {
        from_ints(p, 1)
    }

    fn set(s: &str) -> BorelSetDesc {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation_and_spectral_round_trip() {
        let l3 = mv_chain(2).unwrap();
        let h = l3.el("1/2");
        let x = DiscreteObservable::new(&l3, vec![(q(1), h), (q(0), h)]).unwrap();
        assert_eq!(observable_eval(&l3, &x, &set("(-inf,1)")), h);
        assert_eq!(observable_eval(&l3, &x, &BorelSetDesc::empty()), l3.zero());
        let f = spectral_family_of(&l3, &x);
        assert_eq!(f.jumps, vec![(q(0), h), (q(1), l3.one())]);
        assert!(spectral_laws(&l3, &f).all());
        let hyp = Hypotheses::new(&l3, &ScanBudget::default());
        let r = observable_from_spectral(&hyp, &f).unwrap();
        assert_eq!(r.observable, x);
        assert!(r.uniqueness.unique());
        assert!(r.hypotheses.any());
        let range = range_of(&l3, &x, &CompatBudget::default());
        assert_eq!(l3.labels_of(&range.members), ["0", "1/2", "1"]);
        assert_eq!(range.internal.decided(), Some(true));
        let laws = observable_laws(&l3, &x, &ScanBudget::default());
        assert!(laws.complement && laws.additivity && laws.difference);
        assert_eq!(laws.homomorphism, Some(true));
    }

    #[test]
    fn dirac() {
        let l3 = mv_chain(2).unwrap();
        let x = DiscreteObservable::dirac(&l3, q(0));
        assert_eq!(observable_eval(&l3, &x, &set("(-1,1)")), l3.one());
        assert_eq!(observable_eval(&l3, &x, &set("(1,2)")), l3.zero());
        assert_eq!(
            range_of(&l3, &x, &CompatBudget::default()).members,
            vec![l3.zero(), l3.one()]
        );
    }

    #[test]
    fn mo2_reconstruction_sits_in_a_block() {
        let e = mo(2).unwrap();
        let a = e.el("a1");
        let f = SpectralFamily {
            jumps: vec![(q(0), a), (q(1), e.one())],
        };
        let r = observable_from_spectral(&Hypotheses::new(&e, &ScanBudget::default()), &f).unwrap();
        assert_eq!(r.observable.atoms(), &[(q(0), a), (q(1), e.el("a1'"))]);
        assert_eq!(r.range_in_block, Some(true));
        let bad = SpectralFamily {
            jumps: vec![(q(0), a), (q(1), e.el("a2")), (q(2), e.one())],
        };
        assert!(matches!(
            observable_from_spectral(&Hypotheses::new(&e, &ScanBudget::default()), &bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn from_joint_refinement() {
        let l3 = mv_chain(2).unwrap();
        let (h, one) = (l3.el("1/2"), l3.one());
        let JointVerdict::Compatible { witness } =
            jointly_compatible(&l3, &[h, one], &CompatBudget::default()).unwrap()
        else {
            panic!("chain is jointly compatible")
        };
        let x = observable_from_jointly_compatible(&l3, &[h, one], &witness).unwrap();
        for (j, &t) in [h, one].iter().enumerate() {
            assert_eq!(observable_eval(&l3, &x, &target_set(&witness, j)), t);
        }
        let w = RefinementWitness {
            cs: vec![one],
            assignment: vec![vec![0]],
        };
        let x = observable_from_jointly_compatible(&l3, &[one], &w).unwrap();
        assert_eq!(x.atoms(), &[(q(1), one)]);
        assert!(observable_from_jointly_compatible(&l3, &[h], &w).is_err());
    }
}
