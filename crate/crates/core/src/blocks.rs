//! Blocks: maximal strongly compatible sets, ic-blocks and RDP-blocks.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_effect_subalgebra, EffectAlgebra, Element};
use crate::compat::{strongly_compatible, TheoremCheck};
use crate::constructors::subalgebra_generated;
use crate::error::{Error, Result};
use crate::properties::{check_mv, check_rdp, Hypotheses, Property};
use crate::scan::ScanBudget;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    Strong,
    Ic,
    Rdp,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFlags {
    pub is_subalgebra: bool,
    /// MV-effect algebra as an induced algebra; `None` when not a subalgebra.
    pub is_mv: Option<bool>,
    pub has_rdp: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub members: Vec<Element>,
    pub kind: BlockKind,
    pub flags: BlockFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBudget {
    /// Largest carrier for strong blocks and ic-blocks.
    pub max_carrier: usize,
    /// Largest carrier for RDP-blocks.
    pub max_rdp_carrier: usize,
    /// Atom lists (ic-blocks) or subalgebras (RDP-blocks) examined before giving up.
    pub max_candidates: usize,
    pub scan: ScanBudget,
}

impl Default for BlockBudget {
    fn default() -> Self {
        BlockBudget {
            max_carrier: 512,
            max_rdp_carrier: 64,
            max_candidates: 200_000,
            scan: ScanBudget::default(),
        }
    }
}

fn flags_for(e: &EffectAlgebra, members: &[Element], scan: &ScanBudget) -> BlockFlags {
    if !is_effect_subalgebra(e, members) {
        return BlockFlags {
            is_subalgebra: false,
            is_mv: None,
            has_rdp: None,
        };
    }
    let sub = e.induced(members).expect("checked subalgebra");
    BlockFlags {
        is_subalgebra: true,
        is_mv: Some(check_mv(&sub, scan).holds()),
        has_rdp: Some(check_rdp(&sub, scan).holds()),
    }
}

fn canonical(mut sets: Vec<Vec<Element>>) -> Vec<Vec<Element>> {
    for s in &mut sets {
        s.sort();
    }
    sets.sort();
    sets.dedup();
    sets
}

/// The strong-compatibility graph as adjacency bit sets (no self loops).
pub fn strong_compatibility_graph(e: &EffectAlgebra) -> Vec<FixedBitSet> {
    let n = e.len();
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|a| {
            (a + 1..n)
                .filter(|&b| strongly_compatible(e, Element::new(a), Element::new(b)).is_some())
                .collect()
        })
        .collect();
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    for (a, row) in rows.iter().enumerate() {
        for &b in row {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj
}

/// Maximal cliques by Bron-Kerbosch with Tomita pivoting.
pub fn maximal_cliques(adj: &[FixedBitSet]) -> Vec<Vec<usize>> {
    fn go(adj: &[FixedBitSet], r: &mut Vec<usize>, p: FixedBitSet, mut x: FixedBitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_clear() {
            if x.is_clear() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| (p.intersection(&adj[u]).count(), std::cmp::Reverse(u)))
            .unwrap();
        let mut p = p;
        let candidates: Vec<usize> = p.difference(&adj[pivot]).collect();
        for v in candidates {
            r.push(v);
            let mut np = p.clone();
            np.intersect_with(&adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&adj[v]);
            go(adj, r, np, nx, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }
    let n = adj.len();
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    let mut out = Vec::new();
    go(adj, &mut Vec::new(), p, FixedBitSet::with_capacity(n), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// Maximal sets of pairwise strongly compatible elements, sorted by member lists.
pub fn enumerate_blocks(e: &EffectAlgebra, budget: &BlockBudget) -> Result<Vec<Block>> {
    if e.len() > budget.max_carrier {
        return Err(Error::BudgetExceeded {
            what: "strong blocks",
            budget: budget.max_carrier as u64,
        });
    }
    let adj = strong_compatibility_graph(e);
    let cliques = maximal_cliques(&adj);
    Ok(cliques
        .into_iter()
        .map(|c| {
            let members: Vec<Element> = c.into_iter().map(Element::new).collect();
            let flags = flags_for(e, &members, &budget.scan);
            Block {
                members,
                kind: BlockKind::Strong,
                flags,
            }
        })
        .collect())
}

fn covers(e: &EffectAlgebra, blocks: &[Block]) -> bool {
    let mut all = FixedBitSet::with_capacity(e.len());
    for b in blocks {
        for m in &b.members {
            all.insert(m.index());
        }
    }
    all.count_ones(..) == e.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCoverDetail {
    pub blocks: Vec<Block>,
    pub all_subalgebras: bool,
    pub all_mv: bool,
    /// Meets and joins of block members exist and stay in the block.
    pub lattice_closed: bool,
    pub covers: bool,
}

/// Under RIP and DMP, every block is an MV-effect subalgebra closed under the
/// lattice operations, and the blocks cover the carrier.
pub fn verify_block_theorem(h: &Hypotheses, budget: &BlockBudget) -> Result<TheoremCheck<BlockCoverDetail>> {
    let e = h.algebra();
    if !h.holds(Property::Rip) || !h.holds(Property::Dmp) {
        return Ok(TheoremCheck::not_applicable("RIP and DMP do not both hold"));
    }
    let blocks = enumerate_blocks(e, budget)?;
    let all_subalgebras = blocks.iter().all(|b| b.flags.is_subalgebra);
    let all_mv = blocks.iter().all(|b| b.flags.is_mv == Some(true));
    let lattice_closed = blocks.iter().all(|b| {
        let bits = e.subset_bits(&b.members);
        b.members.iter().all(|&x| {
            b.members.iter().all(|&y| {
                let inside = |z: Option<Element>| z.is_some_and(|z| bits.contains(z.index()));
                inside(e.meet(x, y)) && inside(e.join(x, y))
            })
        })
    });
    let covers = covers(e, &blocks);
    let ok = all_subalgebras && all_mv && lattice_closed && covers;
    Ok(TheoremCheck::Checked {
        ok,
        detail: BlockCoverDetail {
            blocks,
            all_subalgebras,
            all_mv,
            lattice_closed,
            covers,
        },
    })
}

/// Elements covering 0.
pub fn atoms(e: &EffectAlgebra) -> Vec<Element> {
    e.elements().filter(|&a| e.rank(a) == 2).collect()
}

/// All subfamily sums of a summable list.
pub fn subset_sums(e: &EffectAlgebra, parts: &[Element]) -> FixedBitSet {
    let mut sums = e.subset_bits(&[e.zero()]);
    for &p in parts {
        let current: Vec<usize> = sums.ones().collect();
        for s in current {
            if let Some(t) = e.plus(Element::new(s), p) {
                sums.insert(t.index());
            }
        }
    }
    sums
}

fn maximal_sets(mut sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones(..)));
    let mut kept: Vec<FixedBitSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept
}

/// Maximal internally compatible sets containing 1.
///
/// Such a set `M` refines into a summable list of its members with total 1,
/// and then `M` equals the set of all subfamily sums of that list (that set is
/// itself internally compatible). Splitting a part only enlarges the set of
/// subfamily sums, so the ic-blocks are the maximal sets of subfamily sums
/// of lists of atoms that sum to 1.
pub fn enumerate_ic_blocks(e: &EffectAlgebra, budget: &BlockBudget) -> Result<Vec<Block>> {
    if e.len() > budget.max_carrier {
        return Err(Error::BudgetExceeded {
            what: "ic-blocks",
            budget: budget.max_carrier as u64,
        });
    }
    let atoms = atoms(e);
    let mut found: HashSet<FixedBitSet> = HashSet::new();
    let mut lists = 0usize;
    fn go(
        e: &EffectAlgebra,
        atoms: &[Element],
        from: usize,
        total: Element,
        sums: &FixedBitSet,
        found: &mut HashSet<FixedBitSet>,
        lists: &mut usize,
        cap: usize,
    ) -> Result<()> {
        if total == e.one() {
            *lists += 1;
            if *lists > cap {
                return Err(Error::BudgetExceeded {
                    what: "ic-blocks",
                    budget: cap as u64,
                });
            }
            found.insert(sums.clone());
            return Ok(());
        }
        for k in from..atoms.len() {
            let p = atoms[k];
            let Some(next_total) = e.plus(total, p) else {
                continue;
            };
            let mut next = sums.clone();
            for s in sums.ones() {
                if let Some(t) = e.plus(Element::new(s), p) {
                    next.insert(t.index());
                }
            }
            go(e, atoms, k, next_total, &next, found, lists, cap)?;
        }
        Ok(())
    }
    let start = e.subset_bits(&[e.zero()]);
    go(
        e,
        &atoms,
        0,
        e.zero(),
        &start,
        &mut found,
        &mut lists,
        budget.max_candidates,
    )?;
    let sets = canonical(
        maximal_sets(found.into_iter().collect())
            .iter()
            .map(|s| e.sorted_subset(s))
            .collect(),
    );
    Ok(sets
        .into_iter()
        .map(|members| {
            let flags = flags_for(e, &members, &budget.scan);
            Block {
                members,
                kind: BlockKind::Ic,
                flags,
            }
        })
        .collect())
}

/// Every effect subalgebra, found by adding one generator at a time.
pub fn all_subalgebras(e: &EffectAlgebra, cap: usize) -> Result<Vec<FixedBitSet>> {
    let base = e.subset_bits(&subalgebra_generated(e, &[]));
    let mut seen: HashSet<FixedBitSet> = HashSet::from([base.clone()]);
    let mut frontier = vec![base];
    while let Some(s) = frontier.pop() {
        let mut complement = s.clone();
        complement.toggle_range(..);
        for x in complement.ones() {
            let mut seed = e.sorted_subset(&s);
            seed.push(Element::new(x));
            let t = e.subset_bits(&subalgebra_generated(e, &seed));
            if seen.insert(t.clone()) {
                if seen.len() > cap {
                    return Err(Error::BudgetExceeded {
                        what: "subalgebras",
                        budget: cap as u64,
                    });
                }
                frontier.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Maximal effect subalgebras with RDP. When `E` itself has RDP it is the only one.
pub fn enumerate_rdp_blocks(e: &EffectAlgebra, budget: &BlockBudget) -> Result<Vec<Block>> {
    if e.len() > budget.max_rdp_carrier {
        return Err(Error::BudgetExceeded {
            what: "RDP-blocks",
            budget: budget.max_rdp_carrier as u64,
        });
    }
    let exhaustive = ScanBudget {
        exhaustive: true,
        ..budget.scan.clone()
    };
    let whole: Vec<Element> = e.elements().collect();
    let sets = if check_rdp(e, &exhaustive).holds() {
        vec![whole]
    } else {
        let subs = all_subalgebras(e, budget.max_candidates)?;
        let with_rdp: Vec<FixedBitSet> = subs
            .into_par_iter()
            .filter(|s| {
                let sub = e.induced(&e.sorted_subset(s)).expect("generated subalgebra");
                check_rdp(&sub, &exhaustive).holds()
            })
            .collect();
        canonical(maximal_sets(with_rdp).iter().map(|s| e.sorted_subset(s)).collect())
    };
    Ok(sets
        .into_iter()
        .map(|members| {
            let flags = flags_for(e, &members, &budget.scan);
            Block {
                members,
                kind: BlockKind::Rdp,
                flags,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFamiliesDetail {
    pub ic_blocks: Vec<Block>,
    pub rdp_blocks: Vec<Block>,
    pub families_equal: bool,
    pub ic_cover: bool,
    pub rdp_cover: bool,
}

/// In a homogeneous effect algebra the ic-blocks are exactly the RDP-blocks,
/// and they cover the carrier.
pub fn verify_homogeneous_block_theorem(
    h: &Hypotheses,
    budget: &BlockBudget,
) -> Result<TheoremCheck<BlockFamiliesDetail>> {
    let e = h.algebra();
    if !h.holds(Property::Homogeneous) {
        return Ok(TheoremCheck::not_applicable("not homogeneous"));
    }
    let ic_blocks = enumerate_ic_blocks(e, budget)?;
    let rdp_blocks = enumerate_rdp_blocks(e, budget)?;
    let members = |bs: &[Block]| bs.iter().map(|b| b.members.clone()).collect::<Vec<_>>();
    let families_equal = members(&ic_blocks) == members(&rdp_blocks);
    let ic_cover = covers(e, &ic_blocks);
    let rdp_cover = covers(e, &rdp_blocks);
    let ok = families_equal && ic_cover && rdp_cover;
    Ok(TheoremCheck::Checked {
        ok,
        detail: BlockFamiliesDetail {
            ic_blocks,
            rdp_blocks,
            families_equal,
            ic_cover,
            rdp_cover,
        },
    })
}
