//! Slow reference decisions written straight from the definitions.
//!
//! Nothing here calls into the optimized modules: the only shared piece is
//! [`PartialTable`]. Order, differences, meets and joins are recomputed from
//! the table by scanning, and every quantifier is expanded literally.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, PartialTable};
use crate::error::{Error, Result};

/// Carrier cap for [`oracle_check`].
pub const ORACLE_MAX: usize = 64;
/// Carrier cap for [`oracle_blocks`].
pub const ORACLE_BLOCKS_MAX: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Query {
    Rdp,
    Rip,
    Dmp,
    Homogeneous,
    Lattice,
    Antilattice,
    Omp,
    Mv,
    Compat(String, String),
    Strong(String, String),
    Joint(Vec<String>),
    Internal(Vec<String>),
}

/// Splits on commas outside parentheses, so labels like `(2,3)` survive.
pub fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

impl FromStr for Query {
    type Err = Error;

    fn from_str(s: &str) -> Result<Query> {
        let s = s.trim();
        let (head, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(split_top(&s[i + 1..s.len() - 1]))),
            _ => (s, None),
        };
        let pair = |args: Option<Vec<String>>| match args.as_deref() {
            Some([a, b]) => Ok((a.clone(), b.clone())),
            _ => Err(Error::Parse(format!("query '{s}' needs two elements"))),
        };
        Ok(match head {
            "rdp" => Query::Rdp,
            "rip" => Query::Rip,
            "dmp" => Query::Dmp,
            "homog" | "homogeneous" => Query::Homogeneous,
            "lattice" => Query::Lattice,
            "antilattice" => Query::Antilattice,
            "omp" => Query::Omp,
            "mv" => Query::Mv,
            "compat" => {
                let (a, b) = pair(args)?;
                Query::Compat(a, b)
            }
            "strong" => {
                let (a, b) = pair(args)?;
                Query::Strong(a, b)
            }
            "joint" => Query::Joint(args.unwrap_or_default()),
            "internal" => Query::Internal(args.unwrap_or_default()),
            _ => return Err(Error::Parse(format!("unknown oracle query '{s}'"))),
        })
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Rdp => write!(f, "rdp"),
            Query::Rip => write!(f, "rip"),
            Query::Dmp => write!(f, "dmp"),
            Query::Homogeneous => write!(f, "homogeneous"),
            Query::Lattice => write!(f, "lattice"),
            Query::Antilattice => write!(f, "antilattice"),
            Query::Omp => write!(f, "omp"),
            Query::Mv => write!(f, "mv"),
            Query::Compat(a, b) => write!(f, "compat({a},{b})"),
            Query::Strong(a, b) => write!(f, "strong({a},{b})"),
            Query::Joint(s) => write!(f, "joint({})", s.join(",")),
            Query::Internal(s) => write!(f, "internal({})", s.join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub query: String,
    pub holds: bool,
    /// Tuples visited by the innermost loops.
    pub tuples: u64,
}

/// Table-derived helpers; every relation is found by scanning.
pub struct Oracle<'a> {
    t: &'a PartialTable,
    n: usize,
    leq: Vec<Vec<bool>>,
    ortho: Vec<usize>,
    meet: Vec<Vec<Option<usize>>>,
    join: Vec<Vec<Option<usize>>>,
    tuples: u64,
}

impl<'a> Oracle<'a> {
    pub fn new(t: &'a PartialTable) -> Result<Self> {
        let n = t.len();
        if n > ORACLE_MAX {
            return Err(Error::CarrierTooLarge {
                size: n,
                cap: ORACLE_MAX,
            });
        }
        let mut o = Oracle {
            t,
            n,
            leq: vec![],
            ortho: vec![],
            meet: vec![],
            join: vec![],
            tuples: 0,
        };
        // a <= b iff a + c = b for some c
        o.leq = (0..n)
            .map(|a| (0..n).map(|b| (0..n).any(|c| o.plus(a, c) == Some(b))).collect())
            .collect();
        let one = t.one().index();
        o.ortho = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| o.plus(a, b) == Some(one))
                    .ok_or_else(|| Error::Precondition("no orthosupplement".into()))
            })
            .collect::<Result<_>>()?;
        o.meet = (0..n).map(|a| (0..n).map(|b| o.bound(a, b, false)).collect()).collect();
        o.join = (0..n).map(|a| (0..n).map(|b| o.bound(a, b, true)).collect()).collect();
        Ok(o)
    }

    fn plus(&self, a: usize, b: usize) -> Option<usize> {
        self.t.get(Element::new(a), Element::new(b)).map(Element::index)
    }

    fn zero(&self) -> usize {
        self.t.zero().index()
    }

    fn one(&self) -> usize {
        self.t.one().index()
    }

    /// The greatest lower bound (or least upper bound) by its definition.
    fn bound(&self, a: usize, b: usize, upper: bool) -> Option<usize> {
        let rel = |x: usize, y: usize| {
            if upper {
                self.leq[y][x]
            } else {
                self.leq[x][y]
            }
        };
        let common: Vec<usize> = (0..self.n).filter(|&x| rel(x, a) && rel(x, b)).collect();
        common.iter().copied().find(|&m| common.iter().all(|&x| rel(x, m)))
    }

    /// The `c` with `a + c = b`.
    fn minus(&self, b: usize, a: usize) -> Option<usize> {
        (0..self.n).find(|&c| self.plus(a, c) == Some(b))
    }

    fn sum_of(&self, xs: &[usize]) -> Option<usize> {
        xs.iter().try_fold(self.zero(), |acc, &x| self.plus(acc, x))
    }

    pub fn rdp(&mut self) -> bool {
        self.rdp_within(&vec![true; self.n])
    }

    /// RDP of the partial operation restricted to `inside`.
    fn rdp_within(&mut self, inside: &[bool]) -> bool {
        let n = self.n;
        let els: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        let plus = |a: usize, b: usize| self.plus(a, b).filter(|&s| inside[s]);
        let mut tuples = 0;
        let mut holds = true;
        'outer: for &a1 in &els {
            for &a2 in &els {
                let Some(s) = plus(a1, a2) else { continue };
                for &b1 in &els {
                    for &b2 in &els {
                        if plus(b1, b2) != Some(s) {
                            continue;
                        }
                        let mut found = false;
                        'search: for &c11 in &els {
                            for &c12 in &els {
                                if plus(c11, c12) != Some(a1) {
                                    continue;
                                }
                                for &c21 in &els {
                                    if plus(c11, c21) != Some(b1) {
                                        continue;
                                    }
                                    for &c22 in &els {
                                        tuples += 1;
                                        if plus(c21, c22) == Some(a2) && plus(c12, c22) == Some(b2) {
                                            found = true;
                                            break 'search;
                                        }
                                    }
                                }
                            }
                        }
                        if !found {
                            holds = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        self.tuples += tuples;
        holds
    }

    pub fn rip(&mut self) -> bool {
        let n = self.n;
        for x1 in 0..n {
            for x2 in 0..n {
                for y1 in 0..n {
                    if !(self.leq[x1][y1] && self.leq[x2][y1]) {
                        continue;
                    }
                    for y2 in 0..n {
                        if !(self.leq[x1][y2] && self.leq[x2][y2]) {
                            continue;
                        }
                        self.tuples += n as u64;
                        let ok =
                            (0..n).any(|z| self.leq[x1][z] && self.leq[x2][z] && self.leq[z][y1] && self.leq[z][y2]);
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn dmp(&mut self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if !self.leq[x][y] {
                    continue;
                }
                let d = self.minus(y, x).expect("x <= y");
                for z in 0..n {
                    self.tuples += 1;
                    if self.meet[x][z].is_some() && self.meet[y][z].is_some() && self.meet[d][z].is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn homogeneous(&mut self) -> bool {
        let n = self.n;
        for b in 0..n {
            for c in 0..n {
                let Some(s) = self.plus(b, c) else { continue };
                let s_perp = self.ortho[s];
                for a in 0..n {
                    if !(self.leq[a][s] && self.leq[a][s_perp]) {
                        continue;
                    }
                    let mut ok = false;
                    'split: for a1 in 0..n {
                        if !self.leq[a1][b] {
                            continue;
                        }
                        for a2 in 0..n {
                            self.tuples += 1;
                            if self.leq[a2][c] && self.plus(a1, a2) == Some(a) {
                                ok = true;
                                break 'split;
                            }
                        }
                    }
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn lattice(&mut self) -> bool {
        self.tuples += (self.n * self.n) as u64;
        (0..self.n).all(|a| (0..self.n).all(|b| self.meet[a][b].is_some() && self.join[a][b].is_some()))
    }

    pub fn antilattice(&mut self) -> bool {
        self.tuples += (self.n * self.n) as u64;
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let comparable = self.leq[a][b] || self.leq[b][a];
                self.meet[a][b].is_some() == comparable && self.join[a][b].is_some() == comparable
            })
        })
    }

    pub fn omp(&mut self) -> bool {
        let n = self.n;
        self.tuples += (n * n) as u64;
        let involution = (0..n).all(|a| self.ortho[self.ortho[a]] == a);
        let antitone = (0..n).all(|a| (0..n).all(|b| !self.leq[a][b] || self.leq[self.ortho[b]][self.ortho[a]]));
        let orthogonal_join = (0..n).all(|a| (0..n).all(|b| !self.leq[a][self.ortho[b]] || self.join[a][b].is_some()));
        let excluded_middle = (0..n).all(|a| self.join[a][self.ortho[a]] == Some(self.one()));
        let orthomodular = (0..n).all(|a| {
            (0..n).all(|b| {
                !self.leq[a][b] || self.join[a][self.ortho[b]].and_then(|j| self.join[a][self.ortho[j]]) == Some(b)
            })
        });
        involution && antitone && orthogonal_join && excluded_middle && orthomodular
    }

    pub fn mv(&mut self) -> bool {
        if !self.lattice() {
            return false;
        }
        let n = self.n;
        self.tuples += (n * n) as u64;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let j = self.join[x][y].expect("lattice");
                let m = self.meet[x][y].expect("lattice");
                self.minus(j, y) == self.minus(x, m)
            })
        })
    }

    /// `a = a1 + c`, `b = b1 + c`, `a1 + b1 + c` defined, and for the strong
    /// version `a1 ^ b1 = 0`.
    pub fn compat(&mut self, a: usize, b: usize, strong: bool) -> bool {
        let n = self.n;
        for c in 0..n {
            for a1 in 0..n {
                if self.plus(a1, c) != Some(a) {
                    continue;
                }
                for b1 in 0..n {
                    self.tuples += 1;
                    if self.plus(b1, c) == Some(b)
                        && self.sum_of(&[a1, b1, c]).is_some()
                        && (!strong || self.meet[a1][b1] == Some(self.zero()))
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Every summable multiset of nonzero elements drawn from `pool`, as the
    /// set (bitmask) of its subset sums together with the set of its parts.
    fn refinements(&mut self, pool: &[usize]) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        self.grow(pool, 0, self.zero(), &mut parts, &mut out);
        out
    }

    fn grow(&mut self, pool: &[usize], from: usize, sum: usize, parts: &mut Vec<usize>, out: &mut Vec<(u64, u64)>) {
        self.tuples += 1;
        let mut sums: u64 = 1 << self.zero();
        for &c in parts.iter() {
            let mut next = sums;
            for s in 0..self.n {
                if sums >> s & 1 == 1 {
                    let t = self.plus(s, c).expect("subsum of a summable family");
                    next |= 1 << t;
                }
            }
            sums = next;
        }
        let part_mask = parts.iter().fold(0u64, |m, &c| m | 1 << c);
        out.push((sums, part_mask));
        for i in from..pool.len() {
            let c = pool[i];
            if let Some(s) = self.plus(sum, c) {
                parts.push(c);
                self.grow(pool, i, s, parts, out);
                parts.pop();
            }
        }
    }

    /// Some summable list has every target among its subset sums.
    pub fn joint(&mut self, targets: &[usize]) -> bool {
        let pool: Vec<usize> = (0..self.n).filter(|&x| x != self.zero()).collect();
        let want = targets.iter().fold(0u64, |m, &t| m | 1 << t);
        self.refinements(&pool).iter().any(|(sums, _)| sums & want == want)
    }

    /// Every subset of `m` is refined by a summable list of members of `m`.
    pub fn internal(&mut self, m: &[usize]) -> Result<bool> {
        if m.len() > 16 {
            return Err(Error::InvalidArgument("oracle handles at most 16 members".into()));
        }
        let pool: Vec<usize> = m.iter().copied().filter(|&x| x != self.zero()).collect();
        let refinements = self.refinements(&pool);
        for sub in 0..1u32 << m.len() {
            let want = (0..m.len())
                .filter(|i| sub >> i & 1 == 1)
                .fold(0u64, |w, i| w | 1 << m[i]);
            self.tuples += 1;
            if !refinements.iter().any(|(sums, _)| sums & want == want) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn resolve(labels: &[String], label: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown element '{label}'")))
}

/// Answers `query` on the algebra given by `table` and element `labels`.
pub fn oracle_check(table: &PartialTable, labels: &[String], query: &Query) -> Result<OracleVerdict> {
    let mut o = Oracle::new(table)?;
    let ids = |xs: &[String]| xs.iter().map(|x| resolve(labels, x)).collect::<Result<Vec<_>>>();
    let holds = match query {
        Query::Rdp => o.rdp(),
        Query::Rip => o.rip(),
        Query::Dmp => o.dmp(),
        Query::Homogeneous => o.homogeneous(),
        Query::Lattice => o.lattice(),
        Query::Antilattice => o.antilattice(),
        Query::Omp => o.omp(),
        Query::Mv => o.mv(),
        Query::Compat(a, b) => o.compat(resolve(labels, a)?, resolve(labels, b)?, false),
        Query::Strong(a, b) => o.compat(resolve(labels, a)?, resolve(labels, b)?, true),
        Query::Joint(xs) => o.joint(&ids(xs)?),
        Query::Internal(xs) => o.internal(&ids(xs)?)?,
    };
    Ok(OracleVerdict {
        query: query.to_string(),
        holds,
        tuples: o.tuples,
    })
}

/// Block families found by filtering subsets, each family sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBlocks {
    pub strong: Vec<Vec<usize>>,
    pub ic: Vec<Vec<usize>>,
    pub rdp: Vec<Vec<usize>>,
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

fn maximal(sets: Vec<u32>) -> Vec<u32> {
    let mut out: Vec<u32> = sets
        .iter()
        .copied()
        .filter(|&s| !sets.iter().any(|&t| t != s && t & s == s))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn family(sets: Vec<u32>, n: usize) -> Vec<Vec<usize>> {
    let mut f: Vec<Vec<usize>> = maximal(sets).into_iter().map(|m| members(m, n)).collect();
    f.sort();
    f
}

/// Maximal sets of mutually strongly compatible elements, maximal
/// internally compatible sets, and maximal subalgebras with RDP.
///
/// Internally compatible sets are exactly the sets lying between the parts
/// and the subset sums of one summable list of their members, so the
/// candidates are those subset-sum sets rather than all `2^n` subsets.
pub fn oracle_blocks(table: &PartialTable) -> Result<OracleBlocks> {
    let n = table.len();
    if n > ORACLE_BLOCKS_MAX {
        return Err(Error::CarrierTooLarge {
            size: n,
            cap: ORACLE_BLOCKS_MAX,
        });
    }
    let mut o = Oracle::new(table)?;
    let mut adj = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if o.compat(a, b, true) {
                adj[a] |= 1 << b;
            }
        }
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let cliques: Vec<u32> = (1..=full)
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || adj[i] & s == s))
        .collect();
    let strong = family(cliques, n);

    let pool: Vec<usize> = (0..n).filter(|&x| x != o.zero()).collect();
    let ic_sets: Vec<u32> = o.refinements(&pool).into_iter().map(|(sums, _)| sums as u32).collect();
    let ic = family(ic_sets, n);

    let (zero, one) = (o.zero(), o.one());
    let mut subalgebras = Vec::new();
    for s in 0..=full {
        if s >> zero & 1 == 0 || s >> one & 1 == 0 {
            continue;
        }
        let closed = (0..n).all(|a| {
            s >> a & 1 == 0
                || (s >> o.ortho[a] & 1 == 1
                    && (0..n).all(|b| s >> b & 1 == 0 || o.plus(a, b).map_or(true, |c| s >> c & 1 == 1)))
        });
        if closed {
            let inside: Vec<bool> = (0..n).map(|i| s >> i & 1 == 1).collect();
            if o.rdp_within(&inside) {
                subalgebras.push(s);
            }
        }
    }
    let rdp = family(subalgebras, n);
    Ok(OracleBlocks { strong, ic, rdp })
}
