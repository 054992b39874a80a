//! Finite effect algebras.
//!
//! An effect algebra is stored as a dense `n x n` table of the partial
//! addition with a reserved marker for "undefined". Every derived notion
//! (order, orthosupplement, difference, meets and joins) is computed once from
//! the table when the algebra is assembled, so the value is immutable and can be
//! shared freely between threads.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::{Plan, ScanBudget};

/// Marker for an undefined sum in the dense table.
pub const UNDEFINED: u16 = u16::MAX;

/// Carriers larger than this are refused unless the caller opts in.
pub const SOFT_CARRIER_CAP: usize = 16_384;

/// Largest carrier the `u16` table encoding can hold.
pub const HARD_CARRIER_CAP: usize = UNDEFINED as usize;

/// Above this size meets and joins are computed per query instead of tabulated.
const LATTICE_TABLE_MAX: usize = 1024;

/// A member of the carrier, identified by its dense index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element(u32);

impl Element {
    pub fn new(index: usize) -> Self {
        Element(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The dense partial addition table together with the two constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTable {
    n: usize,
    zero: u32,
    one: u32,
    cells: Vec<u16>,
}

impl PartialTable {
    /// An empty table (no sums defined, not even the zero rules).
    pub fn new(n: usize, zero: usize, one: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Structural(format!("carrier needs at least 2 elements, got {n}")));
        }
        if n > HARD_CARRIER_CAP {
            return Err(Error::CarrierTooLarge {
                size: n,
                cap: HARD_CARRIER_CAP,
            });
        }
        if zero >= n || one >= n {
            return Err(Error::Structural("zero or one out of range".into()));
        }
        if zero == one {
            return Err(Error::Structural("zero and one must differ".into()));
        }
        Ok(PartialTable {
            n,
            zero: zero as u32,
            one: one as u32,
            cells: vec![UNDEFINED; n * n],
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn zero(&self) -> Element {
        Element(self.zero)
    }

    pub fn one(&self) -> Element {
        Element(self.one)
    }

    #[inline]
    pub fn get(&self, a: Element, b: Element) -> Option<Element> {
        let v = self.cells[a.index() * self.n + b.index()];
        (v != UNDEFINED).then_some(Element(v as u32))
    }

    /// Sets a single (ordered) cell, overwriting whatever was there.
    pub fn set(&mut self, a: Element, b: Element, sum: Option<Element>) {
        let v = sum.map_or(UNDEFINED, |s| s.0 as u16);
        self.cells[a.index() * self.n + b.index()] = v;
    }

    /// Records `a + b = c` and `b + a = c`; a different existing entry is a conflict.
    pub fn insert_symmetric(&mut self, a: Element, b: Element, c: Element) -> Result<()> {
        for (x, y) in [(a, b), (b, a)] {
            match self.get(x, y) {
                Some(old) if old != c => {
                    return Err(Error::Structural(format!(
                        "conflicting entries for {} + {}: {} and {}",
                        x.0, y.0, old.0, c.0
                    )))
                }
                _ => self.set(x, y, Some(c)),
            }
        }
        Ok(())
    }

    /// Adds the forced rules `0 + x = x = x + 0`.
    pub fn complete_zero_rules(&mut self) -> Result<()> {
        let z = self.zero();
        for x in (0..self.n).map(Element::new) {
            self.insert_symmetric(z, x, x)?;
        }
        Ok(())
    }

    /// The defined entries of row `a` as `(b, a + b)` pairs.
    pub fn row(&self, a: Element) -> impl Iterator<Item = (Element, Element)> + '_ {
        let base = a.index() * self.n;
        self.cells[base..base + self.n]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != UNDEFINED)
            .map(|(b, &v)| (Element::new(b), Element(v as u32)))
    }

    pub fn defined_count(&self) -> u64 {
        self.cells.iter().filter(|&&v| v != UNDEFINED).count() as u64
    }
}

/// Raw partial addition data as read from a file: labels and `a + b = c` triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTable {
    pub name: String,
    pub elements: Vec<String>,
    pub zero: String,
    pub one: String,
    pub plus: Vec<[String; 3]>,
}

impl RawTable {
    /// Resolves labels, applies commutative closure and the zero rules.
    pub fn to_table(&self) -> Result<(Vec<String>, PartialTable)> {
        let mut index = HashMap::with_capacity(self.elements.len());
        for (i, l) in self.elements.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::Structural(format!("duplicate element label {l:?}")));
            }
        }
        let look = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::Structural(format!("unknown element label {l:?}")))
        };
        let mut table = PartialTable::new(self.elements.len(), look(&self.zero)?, look(&self.one)?)?;
        for [a, b, c] in &self.plus {
            let (a, b, c) = (look(a)?, look(b)?, look(c)?);
            table.insert_symmetric(Element::new(a), Element::new(b), Element::new(c))?;
        }
        table.complete_zero_rules()?;
        Ok((self.elements.clone(), table))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// (i) `a + b` defined iff `b + a` defined, and then equal.
    Commutativity,
    /// (ii) the associativity clause.
    Associativity,
    /// (iii) unique orthosupplement.
    Orthosupplement,
    /// (iv) `a + 1` defined only for `a = 0`.
    ZeroOne,
    /// `a + b = a + c` implies `b = c`; a consequence of (i)-(iv), checked
    /// separately because differences are read off the table.
    Cancellation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Element>,
    pub message: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// How the associativity clause was covered; every other clause is always exhaustive.
    pub associativity: Coverage,
}

impl ValidationReport {
    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn summary(&self) -> String {
        if self.ok {
            return "ok".into();
        }
        self.violations
            .iter()
            .map(|v| v.message.as_str())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Outcome of [`validate_axioms`]: the report, and the algebra when it is ok.
#[derive(Debug)]
pub struct Validation {
    pub report: ValidationReport,
    pub algebra: Option<EffectAlgebra>,
}

/// Checks the raw data against the four axioms. Malformed input (unknown
/// labels, conflicting triples) is an `Err`; axiom failures are reported.
pub fn validate_axioms(raw: &RawTable) -> Result<Validation> {
    let (labels, table) = raw.to_table()?;
    let report = validate_table(&table, &ScanBudget::default());
    let algebra = if report.ok {
        Some(EffectAlgebra::assemble_validated(
            raw.name.clone(),
            labels,
            table,
            report.clone(),
        )?)
    } else {
        None
    };
    Ok(Validation { report, algebra })
}

/// Checks every axiom on a dense table, recording the lexicographically
/// smallest witness per violated axiom.
pub fn validate_table(table: &PartialTable, budget: &ScanBudget) -> ValidationReport {
    let n = table.len();
    let el = Element::new;
    let one = table.one();
    let zero = table.zero();
    let mut violations = Vec::new();

    // (i)
    'comm: for a in 0..n {
        for b in a + 1..n {
            if table.get(el(a), el(b)) != table.get(el(b), el(a)) {
                violations.push(Violation {
                    axiom: Axiom::Commutativity,
                    witness: vec![el(a), el(b)],
                    message: format!("{a} + {b} and {b} + {a} disagree"),
                });
                break 'comm;
            }
        }
    }

    // (iii)
    for a in 0..n {
        let complements: Vec<Element> = table.row(el(a)).filter(|&(_, s)| s == one).map(|(b, _)| b).collect();
        if complements.len() != 1 {
            let mut witness = vec![el(a)];
            witness.extend(&complements);
            violations.push(Violation {
                axiom: Axiom::Orthosupplement,
                witness,
                message: format!("element {a} has {} orthosupplements", complements.len()),
            });
            break;
        }
    }

    // (iv)
    for a in 0..n {
        if el(a) != zero && (table.get(el(a), one).is_some() || table.get(one, el(a)).is_some()) {
            violations.push(Violation {
                axiom: Axiom::ZeroOne,
                witness: vec![el(a)],
                message: format!("{a} + 1 is defined for a nonzero element"),
            });
            break;
        }
    }

    // (ii)
    let defined = table.defined_count();
    let assoc_violation = |a: Element, b: Element, c: Element| -> bool {
        let lhs = table.get(a, b).and_then(|d| table.get(d, c));
        let rhs = table.get(b, c).and_then(|e| table.get(a, e));
        lhs != rhs
    };
    let coverage = match budget.plan(defined.saturating_mul(2 * n as u64)) {
        Plan::Exhaustive => {
            let rows: Vec<Vec<Element>> = (0..n).map(|a| table.row(el(a)).map(|(b, _)| b).collect()).collect();
            // Only `c` with `(a+b)+c` or `b+c` defined can differ.
            let hit = (0..n).into_par_iter().find_map_first(|a| {
                for b in 0..n {
                    let mut best: Option<usize> = None;
                    let mut consider = |c: Element| {
                        if assoc_violation(el(a), el(b), c) && best.map_or(true, |x| c.index() < x) {
                            best = Some(c.index());
                        }
                    };
                    if let Some(d) = table.get(el(a), el(b)) {
                        rows[d.index()].iter().for_each(|&c| consider(c));
                    }
                    rows[b].iter().for_each(|&c| consider(c));
                    if let Some(c) = best {
                        return Some([el(a), el(b), el(c)]);
                    }
                }
                None
            });
            if let Some(w) = hit {
                violations.push(assoc_message(w));
            }
            Coverage::Exhaustive
        }
        Plan::Sampled(samples) => {
            // Rejection sampling keeps memory at the size of the table.
            let mut rng = budget.rng(0xA550C);
            let defined_pair = |rng: &mut rand_chacha::ChaCha8Rng| loop {
                let (a, b) = (el(rng.gen_range(0..n)), el(rng.gen_range(0..n)));
                if let Some(d) = table.get(a, b) {
                    return (a, b, d);
                }
            };
            if defined > 0 {
                for _ in 0..samples {
                    let (a, b, d) = defined_pair(&mut rng);
                    let mut c = el(rng.gen_range(0..n));
                    if rng.gen_bool(0.5) {
                        for _ in 0..64 {
                            if table.get(d, c).is_some() {
                                break;
                            }
                            c = el(rng.gen_range(0..n));
                        }
                    }
                    if assoc_violation(a, b, c) {
                        violations.push(assoc_message([a, b, c]));
                        break;
                    }
                }
            }
            Coverage::Sampled
        }
    };

    // cancellation
    let mut seen = vec![u64::MAX; n];
    'canc: for a in 0..n {
        for (b, s) in table.row(el(a)) {
            let prev = seen[s.index()];
            if prev != u64::MAX && prev as usize / n == a {
                let b0 = prev as usize % n;
                violations.push(Violation {
                    axiom: Axiom::Cancellation,
                    witness: vec![el(a), el(b0), b],
                    message: format!("{a} + {b0} = {a} + {} = {}", b.index(), s.index()),
                });
                break 'canc;
            }
            seen[s.index()] = (a * n + b.index()) as u64;
        }
    }

    violations.sort_by_key(|v| v.axiom);
    ValidationReport {
        ok: violations.is_empty(),
        violations,
        associativity: coverage,
    }
}

fn assoc_message(w: [Element; 3]) -> Violation {
    let [a, b, c] = w.map(|e| e.index());
    Violation {
        axiom: Axiom::Associativity,
        witness: w.to_vec(),
        message: format!("({a} + {b}) + {c} and {a} + ({b} + {c}) disagree"),
    }
}

struct LatticeTables {
    meet: Vec<u16>,
    join: Vec<u16>,
}

/// A validated finite effect algebra with its derived order structure.
pub struct EffectAlgebra {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, Element>,
    table: PartialTable,
    ortho: Vec<Element>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    below_count: Vec<u32>,
    above_count: Vec<u32>,
    report: ValidationReport,
    lattice: OnceLock<Option<LatticeTables>>,
}

impl fmt::Debug for EffectAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EffectAlgebra")
            .field("name", &self.name)
            .field("n", &self.len())
            .finish()
    }
}

impl Clone for EffectAlgebra {
    fn clone(&self) -> Self {
        EffectAlgebra {
            name: self.name.clone(),
            labels: self.labels.clone(),
            index: self.index.clone(),
            table: self.table.clone(),
            ortho: self.ortho.clone(),
            up: self.up.clone(),
            down: self.down.clone(),
            below_count: self.below_count.clone(),
            above_count: self.above_count.clone(),
            report: self.report.clone(),
            lattice: OnceLock::new(),
        }
    }
}

impl EffectAlgebra {
    /// Validates a dense table and assembles the algebra, failing with
    /// [`Error::Axioms`] on any violation.
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, table: PartialTable) -> Result<Self> {
        Self::from_table_with_budget(name, labels, table, &ScanBudget::default())
    }

    pub fn from_table_with_budget(
        name: impl Into<String>,
        labels: Vec<String>,
        table: PartialTable,
        budget: &ScanBudget,
    ) -> Result<Self> {
        if labels.len() != table.len() {
            return Err(Error::Structural("label count does not match table size".into()));
        }
        let report = validate_table(&table, budget);
        if !report.ok {
            return Err(Error::Axioms(Box::new(report)));
        }
        Self::assemble_validated(name.into(), labels, table, report)
    }

    pub fn from_raw(raw: &RawTable) -> Result<Self> {
        let v = validate_axioms(raw)?;
        v.algebra.ok_or_else(|| Error::Axioms(Box::new(v.report)))
    }

    fn assemble_validated(
        name: String,
        labels: Vec<String>,
        table: PartialTable,
        report: ValidationReport,
    ) -> Result<Self> {
        let n = table.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), Element::new(i)).is_some() {
                return Err(Error::Structural(format!("duplicate element label {l:?}")));
            }
        }
        let one = table.one();
        let ortho: Vec<Element> = (0..n)
            .map(|a| {
                table
                    .row(Element::new(a))
                    .find(|&(_, s)| s == one)
                    .map(|(b, _)| b)
                    .unwrap()
            })
            .collect();
        let up: Vec<FixedBitSet> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut set = FixedBitSet::with_capacity(n);
                for (_, s) in table.row(Element::new(a)) {
                    set.insert(s.index());
                }
                set
            })
            .collect();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, ups) in up.iter().enumerate() {
            for b in ups.ones() {
                down[b].insert(a);
            }
        }
        let below_count = down.iter().map(|s| s.count_ones(..) as u32).collect();
        let above_count = up.iter().map(|s| s.count_ones(..) as u32).collect();
        Ok(EffectAlgebra {
            name,
            labels,
            index,
            table,
            ortho,
            up,
            down,
            below_count,
            above_count,
            report,
            lattice: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> Element {
        self.table.zero()
    }

    pub fn one(&self) -> Element {
        self.table.one()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Element> + ExactSizeIterator {
        (0..self.len()).map(Element::new)
    }

    pub fn table(&self) -> &PartialTable {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    pub fn label(&self, e: Element) -> &str {
        &self.labels[e.index()]
    }

    pub fn element(&self, label: &str) -> Option<Element> {
        self.index.get(label).copied()
    }

    /// Looks up a label, panicking when it is absent. Meant for tests and examples.
    pub fn el(&self, label: &str) -> Element {
        self.element(label)
            .unwrap_or_else(|| panic!("no element labelled {label:?} in {}", self.name))
    }

    pub fn element_or_err(&self, label: &str) -> Result<Element> {
        self.element(label)
            .ok_or_else(|| Error::InvalidArgument(format!("no element labelled {label:?} in {}", self.name)))
    }

    #[inline]
    pub fn plus(&self, a: Element, b: Element) -> Option<Element> {
        self.table.get(a, b)
    }

    #[inline]
    pub fn ortho(&self, a: Element) -> Element {
        self.ortho[a.index()]
    }

    #[inline]
    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.up[a.index()].contains(b.index())
    }

    pub fn lt(&self, a: Element, b: Element) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: Element, b: Element) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{b : a <= b}`.
    pub fn up_set(&self, a: Element) -> &FixedBitSet {
        &self.up[a.index()]
    }

    /// `{b : b <= a}`.
    pub fn down_set(&self, a: Element) -> &FixedBitSet {
        &self.down[a.index()]
    }

    /// Number of elements below `a`; strictly monotone along the order.
    pub fn rank(&self, a: Element) -> usize {
        self.below_count[a.index()] as usize
    }

    /// `b - a`, the unique `c` with `a + c = b`.
    pub fn diff(&self, b: Element, a: Element) -> Result<Element> {
        if !self.leq(a, b) {
            return Err(Error::NotBelow { below: a, above: b });
        }
        Ok(self.diff_unchecked(b, a))
    }

    /// `b - a` computed as `(a + b')'`; only meaningful when `a <= b`.
    #[inline]
    pub(crate) fn diff_unchecked(&self, b: Element, a: Element) -> Element {
        let s = self.plus(a, self.ortho(b)).expect("a <= b implies a + b' defined");
        self.ortho(s)
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, a: Element, b: Element) -> Option<Element> {
        if let Some(t) = self.lattice_tables() {
            let v = t.meet[a.index() * self.len() + b.index()];
            return (v != UNDEFINED).then_some(Element(v as u32));
        }
        self.meet_direct(a, b)
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, a: Element, b: Element) -> Option<Element> {
        if let Some(t) = self.lattice_tables() {
            let v = t.join[a.index() * self.len() + b.index()];
            return (v != UNDEFINED).then_some(Element(v as u32));
        }
        self.join_direct(a, b)
    }

    fn meet_direct(&self, a: Element, b: Element) -> Option<Element> {
        if self.leq(a, b) {
            return Some(a);
        }
        if self.leq(b, a) {
            return Some(b);
        }
        let mut lower = self.down[a.index()].clone();
        lower.intersect_with(&self.down[b.index()]);
        greatest(&lower, &self.below_count, &self.down)
    }

    fn join_direct(&self, a: Element, b: Element) -> Option<Element> {
        if self.leq(a, b) {
            return Some(b);
        }
        if self.leq(b, a) {
            return Some(a);
        }
        let mut upper = self.up[a.index()].clone();
        upper.intersect_with(&self.up[b.index()]);
        greatest(&upper, &self.above_count, &self.up)
    }

    /// Least upper bound of a finite set; the empty set has join 0.
    pub fn join_of(&self, xs: &[Element]) -> Option<Element> {
        let mut upper = FixedBitSet::with_capacity(self.len());
        upper.insert_range(..);
        for &x in xs {
            upper.intersect_with(&self.up[x.index()]);
        }
        greatest(&upper, &self.above_count, &self.up)
    }

    /// Greatest lower bound of a finite set; the empty set has meet 1.
    pub fn meet_of(&self, xs: &[Element]) -> Option<Element> {
        let mut lower = FixedBitSet::with_capacity(self.len());
        lower.insert_range(..);
        for &x in xs {
            lower.intersect_with(&self.down[x.index()]);
        }
        greatest(&lower, &self.below_count, &self.down)
    }

    fn lattice_tables(&self) -> Option<&LatticeTables> {
        self.lattice
            .get_or_init(|| {
                let n = self.len();
                if n > LATTICE_TABLE_MAX {
                    return None;
                }
                let enc = |x: Option<Element>| x.map_or(UNDEFINED, |e| e.0 as u16);
                let rows: Vec<(Vec<u16>, Vec<u16>)> = (0..n)
                    .into_par_iter()
                    .map(|a| {
                        let a = Element::new(a);
                        let meets = self.elements().map(|b| enc(self.meet_direct(a, b))).collect();
                        let joins = self.elements().map(|b| enc(self.join_direct(a, b))).collect();
                        (meets, joins)
                    })
                    .collect();
                let mut meet = Vec::with_capacity(n * n);
                let mut join = Vec::with_capacity(n * n);
                for (m, j) in rows {
                    meet.extend(m);
                    join.extend(j);
                }
                Some(LatticeTables { meet, join })
            })
            .as_ref()
    }

    /// Whether every left-to-right partial sum is defined.
    pub fn is_summable(&self, family: &[Element]) -> bool {
        self.sum_family(family).is_ok()
    }

    /// Sum of a finite family; the empty family sums to zero.
    pub fn sum_family(&self, family: &[Element]) -> Result<Element> {
        let mut acc = self.zero();
        for (i, &x) in family.iter().enumerate() {
            acc = self.plus(acc, x).ok_or_else(|| Error::NotSummable {
                prefix: family[..=i].to_vec(),
            })?;
        }
        Ok(acc)
    }

    /// Members sorted by index.
    pub fn sorted_subset(&self, s: &FixedBitSet) -> Vec<Element> {
        s.ones().map(Element::new).collect()
    }

    pub fn subset_bits(&self, s: &[Element]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for e in s {
            bits.insert(e.index());
        }
        bits
    }

    pub fn labels_of(&self, s: &[Element]) -> Vec<String> {
        s.iter().map(|&e| self.label(e).to_string()).collect()
    }

    /// The effect subalgebra on `members` as an algebra in its own right, with
    /// elements in the given order. `members` must be closed under `'` and `+`.
    pub fn induced(&self, members: &[Element]) -> Result<EffectAlgebra> {
        if !is_effect_subalgebra(self, members) {
            return Err(Error::Precondition("subset is not an effect subalgebra".into()));
        }
        let mut pos = vec![u32::MAX; self.len()];
        for (i, m) in members.iter().enumerate() {
            if pos[m.index()] != u32::MAX {
                return Err(Error::InvalidArgument("duplicate member".into()));
            }
            pos[m.index()] = i as u32;
        }
        let map = |e: Element| Element(pos[e.index()]);
        let mut table = PartialTable::new(members.len(), map(self.zero()).index(), map(self.one()).index())?;
        for &a in members {
            for &b in members {
                table.set(map(a), map(b), self.plus(a, b).map(map));
            }
        }
        let labels = members.iter().map(|&m| self.label(m).to_string()).collect();
        let report = validate_table(&table, &ScanBudget::default());
        if !report.ok {
            return Err(Error::Axioms(Box::new(report)));
        }
        Self::assemble_validated(format!("{}|sub", self.name), labels, table, report)
    }
}

/// The greatest member of `set` with respect to the order given by `below`,
/// using `count` (the size of each down-set) to pick the only possible candidate.
fn greatest(set: &FixedBitSet, count: &[u32], below: &[FixedBitSet]) -> Option<Element> {
    let mut best: Option<usize> = None;
    let mut tie = false;
    for x in set.ones() {
        match best {
            None => best = Some(x),
            Some(b) if count[x] > count[b] => {
                best = Some(x);
                tie = false;
            }
            Some(b) if count[x] == count[b] => tie = true,
            _ => {}
        }
    }
    let b = best?;
    if tie || !set.is_subset(&below[b]) {
        return None;
    }
    Some(Element::new(b))
}

/// Whether `map` (indexed by `e`'s elements) is an effect-algebra homomorphism into `f`.
pub fn is_homomorphism(e: &EffectAlgebra, f: &EffectAlgebra, map: &[Element]) -> bool {
    if map.len() != e.len() || map.iter().any(|m| m.index() >= f.len()) {
        return false;
    }
    if map[e.one().index()] != f.one() {
        return false;
    }
    e.elements().all(|a| {
        e.table
            .row(a)
            .all(|(b, s)| f.plus(map[a.index()], map[b.index()]) == Some(map[s.index()]))
    })
}

/// Contains 0 and 1, closed under `'` and under every defined `+`.
pub fn is_effect_subalgebra(e: &EffectAlgebra, subset: &[Element]) -> bool {
    let bits = e.subset_bits(subset);
    if !bits.contains(e.zero().index()) || !bits.contains(e.one().index()) {
        return false;
    }
    bits.ones().all(|a| {
        let a = Element::new(a);
        bits.contains(e.ortho(a).index())
            && bits
                .ones()
                .all(|b| e.plus(a, Element::new(b)).map_or(true, |s| bits.contains(s.index())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(elements: &[&str], plus: &[[&str; 3]]) -> RawTable {
        RawTable {
            name: "t".into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            zero: elements[0].to_string(),
            one: elements[elements.len() - 1].to_string(),
            plus: plus.iter().map(|t| t.map(String::from)).collect(),
        }
    }

    fn l3() -> EffectAlgebra {
        EffectAlgebra::from_raw(&raw(&["0", "h", "1"], &[["h", "h", "1"]])).unwrap()
    }

    #[test]
    fn two_element_boolean_is_ok() {
        let v = validate_axioms(&raw(&["0", "1"], &[["0", "1", "1"], ["1", "0", "1"]])).unwrap();
        assert!(v.report.ok);
        assert_eq!(v.algebra.unwrap().len(), 2);
    }

    #[test]
    fn three_chain_order_and_difference() {
        let e = l3();
        let (z, h, o) = (e.el("0"), e.el("h"), e.el("1"));
        assert!(e.leq(h, o));
        assert!(e.elements().all(|x| e.leq(z, x)));
        assert_eq!(e.ortho(h), h);
        assert_eq!(e.ortho(z), o);
        assert_eq!(e.ortho(o), z);
        assert_eq!(e.diff(o, h).unwrap(), h);
        assert_eq!(e.diff(h, z).unwrap(), h);
        assert_eq!(e.diff(o, h).unwrap(), e.ortho(h));
        assert!(matches!(e.diff(z, h), Err(Error::NotBelow { .. })));
        assert_eq!(e.meet(h, o), Some(h));
        assert_eq!(e.join(h, z), Some(h));
        assert_eq!(e.join_of(&[]), Some(z));
        assert_eq!(e.meet_of(&[]), Some(o));
        assert_eq!(e.join_of(&[z, h]), Some(h));
    }

    #[test]
    fn second_orthosupplement_is_reported() {
        let v = validate_axioms(&raw(
            &["0", "a", "b", "c", "1"],
            &[["a", "b", "1"], ["a", "c", "1"], ["b", "c", "1"]],
        ))
        .unwrap();
        assert!(!v.report.ok);
        let o = v
            .report
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::Orthosupplement)
            .unwrap();
        assert_eq!(o.witness[0], Element::new(1));
        assert!(v.algebra.is_none());
    }

    #[test]
    fn conflicting_triples_are_structural() {
        let r = raw(&["0", "h", "1"], &[["h", "h", "1"], ["h", "h", "h"]]);
        assert!(matches!(validate_axioms(&r), Err(Error::Structural(_))));
        let r = raw(&["0", "h", "1"], &[["0", "h", "1"]]);
        assert!(matches!(validate_axioms(&r), Err(Error::Structural(_))));
        let r = raw(&["0", "h", "1"], &[["h", "x", "1"]]);
        assert!(matches!(validate_axioms(&r), Err(Error::Structural(_))));
    }

    #[test]
    fn zero_one_law_violation() {
        let v = validate_axioms(&raw(&["0", "h", "1"], &[["h", "h", "1"], ["h", "1", "1"]])).unwrap();
        assert!(v.report.violated(Axiom::ZeroOne));
    }

    #[test]
    fn associativity_violation_in_five_chain() {
        // 1/4 + 1/4 = 3/4 instead of 1/2
        let v = validate_axioms(&raw(
            &["0", "q", "h", "t", "1"],
            &[["q", "q", "t"], ["q", "h", "t"], ["q", "t", "1"], ["h", "h", "1"]],
        ))
        .unwrap();
        assert!(v.report.violated(Axiom::Associativity));
        assert!(v.report.violated(Axiom::Cancellation));
    }

    #[test]
    fn summability() {
        let e = l3();
        let h = e.el("h");
        assert_eq!(e.sum_family(&[]).unwrap(), e.zero());
        assert_eq!(e.sum_family(&[h, e.ortho(h)]).unwrap(), e.one());
        assert!(!e.is_summable(&[h, h, h]));
        match e.sum_family(&[h, h, h]) {
            Err(Error::NotSummable { prefix }) => assert_eq!(prefix.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn subalgebra_and_homomorphism() {
        let e = l3();
        let two = EffectAlgebra::from_raw(&raw(&["0", "1"], &[])).unwrap();
        assert!(is_effect_subalgebra(&e, &[e.zero(), e.one()]));
        assert!(!is_effect_subalgebra(&e, &[e.zero(), e.el("h")]));
        let id: Vec<Element> = e.elements().collect();
        assert!(is_homomorphism(&e, &e, &id));
        // h -> 1 breaks h + h = 1
        let map = vec![two.zero(), two.one(), two.one()];
        assert!(!is_homomorphism(&e, &two, &map));
    }

    #[test]
    fn induced_subalgebra_keeps_labels() {
        let e = l3();
        let sub = e.induced(&[e.zero(), e.one()]).unwrap();
        assert_eq!(sub.labels(), &["0".to_string(), "1".to_string()]);
        assert!(e.induced(&[e.zero(), e.el("h")]).is_err());
    }
}
