//! Concrete families of finite effect algebras.
//!
//! Grid intervals use integer numerators over a single denominator, so every
//! comparison is exact. Labels are chosen to be readable in files and on the
//! command line: `(20,30)` for grid points, `1/2` for chain members, `s2.a`
//! for the second summand of a horizontal sum.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, Element, PartialTable, SOFT_CARRIER_CAP};
use crate::error::{Error, Result};
use crate::rational::{format_rational, in_unit_interval, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    /// Componentwise `>= 0`.
    #[serde(alias = "std")]
    Standard,
    /// Zero, or every coordinate strictly positive.
    #[serde(alias = "strict")]
    StrictQuadrant,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeSpec {
    pub kind: ConeKind,
    pub dim: usize,
    pub denominator: u64,
}

impl ConeSpec {
    pub fn standard(dim: usize) -> Self {
        ConeSpec {
            kind: ConeKind::Standard,
            dim,
            denominator: 1,
        }
    }

    pub fn strict_quadrant(dim: usize, denominator: u64) -> Self {
        ConeSpec {
            kind: ConeKind::StrictQuadrant,
            dim,
            denominator,
        }
    }

    /// Membership of a numerator vector in the positive cone.
    pub fn contains(&self, g: &[i64]) -> bool {
        match self.kind {
            ConeKind::Standard => g.iter().all(|&x| x >= 0),
            ConeKind::StrictQuadrant => g.iter().all(|&x| x == 0) || g.iter().all(|&x| x > 0),
        }
    }
}

/// Label of a grid point: the numerator tuple, or the bare numerator in dimension one.
pub fn grid_label(g: &[i64]) -> String {
    if g.len() == 1 {
        g[0].to_string()
    } else {
        let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// `[0, u]` in the grid group `(1/q) Z^dim` ordered by `cone`; `u` is given by numerators.
pub fn interval_algebra(cone: &ConeSpec, u: &[i64]) -> Result<EffectAlgebra> {
    interval_algebra_with_cap(cone, u, SOFT_CARRIER_CAP)
}

pub fn interval_algebra_with_cap(cone: &ConeSpec, u: &[i64], cap: usize) -> Result<EffectAlgebra> {
    if cone.dim == 0 || cone.denominator == 0 {
        return Err(Error::InvalidArgument(
            "cone needs dim >= 1 and denominator >= 1".into(),
        ));
    }
    if u.len() != cone.dim {
        return Err(Error::InvalidArgument(format!(
            "u has {} coordinates, expected {}",
            u.len(),
            cone.dim
        )));
    }
    if !cone.contains(u) || u.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("u must be a nonzero element of the cone".into()));
    }

    // Dense positions over the box [0, u]; every interval member lies in it.
    let box_size = u.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x as usize + 1));
    let box_size = match box_size {
        Some(s) if s <= 1 << 28 => s,
        _ => return Err(Error::CarrierTooLarge { size: usize::MAX, cap }),
    };
    let strides: Vec<usize> = {
        let mut s = vec![1; u.len()];
        for i in (0..u.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * (u[i + 1] as usize + 1);
        }
        s
    };
    let mut points: Vec<Vec<i64>> = Vec::new();
    let mut pos = vec![u32::MAX; box_size];
    let mut g = vec![0i64; u.len()];
    let mut rest = vec![0i64; u.len()];
    for flat in 0..box_size {
        let mut r = flat;
        for i in 0..u.len() {
            g[i] = (r / strides[i]) as i64;
            r %= strides[i];
            rest[i] = u[i] - g[i];
        }
        if cone.contains(&g) && cone.contains(&rest) {
            if points.len() >= cap {
                return Err(Error::CarrierTooLarge {
                    size: points.len() + 1,
                    cap,
                });
            }
            pos[flat] = points.len() as u32;
            points.push(g.clone());
        }
    }
    let n = points.len();
    let mut table = PartialTable::new(n, 0, n - 1)?;
    let flat_of = |p: &[i64]| p.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum::<usize>();
    let flats: Vec<usize> = points.iter().map(|p| flat_of(p)).collect();
    for a in 0..n {
        for b in 0..n {
            // Carrier members are exactly the box points with a valid position.
            let fits = points[a].iter().zip(&points[b]).zip(u).all(|((x, y), m)| x + y <= *m);
            if fits {
                let s = pos[flats[a] + flats[b]];
                if s != u32::MAX {
                    table.set(Element::new(a), Element::new(b), Some(Element::new(s as usize)));
                }
            }
        }
    }
    let labels = points.iter().map(|p| grid_label(p)).collect();
    let kind = match cone.kind {
        ConeKind::Standard => "std",
        ConeKind::StrictQuadrant => "strict",
    };
    let name = format!("interval-{kind}-d{}-q{}-u{}", cone.dim, cone.denominator, grid_label(u));
    EffectAlgebra::from_table(name, labels, table)
}

/// The `(k+1)`-element chain `{0, 1/k, ..., 1}` with `i/k + j/k` defined iff `i + j <= k`.
pub fn mv_chain(k: usize) -> Result<EffectAlgebra> {
    if k == 0 {
        return Err(Error::InvalidArgument("chain needs k >= 1".into()));
    }
    if k + 1 > SOFT_CARRIER_CAP {
        return Err(Error::CarrierTooLarge {
            size: k + 1,
            cap: SOFT_CARRIER_CAP,
        });
    }
    let mut table = PartialTable::new(k + 1, 0, k)?;
    for i in 0..=k {
        for j in 0..=k - i {
            table.set(Element::new(i), Element::new(j), Some(Element::new(i + j)));
        }
    }
    let labels = (0..=k)
        .map(|i| format_rational(&Rational::new(i.into(), k.into())))
        .collect();
    EffectAlgebra::from_table(format!("L{}", k + 1), labels, table)
}

pub const BOOLEAN_MAX_ATOMS: usize = 12;

/// Subsets of an `m`-set; the element index is the bit mask.
pub fn boolean_algebra(m: usize) -> Result<EffectAlgebra> {
    if m == 0 {
        return Err(Error::InvalidArgument("boolean algebra needs m >= 1".into()));
    }
    if m > BOOLEAN_MAX_ATOMS {
        return Err(Error::CarrierTooLarge {
            size: 1 << m.min(30),
            cap: 1 << BOOLEAN_MAX_ATOMS,
        });
    }
    let n = 1usize << m;
    let mut table = PartialTable::new(n, 0, n - 1)?;
    for a in 0..n {
        for b in 0..n {
            if a & b == 0 {
                table.set(Element::new(a), Element::new(b), Some(Element::new(a | b)));
            }
        }
    }
    let labels = (0..n)
        .map(|mask| match mask {
            0 => "0".to_string(),
            x if x == n - 1 => "1".to_string(),
            x => (0..m)
                .filter(|i| x >> i & 1 == 1)
                .map(|i| (b'a' + i as u8) as char)
                .collect(),
        })
        .collect();
    EffectAlgebra::from_table(format!("2^{m}"), labels, table)
}

/// Glues the summands at a shared 0 and 1; no sums across summands.
pub fn horizontal_sum(summands: &[EffectAlgebra]) -> Result<EffectAlgebra> {
    if summands.len() < 2 {
        return Err(Error::Precondition("horizontal sum needs at least two summands".into()));
    }
    let inner: usize = summands.iter().map(|s| s.len() - 2).sum();
    let n = inner + 2;
    if n > SOFT_CARRIER_CAP {
        return Err(Error::CarrierTooLarge {
            size: n,
            cap: SOFT_CARRIER_CAP,
        });
    }
    let mut labels = vec!["0".to_string()];
    let mut maps: Vec<Vec<Element>> = Vec::with_capacity(summands.len());
    for (t, s) in summands.iter().enumerate() {
        let mut map = vec![Element::new(0); s.len()];
        for x in s.elements() {
            map[x.index()] = if x == s.zero() {
                Element::new(0)
            } else if x == s.one() {
                Element::new(n - 1)
            } else {
                labels.push(format!("s{}.{}", t + 1, s.label(x)));
                Element::new(labels.len() - 1)
            };
        }
        maps.push(map);
    }
    labels.push("1".to_string());
    let mut table = PartialTable::new(n, 0, n - 1)?;
    for (s, map) in summands.iter().zip(&maps) {
        for a in s.elements() {
            for (b, c) in s.table().row(a) {
                table.set(map[a.index()], map[b.index()], Some(map[c.index()]));
            }
        }
    }
    let name = format!(
        "hsum({})",
        summands.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")
    );
    EffectAlgebra::from_table(name, labels, table)
}

/// `MO_n`: the horizontal sum of `n` four-element Boolean algebras, with
/// atoms labelled `a1, a1', a2, a2', ...`. `MO_1` is the four-element Boolean algebra.
pub fn mo(n: usize) -> Result<EffectAlgebra> {
    if n == 0 {
        return Err(Error::InvalidArgument("MO_n needs n >= 1".into()));
    }
    let size = 2 * n + 2;
    if size > SOFT_CARRIER_CAP {
        return Err(Error::CarrierTooLarge {
            size,
            cap: SOFT_CARRIER_CAP,
        });
    }
    let one = Element::new(size - 1);
    let mut table = PartialTable::new(size, 0, size - 1)?;
    let mut labels = vec!["0".to_string()];
    for t in 1..=n {
        labels.push(format!("a{t}"));
        labels.push(format!("a{t}'"));
        let (a, b) = (Element::new(2 * t - 1), Element::new(2 * t));
        table.insert_symmetric(a, b, one)?;
    }
    labels.push("1".to_string());
    table.complete_zero_rules()?;
    EffectAlgebra::from_table(format!("MO{n}"), labels, table)
}

/// Coordinatewise partial addition on the cartesian product, ordered lexicographically.
pub fn direct_product(factors: &[EffectAlgebra]) -> Result<EffectAlgebra> {
    if factors.is_empty() {
        return Err(Error::Precondition("direct product needs at least one factor".into()));
    }
    let n = factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.len()))
        .filter(|&n| n <= SOFT_CARRIER_CAP)
        .ok_or(Error::CarrierTooLarge {
            size: factors.iter().map(|f| f.len()).product(),
            cap: SOFT_CARRIER_CAP,
        })?;
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let decode = |mut i: usize| {
        let mut coords = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            coords[k] = i % sizes[k];
            i /= sizes[k];
        }
        coords
    };
    let encode = |coords: &[usize]| coords.iter().zip(&sizes).fold(0, |acc, (&c, &s)| acc * s + c);
    let zero = encode(&factors.iter().map(|f| f.zero().index()).collect::<Vec<_>>());
    let one = encode(&factors.iter().map(|f| f.one().index()).collect::<Vec<_>>());
    let coords: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let mut table = PartialTable::new(n, zero, one)?;
    let mut sum = vec![0; sizes.len()];
    for a in 0..n {
        'b: for b in 0..n {
            for k in 0..sizes.len() {
                let (x, y) = (Element::new(coords[a][k]), Element::new(coords[b][k]));
                match factors[k].plus(x, y) {
                    Some(s) => sum[k] = s.index(),
                    None => continue 'b,
                }
            }
            table.set(Element::new(a), Element::new(b), Some(Element::new(encode(&sum))));
        }
    }
    let labels = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c
                .iter()
                .enumerate()
                .map(|(k, &i)| factors[k].label(Element::new(i)))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("x");
    EffectAlgebra::from_table(name, labels, table)
}

/// A `[0,1]`-valued function on a finite ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuzzyFunction {
    pub label: String,
    pub values: Vec<Rational>,
}

/// A finite set of fuzzy functions closed under `1 - f` and defined pointwise sums,
/// together with its effect-algebra view (element `i` is `functions[i]`).
#[derive(Clone, Debug)]
pub struct FuzzySetAlgebra {
    pub omega: Vec<String>,
    pub functions: Vec<FuzzyFunction>,
    pub algebra: EffectAlgebra,
}

pub const DEFAULT_FUZZY_CAP: usize = 4096;

/// Label of a function: its value list, or the single value when `|omega| = 1`.
pub fn fuzzy_label(values: &[Rational]) -> String {
    if values.len() == 1 {
        format_rational(&values[0])
    } else {
        let parts: Vec<String> = values.iter().map(format_rational).collect();
        format!("({})", parts.join(","))
    }
}

/// The least family containing `generators` and the constant 1, closed under
/// complement and pointwise sums that stay below 1.
pub fn fuzzy_closure(omega: &[String], generators: &[Vec<Rational>], cap: usize) -> Result<FuzzySetAlgebra> {
    if omega.is_empty() {
        return Err(Error::InvalidArgument("ground set must not be empty".into()));
    }
    for g in generators {
        if g.len() != omega.len() {
            return Err(Error::InvalidArgument(
                "generator length differs from the ground set".into(),
            ));
        }
        if !g.iter().all(in_unit_interval) {
            return Err(Error::InvalidArgument("generator values must lie in [0,1]".into()));
        }
    }
    let one_fn = vec![Rational::one(); omega.len()];
    let mut found: Vec<Vec<Rational>> = Vec::new();
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut push = |f: Vec<Rational>, found: &mut Vec<Vec<Rational>>, queue: &mut VecDeque<usize>| {
        if seen.contains_key(&f) {
            return Ok(());
        }
        if found.len() >= cap {
            return Err(Error::ClosureOverflow { cap });
        }
        seen.insert(f.clone(), found.len());
        queue.push_back(found.len());
        found.push(f);
        Ok(())
    };
    push(one_fn.clone(), &mut found, &mut queue)?;
    for g in generators {
        push(g.clone(), &mut found, &mut queue)?;
    }
    while let Some(i) = queue.pop_front() {
        let f = found[i].clone();
        push(f.iter().map(|v| Rational::one() - v).collect(), &mut found, &mut queue)?;
        for j in 0..=i {
            let s: Vec<Rational> = f.iter().zip(&found[j]).map(|(x, y)| x + y).collect();
            if s.iter().all(|v| v <= &Rational::one()) {
                push(s, &mut found, &mut queue)?;
            }
        }
    }

    // Canonical order: by total mass, then lexicographically.
    found.sort_by(|a, b| {
        let sa: Rational = a.iter().sum();
        let sb: Rational = b.iter().sum();
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    let index: HashMap<&Vec<Rational>, usize> = found.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let n = found.len();
    let zero_fn = vec![Rational::zero(); omega.len()];
    let mut table = PartialTable::new(n, index[&zero_fn], index[&one_fn])?;
    for a in 0..n {
        for b in 0..n {
            let s: Vec<Rational> = found[a].iter().zip(&found[b]).map(|(x, y)| x + y).collect();
            if let Some(&c) = index.get(&s) {
                table.set(Element::new(a), Element::new(b), Some(Element::new(c)));
            }
        }
    }
    let functions: Vec<FuzzyFunction> = found
        .into_iter()
        .map(|values| FuzzyFunction {
            label: fuzzy_label(&values),
            values,
        })
        .collect();
    let labels = functions.iter().map(|f| f.label.clone()).collect();
    let algebra = EffectAlgebra::from_table("fuzzy", labels, table)?;
    Ok(FuzzySetAlgebra {
        omega: omega.to_vec(),
        functions,
        algebra,
    })
}

/// The least effect subalgebra containing `seed`, sorted by index.
pub fn subalgebra_generated(e: &EffectAlgebra, seed: &[Element]) -> Vec<Element> {
    let mut members = e.subset_bits(&[e.zero(), e.one()]);
    let mut queue: Vec<Element> = vec![e.zero(), e.one()];
    for &s in seed {
        if !members.put(s.index()) {
            queue.push(s);
        }
    }
    let mut done: Vec<Element> = Vec::new();
    while let Some(a) = queue.pop() {
        let mut fresh = Vec::new();
        let o = e.ortho(a);
        if !members.put(o.index()) {
            fresh.push(o);
        }
        for &b in done.iter().chain(std::iter::once(&a)) {
            if let Some(s) = e.plus(a, b) {
                if !members.put(s.index()) {
                    fresh.push(s);
                }
            }
        }
        done.push(a);
        queue.extend(fresh);
    }
    e.sorted_subset(&members)
}

/// A constructor invocation, storable in place of a large table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    Chain {
        k: usize,
    },
    Boolean {
        m: usize,
    },
    Mo {
        n: usize,
    },
    Interval {
        cone: ConeSpec,
        u: Vec<i64>,
    },
    Hsum {
        summands: Vec<Recipe>,
    },
    Product {
        factors: Vec<Recipe>,
    },
    Fuzzy {
        omega: Vec<String>,
        generators: Vec<Vec<String>>,
    },
}

impl Recipe {
    pub fn build(&self) -> Result<EffectAlgebra> {
        match self {
            Recipe::Chain { k } => mv_chain(*k),
            Recipe::Boolean { m } => boolean_algebra(*m),
            Recipe::Mo { n } => mo(*n),
            Recipe::Interval { cone, u } => interval_algebra(cone, u),
            Recipe::Hsum { summands } => {
                horizontal_sum(&summands.iter().map(Recipe::build).collect::<Result<Vec<_>>>()?)
            }
            Recipe::Product { factors } => {
                direct_product(&factors.iter().map(Recipe::build).collect::<Result<Vec<_>>>()?)
            }
            Recipe::Fuzzy { omega, generators } => Ok(self.build_fuzzy(omega, generators)?.algebra),
        }
    }

    fn build_fuzzy(&self, omega: &[String], generators: &[Vec<String>]) -> Result<FuzzySetAlgebra> {
        let gens = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|v| crate::rational::parse_rational(v))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        fuzzy_closure(omega, &gens, DEFAULT_FUZZY_CAP)
    }
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::compat::compatible;
    use crate::io::{parse_algebra, table_to_json};

    fn base() -> impl Strategy<Value = EffectAlgebra> {
        prop_oneof![
            (1usize..5).prop_map(|k| mv_chain(k).unwrap()),
            (1usize..4).prop_map(|m| boolean_algebra(m).unwrap()),
            (1usize..4).prop_map(|n| mo(n).unwrap()),
        ]
    }

    fn algebra() -> impl Strategy<Value = EffectAlgebra> {
        prop_oneof![
            2 => base(),
            1 => (base(), base()).prop_filter_map("too large", |(a, b)| {
                (a.len() * b.len() <= 40).then(|| direct_product(&[a, b]).unwrap())
            }),
            1 => (base(), base()).prop_filter_map("trivial summand", |(a, b)| horizontal_sum(&[a, b]).ok()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn constructed_algebras_satisfy_the_axioms(e in algebra()) {
            prop_assert!(e.validation().ok, "{}", e.validation().summary());
            for a in e.elements() {
                prop_assert_eq!(e.ortho(e.ortho(a)), a);
                prop_assert_eq!(e.plus(a, e.ortho(a)), Some(e.one()));
            }
        }

        #[test]
        fn table_json_round_trips(e in algebra()) {
            let text = table_to_json(&e);
            let back = parse_algebra(&text).unwrap().algebra;
            prop_assert_eq!(back.labels(), e.labels());
            prop_assert_eq!(table_to_json(&back), text);
        }

        #[test]
        fn compatibility_is_symmetric_and_witnessed(e in algebra()) {
            for a in e.elements() {
                for b in e.elements() {
                    let w = compatible(&e, a, b);
                    prop_assert_eq!(w.is_some(), compatible(&e, b, a).is_some());
                    if let Some(w) = w {
                        prop_assert!(w.verify(&e, a, b));
                    }
                }
            }
        }
    }
}
