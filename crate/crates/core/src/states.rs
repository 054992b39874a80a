//! States: additive maps into `[0,1]` with `s(1) = 1`, computed exactly.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{is_homomorphism, EffectAlgebra, Element, PartialTable};
use crate::constructors::{fuzzy_label, FuzzyFunction, FuzzySetAlgebra};
use crate::error::{Error, Result};
use crate::lp::{self, Feasibility, RowSelection, SparseRow};
use crate::rational::{format_rational, parse_rational, Rational};

/// Carrier cap for vertex enumeration.
pub const EXTREME_STATES_MAX: usize = 64;

/// Carrier cap for the feasibility solver.
pub const FIND_STATE_MAX: usize = 1024;

/// Values indexed by element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub values: Vec<Rational>,
}

impl State {
    pub fn value(&self, a: Element) -> &Rational {
        &self.values[a.index()]
    }

    /// Checks range, normalization and additivity on every defined sum.
    pub fn validate(&self, e: &EffectAlgebra) -> Result<()> {
        if self.values.len() != e.len() {
            return Err(Error::InvalidArgument(format!(
                "state has {} values for a carrier of {}",
                self.values.len(),
                e.len()
            )));
        }
        if !self.value(e.one()).is_one() {
            return Err(Error::InvalidArgument("state does not send 1 to 1".into()));
        }
        if let Some(x) = e
            .elements()
            .find(|&x| self.value(x).is_negative() || self.value(x) > &Rational::one())
        {
            return Err(Error::InvalidArgument(format!(
                "state value at {} is outside [0,1]",
                e.label(x)
            )));
        }
        for a in e.elements() {
            for (b, c) in e.table().row(a) {
                if self.value(a) + self.value(b) != *self.value(c) {
                    return Err(Error::InvalidArgument(format!(
                        "state is not additive on {} + {} = {}",
                        e.label(a),
                        e.label(b),
                        e.label(c)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `{label: "p/q"}`, keys sorted.
    pub fn to_labeled(&self, e: &EffectAlgebra) -> BTreeMap<String, String> {
        e.elements()
            .map(|x| (e.label(x).to_string(), format_rational(self.value(x))))
            .collect()
    }

    pub fn from_labeled(e: &EffectAlgebra, map: &BTreeMap<String, String>) -> Result<State> {
        let mut values = vec![None; e.len()];
        for (k, v) in map {
            let x = e.element_or_err(k)?;
            values[x.index()] = Some(parse_rational(v)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidArgument(format!("state misses {}", e.labels()[i]))))
            .collect::<Result<Vec<_>>>()?;
        let s = State { values };
        s.validate(e)?;
        Ok(s)
    }
}

/// One equality of the state system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraint {
    /// `s(1) = 1`
    Normalization,
    /// `s(a) + s(b) - s(sum) = 0`
    Additivity { a: Element, b: Element, sum: Element },
}

/// Multipliers on the equalities whose combination has nonnegative
/// coefficients on every `s(x)` and right side `-1`; with `s >= 0` this
/// derives `0 >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Infeasibility {
    pub terms: Vec<(Constraint, Rational)>,
}

impl Infeasibility {
    /// Recomputes the combination and checks its shape.
    pub fn verify(&self, e: &EffectAlgebra) -> bool {
        let mut coeff = vec![Rational::zero(); e.len()];
        let mut rhs = Rational::zero();
        for (c, y) in &self.terms {
            match *c {
                Constraint::Normalization => {
                    coeff[e.one().index()] += y;
                    rhs += y;
                }
                Constraint::Additivity { a, b, sum } => {
                    if e.plus(a, b) != Some(sum) {
                        return false;
                    }
                    coeff[a.index()] += y;
                    coeff[b.index()] += y;
                    coeff[sum.index()] -= y;
                }
            }
        }
        rhs == -Rational::one() && coeff.iter().all(|v| !v.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateSearch {
    Found(State),
    Stateless(Infeasibility),
}

impl StateSearch {
    pub fn state(&self) -> Option<&State> {
        match self {
            StateSearch::Found(s) => Some(s),
            StateSearch::Stateless(_) => None,
        }
    }
}

struct System {
    constraints: Vec<Constraint>,
    rows: Vec<SparseRow>,
    rhs: Vec<Rational>,
}

fn system(e: &EffectAlgebra) -> System {
    let mut constraints = vec![Constraint::Normalization];
    let mut rows = vec![vec![(e.one().index(), Rational::one())]];
    let mut rhs = vec![Rational::one()];
    for a in e.elements() {
        for (b, c) in e.table().row(a) {
            if b < a {
                continue;
            }
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            *acc.entry(a.index()).or_insert_with(Rational::zero) += Rational::one();
            *acc.entry(b.index()).or_insert_with(Rational::zero) += Rational::one();
            *acc.entry(c.index()).or_insert_with(Rational::zero) -= Rational::one();
            let row: SparseRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if row.is_empty() {
                continue;
            }
            constraints.push(Constraint::Additivity { a, b, sum: c });
            rows.push(row);
            rhs.push(Rational::zero());
        }
    }
    System { constraints, rows, rhs }
}

/// Finds some state, or a certificate that none exists.
pub fn find_state(e: &EffectAlgebra) -> Result<StateSearch> {
    if e.len() > FIND_STATE_MAX {
        return Err(Error::BudgetExceeded {
            what: "state search carrier",
            budget: FIND_STATE_MAX as u64,
        });
    }
    let sys = system(e);
    let n = e.len();
    let selected = match lp::select_rows(&sys.rows, &sys.rhs) {
        RowSelection::Inconsistent(combo) => {
            let terms = combo.into_iter().map(|(i, y)| (sys.constraints[i], y)).collect();
            return Ok(StateSearch::Stateless(Infeasibility { terms }));
        }
        RowSelection::Independent(idx) => idx,
    };
    let a: Vec<Vec<Rational>> = selected.iter().map(|&i| lp::to_dense(&sys.rows[i], n)).collect();
    let b: Vec<Rational> = selected.iter().map(|&i| sys.rhs[i].clone()).collect();
    match lp::phase_one(&a, &b, n) {
        Feasibility::Feasible(values) => {
            let s = State { values };
            debug_assert!(s.validate(e).is_ok());
            Ok(StateSearch::Found(s))
        }
        Feasibility::Infeasible(y) => {
            let terms = selected
                .iter()
                .zip(y)
                .filter(|(_, v)| !v.is_zero())
                .map(|(&i, v)| (sys.constraints[i], v))
                .collect();
            Ok(StateSearch::Stateless(Infeasibility { terms }))
        }
    }
}

/// All vertices of the state polytope, sorted by their value vectors.
pub fn extreme_states(e: &EffectAlgebra) -> Result<Vec<State>> {
    if e.len() > EXTREME_STATES_MAX {
        return Err(Error::BudgetExceeded {
            what: "extreme state carrier",
            budget: EXTREME_STATES_MAX as u64,
        });
    }
    let sys = system(e);
    let n = e.len();
    let selected = match lp::select_rows(&sys.rows, &sys.rhs) {
        RowSelection::Inconsistent(_) => return Ok(Vec::new()),
        RowSelection::Independent(idx) => idx,
    };
    let a: Vec<Vec<Rational>> = selected.iter().map(|&i| lp::to_dense(&sys.rows[i], n)).collect();
    let b: Vec<Rational> = selected.iter().map(|&i| sys.rhs[i].clone()).collect();
    let param = lp::parametrize(a, b, n);
    let d = param.free.len();
    // Box constraints on every s(x), written in the free coordinates.
    let mut ineq: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for j in 0..d {
        let mut row = vec![Rational::zero(); d];
        row[j] = -Rational::one();
        ineq.push(row.clone());
        rhs.push(Rational::zero());
        row[j] = Rational::one();
        ineq.push(row);
        rhs.push(Rational::one());
    }
    for (i, c) in param.coeff.iter().enumerate() {
        ineq.push(c.clone());
        rhs.push(param.offset[i].clone());
        ineq.push(c.iter().map(|v| -v).collect());
        rhs.push(Rational::one() - &param.offset[i]);
    }
    let vertices = lp::polytope_vertices(&ineq, &rhs, d)
        .ok_or_else(|| Error::Precondition("state polytope is not full-dimensional in its free coordinates".into()))?;
    let mut states: Vec<State> = vertices
        .iter()
        .map(|t| State {
            values: param.point(n, t),
        })
        .collect();
    states.sort();
    Ok(states)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDetermining {
    pub holds: bool,
    /// A pair with `s(a) <= s(b)` for every state but `a` not below `b`.
    pub witness: Option<(Element, Element)>,
}

pub fn is_order_determining(e: &EffectAlgebra, states: &[State]) -> Result<OrderDetermining> {
    for s in states {
        s.validate(e)?;
    }
    for a in e.elements() {
        for b in e.elements() {
            let dominated = states.iter().all(|s| s.value(a) <= s.value(b));
            if e.leq(a, b) {
                assert!(dominated, "states are monotone");
            } else if dominated {
                return Ok(OrderDetermining {
                    holds: false,
                    witness: Some((a, b)),
                });
            }
        }
    }
    Ok(OrderDetermining {
        holds: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationChecks {
    pub image_closed: bool,
    pub injective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
    pub homomorphism: bool,
    pub inverse_homomorphism: bool,
}

impl RepresentationChecks {
    pub fn isomorphism(&self) -> bool {
        self.image_closed
            && self.injective
            && self.order_preserving
            && self.order_reflecting
            && self.homomorphism
            && self.inverse_homomorphism
    }
}

/// `a` mapped to the function `s -> s(a)` on the given states.
#[derive(Clone, Debug)]
pub struct Representation {
    pub states: Vec<State>,
    pub image: FuzzySetAlgebra,
    /// `map[a]` is the image element of `a`.
    pub map: Vec<Element>,
    pub checks: RepresentationChecks,
}

/// Represents `e` as an algebra of functions on an order-determining set of
/// states. Every state of a finite algebra is already countably additive.
pub fn function_representation(e: &EffectAlgebra, states: &[State]) -> Result<Representation> {
    let od = is_order_determining(e, states)?;
    if !od.holds {
        let (a, b) = od.witness.expect("failure carries a witness");
        return Err(Error::Precondition(format!(
            "states are not order determining: every state has s({}) <= s({})",
            e.label(a),
            e.label(b)
        )));
    }
    let hat = |a: Element| -> Vec<Rational> { states.iter().map(|s| s.value(a).clone()).collect() };
    let mut index: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut functions: Vec<FuzzyFunction> = Vec::new();
    let mut map = Vec::with_capacity(e.len());
    for a in e.elements() {
        let values = hat(a);
        let next = functions.len();
        let i = *index.entry(values.clone()).or_insert(next);
        if i == next {
            functions.push(FuzzyFunction {
                label: fuzzy_label(&values),
                values,
            });
        }
        map.push(Element::new(i));
    }
    let injective = functions.len() == e.len();
    let k = functions.len();
    let one_fn = vec![Rational::one(); states.len()];
    let zero_fn = vec![Rational::zero(); states.len()];
    let mut image_closed = true;
    for f in &functions {
        let c: Vec<Rational> = f.values.iter().map(|v| Rational::one() - v).collect();
        image_closed &= index.contains_key(&c);
    }
    let (Some(&zero), Some(&one)) = (index.get(&zero_fn), index.get(&one_fn)) else {
        return Err(Error::Precondition("image misses a constant function".into()));
    };
    let mut table = PartialTable::new(k, zero, one)?;
    for (x, f) in functions.iter().enumerate() {
        for (y, g) in functions.iter().enumerate() {
            let s: Vec<Rational> = f.values.iter().zip(&g.values).map(|(p, q)| p + q).collect();
            if s.iter().all(|v| v <= &Rational::one()) {
                match index.get(&s) {
                    Some(&z) => table.set(Element::new(x), Element::new(y), Some(Element::new(z))),
                    None => image_closed = false,
                }
            }
        }
    }
    let labels = functions.iter().map(|f| f.label.clone()).collect();
    let algebra = EffectAlgebra::from_table(format!("{}^", e.name()), labels, table)?;
    let omega: Vec<String> = (1..=states.len()).map(|i| format!("s{i}")).collect();
    let image = FuzzySetAlgebra {
        omega,
        functions,
        algebra,
    };

    let f = &image.algebra;
    let mut order_preserving = true;
    let mut order_reflecting = true;
    let mut inverse_homomorphism = injective;
    for a in e.elements() {
        for b in e.elements() {
            let (ia, ib) = (map[a.index()], map[b.index()]);
            order_preserving &= !e.leq(a, b) || f.leq(ia, ib);
            order_reflecting &= !f.leq(ia, ib) || e.leq(a, b);
            inverse_homomorphism &= f.plus(ia, ib).is_none() || e.plus(a, b).is_some();
        }
    }
    let homomorphism = is_homomorphism(e, f, &map);
    let checks = RepresentationChecks {
        image_closed,
        injective,
        order_preserving,
        order_reflecting,
        homomorphism,
        inverse_homomorphism,
    };
    Ok(Representation {
        states: states.to_vec(),
        image,
        map,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{boolean_algebra, fuzzy_closure, mo, mv_chain};
    use crate::rational::from_ints;

    #[test]
    fn chain_has_one_state() {
        let l3 = mv_chain(2).unwrap();
        let s = find_state(&l3).unwrap();
        assert_eq!(s.state().unwrap().value(l3.el("1/2")), &from_ints(1, 2));
        let ext = extreme_states(&l3).unwrap();
        assert_eq!(ext.len(), 1);
        assert!(is_order_determining(&l3, &ext).unwrap().holds);
        let rep = function_representation(&l3, &ext).unwrap();
        assert!(rep.checks.isomorphism());
        assert_eq!(rep.image.algebra.labels(), &["0", "1/2", "1"]);
    }

    #[test]
    fn boolean_and_mo2_vertices() {
        let b2 = boolean_algebra(2).unwrap();
        let ext = extreme_states(&b2).unwrap();
        assert_eq!(ext.len(), 2);
        assert!(ext.iter().all(|s| s.values.iter().all(|v| v.is_zero() || v.is_one())));
        let rep = function_representation(&b2, &ext).unwrap();
        assert!(rep.checks.isomorphism());

        let mo2 = mo(2).unwrap();
        let ext = extreme_states(&mo2).unwrap();
        assert_eq!(ext.len(), 4);
        for s in &ext {
            s.validate(&mo2).unwrap();
        }
        assert!(find_state(&mo2).unwrap().state().is_some());
    }

    #[test]
    fn empty_state_list_is_not_order_determining() {
        let b2 = boolean_algebra(2).unwrap();
        let od = is_order_determining(&b2, &[]).unwrap();
        assert!(!od.holds);
        let (a, b) = od.witness.unwrap();
        assert!(!b2.leq(a, b));
        assert!(function_representation(&b2, &[]).is_err());
    }

    #[test]
    fn fuzzy_algebra_reproduced_by_evaluation() {
        let half = from_ints(1, 2);
        let fz = fuzzy_closure(&["w".into()], &[vec![half]], 64).unwrap();
        let e = &fz.algebra;
        let ext = extreme_states(e).unwrap();
        let rep = function_representation(e, &ext).unwrap();
        assert!(rep.checks.isomorphism());
        assert_eq!(rep.image.algebra.labels(), e.labels());
    }

    #[test]
    fn forged_certificate_is_rejected() {
        let b2 = boolean_algebra(2).unwrap();
        let cert = Infeasibility {
            terms: vec![(Constraint::Normalization, -Rational::one())],
        };
        // -s(1) = -1 has a negative coefficient, so it proves nothing
        assert!(!cert.verify(&b2));
    }
}
