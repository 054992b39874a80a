//! Finite unions of rational intervals and points, kept in a canonical
//! sorted, disjoint, non-touching form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Unbounded,
    Open(Rational),
    Closed(Rational),
}

impl Endpoint {
    fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Open(p) | Endpoint::Closed(p) => Some(p),
        }
    }

    fn flip(&self) -> Endpoint {
        match self {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::Open(p) => Endpoint::Closed(p.clone()),
            Endpoint::Closed(p) => Endpoint::Open(p.clone()),
        }
    }
}

// Lower endpoints: -inf first, and [p before (p.
fn cmp_lower(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Less,
        (_, Endpoint::Unbounded) => Ordering::Greater,
        _ => a.value().cmp(&b.value()).then_with(|| closed_first(a, b)),
    }
}

// Upper endpoints: +inf last, and p) before p].
fn cmp_upper(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Greater,
        (_, Endpoint::Unbounded) => Ordering::Less,
        _ => a.value().cmp(&b.value()).then_with(|| closed_first(a, b).reverse()),
    }
}

fn closed_first(a: &Endpoint, b: &Endpoint) -> Ordering {
    let rank = |e: &Endpoint| matches!(e, Endpoint::Open(_)) as u8;
    rank(a).cmp(&rank(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        match (self.lo.value(), self.hi.value()) {
            (Some(l), Some(h)) => {
                l > h || (l == h && !(matches!(self.lo, Endpoint::Closed(_)) && matches!(self.hi, Endpoint::Closed(_))))
            }
            _ => false,
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Open(p) => t > p,
            Endpoint::Closed(p) => t >= p,
        };
        let below = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Open(p) => t < p,
            Endpoint::Closed(p) => t <= p,
        };
        above && below
    }

    /// Whether `next`, starting no earlier, overlaps or touches `self`.
    fn reaches(&self, next: &Interval) -> bool {
        match (self.hi.value(), next.lo.value()) {
            (None, _) => true,
            (_, None) => true,
            (Some(h), Some(l)) => {
                l < h || (l == h && (matches!(self.hi, Endpoint::Closed(_)) || matches!(next.lo, Endpoint::Closed(_))))
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Endpoint::Closed(l), Endpoint::Closed(h)) = (&self.lo, &self.hi) {
            if l == h {
                return write!(f, "{{{}}}", format_rational(l));
            }
        }
        match &self.lo {
            Endpoint::Unbounded => write!(f, "(-inf,")?,
            Endpoint::Open(p) => write!(f, "({},", format_rational(p))?,
            Endpoint::Closed(p) => write!(f, "[{},", format_rational(p))?,
        }
        match &self.hi {
            Endpoint::Unbounded => write!(f, "inf)"),
            Endpoint::Open(p) => write!(f, "{})", format_rational(p)),
            Endpoint::Closed(p) => write!(f, "{}]", format_rational(p)),
        }
    }
}

/// A subset of the real line described by finitely many intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BorelSetDesc {
    parts: Vec<Interval>,
}

impl BorelSetDesc {
    pub fn empty() -> Self {
        BorelSetDesc::default()
    }

    pub fn real_line() -> Self {
        BorelSetDesc {
            parts: vec![Interval {
                lo: Endpoint::Unbounded,
                hi: Endpoint::Unbounded,
            }],
        }
    }

    pub fn point(p: Rational) -> Self {
        BorelSetDesc {
            parts: vec![Interval {
                lo: Endpoint::Closed(p.clone()),
                hi: Endpoint::Closed(p),
            }],
        }
    }

    pub fn points(ps: impl IntoIterator<Item = Rational>) -> Self {
        Self::from_intervals(ps.into_iter().map(|p| Interval {
            lo: Endpoint::Closed(p.clone()),
            hi: Endpoint::Closed(p),
        }))
    }

    pub fn interval(lo: Endpoint, hi: Endpoint) -> Self {
        Self::from_intervals([Interval { lo, hi }])
    }

    /// Normal form of an arbitrary union.
    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = parts.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort_by(|a, b| cmp_lower(&a.lo, &b.lo).then_with(|| cmp_upper(&a.hi, &b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                Some(last) if last.reaches(&iv) => {
                    if cmp_upper(&iv.hi, &last.hi) == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        BorelSetDesc { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.parts.iter().any(|i| i.contains(t))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn complement(&self) -> Self {
        let mut gaps = Vec::new();
        let mut lo = Endpoint::Unbounded;
        for iv in &self.parts {
            if iv.lo != Endpoint::Unbounded {
                gaps.push(Interval {
                    lo: lo.clone(),
                    hi: iv.lo.flip(),
                });
            }
            if iv.hi == Endpoint::Unbounded {
                return Self::from_intervals(gaps);
            }
            lo = iv.hi.flip();
        }
        gaps.push(Interval {
            lo,
            hi: Endpoint::Unbounded,
        });
        Self::from_intervals(gaps)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }
}

impl fmt::Display for BorelSetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "empty");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn parse_endpoint(s: &str, lower: bool, closed: bool) -> Result<Endpoint> {
    let s = s.trim();
    let inf = if lower {
        ["-inf"].as_slice()
    } else {
        ["inf", "+inf"].as_slice()
    };
    if inf.contains(&s) {
        return Ok(Endpoint::Unbounded);
    }
    let p = parse_rational(s)?;
    Ok(if closed { Endpoint::Closed(p) } else { Endpoint::Open(p) })
}

impl FromStr for BorelSetDesc {
    type Err = Error;

    /// Accepts `empty`, `{p,q}`, `(a,b]`, `[a,inf)` and unions joined by `U`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "empty" || s.is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for piece in s.split('U') {
            let piece = piece.trim();
            let bad = || Error::Parse(format!("bad set component '{piece}'"));
            if let Some(inner) = piece.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                for p in inner.split(',').filter(|p| !p.trim().is_empty()) {
                    let p = parse_rational(p.trim())?;
                    parts.push(Interval {
                        lo: Endpoint::Closed(p.clone()),
                        hi: Endpoint::Closed(p),
                    });
                }
                continue;
            }
            let lo_closed = match piece.chars().next() {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(bad()),
            };
            let hi_closed = match piece.chars().last() {
                Some(']') => true,
                Some(')') => false,
                _ => return Err(bad()),
            };
            let (l, h) = piece[1..piece.len() - 1].split_once(',').ok_or_else(bad)?;
            parts.push(Interval {
                lo: parse_endpoint(l, true, lo_closed)?,
                hi: parse_endpoint(h, false, hi_closed)?,
            });
        }
        Ok(Self::from_intervals(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ints;

    fn set(s: &str) -> BorelSetDesc {
        s.parse().unwrap()
    }

    #[test]
    fn normal_form_merges_touching_pieces() {
        assert_eq!(set("[0,1) U [1,2]").to_string(), "[0,2]");
        assert_eq!(set("(0,1) U (1,2)").to_string(), "(0,1) U (1,2)");
        assert_eq!(set("(0,1) U {1}").to_string(), "(0,1]");
        assert_eq!(set("{3,1,1}").to_string(), "{1} U {3}");
        assert!(set("(1,1)").is_empty());
        let n = set("[2,5] U (-inf,0) U {0}");
        assert_eq!(n.to_string().parse::<BorelSetDesc>().unwrap(), n);
    }

    #[test]
    fn complement_and_membership() {
        let a = set("(-inf,1) U {2}");
        let c = a.complement();
        assert_eq!(c.to_string(), "[1,2) U (2,inf)");
        assert_eq!(c.complement(), a);
        for t in [-3, 1, 2, 5] {
            let t = from_ints(t, 1);
            assert_ne!(a.contains(&t), c.contains(&t));
        }
        assert_eq!(BorelSetDesc::empty().complement(), BorelSetDesc::real_line());
        assert_eq!(set("[0,3]").intersection(&set("(1,5)")).to_string(), "(1,3]");
        assert_eq!(set("[0,3]").difference(&set("{1}")).to_string(), "[0,1) U (1,3]");
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::rational::from_ints;

    fn endpoint() -> impl Strategy<Value = Endpoint> {
        prop_oneof![
            1 => Just(Endpoint::Unbounded),
            3 => (-6i64..6).prop_map(|p| Endpoint::Open(from_ints(p, 2))),
            3 => (-6i64..6).prop_map(|p| Endpoint::Closed(from_ints(p, 2))),
        ]
    }

    fn set() -> impl Strategy<Value = BorelSetDesc> {
        prop::collection::vec((endpoint(), endpoint()), 0..4)
            .prop_map(|v| BorelSetDesc::from_intervals(v.into_iter().map(|(lo, hi)| Interval { lo, hi })))
    }

    // Quarter steps hit every endpoint and every gap between them.
    fn probes() -> impl Iterator<Item = Rational> {
        (-16i64..=16).map(|q| from_ints(q, 4))
    }

    proptest! {
        #[test]
        fn operations_agree_pointwise(a in set(), b in set()) {
            let (u, i, d, c) = (a.union(&b), a.intersection(&b), a.difference(&b), a.complement());
            for t in probes() {
                let (x, y) = (a.contains(&t), b.contains(&t));
                prop_assert_eq!(u.contains(&t), x || y);
                prop_assert_eq!(i.contains(&t), x && y);
                prop_assert_eq!(d.contains(&t), x && !y);
                prop_assert_eq!(c.contains(&t), !x);
            }
        }

        #[test]
        fn text_form_round_trips(a in set()) {
            let back: BorelSetDesc = a.to_string().parse().unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(a.complement().complement(), a);
        }
    }
}
