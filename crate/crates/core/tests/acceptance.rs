//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//!
//!     cargo test --release --test acceptance -- --nocapture --test-threads 1

mod common;

use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use common::{corpus, get, report};
use effect_algebra::algebra::{validate_axioms, Axiom, PartialTable, RawTable};
use effect_algebra::blocks::{
    enumerate_blocks, enumerate_ic_blocks, enumerate_rdp_blocks, verify_block_theorem,
    verify_homogeneous_block_theorem, BlockBudget,
};
use effect_algebra::compat::{
    compatible, internally_compatible, jointly_compatible, strongly_compatible, verify_supremum_distributivity,
    CompatBudget, TheoremCheck,
};
use effect_algebra::observables::{
    observable_eval, observable_from_jointly_compatible, observable_from_spectral, observable_laws, range_of,
    spectral_family_of, target_set, DiscreteObservable,
};
use effect_algebra::oracle::{oracle_blocks, Oracle, ORACLE_BLOCKS_MAX, ORACLE_MAX};
use effect_algebra::properties::{Hypotheses, Property, Verdict};
use effect_algebra::rational::from_ints;
use effect_algebra::scan::{Plan, ScanBudget};
use effect_algebra::states::{extreme_states, find_state, function_representation, is_order_determining};
use effect_algebra::{io, EffectAlgebra, Element};

fn el(i: usize) -> Element {
    Element::new(i)
}

/// The axioms read literally off a table.
fn literal_violations(t: &PartialTable) -> BTreeSet<Axiom> {
    let n = t.len();
    let get = |a: usize, b: usize| t.get(el(a), el(b)).map(Element::index);
    let (zero, one) = (t.zero().index(), t.one().index());
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if get(a, b) != get(b, a) {
                out.insert(Axiom::Commutativity);
            }
            for c in 0..n {
                if let Some(bc) = get(b, c) {
                    if let Some(abc) = get(a, bc) {
                        if get(a, b).and_then(|ab| get(ab, c)) != Some(abc) {
                            out.insert(Axiom::Associativity);
                        }
                    }
                }
                if b != c && get(a, b).is_some() && get(a, b) == get(a, c) {
                    out.insert(Axiom::Cancellation);
                }
            }
        }
        if (0..n).filter(|&b| get(a, b) == Some(one)).count() != 1 {
            out.insert(Axiom::Orthosupplement);
        }
        if a != zero && get(a, one).is_some() {
            out.insert(Axiom::ZeroOne);
        }
    }
    out
}

fn raw_of(e: &EffectAlgebra) -> RawTable {
    let text = io::table_to_json(e);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    RawTable {
        name: e.name().into(),
        elements: e.labels().to_vec(),
        zero: e.label(e.zero()).into(),
        one: e.label(e.one()).into(),
        plus: serde_json::from_value(v["plus"].clone()).unwrap(),
    }
}

#[test]
fn criterion_01_axiom_suite() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut mutants = 0;
    let mut rejected = 0;
    for l in corpus() {
        let e = &l.algebra;
        if !e.validation().ok {
            failures.push(format!(
                "{} fails validation: {}",
                l.fixture.name,
                e.validation().summary()
            ));
        }
        if e.len() > 16 {
            continue;
        }
        let raw = raw_of(e);
        let check = |raw: &RawTable, what: String, failures: &mut Vec<String>| -> bool {
            let (_, table) = raw.to_table().unwrap();
            let want = literal_violations(&table);
            let v = validate_axioms(raw).unwrap();
            let got: BTreeSet<Axiom> = v.report.violations.iter().map(|x| x.axiom).collect();
            if got != want || v.report.ok != want.is_empty() {
                failures.push(format!("{} {what}: expected {want:?}, got {got:?}", l.fixture.name));
            }
            !v.report.ok
        };
        for i in 0..raw.plus.len() {
            let mut del = raw.clone();
            del.plus.remove(i);
            mutants += 1;
            rejected += usize::from(check(&del, format!("drop {:?}", raw.plus[i]), &mut failures));
            for c in e.labels() {
                if *c == raw.plus[i][2] || *c == raw.zero {
                    continue;
                }
                let mut m = raw.clone();
                m.plus[i][2] = c.clone();
                mutants += 1;
                rejected += usize::from(check(&m, format!("{:?} -> {c}", raw.plus[i]), &mut failures));
            }
        }
    }
    println!("    {mutants} single-triple mutants, {rejected} rejected");
    if rejected == 0 {
        failures.push("no mutant was rejected".into());
    }
    report(1, "axiom suite and mutated tables", &failures, t0);
}

#[test]
fn criterion_02_example_reproduction() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let d10 = get("ex33_d10");
    let b = ScanBudget::default();
    let h = Hypotheses::new(d10, &b);
    let rdp = h.get(Property::Rdp);
    if rdp.verdict != Verdict::HoldsExhaustive {
        failures.push(format!(
            "d10 RDP: expected holds-exhaustive, got {} witness {:?}",
            rdp.verdict.name(),
            rdp.witness.as_ref().map(|w| d10.labels_of(w))
        ));
    }
    if h.holds(Property::Lattice) {
        failures.push("d10 lattice: expected fails".into());
    }
    let anti = h.get(Property::Antilattice);
    if !anti.holds() {
        failures.push(format!(
            "d10 antilattice: expected holds, got fails witness {:?}",
            anti.witness.as_ref().map(|w| d10.labels_of(w))
        ));
    }
    let d100 = get("ex33_d100");
    let [x, y, z] = ["(20,30)", "(30,50)", "(1,25)"].map(|l| d100.el(l));
    let xz = d100.meet(x, z);
    let yz = d100.meet(y, z);
    let diff = d100.diff(y, x).unwrap();
    let dz = d100.meet(diff, z);
    if xz.is_none() || yz.is_none() {
        failures.push("d100: x^z or y^z missing".into());
    }
    if let Some(m) = dz {
        failures.push(format!("d100: (y-x)^z exists and equals {}", d100.label(m)));
    }
    report(2, "denominator-10 and denominator-100 grid instances", &failures, t0);
}

#[test]
fn criterion_03_compatibility_basics() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut sampled = Vec::new();
    let budget = ScanBudget::default();
    for l in corpus() {
        let e = &l.algebra;
        let h = Hypotheses::new(e, &ScanBudget::default());
        let rip = h.holds(Property::Rip);
        let n = e.len();
        // Work is bounded by pairs times candidate lower bounds.
        let pairs: Vec<(usize, usize)> = match budget.plan((n * n * n) as u64) {
            Plan::Exhaustive => (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect(),
            Plan::Sampled(k) => {
                sampled.push(format!("{} ({k} pairs)", l.fixture.name));
                let mut rng = budget.rng(3);
                (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
            }
        };
        let problems: Vec<String> = pairs
            .par_iter()
            .flat_map_iter(|&(i, j)| {
                let mut out = Vec::new();
                let (a, b) = (el(i), el(j));
                let (c_ab, c_ba) = (compatible(e, a, b), compatible(e, b, a));
                let (s_ab, s_ba) = (strongly_compatible(e, a, b), strongly_compatible(e, b, a));
                let tag = || format!("{} ({},{})", l.fixture.name, e.label(a), e.label(b));
                if c_ab.is_some() != c_ba.is_some() || s_ab.is_some() != s_ba.is_some() {
                    out.push(format!("{}: not symmetric", tag()));
                }
                if s_ab.is_some() && c_ab.is_none() {
                    out.push(format!("{}: strong but not compatible", tag()));
                }
                if (a == e.zero() || a == e.one() || e.comparable(a, b)) && s_ab.is_none() {
                    out.push(format!("{}: expected strongly compatible", tag()));
                }
                for w in [&c_ab, &s_ab].into_iter().flatten() {
                    if !w.verify(e, a, b) {
                        out.push(format!("{}: witness does not recompute", tag()));
                    }
                }
                if !rip {
                    return out;
                }
                let (meet, join) = (e.meet(a, b), e.join(a, b));
                let c = c_ab.is_some();
                if s_ab.is_some() != (c && meet.is_some()) || s_ab.is_some() != (c && join.is_some()) {
                    out.push(format!("{}: strong <=> compatible with meet/join fails", tag()));
                }
                if let Some(w) = &s_ab {
                    let top = e.plus(w.a1, w.b1).and_then(|s| e.plus(s, w.c));
                    if meet != Some(w.c) || join != top {
                        out.push(format!("{}: meet/join differ from witness", tag()));
                    }
                    let (m, j) = (meet.unwrap(), join.unwrap());
                    if e.diff(j, b).ok() != e.diff(a, m).ok() || e.diff(j, a).ok() != e.diff(b, m).ok() {
                        out.push(format!("{}: join-difference identities fail", tag()));
                    }
                }
                out
            })
            .collect();
        failures.extend(problems);
    }
    if !sampled.is_empty() {
        println!("    sampled: {}", sampled.join(", "));
    }
    report(
        3,
        "symmetry, strong implies compatible, 0/1, comparables, RIP identities",
        &failures,
        t0,
    );
}

/// Non-decreasing sequences of length 1..=4.
fn chains(e: &EffectAlgebra) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Element>> = e.elements().map(|a| vec![a]).collect();
    while let Some(c) = stack.pop() {
        if c.len() < 4 {
            let last = *c.last().unwrap();
            for b in e.elements().filter(|&b| e.leq(last, b)) {
                let mut d = c.clone();
                d.push(b);
                stack.push(d);
            }
        }
        out.push(c);
    }
    out.sort();
    out
}

#[test]
fn criterion_04_supremum_distributivity() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let budget = ScanBudget::default();
    let mut checked = 0u64;
    for l in corpus() {
        let e = &l.algebra;
        let h = Hypotheses::new(e, &budget);
        if !h.holds(Property::Rip) {
            continue;
        }
        let cs = chains(e);
        let space = cs.len() as u64 * e.len() as u64;
        let cases: Vec<(Element, &Vec<Element>)> = if space <= budget.max_work {
            e.elements().flat_map(|b| cs.iter().map(move |c| (b, c))).collect()
        } else {
            let mut rng = budget.rng(4);
            (0..budget.samples)
                .map(|_| (el(rng.gen_range(0..e.len())), cs.choose(&mut rng).unwrap()))
                .collect()
        };
        for (b, c) in cases {
            match verify_supremum_distributivity(&h, b, c) {
                TheoremCheck::Checked { ok: true, .. } => checked += 1,
                TheoremCheck::Checked { ok: false, detail } => failures.push(format!(
                    "{} b={} chain {:?}: {detail:?}",
                    l.fixture.name,
                    e.label(b),
                    e.labels_of(c)
                )),
                TheoremCheck::NotApplicable { .. } => {}
            }
        }
    }
    println!("    {checked} (b, chain) cases satisfied the hypotheses");
    if checked == 0 {
        failures.push("no case met the hypotheses".into());
    }
    report(
        4,
        "strong compatibility with joins and meet distributivity",
        &failures,
        t0,
    );
}

#[test]
fn criterion_05_block_cover() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let budget = ScanBudget::default();
    let bb = BlockBudget::default();
    for l in corpus() {
        let e = &l.algebra;
        if e.len() > bb.max_carrier {
            continue;
        }
        let h = Hypotheses::new(e, &budget);
        match verify_block_theorem(&h, &bb).unwrap() {
            TheoremCheck::Checked { ok: false, detail } => failures.push(format!(
                "{}: subalgebras {} mv {} lattice-closed {} covers {}",
                l.fixture.name, detail.all_subalgebras, detail.all_mv, detail.lattice_closed, detail.covers
            )),
            _ => {}
        }
        let blocks = enumerate_blocks(e, &bb).unwrap();
        if h.holds(Property::Mv) && blocks.len() != 1 {
            failures.push(format!("{}: MV instance with {} blocks", l.fixture.name, blocks.len()));
        }
        if l.fixture.name == "mo2" && blocks.len() != 2 {
            failures.push(format!("mo2 has {} blocks", blocks.len()));
        }
    }
    report(5, "blocks are MV subalgebras covering the carrier", &failures, t0);
}

#[test]
fn criterion_06_homogeneous_blocks() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut applied = 0;
    let bb = BlockBudget::default();
    for l in corpus() {
        let e = &l.algebra;
        if e.len() > bb.max_rdp_carrier {
            continue;
        }
        let h = Hypotheses::new(e, &ScanBudget::default());
        match verify_homogeneous_block_theorem(&h, &bb) {
            Ok(TheoremCheck::Checked { ok, detail }) => {
                applied += 1;
                if !ok {
                    failures.push(format!(
                        "{}: equal {} ic-cover {} rdp-cover {}",
                        l.fixture.name, detail.families_equal, detail.ic_cover, detail.rdp_cover
                    ));
                }
            }
            Ok(TheoremCheck::NotApplicable { .. }) => {}
            Err(err) => failures.push(format!("{}: {err}", l.fixture.name)),
        }
    }
    println!("    applied to {applied} homogeneous instances");
    report(6, "ic-blocks equal RDP-blocks and cover", &failures, t0);
}

fn target_sets(e: &EffectAlgebra, seed: u64) -> Vec<Vec<Element>> {
    let n = e.len();
    let total = n + n * (n - 1) / 2 + n * (n - 1) * (n - 2) / 6;
    if total <= 200_000 {
        let mut out = Vec::new();
        for a in 0..n {
            out.push(vec![el(a)]);
            for b in a + 1..n {
                out.push(vec![el(a), el(b)]);
                for c in b + 1..n {
                    out.push(vec![el(a), el(b), el(c)]);
                }
            }
        }
        out
    } else {
        let mut rng = ScanBudget {
            seed,
            ..ScanBudget::default()
        }
        .rng(7);
        (0..2000)
            .map(|_| {
                let k = rng.gen_range(1..=3);
                let mut s: Vec<Element> = (0..k).map(|_| el(rng.gen_range(0..n))).collect();
                s.sort();
                s.dedup();
                s
            })
            .collect()
    }
}

#[test]
fn criterion_07_observable_round_trip() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let cb = CompatBudget::default();
    let budget = ScanBudget::default();
    let mut found = 0usize;
    let mut observables = 0usize;
    for l in corpus() {
        let e = &l.algebra;
        let name = l.fixture.name;
        let t1 = Instant::now();
        // Build observables per target set, then check each distinct observable once.
        let built: Vec<Result<Option<(Vec<Element>, DiscreteObservable)>, String>> = target_sets(e, 1)
            .par_iter()
            .map(|ts| {
                let v = jointly_compatible(e, ts, &cb).map_err(|err| format!("{name}: {err}"))?;
                let Some(w) = v.witness() else {
                    return Ok(None);
                };
                let x = observable_from_jointly_compatible(e, ts, w)
                    .map_err(|err| format!("{name} {:?}: {err}", e.labels_of(ts)))?;
                for (j, &t) in ts.iter().enumerate() {
                    if observable_eval(e, &x, &target_set(w, j)) != t {
                        return Err(format!("{name} {:?}: target {j} not hit", e.labels_of(ts)));
                    }
                }
                Ok(Some((ts.clone(), x)))
            })
            .collect();
        let mut distinct: HashMap<DiscreteObservable, Vec<Vec<Element>>> = HashMap::new();
        for b in built {
            match b {
                Ok(Some((ts, x))) => {
                    found += 1;
                    distinct.entry(x).or_default().push(ts);
                }
                Ok(None) => {}
                Err(msg) => failures.push(msg),
            }
        }
        println!("    {name}: built in {:.1?}", t1.elapsed());
        let mut distinct: Vec<_> = distinct.into_iter().collect();
        distinct.sort_by(|a, b| a.1.cmp(&b.1));
        let problems: Vec<String> = distinct
            .par_iter()
            .filter_map(|(x, sets)| {
                let r = range_of(e, x, &cb);
                if !sets.iter().flatten().all(|t| r.members.contains(t)) {
                    return Some(format!("{name} {:?}: range misses a target", e.labels_of(&sets[0])));
                }
                if r.internal.decided() != Some(true) {
                    return Some(format!(
                        "{name} {:?}: range not internally compatible",
                        e.labels_of(&sets[0])
                    ));
                }
                let laws = observable_laws(e, x, &budget);
                if laws.homomorphism != Some(true) || !(laws.complement && laws.additivity && laws.difference) {
                    return Some(format!("{name} {:?}: {laws:?}", e.labels_of(&sets[0])));
                }
                None
            })
            .collect();
        failures.extend(problems);
        observables += distinct.len();
        println!(
            "    {name}: {} observables checked by {:.1?}",
            distinct.len(),
            t0.elapsed()
        );
        for path in l.fixture.aux_files("observable-") {
            let x = io::parse_observable(e, &std::fs::read_to_string(&path).unwrap()).unwrap();
            if range_of(e, &x, &cb).internal.decided() != Some(true) {
                failures.push(format!(
                    "{}: range of {} not internally compatible",
                    name,
                    path.display()
                ));
            }
        }
    }
    println!("    {found} jointly compatible target sets, {observables} distinct observables");
    report(
        7,
        "jointly compatible sets come from observables and back",
        &failures,
        t0,
    );
}

#[test]
fn criterion_08_spectral_reconstruction() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut files = 0;
    for l in corpus() {
        let e = &l.algebra;
        let obs = l.fixture.aux_files("observable-");
        let spec = l.fixture.aux_files("spectral-");
        if obs.is_empty() && spec.is_empty() {
            continue;
        }
        let h = Hypotheses::new(e, &ScanBudget::default());
        let mut o = Oracle::new(e.table()).unwrap();
        let (rdp, rip, dmp, homog) = (o.rdp(), o.rip(), o.dmp(), o.homogeneous());
        for path in &obs {
            files += 1;
            let x = io::parse_observable(e, &std::fs::read_to_string(path).unwrap()).unwrap();
            let f = spectral_family_of(e, &x);
            let r = observable_from_spectral(&h, &f).unwrap();
            if r.observable != x {
                failures.push(format!("{}: round trip changed the observable", path.display()));
            }
        }
        for path in &spec {
            files += 1;
            let f = io::parse_spectral(e, &std::fs::read_to_string(path).unwrap()).unwrap();
            let r = observable_from_spectral(&h, &f).unwrap();
            if !r.uniqueness.unique() {
                failures.push(format!("{}: reconstruction not unique", path.display()));
            }
            if spectral_family_of(e, &r.observable) != f {
                failures.push(format!(
                    "{}: reconstruction has a different spectral family",
                    path.display()
                ));
            }
            let hy = &r.hypotheses;
            let want = (rdp, rip, dmp, homog, rdp && dmp, rip && dmp);
            if (hy.rdp, hy.rip, hy.dmp, hy.homogeneous, hy.rdp_dmp, hy.rip_dmp) != want {
                failures.push(format!("{}: hypothesis flags {hy:?}, oracle {want:?}", path.display()));
            }
        }
    }
    println!("    {files} fixture files");
    report(
        8,
        "spectral families and observables determine each other",
        &failures,
        t0,
    );
}

#[test]
fn criterion_09_states() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    for l in corpus() {
        let e = &l.algebra;
        let h = Hypotheses::new(e, &ScanBudget::default());
        if !h.holds(Property::Rdp) {
            continue;
        }
        match find_state(e) {
            Ok(s) => match s.state() {
                Some(st) if st.validate(e).is_ok() => {}
                Some(_) => failures.push(format!("{}: returned state is invalid", l.fixture.name)),
                None => failures.push(format!("{}: RDP instance reported stateless", l.fixture.name)),
            },
            Err(err) => failures.push(format!("{}: {err}", l.fixture.name)),
        }
    }
    let l3 = get("l3");
    let ext = extreme_states(l3).unwrap();
    let half = from_ints(1, 2);
    if ext.len() != 1 || *ext[0].value(l3.el("1/2")) != half {
        failures.push(format!(
            "L3 states: {:?}",
            ext.iter().map(|s| s.to_labeled(l3)).collect::<Vec<_>>()
        ));
    }
    for name in ["bool1", "bool2", "bool3"] {
        let e = get(name);
        let ext = extreme_states(e).unwrap();
        let m = name[4..].parse::<usize>().unwrap();
        let point = ext.iter().all(|s| e.elements().all(|a| s.value(a).is_integer()));
        if ext.len() != m || !point {
            failures.push(format!("{name}: {} extreme states, all two-valued {point}", ext.len()));
        }
        if !is_order_determining(e, &ext).unwrap().holds {
            failures.push(format!("{name}: point states not order-determining"));
        }
        let rep = function_representation(e, &ext).unwrap();
        if !rep.checks.isomorphism() {
            failures.push(format!("{name}: representation {:?}", rep.checks));
        }
    }
    report(
        9,
        "states exist under RDP; unique half state; Boolean representation",
        &failures,
        t0,
    );
}

#[test]
fn criterion_10_oracle_equivalence() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let budget = ScanBudget::default();
    let bb = BlockBudget::default();
    let cb = CompatBudget::default();
    for l in corpus() {
        let e = &l.algebra;
        if e.len() > ORACLE_MAX {
            continue;
        }
        let name = l.fixture.name;
        let n = e.len();
        let mut o = Oracle::new(e.table()).unwrap();
        let h = Hypotheses::new(e, &budget);
        for p in Property::ALL {
            let want = match p {
                Property::Rdp => o.rdp(),
                Property::Rip => o.rip(),
                Property::Dmp => o.dmp(),
                Property::Homogeneous => o.homogeneous(),
                Property::Lattice => o.lattice(),
                Property::Antilattice => o.antilattice(),
                Property::Omp => o.omp(),
                Property::Mv => o.mv(),
            };
            if h.holds(p) != want {
                failures.push(format!("{name} {}: optimized {}, oracle {want}", p.name(), h.holds(p)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for strong in [false, true] {
                    let mine = if strong {
                        strongly_compatible(e, el(a), el(b))
                    } else {
                        compatible(e, el(a), el(b))
                    };
                    if mine.is_some() != o.compat(a, b, strong) {
                        failures.push(format!(
                            "{name} compat({},{}) strong={strong}",
                            e.label(el(a)),
                            e.label(el(b))
                        ));
                    }
                }
            }
        }
        if n <= 12 {
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let ts = [el(a), el(b), el(c)];
                        let idx = [a, b, c];
                        if jointly_compatible(e, &ts, &cb).unwrap().decided() != Some(o.joint(&idx)) {
                            failures.push(format!("{name} joint {:?}", e.labels_of(&ts)));
                        }
                        let mine = internally_compatible(e, &ts, &cb).decided();
                        if mine != Some(o.internal(&idx).unwrap()) {
                            failures.push(format!("{name} internal {:?}", e.labels_of(&ts)));
                        }
                    }
                }
            }
        }
        if n <= ORACLE_BLOCKS_MAX {
            let ob = oracle_blocks(e.table()).unwrap();
            let fam = |bs: Vec<effect_algebra::blocks::Block>| {
                let mut v: Vec<Vec<usize>> = bs
                    .iter()
                    .map(|b| b.members.iter().map(|m| m.index()).collect())
                    .collect();
                v.sort();
                v
            };
            let sorted = |mut v: Vec<Vec<usize>>| {
                v.sort();
                v
            };
            if fam(enumerate_blocks(e, &bb).unwrap()) != sorted(ob.strong.clone()) {
                failures.push(format!("{name}: strong blocks differ"));
            }
            if fam(enumerate_ic_blocks(e, &bb).unwrap()) != sorted(ob.ic.clone()) {
                failures.push(format!("{name}: ic-blocks differ"));
            }
            if fam(enumerate_rdp_blocks(e, &bb).unwrap()) != sorted(ob.rdp.clone()) {
                failures.push(format!("{name}: RDP-blocks differ"));
            }
        }
    }
    report(10, "optimized verdicts equal the literal oracle", &failures, t0);
}

fn run_report(file: &std::path::Path, threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_ea"))
        .args(["--json", "--seed", "11", "report"])
        .arg(file)
        .args(["--props", "--blocks", "all", "--states", "--theorems"])
        .env("RAYON_NUM_THREADS", threads)
        .env_remove("EA_BUDGET")
        .output()
        .unwrap();
    assert!(
        out.status.code().is_some_and(|c| c <= 1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn criterion_11_determinism() {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    for name in ["mo3", "l3xl3", "hsum_l3_bool2"] {
        let path = common::corpus()
            .iter()
            .find(|l| l.fixture.name == name)
            .unwrap()
            .fixture
            .algebra_path();
        let a = run_report(&path, "4");
        let b = run_report(&path, "4");
        let c = run_report(&path, "1");
        if a != b || a != c {
            failures.push(format!("{name}: report bytes differ between runs"));
        }
        if a.is_empty() {
            failures.push(format!("{name}: empty report"));
        }
    }
    report(
        11,
        "report output is byte-identical across runs and thread counts",
        &failures,
        t0,
    );
}
