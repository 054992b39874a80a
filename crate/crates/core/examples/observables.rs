//! Discrete observables: evaluation, spectral families, reconstruction and range.
//!
//!     cargo run --release --example observables

use effect_algebra::borel::BorelSetDesc;
use effect_algebra::compat::CompatBudget;
use effect_algebra::corpus::fixture;
use effect_algebra::observables::{
    observable_eval, observable_from_spectral, observable_laws, range_of, spectral_family_of, DiscreteObservable,
};
use effect_algebra::properties::Hypotheses;
use effect_algebra::rational::{format_rational, from_ints};
use effect_algebra::scan::ScanBudget;

fn main() -> effect_algebra::Result<()> {
    let e = fixture("l3xl3").unwrap().load()?.algebra;
    let x = DiscreteObservable::new(
        &e,
        vec![
            (from_ints(0, 1), e.el("(1/2,0)")),
            (from_ints(1, 2), e.el("(0,1/2)")),
            (from_ints(2, 1), e.el("(1/2,1/2)")),
        ],
    )?;
    for set in ["{0}", "[0,1]", "(0,inf)", "(-inf,0) U (1,3)"] {
        let a: BorelSetDesc = set.parse()?;
        println!("X({a}) = {}", e.label(observable_eval(&e, &x, &a)));
    }

    let f = spectral_family_of(&e, &x);
    let jumps: Vec<String> = f
        .jumps
        .iter()
        .map(|(t, a)| format!("{}:{}", format_rational(t), e.label(*a)))
        .collect();
    println!("spectral family jumps {}", jumps.join(" "));

    let budget = ScanBudget::default();
    let h = Hypotheses::new(&e, &budget);
    let rec = observable_from_spectral(&h, &f)?;
    println!(
        "reconstructed equal: {}  unique: {:?}",
        rec.observable == x,
        rec.uniqueness
    );

    let range = range_of(&e, &x, &CompatBudget::default());
    println!("range {:?}", e.labels_of(&range.members));
    let laws = observable_laws(&e, &x, &budget);
    println!(
        "laws: complement={} additivity={} difference={}",
        laws.complement, laws.additivity, laws.difference
    );
    Ok(())
}
