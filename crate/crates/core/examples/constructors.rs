//! Builds one algebra with each constructor and validates it.
//!
//!     cargo run --release --example constructors

use effect_algebra::constructors::{
    boolean_algebra, direct_product, fuzzy_closure, horizontal_sum, interval_algebra, mo, mv_chain, ConeSpec,
};
use effect_algebra::rational::from_ints;
use effect_algebra::{io, EffectAlgebra};

fn show(e: &EffectAlgebra) {
    let v = e.validation();
    println!(
        "{:<16} {:>4} elements  axioms {}",
        e.name(),
        e.len(),
        if v.ok { "ok" } else { "FAIL" }
    );
}

fn main() -> effect_algebra::Result<()> {
    let l3 = mv_chain(2)?;
    let b2 = boolean_algebra(2)?;
    show(&l3);
    show(&b2);
    show(&mo(3)?);
    show(&horizontal_sum(&[l3.clone(), b2.clone()])?);
    show(&direct_product(&[l3.clone(), b2])?);
    show(&interval_algebra(&ConeSpec::strict_quadrant(2, 10), &[10, 10])?);

    let omega = vec!["w1".to_string(), "w2".to_string()];
    let fz = fuzzy_closure(&omega, &[vec![from_ints(1, 2), from_ints(1, 1)]], 256)?;
    show(&fz.algebra);

    // Tables round-trip through the JSON format byte for byte.
    let text = io::table_to_json(&l3);
    assert_eq!(io::table_to_json(&io::parse_algebra(&text)?.algebra), text);
    print!("{text}");
    Ok(())
}
