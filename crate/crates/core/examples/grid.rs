//! The strict-quadrant grid algebras: RDP, lattice and a DMP witness.
//!
//!     cargo run --release --example grid

use effect_algebra::corpus::fixture;
use effect_algebra::properties::{check, check_dmp_witness, Property};
use effect_algebra::scan::ScanBudget;

fn main() -> effect_algebra::Result<()> {
    let budget = ScanBudget::default();
    let d10 = fixture("ex33_d10").unwrap().load()?.algebra;
    for p in [Property::Rdp, Property::Lattice, Property::Antilattice] {
        let r = check(&d10, p, &budget);
        let w = r.witness.as_ref().map(|w| d10.labels_of(w)).unwrap_or_default();
        println!("{} {:<12} {:<18} {w:?}", d10.name(), p.name(), r.verdict.name());
    }

    let d100 = fixture("ex33_d100").unwrap().load()?.algebra;
    println!("{}: {} elements", d100.name(), d100.len());
    for xyz in [["(20,30)", "(30,50)", "(1,25)"], ["(17,66)", "(33,72)", "(16,29)"]] {
        let [x, y, z] = xyz.map(|l| d100.el(l));
        let d = check_dmp_witness(&d100, x, y, z);
        let show = |a: Option<_>| a.map_or("none".to_string(), |a| d100.label(a).to_string());
        println!(
            "  x={} y={} z={}: x^z={} (y-x)^z={} violates={}",
            xyz[0],
            xyz[1],
            xyz[2],
            show(d.x_meet_z),
            show(d.difference_meet_z),
            d.violates
        );
    }
    Ok(())
}
