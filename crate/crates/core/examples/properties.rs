//! Property verdicts for a few corpus algebras, with witnesses.
//!
//!     cargo run --release --example properties [fixture...]

use effect_algebra::corpus::fixture;
use effect_algebra::properties::{check, Property};
use effect_algebra::scan::ScanBudget;

fn main() -> effect_algebra::Result<()> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = ["l4", "bool2", "mo2", "hsum_l3_bool2", "ex33_d10"]
            .map(String::from)
            .to_vec();
    }
    let budget = ScanBudget::from_env();
    for name in names {
        let f = fixture(&name).ok_or_else(|| effect_algebra::Error::InvalidArgument(format!("no fixture {name}")))?;
        let e = f.load()?.algebra;
        println!("{} ({} elements)", e.name(), e.len());
        for p in Property::ALL {
            let r = check(&e, p, &budget);
            let witness = r.witness.as_ref().map(|w| e.labels_of(w).join(" ")).unwrap_or_default();
            println!("  {:<12} {:<18} {witness}", p.name(), r.verdict.name());
        }
    }
    Ok(())
}
