//! Literal-definition oracle queries next to the fast checkers.
//!
//!     cargo run --release --example oracle

use effect_algebra::corpus::fixture;
use effect_algebra::oracle::{oracle_blocks, oracle_check, Query};
use effect_algebra::properties::{check, Property};
use effect_algebra::scan::ScanBudget;

fn main() -> effect_algebra::Result<()> {
    let budget = ScanBudget::default();
    for name in ["l4", "mo2", "hsum_l3_bool2"] {
        let e = fixture(name).unwrap().load()?.algebra;
        println!("{}", e.name());
        for p in Property::ALL {
            let q: Query = p.name().parse()?;
            let o = oracle_check(e.table(), e.labels(), &q)?;
            let fast = check(&e, p, &budget);
            println!(
                "  {:<12} oracle {:<5} checker {:<5} ({} tuples)",
                p.name(),
                o.holds,
                fast.holds(),
                o.tuples
            );
        }
        let blocks = oracle_blocks(e.table())?;
        println!(
            "  {} strong blocks, {} ic, {} rdp",
            blocks.strong.len(),
            blocks.ic.len(),
            blocks.rdp.len()
        );
    }
    Ok(())
}
