//! Strong, internally-compatible and RDP blocks, and the cover theorems.
//!
//!     cargo run --release --example blocks [fixture]

use effect_algebra::blocks::{enumerate_blocks, verify_block_theorem, verify_homogeneous_block_theorem, BlockBudget};
use effect_algebra::corpus::fixture;
use effect_algebra::properties::Hypotheses;

fn main() -> effect_algebra::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "mo2".into());
    let e = fixture(&name).expect("unknown fixture").load()?.algebra;
    let budget = BlockBudget::default();
    for b in enumerate_blocks(&e, &budget)? {
        println!(
            "block {:?} subalgebra={} mv={:?}",
            e.labels_of(&b.members),
            b.flags.is_subalgebra,
            b.flags.is_mv
        );
    }
    let h = Hypotheses::new(&e, &budget.scan);
    let cover = verify_block_theorem(&h, &budget)?;
    println!("block cover theorem: {:?}", cover.ok());
    let homog = verify_homogeneous_block_theorem(&h, &budget)?;
    println!("homogeneous block theorem: {:?}", homog.ok());
    Ok(())
}
