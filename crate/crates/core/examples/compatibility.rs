//! Pairwise, strong, joint and internal compatibility on MO2 and L3xL3.
//!
//!     cargo run --release --example compatibility

use effect_algebra::compat::{
    compatible, internally_compatible, jointly_compatible, strongly_compatible, CompatBudget, InternalVerdict,
    JointVerdict,
};
use effect_algebra::corpus::fixture;

fn main() -> effect_algebra::Result<()> {
    let budget = CompatBudget::default();
    let mo2 = fixture("mo2").unwrap().load()?.algebra;
    for (a, b) in [("a1", "a1'"), ("a1", "a2"), ("0", "a2")] {
        let (x, y) = (mo2.el(a), mo2.el(b));
        match strongly_compatible(&mo2, x, y).or_else(|| compatible(&mo2, x, y)) {
            Some(w) => println!(
                "{a} ~ {b}: a1={} b1={} c={} strong={}",
                mo2.label(w.a1),
                mo2.label(w.b1),
                mo2.label(w.c),
                w.strong
            ),
            None => println!("{a} and {b} are not compatible"),
        }
    }

    let sq = fixture("l3xl3").unwrap().load()?.algebra;
    let targets = ["(1/2,0)", "(0,1/2)", "(1,1/2)"].map(|l| sq.el(l));
    match jointly_compatible(&sq, &targets, &budget)? {
        JointVerdict::Compatible { witness } => {
            println!("joint refinement of {:?}", sq.labels_of(&targets));
            println!("  parts {:?}", sq.labels_of(&witness.cs));
            for (t, idx) in targets.iter().zip(&witness.assignment) {
                println!("  {} = sum of parts {idx:?}", sq.label(*t));
            }
        }
        other => println!("joint: {other:?}"),
    }
    let m = ["0", "a1", "a1'", "1"].map(|l| mo2.el(l));
    let verdict = internally_compatible(&mo2, &m, &budget);
    println!(
        "{{0,a1,a1',1}} internally compatible: {}",
        matches!(verdict, InternalVerdict::Compatible { .. })
    );
    Ok(())
}
