//! States, extreme states and the function representation.
//!
//!     cargo run --release --example states

use effect_algebra::corpus::fixture;
use effect_algebra::rational::format_rational;
use effect_algebra::states::{extreme_states, find_state, function_representation, StateSearch};

fn main() -> effect_algebra::Result<()> {
    for name in ["l3", "bool2", "mo2"] {
        let e = fixture(name).unwrap().load()?.algebra;
        match find_state(&e)? {
            StateSearch::Found(s) => {
                let vals: Vec<String> = e
                    .elements()
                    .map(|a| format!("{}={}", e.label(a), format_rational(s.value(a))))
                    .collect();
                println!("{}: state {}", e.name(), vals.join(" "));
            }
            StateSearch::Stateless(cert) => println!("{}: no state, certificate {cert:?}", e.name()),
        }
        let ext = extreme_states(&e)?;
        println!("  {} extreme states", ext.len());
        let rep = function_representation(&e, &ext)?;
        println!("  representation checks: {:?}", rep.checks);
    }
    Ok(())
}
