#![allow(dead_code)]

use std::sync::OnceLock;

use effect_algebra::corpus::{corpus_list, Fixture};
use effect_algebra::EffectAlgebra;

pub struct Loaded {
    pub fixture: Fixture,
    pub algebra: EffectAlgebra,
}

/// Every corpus algebra, loaded once per test binary.
pub fn corpus() -> &'static [Loaded] {
    static CORPUS: OnceLock<Vec<Loaded>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        corpus_list()
            .into_iter()
            .map(|fixture| {
                let algebra = fixture
                    .load()
                    .unwrap_or_else(|e| panic!("{}: {e}", fixture.name))
                    .algebra;
                Loaded { fixture, algebra }
            })
            .collect()
    })
}

pub fn get(name: &str) -> &'static EffectAlgebra {
    &corpus()
        .iter()
        .find(|l| l.fixture.name == name)
        .unwrap_or_else(|| panic!("no fixture {name}"))
        .algebra
}

/// Prints a one-line verdict for a criterion and panics on failure.
pub fn report(criterion: u32, title: &str, failures: &[String], started: std::time::Instant) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {criterion:>2} {status} {title} ({:.1?})", started.elapsed());
    for f in failures.iter().take(20) {
        println!("    {f}");
    }
    assert!(
        failures.is_empty(),
        "criterion {criterion} failed with {} problem(s)",
        failures.len()
    );
}
