//! Lists the shipped fixtures and checks them against `expected.json`.
//!
//!     cargo run --release --example corpus            # verify
//!     cargo run --release --example corpus -- write   # rewrite algebra.json files

use effect_algebra::corpus::{corpus_list, corpus_verify, regenerate_all};

fn main() -> effect_algebra::Result<()> {
    if std::env::args().nth(1).as_deref() == Some("write") {
        regenerate_all()?;
        println!("rewrote {} fixtures", corpus_list().len());
        return Ok(());
    }
    let mut failed = 0;
    for o in corpus_verify() {
        let mark = if o.passed() { "ok  " } else { "FAIL" };
        println!("{mark} {:<14} {} expectations", o.name, o.expectations);
        if !o.regenerates {
            println!("     algebra.json differs from its recipe");
        }
        if let Some(e) = &o.error {
            println!("     error: {e}");
        }
        for m in &o.mismatches {
            println!("     {} {:?}: expected {}, got {}", m.key, m.args, m.expected, m.actual);
        }
        failed += usize::from(!o.passed());
    }
    if failed > 0 {
        std::process::exit(1);
    }
    Ok(())
}
