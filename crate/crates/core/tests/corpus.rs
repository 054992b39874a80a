use effect_algebra::corpus::{corpus_list, corpus_verify, fixture};

#[test]
fn every_fixture_verifies() {
    let outcomes = corpus_verify();
    assert_eq!(outcomes.len(), corpus_list().len());
    let bad: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn regeneration_is_byte_identical() {
    for f in corpus_list() {
        let stored = std::fs::read_to_string(f.algebra_path()).unwrap();
        assert_eq!(f.generate().unwrap(), stored, "{}", f.name);
    }
}

#[test]
fn every_expectation_has_a_basis_and_the_published_ones_are_marked() {
    let mut claims = 0;
    for f in corpus_list() {
        let exp = f.expected().unwrap();
        assert_eq!(exp.fixture, f.name);
        assert!(!exp.expect.is_empty(), "{}", f.name);
        claims += exp
            .expect
            .iter()
            .filter(|x| x.basis == effect_algebra::corpus::Basis::Claim)
            .count();
    }
    assert!(claims > 10);
}

#[test]
fn auxiliary_files_name_their_algebra() {
    for name in ["l3", "bool2", "mo2"] {
        let f = fixture(name).unwrap();
        let e = f.load().unwrap().algebra;
        let files = [f.aux_files("spectral-"), f.aux_files("observable-")].concat();
        assert!(!files.is_empty());
        for p in files {
            let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            assert_eq!(v["algebra"], e.name(), "{}", p.display());
        }
    }
}
