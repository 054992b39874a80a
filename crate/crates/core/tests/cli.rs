use std::path::Path;
use std::process::{Command, Output};

use effect_algebra::corpus::fixture;
use serde_json::Value;

fn ea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ea"))
        .args(args)
        .env_remove("EA_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn corpus_file(name: &str) -> String {
    fixture(name).unwrap().algebra_path().display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = ea(&["validate", &corpus_file("l3")]);
    assert_eq!(ok.status.code(), Some(0));

    let conflict = write(
        dir.path(),
        "conflict.json",
        r#"{"format":"ea-table/1","name":"x","elements":["0","h","1"],"zero":"0","one":"1",
            "plus":[["h","h","1"],["h","h","h"]]}"#,
    );
    let out = ea(&["validate", &conflict]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    // a and b both complement a
    let two_complements = write(
        dir.path(),
        "ortho.json",
        r#"{"format":"ea-table/1","name":"y","elements":["0","a","b","1"],"zero":"0","one":"1",
            "plus":[["a","a","1"],["a","b","1"]]}"#,
    );
    let out = ea(&["--json", "validate", &two_complements]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ok"], false);
    let axioms: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["axiom"].as_str().unwrap())
        .collect();
    assert!(axioms.contains(&"orthosupplement"), "{axioms:?}");

    assert_eq!(ea(&["validate", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(ea(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn gen_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], usize); 3] = [
        (&["chain", "4"], 5),
        (&["mo", "2"], 6),
        (
            &[
                "interval", "--cone", "strict", "--dim", "2", "--den", "10", "--u", "1,1",
            ],
            83,
        ),
    ];
    for (i, (args, size)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("g{i}.json"));
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["-o", path.to_str().unwrap()]);
        assert_eq!(ea(&full).status.code(), Some(0));
        let out = ea(&["--json", "validate", path.to_str().unwrap()]);
        assert_eq!(json(&out)["elements"], *size, "{args:?}");
    }
}

#[test]
fn gen_matches_corpus_bytes() {
    let out = ea(&["gen", "mo", "2"]);
    let stored = std::fs::read(corpus_file("mo2")).unwrap();
    assert_eq!(out.stdout, stored);
    let out = ea(&["gen", "chain", "2"]);
    assert_eq!(out.stdout, std::fs::read(corpus_file("l3")).unwrap());
}

#[test]
fn gen_combinators_and_recipes() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).display().to_string();
    assert!(ea(&["gen", "chain", "2", "--recipe", "-o", &d("l3.json")])
        .status
        .success());
    assert!(ea(&["gen", "boolean", "2", "--recipe", "-o", &d("b2.json")])
        .status
        .success());
    assert!(ea(&[
        "gen",
        "hsum",
        &d("l3.json"),
        &d("b2.json"),
        "--recipe",
        "-o",
        &d("h.json")
    ])
    .status
    .success());
    assert!(
        ea(&["gen", "product", &d("l3.json"), &d("b2.json"), "-o", &d("p.json")])
            .status
            .success()
    );
    assert_eq!(json(&ea(&["--json", "validate", &d("h.json")]))["elements"], 5);
    assert_eq!(json(&ea(&["--json", "validate", &d("p.json")]))["elements"], 12);
    let out = ea(&["gen", "fuzzy", "--omega", "w1,w2", "--gen", "1/2,1", "-o", &d("f.json")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&ea(&["--json", "validate", &d("f.json")]));
    assert!(v["elements"].as_u64().unwrap() >= 4);
}

#[test]
fn report_examples() {
    let v = json(&ea(&[
        "--json",
        "report",
        &corpus_file("mo2"),
        "--props",
        "--blocks",
        "strong",
    ]));
    assert_eq!(v["blocks"]["strong"].as_array().unwrap().len(), 2);
    assert_eq!(v["properties"]["rdp"]["holds"], false);
    assert_eq!(v["settings"]["seed"], 20240601);
    assert_eq!(v["input"]["name"], "MO2");
    assert_eq!(v["legend"].as_array().unwrap().len(), 5);

    let v = json(&ea(&["--json", "report", &corpus_file("l5"), "--props"]));
    assert_eq!(v["properties"]["rdp"]["holds"], true);
    assert_eq!(v["properties"]["mv"]["holds"], true);
}

#[test]
fn report_dmp_witness_on_grid() {
    let out = ea(&[
        "--json",
        "report",
        &corpus_file("ex33_d100"),
        "--check-dmp-witness",
        "x=(17,66)",
        "y=(33,72)",
        "z=(16,29)",
    ]);
    let v = json(&out);
    let w = &v["dmp_witness"];
    assert_eq!(w["x_meet_z"], "(16,29)");
    assert_eq!(w["difference_meet_z"], Value::Null);
    assert_eq!(w["violates_dmp"], true);
}

#[test]
fn props_compat_and_blocks() {
    let mo2 = corpus_file("mo2");
    let out = ea(&["--json", "props", &mo2, "--check", "lattice,omp"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(ea(&["props", &mo2, "--check", "rdp"]).status.code(), Some(1));
    assert_eq!(ea(&["props", &mo2, "--check", "bogus"]).status.code(), Some(2));

    let out = ea(&["--json", "compat", &mo2, "a1", "a1'", "--strong"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["witness"]["strong"], true);
    assert_eq!(ea(&["compat", &mo2, "a1", "a2"]).status.code(), Some(1));
    assert_eq!(ea(&["compat", &mo2, "--joint", "a1,a2"]).status.code(), Some(1));
    assert_eq!(ea(&["compat", &mo2, "--internal", "0,a1,a1',1"]).status.code(), Some(0));
    assert_eq!(ea(&["compat", &mo2, "a1", "nope"]).status.code(), Some(2));

    let out = ea(&[
        "--json",
        "compat",
        &corpus_file("l3xl3"),
        "--joint",
        "(1/2,0),(0,1/2),(1,1/2)",
    ]);
    assert_eq!(json(&out)["joint"]["verdict"], "compatible");

    let out = ea(&["--json", "blocks", &mo2, "--kind", "all", "--theorems"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["blocks"]["ic"], v["blocks"]["rdp"]);
    assert_eq!(v["theorems"]["homogeneous-blocks"]["ok"], true);
    assert_eq!(v["theorems"]["block-cover"]["status"], "checked");
}

#[test]
fn states_and_observables() {
    let out = ea(&["--json", "states", &corpus_file("bool2"), "--represent"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["states"]["extreme"].as_array().unwrap().len(), 2);
    assert_eq!(v["states"]["representation"]["isomorphism"], true);

    let l3 = fixture("l3").unwrap();
    let dir = l3.dir();
    let out = ea(&[
        "--json",
        "observable",
        &corpus_file("l3"),
        "--from-spectral",
        dir.join("spectral-split.json").to_str().unwrap(),
        "--range",
        dir.join("observable-split.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reconstruction"]["unique"], true);
    assert_eq!(v["range"]["internal"]["verdict"], "compatible");

    let out = ea(&["--json", "observable", &corpus_file("mo2"), "--from-joint", "a1,a1'"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["observable"]["targets"].as_array().unwrap().len(), 2);

    // The file names L3 but the algebra is MO2.
    let out = ea(&[
        "observable",
        &corpus_file("mo2"),
        "--spectral-of",
        dir.join("observable-split.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_subcommand() {
    let out = ea(&[
        "--json",
        "oracle",
        &corpus_file("mo2"),
        "--query",
        "rdp",
        "--query",
        "compat(a1,a1')",
        "--blocks",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["answers"][0]["holds"], false);
    assert_eq!(v["answers"][1]["holds"], true);
    assert_eq!(v["blocks"]["strong"].as_array().unwrap().len(), 2);
    assert_eq!(
        ea(&["oracle", &corpus_file("ex33_d10"), "--query", "rdp"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn text_output_and_budget_flags() {
    let out = ea(&[
        "--seed",
        "5",
        "--max-work",
        "10",
        "--samples",
        "50",
        "props",
        &corpus_file("l4"),
        "--check",
        "rdp",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("seed: 5"), "{text}");
    assert!(text.contains("holds-sampled"), "{text}");
}
