//! The shipped fixture set under `corpus/`.
//!
//! Each fixture directory holds `algebra.json` (regenerated byte-for-byte
//! from the recipe below), `expected.json`, and optionally `spectral-*.json`
//! and `observable-*.json` files that refer to the algebra by name.
//!
//! `expected.json` lists expectations as `{key, args?, value, basis}`. The
//! `basis` says where the value comes from: `claim` (a published statement),
//! `definition` (immediate from the construction) or `computed` (an
//! independent calculation, e.g. by the oracle or by hand).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::EffectAlgebra;
use crate::blocks::{enumerate_blocks, enumerate_ic_blocks, enumerate_rdp_blocks, BlockBudget};
use crate::compat::{compatible, strongly_compatible, CompatBudget};
use crate::constructors::{fuzzy_closure, ConeSpec, Recipe, DEFAULT_FUZZY_CAP};
use crate::error::{Error, Result};
use crate::io;
use crate::observables::{observable_from_spectral, observable_laws, range_of, spectral_family_of};
use crate::properties::{check_dmp_witness, Hypotheses, Property};
use crate::rational::{format_rational, parse_rational};
use crate::scan::ScanBudget;
use crate::states::{extreme_states, find_state, StateSearch};

/// How `algebra.json` is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    Table,
    Recipe,
    Fuzzy,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    /// Algebra name written into the file; spectral and observable files refer to it.
    pub algebra_name: String,
    pub recipe: Recipe,
    pub storage: Storage,
}

fn fx(name: &'static str, algebra_name: impl Into<String>, recipe: Recipe, storage: Storage) -> Fixture {
    Fixture {
        name,
        algebra_name: algebra_name.into(),
        recipe,
        storage,
    }
}

fn ex33(den: u64) -> Recipe {
    Recipe::Interval {
        cone: ConeSpec::strict_quadrant(2, den),
        u: vec![den as i64, den as i64],
    }
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every fixture, in a fixed order.
pub fn corpus_list() -> Vec<Fixture> {
    use Recipe::*;
    use Storage::Table as T;
    let mut v = Vec::new();
    for k in 1..=5 {
        let names = ["l2", "l3", "l4", "l5", "l6"];
        v.push(fx(names[k - 1], format!("L{}", k + 1), Chain { k }, T));
    }
    for (m, name) in [(1, "bool1"), (2, "bool2"), (3, "bool3")] {
        v.push(fx(name, format!("2^{m}"), Boolean { m }, T));
    }
    for (n, name) in [(1, "mo1"), (2, "mo2"), (3, "mo3")] {
        v.push(fx(name, format!("MO{n}"), Mo { n }, T));
    }
    v.push(fx(
        "l3xl3",
        "L3xL3",
        Product {
            factors: vec![Chain { k: 2 }, Chain { k: 2 }],
        },
        T,
    ));
    v.push(fx(
        "bool2xl3",
        "2^2xL3",
        Product {
            factors: vec![Boolean { m: 2 }, Chain { k: 2 }],
        },
        T,
    ));
    v.push(fx(
        "hsum_l3_bool2",
        "hsum(L3,2^2)",
        Hsum {
            summands: vec![Chain { k: 2 }, Boolean { m: 2 }],
        },
        T,
    ));
    v.push(fx("ex33_d10", "ex33_d10", ex33(10), T));
    v.push(fx("ex33_d100", "ex33_d100", ex33(100), Storage::Recipe));
    v.push(fx(
        "fuzzy_half",
        "fuzzy{1/2}",
        Fuzzy {
            omega: vec!["w".into()],
            generators: vec![vec!["1/2".into()]],
        },
        Storage::Fuzzy,
    ));
    v.push(fx(
        "fuzzy_chi",
        "fuzzy{chi_w1}",
        Fuzzy {
            omega: vec!["w1".into(), "w2".into()],
            generators: vec![vec!["1".into(), "0".into()]],
        },
        Storage::Fuzzy,
    ));
    v
}

pub fn fixture(name: &str) -> Option<Fixture> {
    corpus_list().into_iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn dir(&self) -> PathBuf {
        corpus_dir().join(self.name)
    }

    pub fn algebra_path(&self) -> PathBuf {
        self.dir().join("algebra.json")
    }

    pub fn build(&self) -> Result<EffectAlgebra> {
        Ok(self.recipe.build()?.with_name(self.algebra_name.clone()))
    }

    /// The exact text of `algebra.json`.
    pub fn generate(&self) -> Result<String> {
        Ok(match self.storage {
            Storage::Table => io::table_to_json(&self.build()?),
            Storage::Recipe => io::recipe_to_json(&self.algebra_name, &self.recipe),
            Storage::Fuzzy => {
                let Recipe::Fuzzy { omega, generators } = &self.recipe else {
                    return Err(Error::InvalidArgument(format!("{} is not a fuzzy recipe", self.name)));
                };
                let gens = generators
                    .iter()
                    .map(|g| g.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let mut fz = fuzzy_closure(omega, &gens, DEFAULT_FUZZY_CAP)?;
                fz.algebra = fz.algebra.with_name(self.algebra_name.clone());
                io::fuzzy_to_json(&fz)
            }
        })
    }

    pub fn load(&self) -> Result<io::Loaded> {
        io::load_algebra(self.algebra_path())
    }

    pub fn expected(&self) -> Result<ExpectedFile> {
        let text = std::fs::read_to_string(self.dir().join("expected.json"))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", self.name)))
    }

    /// Auxiliary files whose names start with `prefix` (`spectral-` or `observable-`), sorted.
    pub fn aux_files(&self, prefix: &str) -> Vec<PathBuf> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(self.dir())
            .map(|rd| {
                rd.filter_map(|d| d.ok().map(|d| d.path()))
                    .filter(|p| {
                        p.file_name()
                            .and_then(|n| n.to_str())
                            .is_some_and(|n| n.starts_with(prefix))
                    })
                    .collect()
            })
            .unwrap_or_default();
        v.sort();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Claim,
    Definition,
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub key: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    pub value: Value,
    pub basis: Basis,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedFile {
    pub fixture: String,
    pub expect: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub key: String,
    pub args: Vec<String>,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub regenerates: bool,
    pub expectations: usize,
    pub mismatches: Vec<Mismatch>,
    pub error: Option<String>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.regenerates && self.mismatches.is_empty() && self.error.is_none()
    }
}

/// Lazily computed analyses for one algebra.
struct Probe<'a> {
    e: &'a EffectAlgebra,
    dir: PathBuf,
    budget: ScanBudget,
    hyp: Hypotheses<'a>,
    blocks: BTreeMap<&'static str, Vec<Vec<String>>>,
}

impl<'a> Probe<'a> {
    fn new(e: &'a EffectAlgebra, dir: PathBuf) -> Self {
        let budget = ScanBudget::default();
        Probe {
            e,
            dir,
            hyp: Hypotheses::new(e, &budget),
            budget,
            blocks: BTreeMap::new(),
        }
    }

    fn hypotheses(&self) -> &Hypotheses<'a> {
        &self.hyp
    }

    fn blocks(&mut self, kind: &'static str) -> Result<&Vec<Vec<String>>> {
        if !self.blocks.contains_key(kind) {
            let bb = BlockBudget {
                scan: self.budget.clone(),
                ..BlockBudget::default()
            };
            let bs = match kind {
                "strong" => enumerate_blocks(self.e, &bb)?,
                "ic" => enumerate_ic_blocks(self.e, &bb)?,
                _ => enumerate_rdp_blocks(self.e, &bb)?,
            };
            self.blocks
                .insert(kind, bs.iter().map(|b| self.e.labels_of(&b.members)).collect());
        }
        Ok(&self.blocks[kind])
    }

    fn aux(&self, file: &str) -> Result<String> {
        Ok(std::fs::read_to_string(self.dir.join(file))?)
    }

    fn eval(&mut self, key: &str, args: &[String]) -> Result<Value> {
        let e = self.e;
        let arg = |i: usize| {
            args.get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("{key} needs {} argument(s)", i + 1)))
        };
        if let Some(p) = key.strip_prefix("property.") {
            let p = Property::parse(p).ok_or_else(|| Error::InvalidArgument(format!("unknown property {p}")))?;
            return Ok(json!(self.hypotheses().get(p).verdict.name()));
        }
        if let Some(rest) = key.strip_prefix("blocks.") {
            let (kind, what) = rest.split_once('.').unwrap_or((rest, "members"));
            let kind = match kind {
                "strong" => "strong",
                "ic" => "ic",
                "rdp" => "rdp",
                _ => return Err(Error::InvalidArgument(format!("unknown block kind {kind}"))),
            };
            let bs = self.blocks(kind)?;
            return Ok(match what {
                "count" => json!(bs.len()),
                "sizes" => json!(bs.iter().map(Vec::len).collect::<Vec<_>>()),
                "cover" => {
                    let covered: std::collections::BTreeSet<&String> = bs.iter().flatten().collect();
                    json!(covered.len() == e.len())
                }
                _ => {
                    let mut sorted = bs.clone();
                    sorted.sort();
                    json!(sorted)
                }
            });
        }
        Ok(match key {
            "elements" => json!(e.len()),
            "compat" | "strong" => {
                let (a, b) = (e.element_or_err(arg(0)?)?, e.element_or_err(arg(1)?)?);
                let w = if key == "strong" {
                    strongly_compatible(e, a, b)
                } else {
                    compatible(e, a, b)
                };
                json!(w.is_some())
            }
            "dmp_witness" => {
                let [x, y, z] = [0, 1, 2].map(|i| arg(i).and_then(|l| e.element_or_err(l)));
                json!(check_dmp_witness(e, x?, y?, z?).violates)
            }
            "state.exists" => json!(matches!(find_state(e)?, StateSearch::Found(_))),
            "state.values" => match find_state(e)? {
                StateSearch::Found(s) => json!(s.to_labeled(e)),
                StateSearch::Stateless(_) => Value::Null,
            },
            "states.extreme.count" => json!(extreme_states(e)?.len()),
            "observable.spectral_roundtrip" => {
                let x = io::parse_observable(e, &self.aux(arg(0)?)?)?;
                let f = spectral_family_of(e, &x);
                let r = observable_from_spectral(self.hypotheses(), &f)?;
                json!(r.observable == x)
            }
            "observable.range" => {
                let x = io::parse_observable(e, &self.aux(arg(0)?)?)?;
                json!(e.labels_of(&range_of(e, &x, &CompatBudget::default()).members))
            }
            "observable.range_internal" => {
                let x = io::parse_observable(e, &self.aux(arg(0)?)?)?;
                json!(range_of(e, &x, &CompatBudget::default()).internal.decided())
            }
            "observable.homomorphism" => {
                let x = io::parse_observable(e, &self.aux(arg(0)?)?)?;
                json!(observable_laws(e, &x, &self.budget).homomorphism)
            }
            "spectral.unique" => {
                let f = io::parse_spectral(e, &self.aux(arg(0)?)?)?;
                json!(observable_from_spectral(self.hypotheses(), &f)?.uniqueness.unique())
            }
            "spectral.atoms" => {
                let f = io::parse_spectral(e, &self.aux(arg(0)?)?)?;
                let r = observable_from_spectral(self.hypotheses(), &f)?;
                let atoms: Vec<Value> = r
                    .observable
                    .atoms()
                    .iter()
                    .map(|(p, c)| json!([format_rational(p), e.label(*c)]))
                    .collect();
                json!(atoms)
            }
            _ => return Err(Error::InvalidArgument(format!("unknown expectation key {key}"))),
        })
    }
}

/// Evaluates one expectation key against an algebra; `dir` resolves auxiliary files.
pub fn evaluate(e: &EffectAlgebra, dir: &Path, key: &str, args: &[String]) -> Result<Value> {
    Probe::new(e, dir.to_path_buf()).eval(key, args)
}

pub fn verify_fixture(f: &Fixture) -> FixtureOutcome {
    let mut out = FixtureOutcome {
        name: f.name.into(),
        regenerates: false,
        expectations: 0,
        mismatches: vec![],
        error: None,
    };
    let run = |out: &mut FixtureOutcome| -> Result<()> {
        let stored = std::fs::read_to_string(f.algebra_path())?;
        out.regenerates = f.generate()? == stored;
        let loaded = io::parse_algebra(&stored)?;
        let expected = f.expected()?;
        out.expectations = expected.expect.len();
        let mut probe = Probe::new(&loaded.algebra, f.dir());
        for x in &expected.expect {
            let actual = probe.eval(&x.key, &x.args)?;
            if actual != x.value {
                out.mismatches.push(Mismatch {
                    key: x.key.clone(),
                    args: x.args.clone(),
                    expected: x.value.clone(),
                    actual,
                });
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        out.error = Some(e.to_string());
    }
    out
}

/// Verifies every fixture in parallel; results come back in list order.
pub fn corpus_verify() -> Vec<FixtureOutcome> {
    corpus_list().par_iter().map(verify_fixture).collect()
}

/// Rewrites every `algebra.json` from its recipe.
pub fn regenerate_all() -> Result<()> {
    for f in corpus_list() {
        std::fs::create_dir_all(f.dir())?;
        std::fs::write(f.algebra_path(), f.generate()?)?;
    }
    Ok(())
}
