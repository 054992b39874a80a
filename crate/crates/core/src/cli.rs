//! The `ea` command line. Every subcommand builds a JSON value with labels
//! in place of indices; `--json` prints it verbatim, otherwise it is
//! flattened into `key: value` lines.
//!
//! Exit codes: 0 success, 1 a negative finding (axiom violation, failed
//! property, incompatible pair, failed theorem check), 2 usage or input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::algebra::{EffectAlgebra, Element};
use crate::blocks::{
    enumerate_blocks, enumerate_ic_blocks, enumerate_rdp_blocks, verify_block_theorem,
    verify_homogeneous_block_theorem, Block, BlockBudget,
};
use crate::compat::{
    compatible, internally_compatible, jointly_compatible, strongly_compatible, CompatBudget, CompatWitness,
    InternalVerdict, JointVerdict, RefinementWitness, TheoremCheck,
};
use crate::constructors::{
    boolean_algebra, direct_product, fuzzy_closure, horizontal_sum, interval_algebra, mo, mv_chain, ConeKind, ConeSpec,
    Recipe, DEFAULT_FUZZY_CAP,
};
use crate::error::{Error, Result};
use crate::io;
use crate::observables::{
    observable_from_jointly_compatible, observable_from_spectral, observable_laws, range_of, spectral_family_of,
    spectral_laws, target_set, DiscreteObservable,
};
use crate::oracle::{oracle_blocks, oracle_check, split_top, Query};
use crate::properties::{check, check_dmp_witness, Hypotheses, Property, PropertyResult};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::scan::ScanBudget;
use crate::states::{extreme_states, find_state, function_representation, is_order_determining, State, StateSearch};

pub const VERDICT_LEGEND: [&str; 5] = [
    "holds-exhaustive",
    "holds-sampled",
    "fails",
    "not-applicable",
    "budget-limited",
];

#[derive(Parser, Debug)]
#[command(name = "ea", version, about = "Finite effect algebras: validate, generate, analyse")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Print the JSON document instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Seed for every sampled scan.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Samples drawn when a scan exceeds the work limit.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Work limit for exhaustive scans (overrides EA_BUDGET).
    #[arg(long, global = true)]
    max_work: Option<u64>,
    /// Scan everything regardless of size.
    #[arg(long, global = true)]
    exhaustive: bool,
}

impl BudgetArgs {
    fn scan(&self) -> ScanBudget {
        let mut b = ScanBudget::from_env();
        if let Some(s) = self.seed {
            b.seed = s;
        }
        if let Some(s) = self.samples {
            b.samples = s;
        }
        if let Some(w) = self.max_work {
            b.max_work = w;
        }
        b.exhaustive |= self.exhaustive;
        b
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the effect-algebra axioms of a table file.
    Validate { file: PathBuf },
    /// Write a generated algebra as `ea-table/1` (or `ea-gen/1` with --recipe).
    Gen {
        #[command(subcommand)]
        what: GenKind,
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
        /// Store the constructor call instead of the table.
        #[arg(long, global = true)]
        recipe: bool,
        #[arg(long, global = true)]
        name: Option<String>,
    },
    /// Decide structural properties.
    Props {
        file: PathBuf,
        /// Comma-separated subset of rdp,rip,dmp,homogeneous,lattice,antilattice,omp,mv.
        #[arg(long, value_delimiter = ',')]
        check: Vec<String>,
    },
    /// Compatibility of a pair, or joint / internal compatibility of a set.
    Compat {
        file: PathBuf,
        a: Option<String>,
        b: Option<String>,
        #[arg(long)]
        strong: bool,
        /// Comma-separated labels.
        #[arg(long)]
        joint: Option<String>,
        #[arg(long)]
        internal: Option<String>,
    },
    /// Enumerate blocks.
    Blocks {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "strong")]
        kind: BlockChoice,
        /// Also run the block-cover and homogeneous-block checks.
        #[arg(long)]
        theorems: bool,
    },
    /// Find a state; optionally all extreme states and the function representation.
    States {
        file: PathBuf,
        #[arg(long)]
        extreme: bool,
        #[arg(long)]
        represent: bool,
    },
    /// Observables, spectral families and ranges.
    Observable {
        file: PathBuf,
        #[arg(long, value_name = "SPECTRAL")]
        from_spectral: Option<PathBuf>,
        #[arg(long, value_name = "OBS")]
        spectral_of: Option<PathBuf>,
        /// Comma-separated labels of a jointly compatible set.
        #[arg(long)]
        from_joint: Option<String>,
        #[arg(long, value_name = "OBS")]
        range: Option<PathBuf>,
    },
    /// Reference answers by literal definition (small carriers only).
    Oracle {
        file: PathBuf,
        #[arg(long)]
        query: Vec<String>,
        #[arg(long)]
        blocks: bool,
    },
    /// One JSON document with the requested analyses.
    Report {
        file: PathBuf,
        #[arg(long)]
        props: bool,
        #[arg(long, value_enum)]
        blocks: Option<BlockChoice>,
        #[arg(long)]
        states: bool,
        #[arg(long)]
        theorems: bool,
        /// `x=LABEL y=LABEL z=LABEL`
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"])]
        check_dmp_witness: Option<Vec<String>>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// The chain 0 < 1/k < ... < 1.
    Chain { k: usize },
    /// The Boolean algebra with m atoms.
    Boolean { m: usize },
    /// Horizontal sum of n four-element Boolean algebras.
    Mo { n: usize },
    /// Interval [0,u] of a cone in Z^dim scaled by 1/den.
    Interval {
        #[arg(long, value_enum, default_value = "strict")]
        cone: ConeChoice,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        den: u64,
        /// Coordinates of u as rationals, comma-separated.
        #[arg(long, value_delimiter = ',')]
        u: Vec<String>,
    },
    /// Horizontal sum of algebra files.
    Hsum { files: Vec<PathBuf> },
    /// Direct product of algebra files.
    Product { files: Vec<PathBuf> },
    /// Closure of fuzzy functions on a finite ground set.
    Fuzzy {
        /// Comma-separated ground set labels.
        #[arg(long, value_delimiter = ',')]
        omega: Vec<String>,
        /// One generator per flag, values comma-separated.
        #[arg(long = "gen")]
        generators: Vec<String>,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ConeChoice {
    Strict,
    Std,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BlockChoice {
    Strong,
    Ic,
    Rdp,
    All,
}

/// A finished command: its document and whether it reports a negative finding.
pub struct Outcome {
    pub doc: Value,
    pub finding: bool,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, finding: false }
    }
}

fn labels(e: &EffectAlgebra, xs: &[Element]) -> Value {
    json!(e.labels_of(xs))
}

fn opt_label(e: &EffectAlgebra, x: Option<Element>) -> Value {
    x.map_or(Value::Null, |x| json!(e.label(x)))
}

pub fn property_json(e: &EffectAlgebra, r: &PropertyResult) -> Value {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(r.verdict.name()));
    m.insert("holds".into(), json!(r.holds()));
    if let Some(w) = &r.witness {
        m.insert("witness".into(), labels(e, w));
    }
    if let Some(c) = &r.clause {
        m.insert("clause".into(), json!(c));
    }
    m.insert("checked".into(), json!(r.stats.checked));
    m.insert("estimated".into(), json!(r.stats.estimated));
    if let Some(c) = r.stats.cross_check {
        m.insert("cross_check".into(), json!(c));
    }
    Value::Object(m)
}

pub fn block_json(e: &EffectAlgebra, b: &Block) -> Value {
    json!({
        "members": labels(e, &b.members),
        "subalgebra": b.flags.is_subalgebra,
        "mv": b.flags.is_mv,
        "rdp": b.flags.has_rdp,
    })
}

fn blocks_json(e: &EffectAlgebra, bs: &[Block]) -> Value {
    Value::Array(bs.iter().map(|b| block_json(e, b)).collect())
}

fn pair_witness_json(e: &EffectAlgebra, w: &CompatWitness) -> Value {
    json!({"a1": e.label(w.a1), "b1": e.label(w.b1), "c": e.label(w.c), "strong": w.strong})
}

pub fn refinement_json(e: &EffectAlgebra, w: &RefinementWitness) -> Value {
    json!({"cs": labels(e, &w.cs), "assignment": w.assignment})
}

fn joint_json(e: &EffectAlgebra, v: &JointVerdict) -> Value {
    match v {
        JointVerdict::Compatible { witness } => {
            json!({"verdict": "compatible", "witness": refinement_json(e, witness)})
        }
        JointVerdict::Incompatible => json!({"verdict": "incompatible"}),
        JointVerdict::BudgetLimited { nodes } => {
            json!({"verdict": "budget-limited", "nodes": nodes})
        }
    }
}

fn internal_json(e: &EffectAlgebra, v: &InternalVerdict) -> Value {
    match v {
        InternalVerdict::Compatible { witness } => {
            json!({"verdict": "compatible", "witness": refinement_json(e, witness)})
        }
        InternalVerdict::Incompatible => json!({"verdict": "incompatible"}),
        InternalVerdict::BudgetLimited { nodes } => {
            json!({"verdict": "budget-limited", "nodes": nodes})
        }
    }
}

fn theorem_json<T>(t: &TheoremCheck<T>, detail: impl FnOnce(&T) -> Value) -> Value {
    match t {
        TheoremCheck::Checked { ok, detail: d } => {
            json!({"status": "checked", "ok": ok, "detail": detail(d)})
        }
        TheoremCheck::NotApplicable { reason } => {
            json!({"status": "not-applicable", "reason": reason})
        }
    }
}

fn state_json(e: &EffectAlgebra, s: &State) -> Value {
    json!(s.to_labeled(e))
}

fn observable_json(e: &EffectAlgebra, x: &DiscreteObservable) -> Value {
    Value::Array(
        x.atoms()
            .iter()
            .map(|(p, c)| json!([format_rational(p), e.label(*c)]))
            .collect(),
    )
}

fn settings_json(b: &ScanBudget) -> Value {
    json!({"seed": b.seed, "samples": b.samples, "max_work": b.max_work, "exhaustive": b.exhaustive})
}

fn header(loaded: &io::Loaded, budget: &ScanBudget) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert(
        "tool".into(),
        json!({"name": "ea", "version": env!("CARGO_PKG_VERSION")}),
    );
    m.insert(
        "input".into(),
        json!({"name": loaded.algebra.name(), "elements": loaded.algebra.len(), "sha256": loaded.sha256}),
    );
    m.insert("settings".into(), settings_json(budget));
    m
}

fn element_list(e: &EffectAlgebra, raw: &str) -> Result<Vec<Element>> {
    split_top(raw).iter().map(|l| e.element_or_err(l)).collect()
}

fn parse_properties(names: &[String]) -> Result<Vec<Property>> {
    if names.is_empty() {
        return Ok(Property::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| Property::parse(n.trim()).ok_or_else(|| Error::InvalidArgument(format!("unknown property '{n}'"))))
        .collect()
}

fn generate(what: &GenKind) -> Result<(EffectAlgebra, Option<Recipe>, Option<String>)> {
    Ok(match what {
        GenKind::Chain { k } => (mv_chain(*k)?, Some(Recipe::Chain { k: *k }), None),
        GenKind::Boolean { m } => (boolean_algebra(*m)?, Some(Recipe::Boolean { m: *m }), None),
        GenKind::Mo { n } => (mo(*n)?, Some(Recipe::Mo { n: *n }), None),
        GenKind::Interval { cone, dim, den, u } => {
            let spec = match cone {
                ConeChoice::Strict => ConeSpec::strict_quadrant(*dim, *den),
                ConeChoice::Std => ConeSpec {
                    kind: ConeKind::Standard,
                    dim: *dim,
                    denominator: *den,
                },
            };
            let q = Rational::from_integer((*den).into());
            let nums = u
                .iter()
                .map(|s| {
                    let v = parse_rational(s)? * &q;
                    if !v.is_integer() {
                        return Err(Error::InvalidArgument(format!(
                            "u coordinate {s} is not a multiple of 1/{den}"
                        )));
                    }
                    i64::try_from(v.to_integer()).map_err(|_| Error::InvalidArgument("u coordinate too large".into()))
                })
                .collect::<Result<Vec<i64>>>()?;
            (
                interval_algebra(&spec, &nums)?,
                Some(Recipe::Interval { cone: spec, u: nums }),
                None,
            )
        }
        GenKind::Hsum { files } | GenKind::Product { files } => {
            let parts = files.iter().map(io::load_algebra).collect::<Result<Vec<_>>>()?;
            let recipes: Option<Vec<Recipe>> = files.iter().map(|f| recipe_of_file(f)).collect();
            let algebras: Vec<EffectAlgebra> = parts.into_iter().map(|l| l.algebra).collect();
            if matches!(what, GenKind::Hsum { .. }) {
                (
                    horizontal_sum(&algebras)?,
                    recipes.map(|summands| Recipe::Hsum { summands }),
                    None,
                )
            } else {
                (
                    direct_product(&algebras)?,
                    recipes.map(|factors| Recipe::Product { factors }),
                    None,
                )
            }
        }
        GenKind::Fuzzy { omega, generators } => {
            let gens: Vec<Vec<String>> = generators
                .iter()
                .map(|g| g.split(',').map(|v| v.trim().to_string()).collect())
                .collect();
            let parsed = gens
                .iter()
                .map(|g| g.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let fz = fuzzy_closure(omega, &parsed, DEFAULT_FUZZY_CAP)?;
            let text = io::fuzzy_to_json(&fz);
            (
                fz.algebra,
                Some(Recipe::Fuzzy {
                    omega: omega.clone(),
                    generators: gens,
                }),
                Some(text),
            )
        }
    })
}

fn recipe_of_file(path: &Path) -> Option<Recipe> {
    let text = std::fs::read_to_string(path).ok()?;
    let v: Value = serde_json::from_str(&text).ok()?;
    if v.get("format")? != io::GEN_FORMAT {
        return None;
    }
    serde_json::from_value(v.get("recipe")?.clone()).ok()
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<Value> {
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(json!({"written": p.display().to_string(), "sha256": io::sha256_hex(text.as_bytes())}))
        }
        None => {
            print!("{text}");
            Ok(Value::Null)
        }
    }
}

fn blocks_of(e: &EffectAlgebra, kind: BlockChoice, budget: &BlockBudget) -> Result<Value> {
    let mut m = Map::new();
    let want = |k: BlockChoice| kind == k || kind == BlockChoice::All;
    if want(BlockChoice::Strong) {
        m.insert("strong".into(), blocks_json(e, &enumerate_blocks(e, budget)?));
    }
    if want(BlockChoice::Ic) {
        m.insert("ic".into(), blocks_json(e, &enumerate_ic_blocks(e, budget)?));
    }
    if want(BlockChoice::Rdp) {
        m.insert("rdp".into(), blocks_json(e, &enumerate_rdp_blocks(e, budget)?));
    }
    Ok(Value::Object(m))
}

fn theorems(h: &Hypotheses, budget: &BlockBudget) -> Result<(Value, bool)> {
    let e = h.algebra();
    let cover = verify_block_theorem(h, budget)?;
    let families = verify_homogeneous_block_theorem(h, budget)?;
    let failed = cover.ok() == Some(false) || families.ok() == Some(false);
    let doc = json!({
        "block-cover": theorem_json(&cover, |d| json!({
            "blocks": d.blocks.len(),
            "all_subalgebras": d.all_subalgebras,
            "all_mv": d.all_mv,
            "lattice_closed": d.lattice_closed,
            "covers": d.covers,
        })),
        "homogeneous-blocks": theorem_json(&families, |d| json!({
            "ic_blocks": blocks_json(e, &d.ic_blocks),
            "rdp_blocks": blocks_json(e, &d.rdp_blocks),
            "families_equal": d.families_equal,
            "ic_cover": d.ic_cover,
            "rdp_cover": d.rdp_cover,
        })),
    });
    Ok((doc, failed))
}

fn states_doc(e: &EffectAlgebra, extreme: bool, represent: bool) -> Result<Value> {
    let mut m = Map::new();
    match find_state(e)? {
        StateSearch::Found(s) => {
            m.insert("state".into(), state_json(e, &s));
        }
        StateSearch::Stateless(cert) => {
            let terms: Vec<Value> = cert
                .terms
                .iter()
                .map(|(c, y)| {
                    let c = match *c {
                        crate::states::Constraint::Normalization => json!("s(1) = 1"),
                        crate::states::Constraint::Additivity { a, b, sum } => {
                            json!(format!("s({}) + s({}) = s({})", e.label(a), e.label(b), e.label(sum)))
                        }
                    };
                    json!([c, format_rational(y)])
                })
                .collect();
            m.insert("state".into(), Value::Null);
            m.insert(
                "certificate".into(),
                json!({"verified": cert.verify(e), "terms": terms}),
            );
        }
    }
    if extreme || represent {
        let ext = extreme_states(e)?;
        let od = is_order_determining(e, &ext)?;
        m.insert(
            "extreme".into(),
            Value::Array(ext.iter().map(|s| state_json(e, s)).collect()),
        );
        m.insert(
            "order_determining".into(),
            json!({"holds": od.holds, "witness": od.witness.map(|(a, b)| [e.label(a), e.label(b)])}),
        );
        if represent {
            let rep = function_representation(e, &ext)?;
            let image = &rep.image;
            m.insert(
                "representation".into(),
                json!({
                    "omega": image.omega,
                    "functions": image.functions.iter().map(|f| json!({
                        "label": f.label,
                        "values": f.values.iter().map(format_rational).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "map": e.elements().map(|a| (e.label(a).to_string(), json!(image.algebra.label(rep.map[a.index()])))).collect::<Map<_, _>>(),
                    "checks": rep.checks,
                    "isomorphism": rep.checks.isomorphism(),
                }),
            );
        }
    }
    Ok(Value::Object(m))
}

fn dmp_witness(e: &EffectAlgebra, args: &[String]) -> Result<Value> {
    let mut xyz = [None; 3];
    for a in args {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected x=, y= or z=, got '{a}'")))?;
        let slot = match k.trim() {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            _ => return Err(Error::InvalidArgument(format!("unknown witness coordinate '{k}'"))),
        };
        xyz[slot] = Some(e.element_or_err(v.trim())?);
    }
    let [Some(x), Some(y), Some(z)] = xyz else {
        return Err(Error::InvalidArgument("need x=, y= and z=".into()));
    };
    let d = check_dmp_witness(e, x, y, z);
    Ok(json!({
        "x": e.label(x), "y": e.label(y), "z": e.label(z),
        "x_leq_y": d.x_leq_y,
        "x_meet_z": opt_label(e, d.x_meet_z),
        "y_meet_z": opt_label(e, d.y_meet_z),
        "difference": opt_label(e, d.difference),
        "difference_meet_z": opt_label(e, d.difference_meet_z),
        "violates_dmp": d.violates,
    }))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let budget = cli.budget.scan();
    let block_budget = BlockBudget {
        scan: budget.clone(),
        ..BlockBudget::default()
    };
    match &cli.command {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(file)?;
            match io::parse_algebra(&text) {
                Ok(l) => Ok(Outcome::ok(json!({
                    "ok": true,
                    "name": l.algebra.name(),
                    "elements": l.algebra.len(),
                    "associativity": l.algebra.validation().associativity,
                    "sha256": l.sha256,
                }))),
                Err(Error::Axioms(report)) => {
                    let e_labels = |w: &[Element]| w.iter().map(|x| x.index()).collect::<Vec<_>>();
                    let violations: Vec<Value> = report
                        .violations
                        .iter()
                        .map(|v| json!({"axiom": v.axiom, "witness_indices": e_labels(&v.witness), "message": v.message}))
                        .collect();
                    Ok(Outcome {
                        doc: json!({"ok": false, "violations": violations}),
                        finding: true,
                    })
                }
                Err(e) => Err(e),
            }
        }
        Command::Gen {
            what,
            out,
            recipe,
            name,
        } => {
            let (mut e, rec, fuzzy_text) = generate(what)?;
            if let Some(n) = name {
                e = e.with_name(n.clone());
            }
            let text = if *recipe {
                let r = rec.ok_or_else(|| Error::InvalidArgument("--recipe needs recipe-backed inputs".into()))?;
                io::recipe_to_json(e.name(), &r)
            } else if let (Some(t), true) = (fuzzy_text, name.is_none()) {
                t
            } else {
                io::table_to_json(&e)
            };
            Ok(Outcome::ok(write_or_print(out, &text)?))
        }
        Command::Props { file, check: names } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let mut doc = header(&l, &budget);
            let mut props = Map::new();
            let mut finding = false;
            for p in parse_properties(names)? {
                let r = check(e, p, &budget);
                finding |= !r.holds();
                props.insert(p.name().into(), property_json(e, &r));
            }
            doc.insert("properties".into(), Value::Object(props));
            Ok(Outcome {
                doc: Value::Object(doc),
                finding,
            })
        }
        Command::Compat {
            file,
            a,
            b,
            strong,
            joint,
            internal,
        } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let cb = CompatBudget::default();
            if let Some(list) = joint {
                let ts = element_list(e, list)?;
                let v = jointly_compatible(e, &ts, &cb)?;
                let finding = v.decided() != Some(true);
                return Ok(Outcome {
                    doc: json!({"targets": labels(e, &ts), "joint": joint_json(e, &v)}),
                    finding,
                });
            }
            if let Some(list) = internal {
                let ms = element_list(e, list)?;
                let v = internally_compatible(e, &ms, &cb);
                let finding = v.decided() != Some(true);
                return Ok(Outcome {
                    doc: json!({"set": labels(e, &ms), "internal": internal_json(e, &v)}),
                    finding,
                });
            }
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::InvalidArgument(
                    "give two elements, --joint or --internal".into(),
                ));
            };
            let (x, y) = (e.element_or_err(a)?, e.element_or_err(b)?);
            let w = if *strong {
                strongly_compatible(e, x, y)
            } else {
                compatible(e, x, y)
            };
            let doc = json!({
                "a": a, "b": b, "strong": strong,
                "compatible": w.is_some(),
                "witness": w.as_ref().map(|w| pair_witness_json(e, w)),
            });
            Ok(Outcome {
                doc,
                finding: w.is_none(),
            })
        }
        Command::Blocks {
            file,
            kind,
            theorems: with_theorems,
        } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let mut doc = header(&l, &budget);
            doc.insert("blocks".into(), blocks_of(e, *kind, &block_budget)?);
            let mut finding = false;
            if *with_theorems {
                let h = Hypotheses::new(e, &budget);
                let (t, failed) = theorems(&h, &block_budget)?;
                doc.insert("theorems".into(), t);
                finding = failed;
            }
            Ok(Outcome {
                doc: Value::Object(doc),
                finding,
            })
        }
        Command::States {
            file,
            extreme,
            represent,
        } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let mut doc = header(&l, &budget);
            let s = states_doc(e, *extreme, *represent)?;
            let finding = s.get("state") == Some(&Value::Null);
            doc.insert("states".into(), s);
            Ok(Outcome {
                doc: Value::Object(doc),
                finding,
            })
        }
        Command::Observable {
            file,
            from_spectral,
            spectral_of,
            from_joint,
            range,
        } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let mut doc = header(&l, &budget);
            let mut finding = false;
            if let Some(p) = from_spectral {
                let f = io::parse_spectral(e, &std::fs::read_to_string(p)?)?;
                let h = Hypotheses::new(e, &budget);
                let r = observable_from_spectral(&h, &f)?;
                finding |= !r.uniqueness.unique();
                doc.insert(
                    "reconstruction".into(),
                    json!({
                        "atoms": observable_json(e, &r.observable),
                        "uniqueness": r.uniqueness,
                        "unique": r.uniqueness.unique(),
                        "hypotheses": r.hypotheses,
                        "range_in_block": r.range_in_block,
                        "spectral_laws": spectral_laws(e, &f),
                    }),
                );
            }
            if let Some(p) = spectral_of {
                let x = io::parse_observable(e, &std::fs::read_to_string(p)?)?;
                let f = spectral_family_of(e, &x);
                let jumps: Vec<Value> = f
                    .jumps
                    .iter()
                    .map(|(p, v)| json!([format_rational(p), e.label(*v)]))
                    .collect();
                doc.insert("spectral".into(), json!({"jumps": jumps, "laws": spectral_laws(e, &f)}));
            }
            if let Some(list) = from_joint {
                let ts = element_list(e, list)?;
                let v = jointly_compatible(e, &ts, &CompatBudget::default())?;
                match v.witness() {
                    Some(w) => {
                        let x = observable_from_jointly_compatible(e, &ts, w)?;
                        let sets: Vec<Value> = (0..ts.len())
                            .map(|j| {
                                let s = target_set(w, j);
                                json!({"target": e.label(ts[j]), "set": s.to_string(), "value": e.label(crate::observables::observable_eval(e, &x, &s))})
                            })
                            .collect();
                        doc.insert(
                            "observable".into(),
                            json!({"atoms": observable_json(e, &x), "targets": sets}),
                        );
                    }
                    None => {
                        finding = true;
                        doc.insert("observable".into(), json!({"joint": joint_json(e, &v)}));
                    }
                }
            }
            if let Some(p) = range {
                let x = io::parse_observable(e, &std::fs::read_to_string(p)?)?;
                let r = range_of(e, &x, &CompatBudget::default());
                finding |= r.internal.decided() != Some(true);
                doc.insert(
                    "range".into(),
                    json!({
                        "members": labels(e, &r.members),
                        "internal": internal_json(e, &r.internal),
                        "laws": observable_laws(e, &x, &budget),
                    }),
                );
            }
            Ok(Outcome {
                doc: Value::Object(doc),
                finding,
            })
        }
        Command::Oracle { file, query, blocks } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let mut doc = header(&l, &budget);
            let mut answers = Vec::new();
            for q in query {
                let q: Query = q.parse()?;
                let v = oracle_check(e.table(), e.labels(), &q)?;
                answers.push(json!({"query": v.query, "holds": v.holds, "tuples": v.tuples}));
            }
            doc.insert("answers".into(), Value::Array(answers));
            if *blocks {
                let b = oracle_blocks(e.table())?;
                let fam = |f: &[Vec<usize>]| -> Value {
                    Value::Array(
                        f.iter()
                            .map(|s| labels(e, &s.iter().map(|&i| Element::new(i)).collect::<Vec<_>>()))
                            .collect(),
                    )
                };
                doc.insert(
                    "blocks".into(),
                    json!({"strong": fam(&b.strong), "ic": fam(&b.ic), "rdp": fam(&b.rdp)}),
                );
            }
            Ok(Outcome::ok(Value::Object(doc)))
        }
        Command::Report {
            file,
            props,
            blocks,
            states,
            theorems: with_theorems,
            check_dmp_witness: dmp,
        } => {
            let l = io::load_algebra(file)?;
            let e = &l.algebra;
            let mut doc = header(&l, &budget);
            doc.insert("legend".into(), json!(VERDICT_LEGEND));
            let h = Hypotheses::new(e, &budget);
            let mut finding = false;
            if *props {
                let m: Map<String, Value> = Property::ALL
                    .iter()
                    .map(|&p| (p.name().to_string(), property_json(e, h.get(p))))
                    .collect();
                doc.insert("properties".into(), Value::Object(m));
            }
            if let Some(kind) = blocks {
                doc.insert("blocks".into(), blocks_of(e, *kind, &block_budget)?);
            }
            if *with_theorems {
                let (t, failed) = theorems(&h, &block_budget)?;
                doc.insert("theorems".into(), t);
                finding |= failed;
            }
            if *states {
                doc.insert(
                    "states".into(),
                    states_doc(e, e.len() <= crate::states::EXTREME_STATES_MAX, false)?,
                );
            }
            if let Some(args) = dmp {
                doc.insert("dmp_witness".into(), dmp_witness(e, args)?);
            }
            Ok(Outcome {
                doc: Value::Object(doc),
                finding,
            })
        }
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|y| y.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for y in a {
                            out.push_str(&format!("{pad}  -\n"));
                            render_text(y, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        Value::Null => {}
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

/// Canonical JSON text of a document: sorted keys, two-space indent, final newline.
pub fn to_canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Runs the command line and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(o) => {
            if o.doc != Value::Null {
                if cli.json {
                    print!("{}", to_canonical_json(&o.doc));
                } else {
                    let mut s = String::new();
                    render_text(&o.doc, 0, &mut s);
                    print!("{s}");
                }
            }
            i32::from(o.finding)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_structural() || matches!(e, Error::Io(_)) {
                2
            } else {
                1
            }
        }
    }
}
