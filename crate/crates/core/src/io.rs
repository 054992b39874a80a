//! JSON file formats: `ea-table/1`, `ea-gen/1`, `ea-fuzzy/1`, `ea-spectral/1`, `ea-obs/1`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{EffectAlgebra, Element, PartialTable, RawTable};
use crate::constructors::{FuzzyFunction, FuzzySetAlgebra, Recipe};
use crate::error::{Error, Result};
use crate::observables::{DiscreteObservable, SpectralFamily};
use crate::rational::{format_rational, parse_rational, Rational};

pub const TABLE_FORMAT: &str = "ea-table/1";
pub const GEN_FORMAT: &str = "ea-gen/1";
pub const FUZZY_FORMAT: &str = "ea-fuzzy/1";
pub const SPECTRAL_FORMAT: &str = "ea-spectral/1";
pub const OBS_FORMAT: &str = "ea-obs/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzyFunctionFile {
    pub label: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "format")]
enum AlgebraFile {
    #[serde(rename = "ea-table/1")]
    Table {
        name: String,
        elements: Vec<String>,
        zero: String,
        one: String,
        plus: Vec<[String; 3]>,
    },
    #[serde(rename = "ea-gen/1")]
    Gen { name: Option<String>, recipe: Recipe },
    #[serde(rename = "ea-fuzzy/1")]
    Fuzzy {
        name: Option<String>,
        omega: Vec<String>,
        functions: Vec<FuzzyFunctionFile>,
    },
}

/// An algebra read from disk together with the digest of the bytes read.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub algebra: EffectAlgebra,
    pub sha256: String,
    /// Present for `ea-fuzzy/1` input.
    pub fuzzy: Option<FuzzySetAlgebra>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses any algebra format. Axiom violations surface as [`Error::Axioms`].
pub fn parse_algebra(text: &str) -> Result<Loaded> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let sha256 = sha256_hex(text.as_bytes());
    match file {
        AlgebraFile::Table {
            name,
            elements,
            zero,
            one,
            plus,
        } => {
            let algebra = EffectAlgebra::from_raw(&RawTable {
                name,
                elements,
                zero,
                one,
                plus,
            })?;
            Ok(Loaded {
                algebra,
                sha256,
                fuzzy: None,
            })
        }
        AlgebraFile::Gen { name, recipe } => {
            let mut algebra = recipe.build()?;
            if let Some(n) = name {
                algebra = algebra.with_name(n);
            }
            Ok(Loaded {
                algebra,
                sha256,
                fuzzy: None,
            })
        }
        AlgebraFile::Fuzzy { name, omega, functions } => {
            let fz = fuzzy_from_functions(name.unwrap_or_else(|| "fuzzy".into()), omega, functions)?;
            Ok(Loaded {
                algebra: fz.algebra.clone(),
                sha256,
                fuzzy: Some(fz),
            })
        }
    }
}

pub fn load_algebra(path: impl AsRef<Path>) -> Result<Loaded> {
    parse_algebra(&std::fs::read_to_string(path)?)
}

fn fuzzy_from_functions(name: String, omega: Vec<String>, files: Vec<FuzzyFunctionFile>) -> Result<FuzzySetAlgebra> {
    let functions: Vec<FuzzyFunction> = files
        .into_iter()
        .map(|f| {
            let values = f.values.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
            if values.len() != omega.len() {
                return Err(Error::Structural(format!("function {} has the wrong arity", f.label)));
            }
            Ok(FuzzyFunction { label: f.label, values })
        })
        .collect::<Result<_>>()?;
    let find = |target: &dyn Fn(&Rational) -> bool| {
        functions
            .iter()
            .position(|f| f.values.iter().all(target))
            .ok_or_else(|| Error::Structural("function family lacks a constant function".into()))
    };
    let zero = find(&|v: &Rational| num_traits::Zero::is_zero(v))?;
    let one = find(&|v: &Rational| num_traits::One::is_one(v))?;
    let mut table = PartialTable::new(functions.len(), zero, one)?;
    for (a, f) in functions.iter().enumerate() {
        for (b, g) in functions.iter().enumerate() {
            let s: Vec<Rational> = f.values.iter().zip(&g.values).map(|(x, y)| x + y).collect();
            if let Some(c) = functions.iter().position(|h| h.values == s) {
                table.set(Element::new(a), Element::new(b), Some(Element::new(c)));
            }
        }
    }
    let labels = functions.iter().map(|f| f.label.clone()).collect();
    let algebra = EffectAlgebra::from_table(name, labels, table)?;
    Ok(FuzzySetAlgebra {
        omega,
        functions,
        algebra,
    })
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Canonical `ea-table/1` text: triples with `a <= b` by label, sorted,
/// zero rules left out, one triple per line.
pub fn table_to_json(e: &EffectAlgebra) -> String {
    let mut triples: Vec<[&str; 3]> = Vec::new();
    for a in e.elements() {
        if a == e.zero() {
            continue;
        }
        for (b, c) in e.table().row(a) {
            if b == e.zero() || e.label(a) > e.label(b) {
                continue;
            }
            triples.push([e.label(a), e.label(b), e.label(c)]);
        }
    }
    triples.sort_unstable();
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"format\": {},", quote(TABLE_FORMAT)).unwrap();
    writeln!(out, "  \"name\": {},", quote(e.name())).unwrap();
    let els: Vec<String> = e.labels().iter().map(|l| quote(l)).collect();
    writeln!(out, "  \"elements\": [{}],", els.join(", ")).unwrap();
    writeln!(out, "  \"zero\": {},", quote(e.label(e.zero()))).unwrap();
    writeln!(out, "  \"one\": {},", quote(e.label(e.one()))).unwrap();
    if triples.is_empty() {
        writeln!(out, "  \"plus\": []").unwrap();
    } else {
        writeln!(out, "  \"plus\": [").unwrap();
        for (i, [a, b, c]) in triples.iter().enumerate() {
            let sep = if i + 1 == triples.len() { "" } else { "," };
            writeln!(out, "    [{}, {}, {}]{sep}", quote(a), quote(b), quote(c)).unwrap();
        }
        writeln!(out, "  ]").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

#[derive(Serialize)]
struct GenOut<'a> {
    format: &'static str,
    name: &'a str,
    recipe: &'a Recipe,
}

pub fn recipe_to_json(name: &str, recipe: &Recipe) -> String {
    let mut s = serde_json::to_string_pretty(&GenOut {
        format: GEN_FORMAT,
        name,
        recipe,
    })
    .expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FuzzyOut<'a> {
    format: &'static str,
    name: &'a str,
    omega: &'a [String],
    functions: Vec<FuzzyFunctionFile>,
}

pub fn fuzzy_to_json(fz: &FuzzySetAlgebra) -> String {
    let functions = fz
        .functions
        .iter()
        .map(|f| FuzzyFunctionFile {
            label: f.label.clone(),
            values: f.values.iter().map(format_rational).collect(),
        })
        .collect();
    let out = FuzzyOut {
        format: FUZZY_FORMAT,
        name: fz.algebra.name(),
        omega: &fz.omega,
        functions,
    };
    let mut s = serde_json::to_string_pretty(&out).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PointFile {
    format: String,
    algebra: String,
    #[serde(alias = "atoms")]
    jumps: Vec<(String, String)>,
}

fn parse_points(e: &EffectAlgebra, text: &str, format: &str) -> Result<Vec<(Rational, Element)>> {
    let f: PointFile = serde_json::from_str(text).map_err(|err| Error::Parse(err.to_string()))?;
    if f.format != format {
        return Err(Error::Parse(format!("expected format {format}, found {}", f.format)));
    }
    if f.algebra != e.name() {
        return Err(Error::InvalidArgument(format!(
            "file refers to algebra {}, not {}",
            f.algebra,
            e.name()
        )));
    }
    f.jumps
        .iter()
        .map(|(p, l)| Ok((parse_rational(p)?, e.element_or_err(l)?)))
        .collect()
}

fn points_to_json(e: &EffectAlgebra, format: &str, key: &str, pts: &[(Rational, Element)]) -> String {
    let rows: Vec<String> = pts
        .iter()
        .map(|(p, x)| format!("    [{}, {}]", quote(&format_rational(p)), quote(e.label(*x))))
        .collect();
    format!(
        "{{\n  \"format\": {},\n  \"algebra\": {},\n  \"{key}\": [\n{}\n  ]\n}}\n",
        quote(format),
        quote(e.name()),
        rows.join(",\n")
    )
}

pub fn parse_spectral(e: &EffectAlgebra, text: &str) -> Result<SpectralFamily> {
    let jumps = parse_points(e, text, SPECTRAL_FORMAT)?;
    let f = SpectralFamily { jumps };
    f.validate(e)?;
    Ok(f)
}

pub fn spectral_to_json(e: &EffectAlgebra, f: &SpectralFamily) -> String {
    points_to_json(e, SPECTRAL_FORMAT, "jumps", &f.jumps)
}

pub fn parse_observable(e: &EffectAlgebra, text: &str) -> Result<DiscreteObservable> {
    DiscreteObservable::new(e, parse_points(e, text, OBS_FORMAT)?)
}

pub fn observable_to_json(e: &EffectAlgebra, x: &DiscreteObservable) -> String {
    points_to_json(e, OBS_FORMAT, "atoms", x.atoms())
}
