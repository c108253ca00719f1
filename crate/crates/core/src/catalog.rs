//! Shipped lattices and groups, and the JSON input formats for flag and
//! vector sets.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::design::FlagSet;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::groups::{ClassData, GeneratorFile};
use crate::lattice::Lattice;
use crate::linalg::RatMatrix;
use crate::rational::{self, Rat};

const LATTICES: &[(&str, &str)] = &[
    ("z2", include_str!("../catalog/z2.json")),
    ("z3", include_str!("../catalog/z3.json")),
    ("a2", include_str!("../catalog/a2.json")),
    ("d4", include_str!("../catalog/d4.json")),
    ("e6", include_str!("../catalog/e6.json")),
    ("e7", include_str!("../catalog/e7.json")),
    ("e8", include_str!("../catalog/e8.json")),
    ("k12", include_str!("../catalog/k12.json")),
    ("bw16", include_str!("../catalog/bw16.json")),
    ("leech", include_str!("../catalog/leech.json")),
];

const GROUPS: &[(&str, &str)] = &[
    ("signed_perm2", include_str!("../catalog/groups/signed_perm2.json")),
    ("signed_perm3", include_str!("../catalog/groups/signed_perm3.json")),
    ("signed_perm4", include_str!("../catalog/groups/signed_perm4.json")),
    ("aut_d4", include_str!("../catalog/groups/aut_d4.json")),
    ("aut_e6", include_str!("../catalog/groups/aut_e6.json")),
];

pub fn lattice_names() -> impl Iterator<Item = &'static str> {
    LATTICES.iter().map(|(k, _)| *k)
}

pub fn group_names() -> impl Iterator<Item = &'static str> {
    GROUPS.iter().map(|(k, _)| *k)
}

fn lookup<'a>(table: &'a [(&str, &str)], name: &str, what: &str) -> Result<&'a str> {
    let key = name.to_ascii_lowercase();
    table
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("no built-in {what} named {name:?}")))
}

pub fn builtin_lattice(name: &str) -> Result<Lattice> {
    Lattice::from_json(lookup(LATTICES, name, "lattice")?)
}

pub fn builtin_group(name: &str) -> Result<GeneratorFile> {
    parse_json(lookup(GROUPS, name, "group")?)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A path to a JSON file, or the name of a built-in entry when no such file
/// exists.
pub fn load_lattice(source: &str) -> Result<Lattice> {
    let p = Path::new(source);
    if p.exists() {
        Lattice::from_json(&read(p)?)
    } else {
        builtin_lattice(source)
    }
}

pub fn load_generators(source: &str) -> Result<GeneratorFile> {
    let p = Path::new(source);
    if p.exists() {
        parse_json(&read(p)?)
    } else {
        builtin_group(source)
    }
}

pub fn load_class_data(path: &Path) -> Result<ClassData> {
    let c: ClassData = parse_json(&read(path)?)?;
    c.validate()?;
    Ok(c)
}

/// Flags given by spanning sets of their members, each a matrix whose
/// columns span the member. Optional weights make the set weighted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<RatMatrix>,
    pub flags: Vec<Vec<RatMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<rational::RatStr>>,
}

impl FlagFile {
    pub fn load(path: &Path) -> Result<Self> {
        parse_json(&read(path)?)
    }

    pub fn to_set(&self) -> Result<FlagSet> {
        let gram = self.gram.as_ref().filter(|g| **g != RatMatrix::identity(self.n));
        let flags = self
            .flags
            .iter()
            .map(|spans| {
                if spans.iter().any(|s| s.rows() != self.n) {
                    return Err(Error::DimensionMismatch(format!(
                        "flag member is not in dimension {}",
                        self.n
                    )));
                }
                match gram {
                    Some(g) => Flag::from_bases_in(spans, g),
                    None => Flag::from_bases(spans),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        match &self.weights {
            Some(w) => FlagSet::weighted(flags, w.iter().map(|x| x.0.clone()).collect()),
            None => FlagSet::uniform(flags),
        }
    }
}

/// Vectors in coordinates, with the Gram matrix of the coordinate basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<RatMatrix>,
    pub vectors: Vec<Vec<rational::RatStr>>,
}

impl VectorFile {
    pub fn load(path: &Path) -> Result<Self> {
        parse_json(&read(path)?)
    }

    pub fn rational_vectors(&self) -> Result<Vec<Vec<Rat>>> {
        self.vectors
            .iter()
            .map(|v| {
                if v.len() == self.n {
                    Ok(v.iter().map(|x| x.0.clone()).collect())
                } else {
                    Err(Error::DimensionMismatch(format!(
                        "vector of length {} in dimension {}",
                        v.len(),
                        self.n
                    )))
                }
            })
            .collect()
    }
}
