//! Integral lattices: short vectors, primitive sublattices, minimal flags and
//! the Hermite invariant attached to a partition.
//!
//! A lattice is `Z^n` with a positive definite Gram matrix `G`; vectors are
//! integer coordinate rows and every determinant is a Gram determinant
//! (squared covolume).

mod enumerate;
mod minimal;
mod sublattice;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::linalg::RatMatrix;
use crate::rational::{self, Rat};

pub use enumerate::{inner, norm, short_vectors};
pub use minimal::{minimal_flags, minimal_flags_with_slack, MinimalFlags};
pub use sublattice::{gamma_power, sublattices_upto, Sublattice};

/// On-disk lattice description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    pub name: String,
    pub n: usize,
    pub gram: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    pub scale_note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    name: String,
    gram: RatMatrix,
    det: Rat,
    scale_note: String,
    provenance: Option<String>,
}

fn entry(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::Number(k) => k
            .as_i64()
            .map(rational::int)
            .ok_or_else(|| Error::Parse(format!("Gram entry {k} is not an integer"))),
        serde_json::Value::String(s) => rational::parse(s),
        other => Err(Error::Parse(format!("Gram entry {other} is not a number"))),
    }
}

impl Lattice {
    pub fn new(name: impl Into<String>, gram: RatMatrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::DimensionMismatch("Gram matrix must be square and nonempty".into()));
        }
        if !gram.is_symmetric() || !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let det = gram.det()?;
        Ok(Lattice {
            name: name.into(),
            gram,
            det,
            scale_note: String::new(),
            provenance: None,
        })
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self> {
        if file.gram.len() != file.n || file.gram.iter().any(|r| r.len() != file.n) {
            return Err(Error::DimensionMismatch(format!(
                "{}: Gram matrix is not {}x{}",
                file.name, file.n, file.n
            )));
        }
        let rows = file
            .gram
            .iter()
            .map(|r| r.iter().map(entry).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut l = Lattice::new(file.name.clone(), RatMatrix::from_rows(rows)?)?;
        l.scale_note = file.scale_note.clone();
        l.provenance = file.provenance.clone();
        Ok(l)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LatticeFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    pub fn scale_note(&self) -> &str {
        &self.scale_note
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    /// Same lattice in the basis given by the columns of `u` (`uᵀ G u`).
    pub fn rebased(&self, u: &RatMatrix) -> Result<Self> {
        let g = &(&u.transpose() * &self.gram) * u;
        let mut l = Lattice::new(self.name.clone(), g)?;
        l.scale_note = self.scale_note.clone();
        Ok(l)
    }

    /// The lattice with Gram matrix `c·G`.
    pub fn scaled(&self, c: &Rat) -> Result<Self> {
        Lattice::new(self.name.clone(), self.gram.scale(c))
    }

    /// Smallest nonzero norm.
    pub fn minimum(&self, node_cap: u64) -> Result<Rat> {
        let bound = (0..self.n())
            .map(|i| self.gram[(i, i)].clone())
            .min()
            .expect("nonempty");
        let v = short_vectors(&self.gram, &bound, node_cap)?;
        Ok(v[0].1.clone())
    }

    /// Minimal vectors, one of each `±v`, sorted.
    pub fn minimal_vectors(&self, node_cap: u64) -> Result<Vec<Vec<i64>>> {
        let m = self.minimum(node_cap)?;
        Ok(short_vectors(&self.gram, &m, node_cap)?
            .into_iter()
            .map(|(v, _)| v)
            .collect())
    }
}

/// A partition `λ` used as a weight, with the ranks `λ̆` it prescribes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    lambda: Partition,
    ranks: Vec<usize>,
}

impl Weight {
    /// `λ` must be nonempty with fewer than `n` parts.
    pub fn new(lambda: Partition, n: usize) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidPartition("weight must be nonempty".into()));
        }
        if lambda.depth() >= n {
            return Err(Error::OutOfRange(format!(
                "λ = {lambda} has {} parts; at most {} allowed in dimension {n}",
                lambda.depth(),
                n - 1
            )));
        }
        let ranks = lambda.transpose().parts().iter().map(|&p| p as usize).collect();
        Ok(Weight { lambda, ranks })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// `λ̆`, nonincreasing, repeats kept.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `|λ|`.
    pub fn size(&self) -> u32 {
        self.lambda.degree()
    }

    /// Distinct ranks in decreasing order with their multiplicities.
    pub fn rank_multiplicities(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &r in &self.ranks {
            match out.last_mut() {
                Some((last, m)) if *last == r => *m += 1,
                _ => out.push((r, 1)),
            }
        }
        out
    }
}

/// `γ(L) = product / det^exponent`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaData {
    #[serde(with = "rational::serde_rat")]
    pub product: Rat,
    #[serde(with = "rational::serde_rat")]
    pub det: Rat,
    #[serde(with = "rational::serde_rat")]
    pub exponent: Rat,
}

impl GammaData {
    /// Float rendering for humans.
    pub fn to_f64(&self) -> f64 {
        let p = rational::to_f64(&self.product);
        let d = rational::to_f64(&self.det);
        p / d.powf(rational::to_f64(&self.exponent))
    }

    /// Exact equality of the two real numbers `p/d^e`, compared through
    /// integer powers: `p₁^q d₂^(e₂ q) = p₂^q d₁^(e₁ q)` for a common
    /// denominator `q` of the exponents.
    pub fn same_value(&self, other: &GammaData) -> bool {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let q = self.exponent.denom().lcm(other.exponent.denom());
        let Some(q) = q.to_u32() else { return false };
        let e1 = (&self.exponent * Rat::from_integer(q.into())).to_integer();
        let e2 = (&other.exponent * Rat::from_integer(q.into())).to_integer();
        let (Some(e1), Some(e2)) = (e1.to_u32(), e2.to_u32()) else {
            return false;
        };
        let lhs = rational::pow(&self.product, q) * rational::pow(&other.det, e2);
        let rhs = rational::pow(&other.product, q) * rational::pow(&self.det, e1);
        lhs == rhs
    }
}

/// A chain of primitive sublattices, one per distinct rank of `λ̆`, largest
/// first, with the multiplicity of each rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeFlag {
    members: Vec<Sublattice>,
    multiplicities: Vec<u32>,
}

impl LatticeFlag {
    pub(crate) fn new(members: Vec<Sublattice>, multiplicities: Vec<u32>) -> Self {
        LatticeFlag {
            members,
            multiplicities,
        }
    }

    pub fn members(&self) -> &[Sublattice] {
        &self.members
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// `Π det(Λ_i)` over `λ̆`, repeats included.
    pub fn product(&self) -> Rat {
        self.members
            .iter()
            .zip(&self.multiplicities)
            .map(|(s, &m)| rational::pow(s.det(), m))
            .product()
    }

    /// The flag of real subspaces spanned by the chain, in lattice
    /// coordinates with the lattice Gram matrix as metric.
    pub fn to_flag(&self, lattice: &Lattice) -> Result<Flag> {
        let spans: Vec<RatMatrix> = self.members.iter().map(Sublattice::column_basis).collect();
        Flag::from_bases_in(&spans, lattice.gram())
    }

    /// `Π_Λ = Σ_i pr_{Λ_i}` over `λ̆`, as an operator on coordinates.
    pub fn projector_sum(&self, lattice: &Lattice) -> Result<RatMatrix> {
        let flag = self.to_flag(lattice)?;
        let n = lattice.n();
        let mut sum = RatMatrix::zeros(n, n);
        for (p, &m) in flag.projectors().iter().zip(&self.multiplicities) {
            sum = &sum + &p.matrix().scale(&rational::int(i64::from(m)));
        }
        Ok(sum)
    }
}
