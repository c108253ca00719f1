//! Perfection, eutaxy and extremality of a lattice relative to a weight.
//!
//! Every minimal flag `Λ` contributes the operator `Π_Λ = Σ_i pr_{Λ_i}`
//! (repeated ranks counted with multiplicity). The lattice is perfect when
//! these span the symmetric endomorphisms, eutactic when the identity is a
//! positive combination of them, and strongly eutactic when their plain sum
//! is a multiple of the identity. Pairings of endomorphisms use the trace
//! form `⟨⟨A, B⟩⟩ = tr(A B)`.

mod cmatrix;
mod simplex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::design::{is_design, DesignCertificate, FlagSet};
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::lattice::{minimal_flags, GammaData, Lattice, LatticeFlag, MinimalFlags, Weight};
use crate::linalg::modp::{rank_mod_p, PRIME};
use crate::linalg::RatMatrix;
use crate::rational::{self, common_denominator, Rat};

pub use cmatrix::{c_matrix_report, kappa, CMatrixReport, Eigenvalue};

/// `Π_Λ` as an operator on coordinates, with its lowered form `G Π_Λ`
/// (symmetric) and the metric `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjSum {
    matrix: RatMatrix,
    #[serde(skip)]
    lowered: RatMatrix,
    #[serde(skip)]
    metric: RatMatrix,
}

impl ProjSum {
    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn lowered(&self) -> &RatMatrix {
        &self.lowered
    }

    pub fn trace(&self) -> Rat {
        self.matrix.trace()
    }
}

/// `Σ_i m_i P_i` over the members of `flag`, `m_i` the multiplicity of the
/// member's rank in `λ̆`.
pub fn proj_sum(flag: &Flag, multiplicities: &[u32]) -> Result<ProjSum> {
    if multiplicities.len() != flag.projectors().len() {
        return Err(Error::DimensionMismatch("one multiplicity per flag member".into()));
    }
    let n = flag.n();
    let mut matrix = RatMatrix::zeros(n, n);
    for (p, &m) in flag.projectors().iter().zip(multiplicities) {
        matrix = &matrix + &p.matrix().scale(&rational::int(i64::from(m)));
    }
    let metric = flag.gram().cloned().unwrap_or_else(|| RatMatrix::identity(n));
    let lowered = &metric * &matrix;
    Ok(ProjSum {
        matrix,
        lowered,
        metric,
    })
}

/// Projector sums of lattice flags.
pub fn lattice_proj_sums(lattice: &Lattice, flags: &[LatticeFlag]) -> Result<Vec<ProjSum>> {
    flags
        .par_iter()
        .map(|f| proj_sum(&f.to_flag(lattice)?, f.multiplicities()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Perfection {
    pub perfect: bool,
    pub rank: usize,
    /// `n(n+1)/2`
    pub dimension: usize,
}

/// Upper-triangle coordinates of a symmetric matrix.
fn sym_coords(m: &RatMatrix) -> Vec<Rat> {
    let n = m.rows();
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].clone()).collect()
}

/// Exact rank of the span of the `Π_Λ` inside the symmetric endomorphisms.
/// A full rank modulo `2^61 − 1` settles it (rank can only drop mod p);
/// otherwise the rank is recomputed over the rationals.
pub fn is_perfect(sums: &[ProjSum]) -> Result<Perfection> {
    let first = sums.first().ok_or_else(|| Error::Empty("projector sums".into()))?;
    let n = first.lowered.rows();
    let dim = n * (n + 1) / 2;
    let rows: Vec<Vec<Rat>> = sums.par_iter().map(|s| sym_coords(&s.lowered)).collect();
    let p = BigInt::from(PRIME);
    let entries: Vec<u64> = rows
        .par_iter()
        .flat_map_iter(|row| {
            let den = Rat::from_integer(common_denominator(row.iter()));
            let p = p.clone();
            row.iter()
                .map(move |x| {
                    let v = (x * &den).to_integer() % &p;
                    let v = if v.is_negative() { v + &p } else { v };
                    v.to_u64().expect("reduced below p")
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut rank = rank_mod_p(rows.len(), dim, &entries);
    if rank < dim {
        rank = exact_rank(&rows, dim);
    }
    Ok(Perfection {
        perfect: rank == dim,
        rank,
        dimension: dim,
    })
}

/// Rank over Q, keeping only independent rows as it goes.
fn exact_rank(rows: &[Vec<Rat>], dim: usize) -> usize {
    let mut basis: Vec<(usize, Vec<Rat>)> = Vec::new();
    for row in rows {
        let mut w = row.clone();
        for (c, b) in &basis {
            if !w[*c].is_zero() {
                let f = w[*c].clone();
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(c) = w.iter().position(|x| !x.is_zero()) {
            let p = w[c].clone();
            w.iter_mut().for_each(|x| *x /= &p);
            // keep earlier rows reduced in the new pivot column
            for (_, b) in basis.iter_mut() {
                if !b[c].is_zero() {
                    let f = b[c].clone();
                    for (x, y) in b.iter_mut().zip(&w) {
                        *x -= &f * y;
                    }
                }
            }
            basis.push((c, w));
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

/// `Σ Π_Λ = (|λ| s / n)·I` exactly, `s` the number of sums.
pub fn is_strongly_eutactic(sums: &[ProjSum], size: u32) -> bool {
    let Some(first) = sums.first() else {
        return false;
    };
    let n = first.matrix.rows();
    let total = sums.iter().fold(RatMatrix::zeros(n, n), |acc, s| &acc + &s.matrix);
    let c = rational::rat(i64::from(size) * sums.len() as i64, n as i64);
    total == RatMatrix::identity(n).scale(&c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eutaxy {
    pub eutactic: bool,
    /// Positive `c_Λ` with `Σ c_Λ Π_Λ = I`, when found.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rat_vec")]
    pub coefficients: Option<Vec<Rat>>,
    /// The maximized common lower bound on the coefficients.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rat")]
    pub epsilon: Option<Rat>,
    pub method: String,
}

mod opt_rat {
    use super::*;
    pub fn serialize<S: serde::Serializer>(q: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        q.as_ref().map(rational::format).serialize(s)
    }
}

mod opt_rat_vec {
    use super::*;
    pub fn serialize<S: serde::Serializer>(
        q: &Option<Vec<Rat>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        q.as_ref()
            .map(|v| v.iter().map(rational::format).collect::<Vec<_>>())
            .serialize(s)
    }
}

/// Exact LP: maximize `ε` subject to `Σ c_Λ Π_Λ = I` and `c_Λ ≥ ε`.
/// Eutactic iff the optimum is positive.
pub fn is_eutactic(sums: &[ProjSum]) -> Result<Eutaxy> {
    let first = sums.first().ok_or_else(|| Error::Empty("projector sums".into()))?;
    let k = sums.len();
    // lowering Σ c Π = I gives Σ c GΠ = G
    let target = sym_coords(&first.metric);
    let cols: Vec<Vec<Rat>> = sums.iter().map(|s| sym_coords(&s.lowered)).collect();
    let m = target.len();
    // variables c'_1..c'_k, ε with c = c' + ε
    let a: Vec<Vec<Rat>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(cols.iter().map(|c| &c[r]).sum());
            row
        })
        .collect();
    let mut obj = vec![Rat::zero(); k + 1];
    obj[k] = Rat::one();
    let method = "exact simplex, Bland's rule".to_string();
    match simplex::solve(&a, &target, &obj) {
        Ok(x) => {
            let eps = x[k].clone();
            if eps.is_positive() {
                let coefficients = x[..k].iter().map(|c| c + &eps).collect();
                Ok(Eutaxy {
                    eutactic: true,
                    coefficients: Some(coefficients),
                    epsilon: Some(eps),
                    method,
                })
            } else {
                Ok(Eutaxy {
                    eutactic: false,
                    coefficients: None,
                    epsilon: Some(eps),
                    method,
                })
            }
        }
        Err(_) => Ok(Eutaxy {
            eutactic: false,
            coefficients: None,
            epsilon: None,
            method,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The minimal flags form a 4-design.
    ExtremeByStrongPerfection,
    /// Perfect and eutactic.
    ExtremeByPerfectionAndEutaxy,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalityReport {
    pub lattice: String,
    pub n: usize,
    pub lambda: Vec<u32>,
    pub lambda_transpose: Vec<usize>,
    pub s_lambda: usize,
    pub gamma: GammaData,
    pub gamma_float: f64,
    pub design: DesignCertificate,
    pub strongly_eutactic: bool,
    pub eutaxy: Option<Eutaxy>,
    pub perfection: Perfection,
    pub c_matrix: Option<CMatrixReport>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Minimal flags, the 4-design test, strong eutaxy, perfection, eutaxy and
/// the C-matrix relation, with a verdict.
pub fn certify_extreme(lattice: &Lattice, weight: &Weight, cfg: &Config) -> Result<ExtremalityReport> {
    let minimal = minimal_flags(lattice, weight, cfg)?;
    certify_from(lattice, weight, &minimal, cfg)
}

/// [`certify_extreme`] on already computed minimal flags.
pub fn certify_from(
    lattice: &Lattice,
    weight: &Weight,
    minimal: &MinimalFlags,
    cfg: &Config,
) -> Result<ExtremalityReport> {
    let n = lattice.n();
    let mut notes = vec![
        "s_lambda counts chains of sublattices; distinct chains have distinct projector stacks"
            .to_string(),
    ];
    let flags: Vec<Flag> = minimal
        .flags
        .par_iter()
        .map(|f| f.to_flag(lattice))
        .collect::<Result<_>>()?;
    let set = FlagSet::uniform(flags.clone())?;
    let design = is_design(&set, 4)?;
    let sums = flags
        .iter()
        .zip(&minimal.flags)
        .map(|(f, lf)| proj_sum(f, lf.multiplicities()))
        .collect::<Result<Vec<_>>>()?;
    let strongly_eutactic = is_strongly_eutactic(&sums, weight.size());
    let perfection = is_perfect(&sums)?;
    let too_many = sums.len() as u64 > cfg.c_matrix_cap;
    let eutaxy = if strongly_eutactic {
        let c = rational::rat(n as i64, i64::from(weight.size()) * sums.len() as i64);
        Some(Eutaxy {
            eutactic: true,
            coefficients: Some(vec![c.clone(); sums.len()]),
            epsilon: Some(c),
            method: "equal coefficients from strong eutaxy".into(),
        })
    } else if too_many {
        notes.push(format!(
            "eutaxy LP skipped: {} flags exceed the cap of {}",
            sums.len(),
            cfg.c_matrix_cap
        ));
        None
    } else {
        Some(is_eutactic(&sums)?)
    };
    let c_matrix = if !design.passes {
        None
    } else if too_many {
        notes.push(format!(
            "C-matrix checks skipped: {} flags exceed the cap of {}",
            sums.len(),
            cfg.c_matrix_cap
        ));
        None
    } else {
        match c_matrix_report(&sums, weight, n) {
            Ok(r) => Some(r),
            Err(Error::Overflow(what)) => {
                notes.push(format!("C-matrix checks skipped: overflow in {what}"));
                None
            }
            Err(e) => return Err(e),
        }
    };
    let two_design = design.strength_verified >= 2;
    if two_design && !strongly_eutactic {
        notes.push("2-design without strong eutaxy: contradicts the theory, check inputs".into());
    }
    let verdict = if design.passes {
        Verdict::ExtremeByStrongPerfection
    } else if perfection.perfect && eutaxy.as_ref().is_some_and(|e| e.eutactic) {
        Verdict::ExtremeByPerfectionAndEutaxy
    } else {
        Verdict::Undetermined
    };
    Ok(ExtremalityReport {
        lattice: lattice.name().to_string(),
        n,
        lambda: weight.lambda().parts().to_vec(),
        lambda_transpose: weight.ranks().to_vec(),
        s_lambda: minimal.count(),
        gamma_float: minimal.gamma.to_f64(),
        gamma: minimal.gamma.clone(),
        design,
        strongly_eutactic,
        eutaxy,
        perfection,
        c_matrix,
        verdict,
        notes,
    })
}
