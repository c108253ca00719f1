//! The Gram matrix `C = (tr Π_Δ Π_Δ')` of the projector sums of a minimal
//! flag set, and the exact checks of its quadratic relation.
//!
//! All sums are scaled by one common denominator `D` so that `D·Π` is an
//! integer matrix; `C` and `C²` are then assembled in checked `i128`
//! without ever storing the `s × s` matrix. `C²` is evaluated as
//! `M K Mᵀ` with `K = Σ vec(DΠ)ᵀ vec(DΠ)` of size `n² × n²`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::ProjSum;
use crate::error::{Error, Result};
use crate::lattice::Weight;
use crate::rational::{self, common_denominator, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigenvalue {
    #[serde(with = "rational::serde_rat")]
    pub value: Rat,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CMatrixReport {
    pub size: usize,
    #[serde(with = "rational::serde_rat")]
    pub kappa: Rat,
    /// `n(n+1)/2 − 1`
    pub big_n: u64,
    /// Every row of `C` sums to `ω₁ = |λ|² s / n`.
    pub row_sums_ok: bool,
    /// `C J = J C`, which for symmetric `C` is constancy of row sums.
    pub commutes_with_j: bool,
    /// `C² = a C + b J` with the predicted `a, b`.
    pub quadratic_ok: bool,
    #[serde(with = "rational::serde_rat")]
    pub trace: Rat,
    /// `tr C = s Σ (2i−1) λ̆_i`
    pub trace_ok: bool,
    #[serde(with = "rational::serde_rat")]
    pub omega1: Rat,
    /// The other nonzero eigenvalue `s κ / (n N)`.
    #[serde(with = "rational::serde_rat")]
    pub omega: Rat,
    /// Multiplicity of `omega`, from the trace.
    #[serde(with = "rational::serde_rat")]
    pub alpha: Rat,
    /// `1 + α` when the relation holds.
    pub rank: Option<u64>,
    pub spectrum: Vec<Eigenvalue>,
}

/// `κ = Σ_{i,j} (n min(λ̆_i, λ̆_j) − λ̆_i λ̆_j)`.
pub fn kappa(weight: &Weight, n: usize) -> Rat {
    let r = weight.ranks();
    let mut k = 0i64;
    for &a in r {
        for &b in r {
            k += (n * a.min(b)) as i64 - (a * b) as i64;
        }
    }
    rational::int(k)
}

/// Integer images `D·Π`, row-major, plus `D`.
fn integer_sums(sums: &[ProjSum]) -> Result<(Vec<Vec<i128>>, BigInt)> {
    let d = common_denominator(sums.iter().flat_map(|s| s.matrix().iter()));
    let dr = Rat::from_integer(d.clone());
    let m = sums
        .iter()
        .map(|s| {
            s.matrix()
                .iter()
                .map(|x| (x * &dr).to_integer().to_i128())
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Overflow("scaled projector sums"))?;
    Ok((m, d))
}

/// `vec(A) · vec(Bᵀ) = tr(A B)` for row-major `n × n` data.
fn trace_product(a: &[i128], b: &[i128], n: usize) -> Option<i128> {
    let mut s: i128 = 0;
    for i in 0..n {
        for j in 0..n {
            let x = a[i * n + j];
            if x != 0 {
                s = s.checked_add(x.checked_mul(b[j * n + i])?)?;
            }
        }
    }
    Some(s)
}

/// Checks of `C` for a minimal flag set that is a 4-design.
pub fn c_matrix_report(sums: &[ProjSum], weight: &Weight, n: usize) -> Result<CMatrixReport> {
    let s = sums.len();
    if s == 0 {
        return Err(Error::Empty("minimal flag set".into()));
    }
    let (m, d) = integer_sums(sums)?;
    let n2 = n * n;
    let overflow = || Error::Overflow("C-matrix assembly");

    // Mt[i] = vec(DΠ_iᵀ); with the row-major layout tr(A B) = vec(A)·vec(Bᵀ).
    let mt: Vec<Vec<i128>> = m
        .iter()
        .map(|a| (0..n2).map(|k| a[(k % n) * n + k / n]).collect())
        .collect();
    // C_ij D² = Mᵢ · Mtⱼ, hence (C²)_ij D⁴ = Mᵢᵀ K Mtⱼ with K = Σ_k Mt_k M_kᵀ.
    let k_mat: Vec<i128> = (0..n2 * n2)
        .into_par_iter()
        .map(|idx| {
            let (p, q) = (idx / n2, idx % n2);
            m.iter()
                .zip(&mt)
                .try_fold(0i128, |acc, (a, at)| acc.checked_add(at[p].checked_mul(a[q])?))
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(overflow)?;
    // y_i = vec(Mᵢ)ᵀ K
    let y: Vec<Vec<i128>> = m
        .par_iter()
        .map(|a| {
            (0..n2)
                .map(|q| {
                    (0..n2).try_fold(0i128, |acc, p| {
                        if a[p] == 0 {
                            Some(acc)
                        } else {
                            acc.checked_add(a[p].checked_mul(k_mat[p * n2 + q])?)
                        }
                    })
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(overflow)?;

    let size = rational::int(weight.size() as i64);
    let nn = rational::int(n as i64);
    let sr = rational::int(s as i64);
    let big_n = (n * (n + 1) / 2 - 1) as u64;
    let bign = rational::int(big_n as i64);
    let kap = kappa(weight, n);
    let omega1 = &size * &size * &sr / &nn;
    let a_coef = &sr * &kap / (&nn * &bign);
    let b_coef = &sr * &size * &size / (&nn * &nn) * (&size * &size - &kap / &bign);

    // scaled relation: D⁴C² = a D²(D²C) + b D⁴
    let d2 = Rat::from_integer(&d * &d);
    let c_scale = &a_coef * &d2;
    let j_scale = &b_coef * &d2 * &d2;
    let omega1_scaled = &omega1 * &d2;

    struct RowCheck {
        row_sum: Rat,
        diag: i128,
        quadratic: bool,
    }
    let rows: Vec<RowCheck> = (0..s)
        .into_par_iter()
        .map(|i| -> Result<RowCheck> {
            let mut row_sum = BigInt::zero();
            let mut quadratic = true;
            let mut diag = 0;
            for j in 0..s {
                let c = trace_product(&m[i], &m[j], n).ok_or_else(overflow)?;
                row_sum += c;
                if i == j {
                    diag = c;
                }
                if j < i {
                    continue;
                }
                let c2 = y[i]
                    .iter()
                    .zip(&mt[j])
                    .try_fold(0i128, |acc, (&u, &v)| acc.checked_add(u.checked_mul(v)?))
                    .ok_or_else(overflow)?;
                let lhs = Rat::from_integer(c2.into());
                let rhs = &c_scale * Rat::from_integer(c.into()) + &j_scale;
                if lhs != rhs {
                    quadratic = false;
                }
            }
            Ok(RowCheck {
                row_sum: Rat::from_integer(row_sum),
                diag,
                quadratic,
            })
        })
        .collect::<Result<_>>()?;

    let row_sums_ok = rows.iter().all(|r| r.row_sum == omega1_scaled);
    let commutes_with_j = rows.iter().all(|r| r.row_sum == rows[0].row_sum);
    let quadratic_ok = rows.iter().all(|r| r.quadratic);
    let trace = rows
        .iter()
        .map(|r| Rat::from_integer(r.diag.into()))
        .sum::<Rat>()
        / &d2;
    let per_flag: i64 = weight
        .ranks()
        .iter()
        .enumerate()
        .map(|(i, &r)| (2 * i as i64 + 1) * r as i64)
        .sum();
    let trace_ok = trace == &sr * rational::int(per_flag);
    let alpha = if a_coef.is_zero() {
        Rat::zero()
    } else {
        (&trace - &omega1) / &a_coef
    };
    let alpha_int = (quadratic_ok && row_sums_ok && alpha.is_integer())
        .then(|| alpha.to_integer().to_u64())
        .flatten();
    let rank = alpha_int.map(|a| a + 1);
    let mut spectrum = vec![Eigenvalue {
        value: omega1.clone(),
        multiplicity: 1,
    }];
    if let Some(a) = alpha_int {
        spectrum.push(Eigenvalue {
            value: a_coef.clone(),
            multiplicity: a,
        });
        spectrum.push(Eigenvalue {
            value: Rat::zero(),
            multiplicity: (s as u64).saturating_sub(a + 1),
        });
    }
    Ok(CMatrixReport {
        size: s,
        kappa: kap,
        big_n,
        row_sums_ok,
        commutes_with_j,
        quadratic_ok,
        trace,
        trace_ok,
        omega1,
        omega: a_coef,
        alpha,
        rank,
        spectrum,
    })
}
