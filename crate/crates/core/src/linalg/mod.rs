//! Exact rational and integer linear algebra.
//!
//! Elimination over the rationals is done fraction-free: rows are scaled to
//! integers and reduced with Bareiss' algorithm, so intermediate entries are
//! always minors of the input and stay small.

mod int;
mod matrix;
pub mod modp;

pub use int::{hnf, kernel_basis, saturate, IntMatrix};
pub use matrix::{Projector, RatMatrix};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Orthogonal projector onto the column span of `basis` for the standard
/// inner product: `B (BᵀB)⁻¹ Bᵀ`.
pub fn projector(basis: &RatMatrix) -> Result<Projector> {
    Projector::onto(basis, None)
}

/// Orthogonal projector onto the column span of `basis` for the inner product
/// with Gram matrix `gram`: `B (BᵀGB)⁻¹ BᵀG`. The result is idempotent and
/// self-adjoint for `gram`.
pub fn projector_in(basis: &RatMatrix, gram: &RatMatrix) -> Result<Projector> {
    Projector::onto(basis, Some(gram))
}

/// `G = L·D·Lᵀ` with `L` unit lower triangular and `D` a positive diagonal.
pub fn ldl(g: &RatMatrix) -> Result<(RatMatrix, Vec<Rat>)> {
    let n = g.rows();
    if g.cols() != n {
        return Err(Error::DimensionMismatch("ldl needs a square matrix".into()));
    }
    if !g.is_symmetric() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut l = RatMatrix::identity(n);
    let mut d: Vec<Rat> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        // dj is the ratio of consecutive leading principal minors.
        if dj <= Rat::from_integer(0.into()) {
            return Err(Error::NotPositiveDefinite);
        }
        for i in j + 1..n {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                s -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = s / &dj;
        }
        d.push(dj);
    }
    Ok((l, d))
}
