//! Integer matrices: Hermite normal form, integer kernels and saturation.
//!
//! Entries are `i64`; every operation is checked and reports
//! [`Error::Overflow`] instead of wrapping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} integer matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged integer rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn empty(cols: usize) -> Self {
        IntMatrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    /// `self · v`, checked.
    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).try_fold(0i64, |acc, (&a, &b)| {
                    a.checked_mul(b)
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow("integer matrix-vector product"))
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

fn sub_mul(dst: &mut [i64], src: &[i64], q: i64) -> Result<()> {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = q
            .checked_mul(s)
            .and_then(|p| d.checked_sub(p))
            .ok_or(Error::Overflow("integer row reduction"))?;
    }
    Ok(())
}

/// Row echelon form over the integers, pivoting only in the first
/// `pivot_cols` columns. Operations are unimodular on whole rows. Returns the
/// number of pivot rows; rows after it are zero in the pivot columns.
fn echelon(rows: &mut Vec<Vec<i64>>, pivot_cols: usize, reduce_above: bool) -> Result<usize> {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            // Smallest nonzero entry in column c at or below row r.
            let Some(p) = (r..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].unsigned_abs())
            else {
                break;
            };
            rows.swap(p, r);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c] != 0 {
                    let q = rows[i][c].div_euclid(rows[r][c]);
                    let (head, tail) = rows.split_at_mut(i);
                    sub_mul(&mut tail[0], &head[r], q)?;
                    if tail[0][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            for x in rows[r].iter_mut() {
                *x = x.checked_neg().ok_or(Error::Overflow("row negation"))?;
            }
        }
        if reduce_above {
            let piv = rows[r][c];
            for i in 0..r {
                let q = rows[i][c].div_euclid(piv);
                if q != 0 {
                    let (head, tail) = rows.split_at_mut(r);
                    sub_mul(&mut head[i], &tail[0], q)?;
                }
            }
        }
        r += 1;
    }
    Ok(r)
}

/// Row-style Hermite normal form: upper triangular, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`, zero rows dropped. Two integer
/// matrices have the same row lattice iff their HNFs are equal.
pub fn hnf(m: &IntMatrix) -> Result<IntMatrix> {
    let mut rows = m.row_vecs();
    let r = echelon(&mut rows, m.cols, true)?;
    rows.truncate(r);
    IntMatrix::from_rows(&rows, m.cols)
}

/// Basis (as rows, in HNF) of the integer vectors `x` with `m · x = 0`.
pub fn kernel_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.cols;
    let k = m.rows;
    // Augmented rows [mᵀ | I]; rows whose left block vanishes span the kernel.
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..k).map(|j| m.get(j, i)).collect();
            row.extend((0..n).map(|j| i64::from(i == j)));
            row
        })
        .collect();
    let r = echelon(&mut rows, k, false)?;
    let kernel: Vec<Vec<i64>> = rows[r..].iter().map(|row| row[k..].to_vec()).collect();
    hnf(&IntMatrix::from_rows(&kernel, n)?)
}

/// Primitive saturation of the row lattice: `span_Q(rows) ∩ Z^n`, in HNF,
/// together with an annihilator `A` such that `v ∈ span_Q(rows)` iff `A·v = 0`.
pub fn saturate(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let annihilator = kernel_basis(m)?;
    let sat = if annihilator.rows == 0 {
        IntMatrix::identity(m.cols)
    } else {
        kernel_basis(&annihilator)?
    };
    Ok((sat, annihilator))
}
