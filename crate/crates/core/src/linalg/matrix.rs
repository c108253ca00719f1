use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rat, RatStr};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == c), "ragged rows");
        RatMatrix {
            rows: rows.len(),
            cols: c,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| rational::int(x)))
                .collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols))
            .map(|i| &self[(i, i)])
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &RatMatrix) -> Rat {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.rows, other.cols);
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let b = &other[(k, i)];
                if !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(rational::to_f64).collect()
    }

    /// Rows scaled to primitive integer vectors (zero rows stay zero), along
    /// with the product of the scale factors applied.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Rat) {
        let mut factor = Rat::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let den = rational::common_denominator(row);
                factor *= Rat::from_integer(den.clone());
                row.iter()
                    .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        (rows, factor)
    }

    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss(&mut a, self.cols).0
    }

    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Rat::one());
        }
        let (mut a, factor) = self.integer_rows();
        let (rank, sign) = bareiss(&mut a, self.cols);
        if rank < self.rows {
            return Ok(Rat::zero());
        }
        let d = Rat::from_integer(a[self.rows - 1][self.cols - 1].clone());
        Ok(if sign { -d } else { d } / factor)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(Error::RankDeficient {
                    rank: self.rank(),
                    expected: n,
                })?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] / &piv;
                inv[(c, j)] = &inv[(c, j)] / &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let t = &f * &a[(c, j)];
                    a[(r, j)] -= t;
                    let t = &f * &inv[(c, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Ok(inv)
    }

    /// One solution of `self · x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let (m, n) = (self.rows, self.cols);
        let mut a = Self::from_fn(m, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let piv = a[(r, c)].clone();
            for j in c..=n {
                a[(r, j)] = &a[(r, j)] / &piv;
            }
            for i in 0..m {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..=n {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= t;
                }
            }
            pivots.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        if (r..m).any(|i| !a[(i, n)].is_zero()) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![Rat::zero(); n];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = a[(i, n)].clone();
        }
        Ok(x)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Leading principal minors are all positive.
    pub fn is_positive_definite(&self) -> bool {
        super::ldl(self).is_ok()
    }
}

/// Fraction-free elimination in place; returns (rank, odd number of swaps).
/// After the call on a full-rank square matrix the last pivot is the
/// determinant.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, bool) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = !sign;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, sign)
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(rational::format).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<RatStr>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        RatMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// An orthogonal projector: idempotent and self-adjoint for the ambient
/// metric; its trace is its rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Projector(RatMatrix);

impl Projector {
    pub(crate) fn onto(basis: &RatMatrix, gram: Option<&RatMatrix>) -> Result<Self> {
        let k = basis.cols();
        let bt = basis.transpose();
        let btg = match gram {
            Some(g) => {
                if g.rows() != basis.rows() || !g.is_square() {
                    return Err(Error::DimensionMismatch("metric size".into()));
                }
                &bt * g
            }
            None => bt,
        };
        let small = &btg * basis;
        let inv = small.inverse().map_err(|_| Error::RankDeficient {
            rank: basis.rank(),
            expected: k,
        })?;
        Ok(Projector(&(basis * &inv) * &btg))
    }

    /// Wraps a matrix after checking idempotence.
    pub fn from_matrix(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("projector must be square".into()));
        }
        if &m * &m != m {
            return Err(Error::OutOfRange("matrix is not idempotent".into()));
        }
        Ok(Projector(m))
    }

    /// For matrices known to be projectors, such as conjugates of one.
    pub(crate) fn from_matrix_unchecked(m: RatMatrix) -> Self {
        debug_assert!(m.is_square());
        Projector(m)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.0
    }

    pub fn rank(&self) -> usize {
        let t = self.0.trace();
        debug_assert!(t.is_integer() && !t.is_negative());
        t.to_integer().try_into().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}
