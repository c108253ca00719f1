//! Primitive sublattices of bounded determinant.
//!
//! Let `Λ` be primitive of rank `k` with `det Λ ≤ D`, and pick linearly
//! independent `v_1, …, v_k ∈ Λ` realizing its successive minima. Minkowski's
//! second theorem gives `Π‖v_j‖² ≤ γ_k^k det Λ`, and since the norms increase,
//! `‖v_i‖^{2(k−i+1)} ≤ γ_k^k D / Π_{j<i}‖v_j‖²`. In particular every `v_i`
//! has norm at most `γ_k^k D / m^{k−1}` with `m` the lattice minimum.
//! Because `Λ` is primitive it equals the saturation of `span(v_1..v_k)`, so
//! saturating every admissible tuple of short vectors finds all of them.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::short_vectors;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{saturate, IntMatrix, RatMatrix};
use crate::rational::{self, Rat};

/// A primitive sublattice: HNF basis rows, an integer annihilator of its
/// rational span, and its Gram determinant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    #[serde(with = "rational::serde_rat")]
    det: Rat,
    basis: IntMatrix,
    #[serde(skip_serializing, default = "empty_matrix")]
    annihilator: IntMatrix,
}

fn empty_matrix() -> IntMatrix {
    IntMatrix::empty(0)
}

impl Sublattice {
    /// Saturation of the span of `vectors` inside `Z^n`.
    pub fn saturation_of(vectors: &[Vec<i64>], gram: &RatMatrix) -> Result<Self> {
        let n = gram.rows();
        let (basis, annihilator) = saturate(&IntMatrix::from_rows(vectors, n)?)?;
        let det = gram_det(&basis, gram)?;
        Ok(Sublattice {
            det,
            basis,
            annihilator,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    /// Hermite normal form basis, as rows.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Basis vectors as the columns of a rational matrix.
    pub fn column_basis(&self) -> RatMatrix {
        let b = &self.basis;
        RatMatrix::from_fn(b.cols(), b.rows(), |i, j| rational::int(b.get(j, i)))
    }

    pub fn contains_vector(&self, v: &[i64]) -> bool {
        (0..self.annihilator.rows()).all(|r| {
            self.annihilator
                .row(r)
                .iter()
                .zip(v)
                .map(|(&a, &x)| i128::from(a) * i128::from(x))
                .sum::<i128>()
                == 0
        })
    }

    /// Containment of primitive sublattices reduces to containment of spans.
    pub fn contains(&self, other: &Sublattice) -> bool {
        (0..other.basis.rows()).all(|r| self.contains_vector(other.basis.row(r)))
    }
}

fn gram_det(basis: &IntMatrix, gram: &RatMatrix) -> Result<Rat> {
    let b = RatMatrix::from_fn(basis.rows(), basis.cols(), |i, j| rational::int(basis.get(i, j)));
    (&(&b * gram) * &b.transpose()).det()
}

/// `γ_k^k`: exact for `k ≤ 8`, otherwise the upper bound `(1 + k/4)^k`.
pub fn gamma_power(k: usize) -> Rat {
    const EXACT: [(i64, i64); 8] = [(1, 1), (4, 3), (2, 1), (4, 1), (8, 1), (64, 3), (64, 1), (256, 1)];
    match k {
        1..=8 => rational::rat(EXACT[k - 1].0, EXACT[k - 1].1),
        _ => rational::pow(&(rational::one() + rational::rat(k as i64, 4)), k as u32),
    }
}

/// Integer row echelon form kept primitive, for exact independence tests.
#[derive(Clone, Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    /// Adds `v` if it is independent of the current rows.
    pub(crate) fn insert(&mut self, v: &[i64]) -> Result<bool> {
        let mut w: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (c, r) in &self.rows {
            if w[*c] == 0 {
                continue;
            }
            let (a, b) = (r[*c], w[*c]);
            let g = a.gcd(&b);
            let (a, b) = (a / g, b / g);
            for (x, y) in w.iter_mut().zip(r) {
                *x = a
                    .checked_mul(*x)
                    .zip(b.checked_mul(*y))
                    .and_then(|(p, q)| p.checked_sub(q))
                    .ok_or(Error::Overflow("independence test"))?;
            }
            let g = w.iter().fold(0i128, |g, x| g.gcd(x));
            if g > 1 {
                w.iter_mut().for_each(|x| *x /= g);
            }
        }
        match w.iter().position(|&x| x != 0) {
            Some(c) => {
                self.rows.push((c, w));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    #[cfg(test)]
    fn len(&self) -> usize {
        self.rows.len()
    }
}

struct Tuples<'a> {
    vectors: &'a [(Vec<i64>, Rat)],
    k: usize,
    /// `γ_k^k · D`
    budget: Rat,
    nodes: &'a AtomicU64,
    cap: u64,
}

impl Tuples<'_> {
    fn rec(
        &self,
        start: usize,
        chosen: &mut Vec<usize>,
        ech: &Echelon,
        product: &Rat,
        out: &mut BTreeSet<IntMatrix>,
    ) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            return Err(Error::budget("sublattice search nodes", self.cap));
        }
        let depth = chosen.len();
        if depth == self.k {
            let vs: Vec<Vec<i64>> = chosen.iter().map(|&i| self.vectors[i].0.clone()).collect();
            let n = vs[0].len();
            let (sat, _) = saturate(&IntMatrix::from_rows(&vs, n)?)?;
            out.insert(sat);
            return Ok(());
        }
        let remaining = (self.k - depth) as u32;
        let limit = &self.budget / product;
        for i in start..self.vectors.len() {
            let nv = &self.vectors[i].1;
            if rational::pow(nv, remaining) > limit {
                break;
            }
            let mut next = ech.clone();
            if !next.insert(&self.vectors[i].0)? {
                continue;
            }
            chosen.push(i);
            self.rec(i + 1, chosen, &next, &(product * nv), out)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Every primitive rank-`k` sublattice with Gram determinant at most
/// `bound`, once each, sorted by determinant and then basis.
pub fn sublattices_upto(
    gram: &RatMatrix,
    k: usize,
    bound: &Rat,
    cfg: &Config,
) -> Result<Vec<Sublattice>> {
    let n = gram.rows();
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("rank {k} outside 1..={n}")));
    }
    if k == n {
        let full = Sublattice::saturation_of(
            &IntMatrix::identity(n).row_vecs(),
            gram,
        )?;
        return Ok(if full.det() <= bound { vec![full] } else { Vec::new() });
    }
    let min_diag = (0..n).map(|i| gram[(i, i)].clone()).min().expect("n > 0");
    let minimum = short_vectors(gram, &min_diag, cfg.enumeration_node_cap)?[0].1.clone();
    let budget = gamma_power(k) * bound;
    let radius = &budget / rational::pow(&minimum, (k - 1) as u32);
    if radius < minimum {
        return Ok(Vec::new());
    }
    let vectors = short_vectors(gram, &radius, cfg.enumeration_node_cap)?;
    let nodes = AtomicU64::new(0);
    let search = Tuples {
        vectors: &vectors,
        k,
        budget,
        nodes: &nodes,
        cap: cfg.sublattice_node_cap,
    };
    let per_first: Vec<Result<BTreeSet<IntMatrix>>> = (0..vectors.len())
        .into_par_iter()
        .map(|i| {
            let mut out = BTreeSet::new();
            let nv = &vectors[i].1;
            if rational::pow(nv, k as u32) > search.budget {
                return Ok(out);
            }
            let mut ech = Echelon::default();
            ech.insert(&vectors[i].0)?;
            search.rec(i + 1, &mut vec![i], &ech, nv, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut bases = BTreeSet::new();
    for part in per_first {
        bases.extend(part?);
    }
    let mut found: Vec<Sublattice> = bases
        .into_par_iter()
        .map(|basis| -> Result<Option<Sublattice>> {
            let det = gram_det(&basis, gram)?;
            if &det > bound {
                return Ok(None);
            }
            let (_, annihilator) = saturate(&basis)?;
            Ok(Some(Sublattice {
                det,
                basis,
                annihilator,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn bases(gram: &RatMatrix, k: usize, d: i64) -> Vec<Vec<Vec<i64>>> {
        sublattices_upto(gram, k, &int(d), &Config::default())
            .unwrap()
            .iter()
            .map(|s| s.basis().row_vecs())
            .collect()
    }

    #[test]
    fn small_examples() {
        let z2 = RatMatrix::identity(2);
        assert_eq!(bases(&z2, 1, 1), vec![vec![vec![0, 1]], vec![vec![1, 0]]]);
        let with_diagonals = bases(&z2, 1, 2);
        assert_eq!(with_diagonals.len(), 4);
        assert!(with_diagonals.contains(&vec![vec![1, 1]]));
        assert!(with_diagonals.contains(&vec![vec![1, -1]]));
        let a2 = RatMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(bases(&a2, 2, 3), vec![vec![vec![1, 0], vec![0, 1]]]);
        assert!(bases(&a2, 2, 2).is_empty());
    }

    /// Oracle for rank 2 in Z^3: saturate every pair of vectors from a box.
    #[test]
    fn rank_two_agrees_with_box_search() {
        let g = RatMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let bound = 20;
        let mut box_vectors = Vec::new();
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    if (a, b, c) != (0, 0, 0) {
                        box_vectors.push(vec![a, b, c]);
                    }
                }
            }
        }
        let mut oracle = BTreeSet::new();
        for (i, u) in box_vectors.iter().enumerate() {
            for w in &box_vectors[i + 1..] {
                let mut e = Echelon::default();
                e.insert(u).unwrap();
                if !e.insert(w).unwrap() {
                    continue;
                }
                let s = Sublattice::saturation_of(&[u.clone(), w.clone()], &g).unwrap();
                if s.det() <= &int(bound) {
                    oracle.insert(s.basis().row_vecs());
                }
            }
        }
        let found: BTreeSet<_> = bases(&g, 2, bound).into_iter().collect();
        assert_eq!(found, oracle);
    }

    #[test]
    fn containment() {
        let g = RatMatrix::identity(3);
        let plane = Sublattice::saturation_of(&[vec![1, 0, 0], vec![0, 1, 0]], &g).unwrap();
        let line = Sublattice::saturation_of(&[vec![2, 2, 0]], &g).unwrap();
        assert_eq!(line.basis().row_vecs(), vec![vec![1, 1, 0]]);
        assert!(plane.contains(&line));
        let off = Sublattice::saturation_of(&[vec![0, 1, 1]], &g).unwrap();
        assert!(!plane.contains(&off));
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::default();
        assert!(e.insert(&[2, 4, 0]).unwrap());
        assert!(e.insert(&[1, 0, 1]).unwrap());
        assert!(!e.insert(&[3, 4, 1]).unwrap());
        assert!(!e.insert(&[1, 4, -1]).unwrap());
        assert_eq!(e.len(), 2);
    }
}
