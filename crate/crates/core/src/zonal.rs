//! Invariant spaces `N^μ` for the even weights of degree at most four, the
//! `Υ` basis of `N^(2)`, and the degree-2 zonal kernel.
//!
//! Coordinates on `N^(2)` are taken against the block vectors
//! `Σ_{v ∈ block b} ε_v ⊗ ε_v`, where block 1 is `v ≤ d_ℓ` and block `b ≥ 2`
//! is `d_{ℓ+2−b} < v ≤ d_{ℓ+1−b}`.

use serde::{Deserialize, Serialize};

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::flags::{trace_pair, Flag, FlagShape, FloatFlag};
use crate::rational::{self, Rat};

/// dim `N^μ` for `|μ| ≤ 4`. Weights deeper than `m = d_1` carry no invariant
/// because `S^μ(R^m)` itself vanishes.
pub fn n_mu_dim(mu: &Partition, shape: &FlagShape) -> Result<usize> {
    if mu.degree() > 4 {
        return Err(Error::Unsupported(format!(
            "invariant dimensions are tabulated for |μ| ≤ 4, got {mu}"
        )));
    }
    if mu.depth() > shape.m() {
        return Ok(0);
    }
    let l = shape.len();
    Ok(match mu.parts() {
        [] => 1,
        [2] => l,
        [4] => l * (l + 1) / 2,
        [2, 2] => l,
        _ => 0,
    })
}

/// A vector of `N^μ` in block coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub mu: Partition,
    #[serde(with = "rational::serde_rat_vec")]
    pub coefficients: Vec<Rat>,
}

impl InvariantVector {
    /// The spanning vector of block `b` (1-based) of `N^(2)`.
    pub fn block(shape: &FlagShape, b: usize) -> Result<Self> {
        let l = shape.len();
        if b == 0 || b > l {
            return Err(Error::OutOfRange(format!("block {b} of {l}")));
        }
        let mut coefficients = vec![rational::zero(); l];
        coefficients[b - 1] = rational::one();
        Ok(InvariantVector {
            mu: Partition::new(vec![2]).expect("valid"),
            coefficients,
        })
    }

    /// Coefficient of `ε_v ⊗ ε_v` for `v = 1..=m`.
    pub fn diagonal_weights(&self, shape: &FlagShape) -> Vec<Rat> {
        let d = shape.dims();
        let l = d.len();
        (1..=shape.m())
            .map(|v| {
                // the block containing v
                let b = 1 + (0..l).filter(|&i| v > d[i]).count();
                self.coefficients[b - 1].clone()
            })
            .collect()
    }
}

impl std::ops::Add for &InvariantVector {
    type Output = InvariantVector;
    fn add(self, rhs: &InvariantVector) -> InvariantVector {
        InvariantVector {
            mu: self.mu.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// `Υ_{d_ι} = Σ_{v ≤ d_ι} ε_v ⊗ ε_v` for chain index `iota` (0-based, so
/// `iota = 0` is `d_1`).
pub fn upsilon(shape: &FlagShape, iota: usize) -> Result<InvariantVector> {
    let l = shape.len();
    if iota >= l {
        return Err(Error::OutOfRange(format!("chain index {iota} of {l}")));
    }
    let coefficients = (1..=l)
        .map(|b| if b <= l - iota { rational::one() } else { rational::zero() })
        .collect();
    Ok(InvariantVector {
        mu: Partition::new(vec![2]).expect("valid"),
        coefficients,
    })
}

/// `Z_{Υ_ι, Υ_ι'}(F, G) = tr(P_ι(F) P_ι'(G)) − d_ι d_ι' / n`.
pub fn zonal2(f: &Flag, g: &Flag, iota: usize, iota2: usize) -> Result<Rat> {
    let t = trace_pair(f, g, iota, iota2)?;
    let (d, d2) = (f.shape().dims()[iota], g.shape().dims()[iota2]);
    Ok(t - rational::rat((d * d2) as i64, f.n() as i64))
}

/// The explicit three-sum expansion of the zonal kernel between column `j`
/// of `xf` and column `j2` of `xg` (0-based).
pub fn zonal2_full(j: usize, j2: usize, xf: &FloatFlag, xg: &FloatFlag) -> f64 {
    let n = xf.shape().n();
    let x = |i: usize| xf.get(i, j);
    let y = |i: usize| xg.get(i, j2);
    let a: Vec<f64> = (1..n).map(|i| x(i) * x(i) - x(0) * x(0)).collect();
    let b: Vec<f64> = (1..n).map(|i| y(i) * y(i) - y(0) * y(0)).collect();
    let first: f64 = a.iter().zip(&b).map(|(p, q)| p * q).sum();
    let second = a.iter().sum::<f64>() * b.iter().sum::<f64>() / n as f64;
    let mut third = 0.0;
    for i in 0..n {
        for i2 in 0..n {
            if i != i2 {
                third += x(i) * x(i2) * y(i) * y(i2);
            }
        }
    }
    first - second + third
}

/// [`zonal2_full`] summed over the first `d_ι` columns of `xf` and the first
/// `d_ι'` columns of `xg`; approximates [`zonal2`].
pub fn zonal2_full_sum(xf: &FloatFlag, xg: &FloatFlag, iota: usize, iota2: usize) -> f64 {
    let d = xf.shape().dims()[iota];
    let d2 = xg.shape().dims()[iota2];
    (0..d)
        .flat_map(|j| (0..d2).map(move |j2| (j, j2)))
        .map(|(j, j2)| zonal2_full(j, j2, xf, xg))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{haar_sample, random_rational_orthogonal};
    use crate::linalg::RatMatrix;
    use crate::rational::{int, rat, to_f64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn line(v: &[i64]) -> Flag {
        let col: Vec<Rat> = v.iter().map(|&x| int(x)).collect();
        Flag::from_bases(&[RatMatrix::from_columns(&[col]).unwrap()]).unwrap()
    }

    #[test]
    fn n_mu_examples() {
        let s1 = FlagShape::new(4, vec![2]).unwrap();
        let s2 = FlagShape::new(5, vec![3, 1]).unwrap();
        assert_eq!(n_mu_dim(&p(&[2]), &s1).unwrap(), 1);
        assert_eq!(n_mu_dim(&p(&[4]), &s2).unwrap(), 3);
        assert_eq!(n_mu_dim(&p(&[2, 2]), &s2).unwrap(), 2);
        assert_eq!(n_mu_dim(&p(&[]), &s2).unwrap(), 1);
        for odd in [&[1][..], &[3], &[1, 1], &[2, 1], &[1, 1, 1], &[1, 1, 1, 1], &[2, 1, 1], &[3, 1]] {
            assert_eq!(n_mu_dim(&p(odd), &s2).unwrap(), 0, "{odd:?}");
        }
        // (2,2) needs two rows, impossible when m = 1
        let lines = FlagShape::new(3, vec![1]).unwrap();
        assert_eq!(n_mu_dim(&p(&[2, 2]), &lines).unwrap(), 0);
        assert!(n_mu_dim(&p(&[3, 2]), &s2).is_err());
    }

    #[test]
    fn upsilon_examples() {
        let single = FlagShape::new(5, vec![3]).unwrap();
        let u = upsilon(&single, 0).unwrap();
        assert_eq!(u.coefficients, vec![int(1)]);
        assert_eq!(u.diagonal_weights(&single), vec![int(1); 3]);

        let s = FlagShape::new(4, vec![2, 1]).unwrap();
        let top = upsilon(&s, 0).unwrap();
        let bottom = upsilon(&s, 1).unwrap();
        let block2 = InvariantVector::block(&s, 2).unwrap();
        assert_eq!(&bottom + &block2, top);
        assert_eq!(bottom.diagonal_weights(&s), vec![int(1), int(0)]);
        assert!(upsilon(&s, 2).is_err());
    }

    #[test]
    fn zonal2_examples() {
        let e1 = line(&[1, 0, 0]);
        assert_eq!(zonal2(&e1, &e1, 0, 0).unwrap(), rat(2, 3));
        assert_eq!(zonal2(&e1, &line(&[0, 1, 0]), 0, 0).unwrap(), rat(-1, 3));
    }

    #[test]
    fn zonal2_haar_mean_vanishes() {
        let shape = FlagShape::new(4, vec![2, 1]).unwrap();
        let g = FloatFlag::from_flag(
            &Flag::from_bases(&[
                RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]),
                RatMatrix::from_i64(&[&[1], &[0], &[0], &[0]]),
            ])
            .unwrap(),
        )
        .unwrap();
        let samples = 20_000;
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let vals: Vec<f64> = (0..samples)
                .map(|s| {
                    let f = haar_sample(&shape, s);
                    crate::flags::float_trace_pair(&f, &g, i, j)
                        - (shape.dims()[i] * shape.dims()[j]) as f64 / 4.0
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / samples as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / samples as f64;
            assert!(mean.abs() < 3.0 * (var / samples as f64).sqrt(), "{i},{j}: {mean}");
        }
    }

    #[test]
    fn full_expansion_matches_on_coordinate_and_identical_flags() {
        let a = Flag::from_bases(&[RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])]).unwrap();
        let b = Flag::from_bases(&[RatMatrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[0, 0]])]).unwrap();
        let (xa, xb) = (FloatFlag::from_flag(&a).unwrap(), FloatFlag::from_flag(&b).unwrap());
        let exact = to_f64(&zonal2(&a, &b, 0, 0).unwrap());
        assert!((zonal2_full_sum(&xa, &xb, 0, 0) - exact).abs() < 1e-10);
        let same = zonal2_full_sum(&xa, &xa, 0, 0);
        assert!((same - 2.0 * 2.0 / 4.0).abs() < 1e-10);
    }

    #[test]
    fn full_expansion_matches_on_haar_pairs() {
        let shape = FlagShape::new(5, vec![3, 1]).unwrap();
        for s in 0..50 {
            let (f, g) = (haar_sample(&shape, 2 * s), haar_sample(&shape, 2 * s + 1));
            for i in 0..2 {
                for j in 0..2 {
                    let want = crate::flags::float_trace_pair(&f, &g, i, j)
                        - (shape.dims()[i] * shape.dims()[j]) as f64 / 5.0;
                    assert!((zonal2_full_sum(&f, &g, i, j) - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn zonal2_invariance_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Flag::from_bases(&[
            RatMatrix::from_i64(&[&[1, 0], &[2, 1], &[0, 1], &[1, 1]]),
            RatMatrix::from_i64(&[&[1], &[3], &[1], &[2]]),
        ])
        .unwrap();
        let g = Flag::from_bases(&[
            RatMatrix::from_i64(&[&[0, 1], &[1, 1], &[1, 0], &[2, 0]]),
            RatMatrix::from_i64(&[&[1], &[2], &[1], &[2]]),
        ])
        .unwrap();
        for _ in 0..5 {
            let q = random_rational_orthogonal(4, &mut rng);
            let (qf, qg) = (f.transform(&q).unwrap(), g.transform(&q).unwrap());
            for i in 0..2 {
                for j in 0..2 {
                    let z = zonal2(&f, &g, i, j).unwrap();
                    assert_eq!(z, zonal2(&qf, &qg, i, j).unwrap());
                    assert_eq!(z, zonal2(&g, &f, j, i).unwrap());
                }
            }
        }
    }
}
