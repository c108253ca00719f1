//! Exact design certification.
//!
//! A finite weighted set of flags is a t-design when its weighted means of
//! all polynomial functions of degree ≤ t agree with the Haar means. Every
//! invariant polynomial function on a flag variety has even degree, so only
//! degrees 2 and 4 need checking for t ≤ 5. They are checked as moment
//! identities:
//!
//! * degree 2: `Σ w P_ι = (d_ι/n) I`;
//! * degree 4: `Σ w Q_ι ⊗ Q_ι' = a G⊗G + b (G_ik G_jl + G_il G_jk)` with
//!   `Q = G P` and `(a, b)` from [`haar_moment4`].
//!
//! For lines (flags of shape `(1)`) higher even strengths are available via
//! the pair-sum test on the underlying vectors.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Flag, FlagShape};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::rational::{self, Rat};

/// A finite weighted multiset of flags of one shape and one ambient metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagSet {
    flags: Vec<Flag>,
    #[serde(with = "rational::serde_rat_vec")]
    weights: Vec<Rat>,
}

impl FlagSet {
    /// Uniform weights.
    pub fn uniform(flags: Vec<Flag>) -> Result<Self> {
        let w = rational::rat(1, flags.len().max(1) as i64);
        let weights = vec![w; flags.len()];
        Self::weighted(flags, weights)
    }

    /// Explicit positive weights summing to one.
    pub fn weighted(flags: Vec<Flag>, weights: Vec<Rat>) -> Result<Self> {
        let first = flags
            .first()
            .ok_or_else(|| Error::Empty("flag set".into()))?;
        if flags
            .iter()
            .any(|f| f.shape() != first.shape() || f.gram() != first.gram())
        {
            return Err(Error::MixedShapes);
        }
        if weights.len() != flags.len() {
            return Err(Error::DimensionMismatch("one weight per flag".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::OutOfRange("weights must be positive".into()));
        }
        if weights.iter().fold(Rat::zero(), |a, b| a + b) != rational::one() {
            return Err(Error::OutOfRange("weights must sum to 1".into()));
        }
        Ok(FlagSet { flags, weights })
    }

    /// The lines spanned by `vectors` in a space with optional Gram matrix.
    pub fn lines(vectors: &[Vec<Rat>], gram: Option<&RatMatrix>) -> Result<Self> {
        let flags = vectors
            .iter()
            .map(|v| {
                let col = RatMatrix::from_columns(std::slice::from_ref(v))?;
                match gram {
                    Some(g) => Flag::from_bases_in(&[col], g),
                    None => Flag::from_bases(&[col]),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::uniform(flags)
    }

    /// Union of two sets of the same shape, weighted by `p` and `1 − p`.
    pub fn merge(&self, other: &FlagSet, p: &Rat) -> Result<FlagSet> {
        let q = rational::one() - p;
        let flags = self.flags.iter().chain(&other.flags).cloned().collect();
        let weights = self
            .weights
            .iter()
            .map(|w| w * p)
            .chain(other.weights.iter().map(|w| w * &q))
            .collect();
        Self::weighted(flags, weights)
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn shape(&self) -> &FlagShape {
        self.flags[0].shape()
    }

    pub fn gram(&self) -> Option<&RatMatrix> {
        self.flags[0].gram()
    }

    /// Applies one metric-preserving map to every flag.
    pub fn transform(&self, q: &RatMatrix) -> Result<FlagSet> {
        let q_inv = crate::flags::orthogonal_inverse(q, self.gram())?;
        Ok(FlagSet {
            flags: self
                .flags
                .iter()
                .map(|f| f.transform_with_inverse(q, &q_inv))
                .collect(),
            weights: self.weights.clone(),
        })
    }
}

/// Haar mean of the projector onto a random `d`-dimensional subspace.
pub fn haar_moment2(n: usize, d: usize) -> RatMatrix {
    RatMatrix::identity(n).scale(&rational::rat(d as i64, n as i64))
}

/// Coefficients `(a, b)` of the Haar mean
/// `E[P_ij P'_kl] = a δ_ij δ_kl + b (δ_ik δ_jl + δ_il δ_jk)` for nested
/// random subspaces of dimensions `d` and `d2`.
///
/// Contracting with `δ_ij δ_kl` and with `δ_jk δ_il` gives
/// `a n² + 2bn = d d2` and `a n + b n(n+1) = min(d, d2)`, whence
/// `b = κ / (n(n−1)(n+2))` with `κ = n·min(d, d2) − d d2`.
pub fn haar_moment4(n: usize, d: usize, d2: usize) -> (Rat, Rat) {
    let (n, d, d2) = (n as i64, d as i64, d2 as i64);
    let kappa = n * d.min(d2) - d * d2;
    let b = rational::rat(kappa, n * (n - 1) * (n + 2));
    let a = (rational::int(d * d2) - &b * rational::int(2 * n)) / rational::int(n * n);
    (a, b)
}

/// `m_t = 1·3···(t−1) / (n(n+2)···(n+t−2))`, the mean of `(x·e)^t` over the
/// unit sphere of `R^n`, for even `t`.
pub fn sphere_moment(n: usize, t: u32) -> Rat {
    assert!(t % 2 == 0, "sphere moments are tabulated for even t");
    (0..t / 2).fold(rational::one(), |acc, k| {
        acc * rational::rat(2 * i64::from(k) + 1, n as i64 + 2 * i64::from(k))
    })
}

/// A failing moment entry. Indices are 1-based: `[i, j]` at degree 2,
/// `[i, j, k, l]` at degree 4; `iota` likewise numbers chain members from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub iota: usize,
    pub iota2: usize,
    pub entry: Vec<usize>,
    #[serde(with = "rational::serde_rat")]
    pub observed: Rat,
    #[serde(with = "rational::serde_rat")]
    pub expected: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVerdict {
    pub degree: u32,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignCertificate {
    pub requested_strength: u32,
    /// Largest `s ≤ requested_strength` for which the set is an s-design.
    pub strength_verified: u32,
    pub passes: bool,
    pub verdicts: Vec<DegreeVerdict>,
    pub note: String,
    /// Wall time in milliseconds; absent unless timing was requested, so that
    /// reports stay byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

const ODD_NOTE: &str = "odd degrees carry no invariant functions on flag varieties, \
so a 2k-design is a (2k+1)-design and every set is a 1-design";

/// Exact design test at strength `t ∈ 1..=5`.
pub fn is_design(set: &FlagSet, t: u32) -> Result<DesignCertificate> {
    is_design_timed(set, t, false)
}

/// [`is_design`], optionally recording wall time in the certificate.
pub fn is_design_timed(set: &FlagSet, t: u32, timing: bool) -> Result<DesignCertificate> {
    if !(1..=5).contains(&t) {
        return Err(Error::Unsupported(format!(
            "flag design strength {t}; use the pair-sum test for lines beyond 5"
        )));
    }
    let start = Instant::now();
    let mut verdicts = Vec::new();
    let mut verified = t;
    if t >= 2 {
        let w = degree2_witness(set);
        let pass = w.is_none();
        verdicts.push(DegreeVerdict {
            degree: 2,
            pass,
            witness: w,
        });
        if !pass {
            verified = 1;
        }
    }
    if t >= 4 && verified == t {
        let w = degree4_witness(set);
        let pass = w.is_none();
        verdicts.push(DegreeVerdict {
            degree: 4,
            pass,
            witness: w,
        });
        if !pass {
            verified = 3;
        }
    }
    Ok(DesignCertificate {
        requested_strength: t,
        strength_verified: verified,
        passes: verified == t,
        verdicts,
        note: ODD_NOTE.into(),
        elapsed_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// First entry where `Σ w P_ι ≠ (d_ι/n) I`.
fn degree2_witness(set: &FlagSet) -> Option<Witness> {
    let shape = set.shape();
    let n = shape.n();
    for (iota, &d) in shape.dims().iter().enumerate() {
        let mean = weighted_mean(set, iota);
        let expected = haar_moment2(n, d);
        for i in 0..n {
            for j in 0..n {
                if mean[(i, j)] != expected[(i, j)] {
                    return Some(Witness {
                        iota: iota + 1,
                        iota2: iota + 1,
                        entry: vec![i + 1, j + 1],
                        observed: mean[(i, j)].clone(),
                        expected: expected[(i, j)].clone(),
                    });
                }
            }
        }
    }
    None
}

/// `Σ w P_ι` for one chain index.
pub fn weighted_mean(set: &FlagSet, iota: usize) -> RatMatrix {
    let n = set.shape().n();
    set.flags
        .par_iter()
        .zip(&set.weights)
        .map(|(f, w)| f.projector(iota).scale(w))
        .reduce(|| RatMatrix::zeros(n, n), |a, b| &a + &b)
}

/// Index pairs `(i, j)` with `i ≤ j`.
fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Integer numerators of the upper triangle of a symmetric matrix, and their
/// common denominator.
fn sym_numerators(q: &RatMatrix, pairs: &[(usize, usize)]) -> (Vec<BigInt>, BigInt) {
    let den = rational::common_denominator(pairs.iter().map(|&(i, j)| &q[(i, j)]));
    let nums = pairs
        .iter()
        .map(|&(i, j)| {
            let x = &q[(i, j)];
            x.numer() * (&den / x.denom())
        })
        .collect();
    (nums, den)
}

/// Outer-product sums of integer vectors, grouped by a rational scale. Each
/// group accumulates in `i128` while a magnitude bound allows it, and in
/// `BigInt` otherwise; the result does not depend on grouping or order.
#[derive(Default)]
struct OuterAccumulator {
    groups: BTreeMap<Rat, Block>,
}

enum Block {
    Small { sum: Vec<i128>, count: u128, max: u128 },
    Big(Vec<BigInt>),
}

impl Block {
    fn into_big(self) -> Vec<BigInt> {
        match self {
            Block::Small { sum, .. } => sum.into_iter().map(BigInt::from).collect(),
            Block::Big(v) => v,
        }
    }
}

impl OuterAccumulator {
    fn add(&mut self, scale: Rat, u: &[BigInt], v: &[BigInt]) {
        let len = u.len() * v.len();
        let small: Option<(Vec<i64>, Vec<i64>)> = u
            .iter()
            .map(BigInt::to_i64)
            .collect::<Option<Vec<_>>>()
            .zip(v.iter().map(BigInt::to_i64).collect::<Option<Vec<_>>>());
        let block = self.groups.entry(scale).or_insert_with(|| Block::Small {
            sum: vec![0; len],
            count: 0,
            max: 0,
        });
        if let (Block::Small { sum, count, max }, Some((su, sv))) = (&mut *block, &small) {
            let mu = su.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
            let mv = sv.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
            let prod = mu.checked_mul(mv);
            let new_max = prod.map(|p| p.max(*max));
            // every partial sum stays below (count + 1) · max |u_p v_q|
            let fits = new_max
                .and_then(|m| m.checked_mul(*count + 1))
                .is_some_and(|b| b < (1u128 << 126));
            if fits {
                for (p, &a) in su.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let row = &mut sum[p * sv.len()..(p + 1) * sv.len()];
                    for (s, &b) in row.iter_mut().zip(sv) {
                        *s += i128::from(a) * i128::from(b);
                    }
                }
                *count += 1;
                *max = new_max.expect("checked");
                return;
            }
        }
        let mut big = std::mem::replace(block, Block::Big(Vec::new())).into_big();
        for (p, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (q, b) in v.iter().enumerate() {
                big[p * v.len() + q] += a * b;
            }
        }
        *block = Block::Big(big);
    }

    fn merge(mut self, other: OuterAccumulator) -> OuterAccumulator {
        for (k, b) in other.groups {
            match self.groups.remove(&k) {
                None => {
                    self.groups.insert(k, b);
                }
                Some(a) => {
                    let merged = match (a, b) {
                        (
                            Block::Small { sum: x, count: cx, max: mx },
                            Block::Small { sum: y, count: cy, max: my },
                        ) if (cx + cy).checked_mul(mx.max(my)).is_some_and(|b| b < (1 << 126)) => {
                            Block::Small {
                                sum: x.iter().zip(&y).map(|(p, q)| p + q).collect(),
                                count: cx + cy,
                                max: mx.max(my),
                            }
                        }
                        (a, b) => Block::Big(
                            a.into_big()
                                .into_iter()
                                .zip(b.into_big())
                                .map(|(p, q)| p + q)
                                .collect(),
                        ),
                    };
                    self.groups.insert(k, merged);
                }
            }
        }
        self
    }

    fn finish(self, len: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); len];
        for (scale, block) in self.groups {
            let sums = block.into_big();
            // put everything over the scale's denominator once
            for (o, s) in out.iter_mut().zip(sums) {
                if !s.is_zero() {
                    *o += Rat::from_integer(s) * &scale;
                }
            }
        }
        out
    }
}

/// `Σ w Q_ι ⊗ Q_ι'` restricted to upper-triangle index pairs, row-major over
/// `(pair(i,j), pair(k,l))`.
pub fn moment4(set: &FlagSet, iota: usize, iota2: usize) -> Vec<Rat> {
    let n = set.shape().n();
    let pairs = sym_pairs(n);
    let lower = |p: &RatMatrix| match set.gram() {
        Some(g) => g * p,
        None => p.clone(),
    };
    let acc = set
        .flags
        .par_iter()
        .zip(&set.weights)
        .fold(OuterAccumulator::default, |mut acc, (f, w)| {
            let (u, du) = sym_numerators(&lower(f.projector(iota)), &pairs);
            let (v, dv) = if iota == iota2 {
                (u.clone(), du.clone())
            } else {
                sym_numerators(&lower(f.projector(iota2)), &pairs)
            };
            acc.add(w / Rat::from_integer(du * dv), &u, &v);
            acc
        })
        .reduce(OuterAccumulator::default, OuterAccumulator::merge);
    acc.finish(pairs.len() * pairs.len())
}

/// First entry where the degree-4 moment differs from the Haar moment.
fn degree4_witness(set: &FlagSet) -> Option<Witness> {
    let shape = set.shape();
    let n = shape.n();
    let dims = shape.dims();
    let g = set
        .gram()
        .cloned()
        .unwrap_or_else(|| RatMatrix::identity(n));
    let pairs = sym_pairs(n);
    for iota in 0..dims.len() {
        for iota2 in iota..dims.len() {
            let (a, b) = haar_moment4(n, dims[iota], dims[iota2]);
            let m = moment4(set, iota, iota2);
            for (p, &(i, j)) in pairs.iter().enumerate() {
                for (q, &(k, l)) in pairs.iter().enumerate() {
                    let expected = &a * &g[(i, j)] * &g[(k, l)]
                        + &b * (&g[(i, k)] * &g[(j, l)] + &g[(i, l)] * &g[(j, k)]);
                    let observed = &m[p * pairs.len() + q];
                    if *observed != expected {
                        return Some(Witness {
                            iota: iota + 1,
                            iota2: iota2 + 1,
                            entry: vec![i + 1, j + 1, k + 1, l + 1],
                            observed: observed.clone(),
                            expected,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Degree-2 zonal sums: whether `Σ_Δ w Z(Δ, Δ', ι, ι')` vanishes for every
/// probe flag `Δ'` and every pair of chain indices.
pub fn zonal_sums_vanish(set: &FlagSet, probes: &[Flag]) -> Result<bool> {
    let l = set.shape().len();
    for probe in probes {
        for iota in 0..l {
            for iota2 in 0..probe.shape().len() {
                let s = set
                    .flags
                    .iter()
                    .zip(&set.weights)
                    .map(|(f, w)| crate::zonal::zonal2(f, probe, iota, iota2).map(|z| z * w))
                    .try_fold(Rat::zero(), |a, z| z.map(|z| a + z))?;
                if !s.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Probe flags of a given shape whose members' projectors span the
/// symmetric matrices: random exact rotations of the coordinate flag.
pub fn probe_flags(shape: &FlagShape, seed: u64) -> Result<Vec<Flag>> {
    use rand::SeedableRng;
    let n = shape.n();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coordinate = Flag::from_bases(
        &shape
            .dims()
            .iter()
            .map(|&d| RatMatrix::from_fn(n, d, |i, j| if i == j { rational::one() } else { rational::zero() }))
            .collect::<Vec<_>>(),
    )?;
    let count = 2 * n * (n + 1) / 2;
    (0..count)
        .map(|_| coordinate.transform(&crate::flags::random_rational_orthogonal(n, &mut rng)))
        .collect()
}

/// Outcome of the pair-sum test at one strength.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSumResult {
    pub t: u32,
    pub pass: bool,
    /// Σ_{x,y ∈ V} (x·y)^t
    pub observed: String,
    /// |V|² r^{2t} m_t
    #[serde(with = "rational::serde_rat")]
    pub expected: Rat,
}

/// Inner-product histogram of an antipodal set of equal-norm integer vectors
/// given by one representative per pair `±x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairHistogram {
    pub n: usize,
    /// |V| (twice the number of representatives)
    pub size: u64,
    /// common squared norm
    pub norm: i64,
    /// counts of x·y over ordered pairs of distinct representatives
    pub counts: BTreeMap<i64, u64>,
}

impl PairHistogram {
    /// Σ_{x,y∈V} (x·y)^t for even t. Pairs of representatives stand for four
    /// pairs of vectors with the same even power.
    pub fn power_sum(&self, t: u32) -> BigInt {
        let reps = self.size / 2;
        let mut s = BigInt::from(reps) * num_traits::pow(BigInt::from(self.norm), t as usize);
        for (&ip, &c) in &self.counts {
            s += BigInt::from(c) * num_traits::pow(BigInt::from(ip), t as usize);
        }
        s * 4
    }

    pub fn test(&self, t: u32) -> Result<PairSumResult> {
        if t == 0 || t % 2 == 1 {
            return Err(Error::Unsupported(format!("pair-sum test needs an even t, got {t}")));
        }
        let observed = self.power_sum(t);
        let size = Rat::from_integer(BigInt::from(self.size));
        let expected = &size * &size
            * rational::pow(&rational::int(self.norm), t)
            * sphere_moment(self.n, t);
        Ok(PairSumResult {
            t,
            pass: Rat::from_integer(observed.clone()) == expected,
            observed: observed.to_string(),
            expected,
        })
    }
}

/// Builds the histogram for representatives `reps` (one per `±x`) in a space
/// with integer Gram matrix `gram` (identity when absent).
pub fn pair_histogram(reps: &[Vec<i64>], gram: Option<&IntMatrix>) -> Result<PairHistogram> {
    let first = reps.first().ok_or_else(|| Error::Empty("vector set".into()))?;
    let n = first.len();
    if reps.iter().any(|v| v.len() != n) || gram.is_some_and(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch("vectors of different lengths".into()));
    }
    // lowered copies G·y, so each inner product is a plain dot product
    let lowered: Vec<Vec<i64>> = match gram {
        Some(g) => reps.iter().map(|v| g.mul_vec(v)).collect::<Result<_>>()?,
        None => reps.to_vec(),
    };
    let dot = |a: &[i64], b: &[i64]| -> Result<i64> {
        a.iter().zip(b).try_fold(0i64, |s, (&x, &y)| {
            x.checked_mul(y)
                .and_then(|p| s.checked_add(p))
                .ok_or(Error::Overflow("inner product"))
        })
    };
    let norm = dot(&reps[0], &lowered[0])?;
    for (v, lv) in reps.iter().zip(&lowered) {
        if dot(v, lv)? != norm {
            return Err(Error::UnequalNorms);
        }
    }
    // |x·y| ≤ norm by Cauchy–Schwarz, so a dense histogram suffices. Narrow
    // copies let the inner loop vectorize.
    let narrow = norm <= i64::from(i32::MAX / 4)
        && reps.iter().chain(&lowered).flatten().all(|&x| i32::try_from(x).is_ok())
        && reps
            .iter()
            .flatten()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
            .saturating_mul(lowered.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0))
            .saturating_mul(n as u64)
            < i64::MAX as u64;
    let width = (2 * norm + 1) as usize;
    let counts: Vec<u64> = if narrow {
        let a: Vec<Vec<i32>> = reps.iter().map(|v| v.iter().map(|&x| x as i32).collect()).collect();
        let b: Vec<Vec<i32>> = lowered.iter().map(|v| v.iter().map(|&x| x as i32).collect()).collect();
        (0..a.len())
            .into_par_iter()
            .fold(
                || vec![0u64; width],
                |mut h, i| {
                    let x = &a[i];
                    for y in &b[i + 1..] {
                        let ip: i64 = x.iter().zip(y).map(|(&p, &q)| i64::from(p * q)).sum();
                        h[(ip + norm) as usize] += 1;
                    }
                    h
                },
            )
            .reduce(|| vec![0u64; width], |mut x, y| {
                x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
                x
            })
    } else {
        let mut h = vec![0u64; width];
        for i in 0..reps.len() {
            for y in &lowered[i + 1..] {
                let ip = dot(&reps[i], y)?;
                if ip.abs() > norm {
                    return Err(Error::NotPositiveDefinite);
                }
                h[(ip + norm) as usize] += 1;
            }
        }
        h
    };
    let counts = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        // unordered pairs i<j, counted twice for ordered pairs
        .map(|(k, c)| (k as i64 - norm, 2 * c))
        .collect();
    Ok(PairHistogram {
        n,
        size: 2 * reps.len() as u64,
        norm,
        counts,
    })
}

/// Splits an antipodal vector set into one representative per `±x` (the one
/// whose first nonzero coordinate is positive), checking closure under
/// negation.
pub fn antipodal_representatives(vectors: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    use std::collections::BTreeMap as Map;
    let mut balance: Map<Vec<i64>, i64> = Map::new();
    for v in vectors {
        let lead = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
        if lead == 0 {
            return Err(Error::OutOfRange("zero vector in a spherical set".into()));
        }
        let (key, sign) = if lead > 0 {
            (v.clone(), 1)
        } else {
            (v.iter().map(|x| -x).collect(), -1)
        };
        *balance.entry(key).or_insert(0) += sign;
    }
    if balance.values().any(|&b| b != 0) {
        return Err(Error::NotAntipodal);
    }
    // multiplicity of a pair is the count of its positive copies
    let mut reps = Vec::new();
    for v in vectors {
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            reps.push(v.clone());
        }
    }
    Ok(reps)
}

/// Pair-sum test on an antipodal equal-norm set of integer vectors.
pub fn sphere_pair_sum_test(
    vectors: &[Vec<i64>],
    gram: Option<&IntMatrix>,
    t: u32,
) -> Result<PairSumResult> {
    let reps = antipodal_representatives(vectors)?;
    pair_histogram(&reps, gram)?.test(t)
}

/// Scales rational vectors to integer ones by a common factor; design
/// properties of lines and sphere sets do not depend on the scale.
pub fn integer_vectors(vectors: &[Vec<Rat>]) -> Result<Vec<Vec<i64>>> {
    let den = vectors.iter().fold(BigInt::one(), |acc, v| {
        acc.lcm(&rational::common_denominator(v))
    });
    vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    (x * Rat::from_integer(den.clone()))
                        .to_integer()
                        .to_i64()
                        .ok_or(Error::Overflow("vector scaling"))
                })
                .collect()
        })
        .collect()
}

/// A rational Gram matrix scaled by its common denominator; inner products
/// scale uniformly, so pair-sum verdicts are unaffected.
pub fn integral_gram(gram: &RatMatrix) -> Result<IntMatrix> {
    let rows: Vec<Vec<Rat>> = (0..gram.rows()).map(|i| gram.row(i).to_vec()).collect();
    let ints = integer_vectors(&rows)?;
    IntMatrix::from_rows(&ints, gram.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::random_rational_orthogonal;
    use crate::rational::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn square() -> Vec<Vec<i64>> {
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]
    }

    fn cross_polytope(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .flat_map(|i| {
                [1, -1].map(|s| (0..n).map(|j| if i == j { s } else { 0 }).collect())
            })
            .collect()
    }

    #[test]
    fn moment_constants() {
        assert_eq!(haar_moment2(2, 1), RatMatrix::identity(2).scale(&rat(1, 2)));
        assert_eq!(haar_moment2(8, 2), RatMatrix::identity(8).scale(&rat(1, 4)));
        let (a, b) = haar_moment4(2, 1, 1);
        assert_eq!((a.clone(), b.clone()), (rat(1, 8), rat(1, 8)));
        assert_eq!(a + b * int(2), rat(3, 8));
        for n in 2..9usize {
            for d in 1..n {
                for d2 in 1..n {
                    let (a, b) = haar_moment4(n, d, d2);
                    let nn = int(n as i64);
                    assert_eq!(&a * &nn * &nn + &b * int(2) * &nn, int((d * d2) as i64));
                    assert_eq!(&a * &nn + &b * (&nn * &nn + &nn), int(d.min(d2) as i64));
                }
            }
        }
    }

    #[test]
    fn sphere_moment_telescopes() {
        for n in 1..10 {
            assert_eq!(sphere_moment(n, 2), rat(1, n as i64));
            for t in (4..=12).step_by(2) {
                let prev = sphere_moment(n, t - 2);
                assert_eq!(sphere_moment(n, t), prev * rat(i64::from(t) - 1, n as i64 + i64::from(t) - 2));
            }
        }
    }

    #[test]
    fn square_is_a_2_design_not_a_4_design() {
        let set = FlagSet::lines(&square().iter().map(|v| rv(v)).collect::<Vec<_>>(), None).unwrap();
        let two = is_design(&set, 2).unwrap();
        assert!(two.passes);
        assert!(is_design(&set, 3).unwrap().passes);
        let four = is_design(&set, 4).unwrap();
        assert!(!four.passes);
        assert_eq!(four.strength_verified, 3);
        let w = four.verdicts[1].witness.clone().unwrap();
        assert_eq!(w.entry, vec![1, 1, 1, 1]);
        assert_eq!(w.observed, rat(1, 2));
        assert_eq!(w.expected, rat(3, 8));
        assert!(is_design(&set, 1).unwrap().passes);
        assert!(is_design(&set, 6).is_err());
    }

    #[test]
    fn single_flag_fails_degree_two() {
        let set = FlagSet::lines(&[rv(&[1, 2, 2])], None).unwrap();
        let c = is_design(&set, 2).unwrap();
        assert!(!c.passes);
        assert_eq!(c.strength_verified, 1);
    }

    #[test]
    fn pair_sum_examples() {
        let sq = square();
        let r2 = sphere_pair_sum_test(&sq, None, 2).unwrap();
        assert!(r2.pass);
        assert_eq!(r2.observed, "8");
        let r4 = sphere_pair_sum_test(&sq, None, 4).unwrap();
        assert!(!r4.pass);
        assert_eq!(r4.observed, "8");
        assert_eq!(r4.expected, int(6));
        for t in [2, 4, 6, 8] {
            assert!(sphere_pair_sum_test(&[vec![1], vec![-1]], None, t).unwrap().pass);
        }
        assert_eq!(
            sphere_pair_sum_test(&[vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]], None, 2),
            Err(Error::UnequalNorms)
        );
        assert_eq!(
            sphere_pair_sum_test(&[vec![1, 0], vec![0, 1]], None, 2),
            Err(Error::NotAntipodal)
        );
    }

    /// Brute-force Σ_{x,y}(x·y)^t over all ordered pairs.
    fn brute_pair_sum(v: &[Vec<i64>], t: u32) -> BigInt {
        let mut s = BigInt::zero();
        for x in v {
            for y in v {
                let ip: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                s += num_traits::pow(BigInt::from(ip), t as usize);
            }
        }
        s
    }

    #[test]
    fn pair_sum_agrees_with_moments_and_brute_force() {
        let d4_roots: Vec<Vec<i64>> = {
            let mut r = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let mut v = vec![0; 4];
                        v[i] = si;
                        v[j] = sj;
                        r.push(v);
                    }
                }
            }
            r
        };
        // hexagon in A2 coordinates
        let a2 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2).unwrap();
        let a2_roots: Vec<Vec<i64>> =
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, -1], vec![-1, 1]];
        let cases: Vec<(Vec<Vec<i64>>, Option<IntMatrix>)> = vec![
            (square(), None),
            (cross_polytope(3), None),
            (cross_polytope(4), None),
            (d4_roots, None),
            (a2_roots, Some(a2)),
        ];
        for (vs, g) in &cases {
            let gram_rat = g.as_ref().map(|g| {
                RatMatrix::from_fn(g.rows(), g.cols(), |i, j| int(g.get(i, j)))
            });
            let set = FlagSet::lines(&vs.iter().map(|v| rv(v)).collect::<Vec<_>>(), gram_rat.as_ref()).unwrap();
            for t in [2, 4] {
                let ps = sphere_pair_sum_test(vs, g.as_ref(), t).unwrap();
                assert_eq!(ps.pass, is_design(&set, t).unwrap().passes, "t={t} on {vs:?}");
                if g.is_none() {
                    assert_eq!(ps.observed, brute_pair_sum(vs, t).to_string());
                }
            }
        }
    }

    #[test]
    fn hexagon_is_a_4_design_not_6() {
        let a2 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]], 2).unwrap();
        let roots: Vec<Vec<i64>> =
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, -1], vec![-1, 1]];
        assert!(sphere_pair_sum_test(&roots, Some(&a2), 4).unwrap().pass);
        assert!(!sphere_pair_sum_test(&roots, Some(&a2), 6).unwrap().pass);
    }

    #[test]
    fn design_invariant_under_orthogonal_maps_and_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cross = FlagSet::lines(&cross_polytope(3).iter().map(|v| rv(v)).collect::<Vec<_>>(), None).unwrap();
        for _ in 0..5 {
            let q = random_rational_orthogonal(3, &mut rng);
            let moved = cross.transform(&q).unwrap();
            for t in 1..=5 {
                assert_eq!(is_design(&moved, t).unwrap().passes, is_design(&cross, t).unwrap().passes);
            }
            let union = cross.merge(&moved, &rat(1, 3)).unwrap();
            assert!(is_design(&union, 2).unwrap().passes);
        }
    }

    #[test]
    fn zonal_sum_equivalence_at_degree_two() {
        let shape = FlagShape::new(3, vec![1]).unwrap();
        let probes = probe_flags(&shape, 1).unwrap();
        let cross = FlagSet::lines(&cross_polytope(3).iter().map(|v| rv(v)).collect::<Vec<_>>(), None).unwrap();
        assert!(zonal_sums_vanish(&cross, &probes).unwrap());
        assert!(is_design(&cross, 2).unwrap().passes);
        let lopsided = FlagSet::lines(&[rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[1, 1, 1])], None).unwrap();
        assert!(!zonal_sums_vanish(&lopsided, &probes).unwrap());
        assert!(!is_design(&lopsided, 2).unwrap().passes);
    }

    #[test]
    fn mixed_shapes_rejected() {
        let a = Flag::from_bases(&[RatMatrix::from_i64(&[&[1], &[0], &[0]])]).unwrap();
        let b = Flag::from_bases(&[RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]])]).unwrap();
        assert_eq!(FlagSet::uniform(vec![a, b]), Err(Error::MixedShapes));
    }

    #[test]
    fn accumulator_falls_back_to_bigint() {
        let big = BigInt::from(i64::MAX);
        let mut acc = OuterAccumulator::default();
        for _ in 0..4 {
            acc.add(rat(1, 2), &[big.clone()], &[big.clone()]);
        }
        let out = acc.finish(1);
        assert_eq!(out[0], Rat::from_integer(BigInt::from(i64::MAX) * i64::MAX * 2));
    }


    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn verdicts_survive_orthogonal_maps(seed in 0u64..1000, pick in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vecs: Vec<Vec<i64>> = match pick {
                0 => cross_polytope(3),
                1 => vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 2]],
                _ => vec![vec![1, 1, 1], vec![1, -1, -1], vec![-1, 1, -1], vec![-1, -1, 1]],
            };
            let set = FlagSet::lines(&vecs.iter().map(|v| rv(v)).collect::<Vec<_>>(), None).unwrap();
            let q = crate::flags::random_rational_orthogonal(3, &mut rng);
            let moved = set.transform(&q).unwrap();
            for t in [2, 4] {
                let (a, b) = (is_design(&set, t).unwrap(), is_design(&moved, t).unwrap());
                proptest::prop_assert_eq!(a.strength_verified, b.strength_verified);
                proptest::prop_assert_eq!(a.passes, b.passes);
            }
        }
    }
}
