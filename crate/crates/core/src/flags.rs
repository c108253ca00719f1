//! Flags stored as stacks of exact projectors, plus a floating-point Haar
//! sampler used only for diagnostics.
//!
//! A flag of shape `d = (d_1 > … > d_ℓ)` in an `n`-dimensional space is held
//! as `[P_1, …, P_ℓ]`, where `P_ι` projects onto the `d_ι`-dimensional member.
//! Indices into the chain are 0-based in this API, largest space first.
//!
//! The ambient space may carry a Gram matrix `G` (lattice coordinates). The
//! projectors are then `G`-self-adjoint: `GP` is symmetric. With no metric,
//! `G = I` and the projectors are symmetric.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Projector, RatMatrix};
use crate::rational::Rat;

/// Dimensions `d_1 > … > d_ℓ` of the chain inside an `n`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct FlagShape {
    n: usize,
    d: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    n: usize,
    d: Vec<usize>,
}

impl TryFrom<ShapeRepr> for FlagShape {
    type Error = Error;
    fn try_from(r: ShapeRepr) -> Result<Self> {
        FlagShape::new(r.n, r.d)
    }
}

impl From<FlagShape> for ShapeRepr {
    fn from(s: FlagShape) -> Self {
        ShapeRepr { n: s.n, d: s.d }
    }
}

impl FlagShape {
    pub fn new(n: usize, d: Vec<usize>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Empty("flag shape needs at least one dimension".into()));
        }
        if d.windows(2).any(|w| w[0] <= w[1]) || d.last() == Some(&0) {
            return Err(Error::DimensionMismatch(format!(
                "flag dimensions {d:?} must be strictly decreasing and positive"
            )));
        }
        if d[0] >= n {
            return Err(Error::DimensionMismatch(format!(
                "largest flag dimension {} must be below the ambient dimension {n}",
                d[0]
            )));
        }
        Ok(FlagShape { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.d
    }

    /// ℓ
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// m = d_1
    pub fn m(&self) -> usize {
        self.d[0]
    }

    /// Block sizes `[m_1, …, m_{ℓ+1}]`: `m_1 = d_ℓ`, then the successive gaps
    /// up to `d_1`, and `m_{ℓ+1} = n − d_1`. They sum to `n`.
    pub fn blocks(&self) -> Vec<usize> {
        let l = self.d.len();
        let mut b = vec![self.d[l - 1]];
        for i in (1..l).rev() {
            b.push(self.d[i - 1] - self.d[i]);
        }
        b.push(self.n - self.d[0]);
        b
    }
}

/// A flag as its exact projector stack.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flag {
    shape: FlagShape,
    projectors: Vec<Projector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gram: Option<RatMatrix>,
}

/// Independent columns of `m`, kept greedily from the left.
fn column_basis(m: &RatMatrix) -> RatMatrix {
    let mut kept: Vec<Vec<Rat>> = Vec::new();
    for j in 0..m.cols() {
        let col = m.column(j);
        kept.push(col);
        if RatMatrix::from_columns(&kept).map(|b| b.rank()) != Ok(kept.len()) {
            kept.pop();
        }
    }
    if kept.is_empty() {
        RatMatrix::zeros(m.rows(), 0)
    } else {
        RatMatrix::from_columns(&kept).expect("equal lengths")
    }
}

impl Flag {
    /// Flag from spanning sets (as matrix columns) of its members, in any
    /// order; the shape is read off the spans.
    pub fn from_bases(spans: &[RatMatrix]) -> Result<Self> {
        Self::build(spans, None)
    }

    /// Same as [`Flag::from_bases`] for an ambient space with Gram matrix `gram`.
    pub fn from_bases_in(spans: &[RatMatrix], gram: &RatMatrix) -> Result<Self> {
        if !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Self::build(spans, Some(gram))
    }

    fn build(spans: &[RatMatrix], gram: Option<&RatMatrix>) -> Result<Self> {
        let n = spans
            .first()
            .ok_or_else(|| Error::Empty("flag needs at least one subspace".into()))?
            .rows();
        if spans.iter().any(|s| s.rows() != n) || gram.is_some_and(|g| g.rows() != n) {
            return Err(Error::DimensionMismatch("spanning sets live in different spaces".into()));
        }
        let mut bases: Vec<RatMatrix> = spans.iter().map(column_basis).collect();
        bases.sort_by_key(|b| std::cmp::Reverse(b.cols()));
        let dims: Vec<usize> = bases.iter().map(RatMatrix::cols).collect();
        let shape = FlagShape::new(n, dims)?;
        let projectors = bases
            .iter()
            .map(|b| Projector::onto(b, gram))
            .collect::<Result<Vec<_>>>()?;
        let flag = Flag {
            shape,
            projectors,
            gram: gram.cloned(),
        };
        flag.check_nested()?;
        Ok(flag)
    }

    /// Wraps a projector stack after checking ranks, nesting and adjointness.
    pub fn from_projectors(
        projectors: Vec<Projector>,
        gram: Option<RatMatrix>,
    ) -> Result<Self> {
        let n = projectors
            .first()
            .ok_or_else(|| Error::Empty("flag needs at least one projector".into()))?
            .dim();
        let dims: Vec<usize> = projectors.iter().map(Projector::rank).collect();
        let shape = FlagShape::new(n, dims)?;
        for p in &projectors {
            let m = p.matrix();
            let lowered = match &gram {
                Some(g) => g * m,
                None => m.clone(),
            };
            if m.rows() != n || !lowered.is_symmetric() {
                return Err(Error::OutOfRange("projector is not self-adjoint".into()));
            }
        }
        let flag = Flag {
            shape,
            projectors,
            gram,
        };
        flag.check_nested()?;
        Ok(flag)
    }

    fn check_nested(&self) -> Result<()> {
        for w in self.projectors.windows(2) {
            let (big, small) = (w[0].matrix(), w[1].matrix());
            if &(big * small) != small {
                return Err(Error::NotNested(format!(
                    "a {}-dimensional member is not inside the {}-dimensional one",
                    w[1].rank(),
                    w[0].rank()
                )));
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn projector(&self, iota: usize) -> &RatMatrix {
        self.projectors[iota].matrix()
    }

    pub fn gram(&self) -> Option<&RatMatrix> {
        self.gram.as_ref()
    }

    /// The flag `Q·F`, with projectors `Q P Q⁻¹`. `Q` must preserve the
    /// ambient metric.
    pub fn transform(&self, q: &RatMatrix) -> Result<Flag> {
        let q_inv = orthogonal_inverse(q, self.gram.as_ref())?;
        Ok(self.transform_with_inverse(q, &q_inv))
    }

    /// As [`Flag::transform`] with `Q⁻¹` supplied by the caller (group
    /// elements know their inverses).
    pub fn transform_with_inverse(&self, q: &RatMatrix, q_inv: &RatMatrix) -> Flag {
        let projectors = self
            .projectors
            .iter()
            .map(|p| {
                Projector::from_matrix_unchecked(&(q * p.matrix()) * q_inv)            })
            .collect();
        Flag {
            shape: self.shape.clone(),
            projectors,
            gram: self.gram.clone(),
        }
    }
}

/// `Q⁻¹ = G⁻¹ Qᵀ G`, after checking `Qᵀ G Q = G`.
pub fn orthogonal_inverse(q: &RatMatrix, gram: Option<&RatMatrix>) -> Result<RatMatrix> {
    let n = q.rows();
    if !q.is_square() || gram.is_some_and(|g| g.rows() != n) {
        return Err(Error::DimensionMismatch("transformation size".into()));
    }
    let qt = q.transpose();
    match gram {
        None => {
            if &qt * q != RatMatrix::identity(n) {
                return Err(Error::NotOrthogonal);
            }
            Ok(qt)
        }
        Some(g) => {
            if &(&qt * g) * q != *g {
                return Err(Error::NotOrthogonal);
            }
            Ok(&(&g.inverse()? * &qt) * g)
        }
    }
}

/// tr(P_ι(F) · P_ι'(G)): the sum of squared cosines of the principal angles
/// between the two members.
pub fn trace_pair(f: &Flag, g: &Flag, iota: usize, iota2: usize) -> Result<Rat> {
    if f.n() != g.n() || f.gram != g.gram {
        return Err(Error::DimensionMismatch("flags live in different spaces".into()));
    }
    let a = f
        .projectors
        .get(iota)
        .ok_or_else(|| Error::OutOfRange(format!("chain index {iota}")))?;
    let b = g
        .projectors
        .get(iota2)
        .ok_or_else(|| Error::OutOfRange(format!("chain index {iota2}")))?;
    Ok(a.matrix().trace_product(b.matrix()))
}

/// A flag as an `n × d_1` float matrix with orthonormal columns whose first
/// `d_ι` columns span the ι-th member. Diagnostic only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatFlag {
    shape: FlagShape,
    #[serde(rename = "X")]
    x: Vec<Vec<f64>>,
    tolerance: f64,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram–Schmidt, run twice for full working precision. Columns
/// whose residual falls below `drop` are discarded.
fn orthonormalize(cols: Vec<Vec<f64>>, drop: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in cols {
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > drop {
            v.iter_mut().for_each(|x| *x /= norm);
            out.push(v);
        }
    }
    out
}

impl FloatFlag {
    /// Column `j` of X (0-based).
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.x.iter().map(|row| row[j]).collect()
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    /// Entry x_{i,j}, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.x[i][j]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Float projector onto the ι-th member, row-major `n × n`.
    pub fn projector(&self, iota: usize) -> Vec<f64> {
        let n = self.shape.n;
        let d = self.shape.d[iota];
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                p[i * n + k] = (0..d).map(|j| self.x[i][j] * self.x[k][j]).sum();
            }
        }
        p
    }

    /// max |XᵀX − I|
    pub fn orthonormality_defect(&self) -> f64 {
        let m = self.shape.m();
        let mut worst: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                let v = dot(&self.column(a), &self.column(b)) - if a == b { 1.0 } else { 0.0 };
                worst = worst.max(v.abs());
            }
        }
        worst
    }

    /// Orthonormal frame of an exact flag in the standard metric.
    pub fn from_flag(flag: &Flag) -> Result<Self> {
        if flag.gram.is_some() {
            return Err(Error::Unsupported("float frames of flags with a metric".into()));
        }
        let n = flag.n();
        let mut cols = Vec::new();
        for p in flag.projectors.iter().rev() {
            let m = p.matrix().to_f64();
            cols.extend((0..n).map(|j| (0..n).map(|i| m[i * n + j]).collect::<Vec<_>>()));
        }
        let frame = orthonormalize(cols, 1e-9);
        debug_assert_eq!(frame.len(), flag.shape.m());
        Ok(Self::from_columns(flag.shape.clone(), frame))
    }

    fn from_columns(shape: FlagShape, cols: Vec<Vec<f64>>) -> Self {
        let n = shape.n;
        let x = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        FloatFlag {
            shape,
            x,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Haar-random flag from a seeded generator: orthonormalized standard
/// Gaussian columns. The same seed always gives the same flag.
pub fn haar_sample(shape: &FlagShape, seed: u64) -> FloatFlag {
    haar_sample_with(shape, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Haar-random flag drawn from `rng`.
pub fn haar_sample_with<R: rand::Rng + ?Sized>(shape: &FlagShape, rng: &mut R) -> FloatFlag {
    let n = shape.n;
    let cols: Vec<Vec<f64>> = (0..shape.m())
        .map(|_| (0..n).map(|_| StandardNormal.sample(rng)).collect())
        .collect();
    let frame = orthonormalize(cols, 0.0);
    FloatFlag::from_columns(shape.clone(), frame)
}

/// Float trace of the product of two float projectors.
pub fn float_trace_pair(f: &FloatFlag, g: &FloatFlag, iota: usize, iota2: usize) -> f64 {
    let a = f.projector(iota);
    let b = g.projector(iota2);
    let n = f.shape.n;
    (0..n)
        .map(|i| (0..n).map(|k| a[i * n + k] * b[k * n + i]).sum::<f64>())
        .sum()
}

/// Random exact orthogonal rational matrix: a product of reflections in
/// random integer vectors (and a random coordinate permutation), so that the
/// entries are genuinely rational.
pub fn random_rational_orthogonal<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> RatMatrix {
    let mut q = RatMatrix::identity(n);
    for _ in 0..3 {
        let v: Vec<Rat> = loop {
            let v: Vec<Rat> = (0..n)
                .map(|_| Rat::from_integer(rng.gen_range(-3i64..=3).into()))
                .collect();
            if v.iter().any(|x| !x.is_zero()) {
                break v;
            }
        };
        q = &reflection(&v) * &q;
    }
    q
}

/// Random exact flag of the given shape: the members are spanned by leading
/// columns of a random small-integer matrix of full column rank. Works in
/// any metric.
pub fn random_integer_flag<R: rand::Rng + ?Sized>(
    shape: &FlagShape,
    gram: Option<&RatMatrix>,
    rng: &mut R,
) -> Result<Flag> {
    let n = shape.n();
    let top = shape.dims().iter().copied().max().unwrap_or(0);
    let basis = loop {
        let m = RatMatrix::from_fn(n, top, |_, _| Rat::from_integer(rng.gen_range(-3i64..=3).into()));
        if m.rank() == top {
            break m;
        }
    };
    let spans: Vec<RatMatrix> = shape
        .dims()
        .iter()
        .map(|&d| RatMatrix::from_fn(n, d, |i, j| basis[(i, j)].clone()))
        .collect();
    match gram {
        Some(g) => Flag::from_bases_in(&spans, g),
        None => Flag::from_bases(&spans),
    }
}

/// Householder reflection `I − 2vvᵀ/(vᵀv)`.
pub fn reflection(v: &[Rat]) -> RatMatrix {
    let n = v.len();
    let vv: Rat = v.iter().map(|x| x * x).fold(Rat::zero(), |a, b| a + b);
    let two = Rat::from_integer(2.into());
    RatMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { Rat::from_integer(1.into()) } else { Rat::zero() };
        delta - &two * &v[i] * &v[j] / &vv
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn cols(c: &[&[i64]]) -> RatMatrix {
        let v: Vec<Vec<Rat>> = c.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
        RatMatrix::from_columns(&v).unwrap()
    }

    #[test]
    fn shape_blocks() {
        let s = FlagShape::new(5, vec![3, 1]).unwrap();
        assert_eq!(s.blocks(), vec![1, 2, 2]);
        assert_eq!(s.blocks().iter().sum::<usize>(), 5);
        assert!(FlagShape::new(3, vec![1, 2]).is_err());
        assert!(FlagShape::new(2, vec![2]).is_err());
    }

    #[test]
    fn coordinate_flag() {
        let f = Flag::from_bases(&[cols(&[&[1, 0, 0], &[0, 1, 0]]), cols(&[&[1, 0, 0]])]).unwrap();
        assert_eq!(f.shape().dims(), &[2, 1]);
        assert_eq!(f.projector(0), &RatMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]));
        assert_eq!(f.projector(1), &RatMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]));
        let g = Flag::from_bases(&[cols(&[&[1, 1, 0], &[1, -1, 0]]), cols(&[&[2, 0, 0]])]).unwrap();
        assert_eq!(f, g);
        let bad = Flag::from_bases(&[cols(&[&[1, 0, 0], &[0, 1, 0]]), cols(&[&[0, 0, 1]])]);
        assert!(matches!(bad, Err(Error::NotNested(_))));
    }

    #[test]
    fn trace_pair_examples() {
        let e1 = Flag::from_bases(&[cols(&[&[1, 0]])]).unwrap();
        let e2 = Flag::from_bases(&[cols(&[&[0, 1]])]).unwrap();
        let diag = Flag::from_bases(&[cols(&[&[1, 1]])]).unwrap();
        assert_eq!(trace_pair(&e1, &e1, 0, 0).unwrap(), int(1));
        assert_eq!(trace_pair(&e1, &e2, 0, 0).unwrap(), int(0));
        assert_eq!(trace_pair(&e1, &diag, 0, 0).unwrap(), rat(1, 2));
    }

    #[test]
    fn haar_sampler_contract() {
        let shape = FlagShape::new(5, vec![3, 1]).unwrap();
        let a = haar_sample(&shape, 7);
        assert_eq!(a, haar_sample(&shape, 7));
        assert!(a.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn haar_mean_projector() {
        let shape = FlagShape::new(3, vec![1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 100_000;
        let mut sum = [0.0; 9];
        let mut sq = [0.0; 9];
        for _ in 0..samples {
            let p = haar_sample_with(&shape, &mut rng).projector(0);
            for k in 0..9 {
                sum[k] += p[k];
                sq[k] += p[k] * p[k];
            }
        }
        for k in 0..9 {
            let mean = sum[k] / samples as f64;
            let se = ((sq[k] / samples as f64 - mean * mean) / samples as f64).sqrt();
            let expected = if k % 4 == 0 { 1.0 / 3.0 } else { 0.0 };
            assert!((mean - expected).abs() < 3.0 * se + 1e-12, "entry {k}: {mean}");
        }
    }

    #[test]
    fn float_frame_of_exact_flag() {
        let f = Flag::from_bases(&[cols(&[&[1, 2, 0, 1], &[0, 1, 1, 1]]), cols(&[&[1, 3, 1, 2]])]).unwrap();
        let x = FloatFlag::from_flag(&f).unwrap();
        assert!(x.orthonormality_defect() < 1e-12);
        for iota in 0..2 {
            let exact = f.projector(iota).to_f64();
            let approx = x.projector(iota);
            assert!(exact.iter().zip(&approx).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    #[test]
    fn metric_flags() {
        let g = RatMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        let f = Flag::from_bases_in(&[cols(&[&[1, 0]])], &g).unwrap();
        let h = Flag::from_bases_in(&[cols(&[&[0, 1]])], &g).unwrap();
        // cos² of the 60° angle between two A2 roots
        assert_eq!(trace_pair(&f, &h, 0, 0).unwrap(), rat(1, 4));
        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(f.transform(&swap).unwrap(), h);
        let shear = RatMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(f.transform(&shear), Err(Error::NotOrthogonal));
    }

    fn arb_flag(n: usize) -> impl Strategy<Value = Flag> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, n), 3).prop_filter_map(
            "independent",
            move |vs| {
                let rows: Vec<&[i64]> = vs.iter().map(Vec::as_slice).collect();
                let all = cols(&rows);
                if all.rank() < 3 {
                    return None;
                }
                Flag::from_bases(&[all, cols(&rows[..1])]).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn projectors_are_idempotent_and_nested(f in arb_flag(4)) {
            for p in f.projectors() {
                let m = p.matrix();
                prop_assert_eq!(&(m * m), m);
                prop_assert!(m.is_symmetric());
                prop_assert_eq!(m.trace(), int(p.rank() as i64));
            }
            prop_assert_eq!(&(f.projector(0) * f.projector(1)), f.projector(1));
        }

        #[test]
        fn trace_pair_bounds_and_invariance(f in arb_flag(4), g in arb_flag(4), seed in any::<u64>()) {
            let q = random_rational_orthogonal(4, &mut ChaCha8Rng::seed_from_u64(seed));
            let (qf, qg) = (f.transform(&q).unwrap(), g.transform(&q).unwrap());
            for i in 0..2 {
                for j in 0..2 {
                    let t = trace_pair(&f, &g, i, j).unwrap();
                    prop_assert!(t >= int(0));
                    let cap = f.shape().dims()[i].min(g.shape().dims()[j]);
                    prop_assert!(t <= int(cap as i64));
                    prop_assert_eq!(&t, &trace_pair(&g, &f, j, i).unwrap());
                    prop_assert_eq!(&t, &trace_pair(&qf, &qg, i, j).unwrap());
                }
            }
            // the bound is attained by containment
            prop_assert_eq!(trace_pair(&f, &f, 0, 1).unwrap(), int(1));
        }
    }
}
