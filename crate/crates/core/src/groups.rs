//! Finite groups of rational orthogonal matrices: closure, flag orbits,
//! conjugacy-class data and the invariant-dimension design criterion.
//!
//! The criterion compares, for each `k ≤ t/2`, the dimension of the
//! `G`-invariants in `Sym^k(Sym² R^n)` with the `O(n)`-invariant dimension,
//! which is the number of partitions of `k` into at most `n` parts. When all
//! agree, every flag orbit of `G` is a t-design.
//!
//! Elements are stored as integer matrices over one positive denominator, so
//! products and hashing are cheap and exact.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::Partition;
use crate::design::FlagSet;
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::linalg::RatMatrix;
use crate::rational::{self, Rat};

/// An `n × n` rational matrix `num / den` in lowest terms, `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    den: i64,
    num: Vec<i64>,
}

impl Element {
    fn identity(n: usize) -> Self {
        let mut num = vec![0; n * n];
        for i in 0..n {
            num[i * n + i] = 1;
        }
        Element { den: 1, num }
    }

    fn normalized(num: Vec<i64>, den: i64) -> Self {
        let g = num.iter().fold(den, |g, &x| g.gcd(&x));
        if g == 1 {
            Element { den, num }
        } else {
            Element {
                den: den / g,
                num: num.into_iter().map(|x| x / g).collect(),
            }
        }
    }

    fn from_rat(m: &RatMatrix) -> Result<Self> {
        let den = rational::common_denominator(m.iter())
            .to_i64()
            .ok_or(Error::Overflow("group element denominator"))?;
        let num = m
            .iter()
            .map(|x| {
                (x * Rat::from_integer(den.into()))
                    .to_integer()
                    .to_i64()
                    .ok_or(Error::Overflow("group element entry"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Element::normalized(num, den))
    }

    pub fn to_rat(&self) -> RatMatrix {
        let n = self.dim();
        RatMatrix::from_fn(n, n, |i, j| rational::rat(self.num[i * n + j], self.den))
    }

    pub fn dim(&self) -> usize {
        (self.num.len() as f64).sqrt().round() as usize
    }

    fn mul(&self, other: &Element) -> Result<Element> {
        let n = self.dim();
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = i128::from(self.num[i * n + k]);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = i128::from(out[i * n + j]) + a * i128::from(other.num[k * n + j]);
                    out[i * n + j] = i64::try_from(v).map_err(|_| Error::Overflow("group product"))?;
                }
            }
        }
        let den = self
            .den
            .checked_mul(other.den)
            .ok_or(Error::Overflow("group product denominator"))?;
        Ok(Element::normalized(out, den))
    }

    /// Exact trace.
    pub fn trace(&self) -> Rat {
        let n = self.dim();
        let t: i64 = (0..n).map(|i| self.num[i * n + i]).sum();
        rational::rat(t, self.den)
    }

    /// `[tr g, tr g², …, tr g^k]`.
    pub fn power_traces(&self, k: usize) -> Result<Vec<Rat>> {
        let mut p = self.clone();
        let mut out = vec![p.trace()];
        for _ in 1..k {
            p = p.mul(self)?;
            out.push(p.trace());
        }
        Ok(out)
    }
}

/// Group-generator file: `{n, generators, gram?}` plus free-form metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorFile {
    #[serde(default)]
    pub name: String,
    pub n: usize,
    pub generators: Vec<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// A finite group generated by metric-preserving rational matrices.
#[derive(Clone, Debug)]
pub struct MatGroup {
    n: usize,
    gram: Option<RatMatrix>,
    generators: Vec<Element>,
    elements: Vec<Element>,
}

fn check_orthogonal(m: &RatMatrix, gram: Option<&RatMatrix>) -> Result<()> {
    crate::flags::orthogonal_inverse(m, gram).map(|_| ())
}

impl MatGroup {
    /// Breadth-first closure of the generators. Fails when the group has more
    /// than `max_order` elements.
    pub fn close(
        generators: &[RatMatrix],
        gram: Option<&RatMatrix>,
        max_order: u64,
    ) -> Result<Self> {
        let n = generators
            .first()
            .map(RatMatrix::rows)
            .or_else(|| gram.map(RatMatrix::rows))
            .ok_or_else(|| Error::Empty("no generators and no dimension".into()))?;
        for g in generators {
            if g.rows() != n {
                return Err(Error::DimensionMismatch("generators of different sizes".into()));
            }
            check_orthogonal(g, gram)?;
        }
        let gens: Vec<Element> = generators
            .iter()
            .map(Element::from_rat)
            .collect::<Result<_>>()?;
        let id = Element::identity(n);
        let mut seen: HashMap<Element, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = x.mul(s)?;
                if !seen.contains_key(&y) {
                    if seen.len() as u64 >= max_order {
                        return Err(Error::budget("group order", max_order));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Element> = seen.into_keys().collect();
        elements.sort_unstable();
        // the standard metric is stored as no metric, matching plain flags
        let gram = gram.filter(|g| **g != RatMatrix::identity(n)).cloned();
        Ok(MatGroup {
            n,
            gram,
            generators: gens,
            elements,
        })
    }

    pub fn from_file(file: &GeneratorFile, max_order: u64) -> Result<Self> {
        let g = Self::close(&file.generators, file.gram.as_ref(), max_order)?;
        if g.n != file.n {
            return Err(Error::DimensionMismatch(format!(
                "file declares n = {} but generators are {}x{}",
                file.n, g.n, g.n
            )));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn gram(&self) -> Option<&RatMatrix> {
        self.gram.as_ref()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Distinct flags `g·F` for `g ∈ G`, uniformly weighted, in the order of
    /// first appearance along the element list.
    pub fn orbit(&self, flag: &Flag) -> Result<FlagSet> {
        if flag.n() != self.n || flag.gram() != self.gram.as_ref() {
            return Err(Error::DimensionMismatch("flag and group live in different spaces".into()));
        }
        let ginv = match &self.gram {
            Some(g) => Some(g.inverse()?),
            None => None,
        };
        let images: Vec<Flag> = self
            .elements
            .par_iter()
            .map(|e| {
                let q = e.to_rat();
                let qt = q.transpose();
                let q_inv = match (&self.gram, &ginv) {
                    (Some(g), Some(gi)) => &(gi * &qt) * g,
                    _ => qt,
                };
                flag.transform_with_inverse(&q, &q_inv)
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        let distinct: Vec<Flag> = images
            .into_iter()
            .filter(|f| seen.insert(f.clone()))
            .collect();
        FlagSet::uniform(distinct)
    }

    /// Conjugacy classes with their power traces up to `g⁶`, computed by
    /// closing each element under conjugation by the generators.
    pub fn class_data(&self) -> Result<ClassData> {
        let index: HashMap<&Element, usize> =
            self.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let inverses: Vec<Element> = self
            .generators
            .iter()
            .map(|s| {
                let q = s.to_rat();
                let inv = crate::flags::orthogonal_inverse(&q, self.gram.as_ref())?;
                Element::from_rat(&inv)
            })
            .collect::<Result<_>>()?;
        let mut class_of = vec![usize::MAX; self.elements.len()];
        let mut classes = Vec::new();
        for start in 0..self.elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut size = 1u64;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for (s, s_inv) in self.generators.iter().zip(&inverses) {
                    let c = s.mul(&self.elements[i])?.mul(s_inv)?;
                    let j = *index.get(&c).ok_or(Error::Inconsistent)?;
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        size += 1;
                        stack.push(j);
                    }
                }
            }
            classes.push(ClassInfo {
                size,
                power_traces: self.elements[start].power_traces(6)?,
            });
        }
        Ok(ClassData {
            order: self.elements.len() as u64,
            classes,
        })
    }

    /// dim of the `G`-invariants in `Sym^k(Sym² R^n)`, summed element-wise.
    pub fn sym_sym_invariant_dim(&self, k: usize) -> Result<u64> {
        if !(1..=3).contains(&k) {
            return Err(Error::Unsupported(format!("invariant dimension at degree k = {k}")));
        }
        let total = self
            .elements
            .par_iter()
            .map(|e| e.power_traces(2 * k).map(|t| sym_sym_character(&t, k)))
            .try_reduce(Rat::zero, |a, b| Ok(a + b))?;
        integral_average(total, self.elements.len() as u64)
    }
}

fn integral_average(total: Rat, order: u64) -> Result<u64> {
    let avg = total / rational::int(order as i64);
    if !avg.is_integer() || avg < Rat::zero() {
        return Err(Error::Inconsistent);
    }
    avg.to_integer().to_u64().ok_or(Error::Overflow("invariant dimension"))
}

/// χ of `Sym^k(Sym² R^n)` at `g` from `traces[j-1] = tr(g^j)`, `j ≤ 2k`.
///
/// `p_j = (tr(g^j)² + tr(g^{2j}))/2` are the power sums of the eigenvalues on
/// `Sym²`, and `h_k = (1/k) Σ_{j=1}^k p_j h_{k−j}`.
pub fn sym_sym_character(traces: &[Rat], k: usize) -> Rat {
    let p: Vec<Rat> = (1..=k)
        .map(|j| (&traces[j - 1] * &traces[j - 1] + &traces[2 * j - 1]) / rational::int(2))
        .collect();
    let mut h = vec![rational::one()];
    for m in 1..=k {
        let s = (1..=m).fold(Rat::zero(), |acc, j| acc + &p[j - 1] * &h[m - j]);
        h.push(s / rational::int(m as i64));
    }
    h.swap_remove(k)
}

/// One conjugacy class: its size and `[tr g, …, tr g⁶]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub size: u64,
    #[serde(with = "rational::serde_rat_vec")]
    pub power_traces: Vec<Rat>,
}

/// Class-data file `{order, classes: [{size, power_traces}]}`; lets the
/// criterion run on groups too large to enumerate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub order: u64,
    pub classes: Vec<ClassInfo>,
}

impl ClassData {
    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.classes.iter().map(|c| c.size).sum();
        if total != self.order {
            return Err(Error::Parse(format!(
                "class sizes sum to {total}, order is {}",
                self.order
            )));
        }
        if self.classes.iter().any(|c| c.power_traces.len() < 6) {
            return Err(Error::Parse("each class needs traces of g^1..g^6".into()));
        }
        Ok(())
    }

    /// Ambient dimension, read from the identity class.
    pub fn n(&self) -> Result<usize> {
        self.classes
            .iter()
            .find(|c| c.size == 1 && c.power_traces.iter().all(|t| *t == c.power_traces[0]))
            .and_then(|c| c.power_traces[0].to_integer().to_usize())
            .ok_or_else(|| Error::Parse("no identity class".into()))
    }

    pub fn sym_sym_invariant_dim(&self, k: usize) -> Result<u64> {
        if !(1..=3).contains(&k) {
            return Err(Error::Unsupported(format!("invariant dimension at degree k = {k}")));
        }
        self.validate()?;
        let total = self.classes.iter().fold(Rat::zero(), |acc, c| {
            acc + sym_sym_character(&c.power_traces, k) * rational::int(c.size as i64)
        });
        integral_average(total, self.order)
    }
}

/// dim of the `O(n)`-invariants in `Sym^k(Sym² R^n)`: partitions of `k` into
/// at most `n` parts.
pub fn reference_invariant_dim(n: usize, k: usize) -> u64 {
    Partition::all_of(k as u32, n).len() as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub k: usize,
    pub invariant_dim: u64,
    pub reference_dim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDesignReport {
    pub strength: u32,
    pub degrees: Vec<DegreeComparison>,
    /// Every flag orbit of every shape is a `strength`-design.
    pub verdict: bool,
}

/// The orbit-design criterion for `t ∈ {2, 4, 6}` from any source of
/// invariant dimensions.
pub fn orbit_design_strength_with(
    n: usize,
    t: u32,
    mut inv_dim: impl FnMut(usize) -> Result<u64>,
) -> Result<OrbitDesignReport> {
    if !matches!(t, 2 | 4 | 6) {
        return Err(Error::Unsupported(format!("orbit design strength {t}")));
    }
    let degrees = (1..=(t / 2) as usize)
        .map(|k| {
            Ok(DegreeComparison {
                k,
                invariant_dim: inv_dim(k)?,
                reference_dim: reference_invariant_dim(n, k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = degrees.iter().all(|d| d.invariant_dim == d.reference_dim);
    Ok(OrbitDesignReport {
        strength: t,
        degrees,
        verdict,
    })
}

pub fn orbit_design_strength(g: &MatGroup, t: u32) -> Result<OrbitDesignReport> {
    orbit_design_strength_with(g.n(), t, |k| g.sym_sym_invariant_dim(k))
}

pub fn orbit_design_strength_from_classes(c: &ClassData, t: u32) -> Result<OrbitDesignReport> {
    let n = c.n()?;
    orbit_design_strength_with(n, t, |k| c.sym_sym_invariant_dim(k))
}

/// Haar-random orthogonal matrix (row-major): Gram–Schmidt on Gaussian
/// columns, which is the QR construction with positive diagonal.
pub fn haar_orthogonal<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let c: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let mut m = vec![0.0; n * n];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            m[i * n + j] = c[i];
        }
    }
    m
}

/// Monte Carlo estimate (mean, standard error) of `E[χ_k(g)]` over Haar
/// `O(n)`, which equals the reference invariant dimension.
pub fn haar_invariant_dim_estimate(n: usize, k: usize, samples: usize, seed: u64) -> (f64, f64) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut vals = Vec::with_capacity(samples);
    for _ in 0..samples {
        let g = haar_orthogonal(n, &mut rng);
        let mut p = g.clone();
        let mut tr = vec![(0..n).map(|i| p[i * n + i]).sum::<f64>()];
        for _ in 1..2 * k {
            let mut next = vec![0.0; n * n];
            for i in 0..n {
                for l in 0..n {
                    let a = p[i * n + l];
                    for j in 0..n {
                        next[i * n + j] += a * g[l * n + j];
                    }
                }
            }
            p = next;
            tr.push((0..n).map(|i| p[i * n + i]).sum());
        }
        let ps: Vec<f64> = (1..=k).map(|j| (tr[j - 1] * tr[j - 1] + tr[2 * j - 1]) / 2.0).collect();
        let mut h = vec![1.0];
        for m in 1..=k {
            h.push((1..=m).map(|j| ps[j - 1] * h[m - j]).sum::<f64>() / m as f64);
        }
        vals.push(h[k]);
    }
    let mean = vals.iter().sum::<f64>() / samples as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
    (mean, (var / samples as f64).sqrt())
}
