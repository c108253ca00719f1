//! Exact Fincke–Pohst enumeration of short lattice vectors.
//!
//! With `G = L D Lᵀ` the norm splits as
//! `xᵀGx = Σ_j D_j (x_j − c_j)²` where `c_j = −Σ_{i>j} L_ij x_i`, so
//! coordinates are fixed from the last one down and each level admits an
//! interval of integers around its center. Candidates are stepped outward
//! from `⌊c_j⌋` and every comparison with the bound is exact.
//!
//! The fast path works fraction-free in checked `i128` (see [`IntArith`]);
//! if anything would overflow, the search reruns on `BigRational`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{ldl, RatMatrix};
use crate::rational::{common_denominator, Rat};

/// Per-level arithmetic of the search.
trait Arith: Sync {
    type Center;
    type Norm: Clone + Send + Sync;
    fn n(&self) -> usize;
    fn zero(&self) -> Self::Norm;
    fn center(&self, j: usize, x: &[i64]) -> Option<Self::Center>;
    fn floor(&self, j: usize, c: &Self::Center) -> Option<i64>;
    /// `partial + D_j (xj − c)²` when it stays within the bound; the outer
    /// `None` signals overflow.
    fn extend(
        &self,
        j: usize,
        xj: i64,
        c: &Self::Center,
        partial: &Self::Norm,
    ) -> Option<Option<Self::Norm>>;
}

/// Fraction-free levels. With `d_j` the leading principal minors of an
/// integral Gram matrix, `Ĝ_ij = L_ij d_j` is an integer and the level-`j`
/// term equals `y_j² / (d_{j−1} d_j)` with `y_j = Σ_{i≥j} Ĝ_ij x_i`. Pruning
/// uses `⌊2^K y_j² / (d_{j−1} d_j)⌋`, a lower bound, so nothing admissible is
/// cut; leaves are re-checked against the exact norm afterwards.
struct IntArith {
    n: usize,
    /// Ĝ_ij for i > j
    g: Vec<Vec<i128>>,
    /// d_j
    d: Vec<i128>,
    /// d_{j−1} d_j
    den: Vec<i128>,
    /// ⌊2^K B⌋ for the integral Gram matrix
    bound: i128,
}

const FIXED_BITS: u32 = 32;

impl IntArith {
    fn new(gram: &RatMatrix, l: &RatMatrix, d: &[Rat], bound: &Rat) -> Option<Self> {
        let n = d.len();
        // integral copy c·G, with D and the bound scaled alike; L is unchanged
        let c = Rat::from_integer(common_denominator(gram.iter()));
        let mut minors = Vec::with_capacity(n);
        let mut acc = Rat::from_integer(1.into());
        for dj in d {
            acc = acc * dj * &c;
            if !acc.is_integer() {
                return None;
            }
            minors.push(acc.to_integer().to_i128()?);
        }
        let mut g = vec![vec![0i128; n]; n];
        for j in 0..n {
            for (i, row) in g.iter_mut().enumerate().skip(j + 1) {
                let v = &l[(i, j)] * Rat::from_integer(minors[j].into());
                if !v.is_integer() {
                    return None;
                }
                row[j] = v.to_integer().to_i128()?;
            }
        }
        let den = (0..n)
            .map(|j| if j == 0 { Some(minors[0]) } else { minors[j - 1].checked_mul(minors[j]) })
            .collect::<Option<Vec<_>>>()?;
        let scaled = bound * &c * Rat::from_integer(BigInt::from(1u64) << FIXED_BITS);
        Some(IntArith {
            n,
            g,
            d: minors,
            den,
            bound: scaled.floor().to_integer().to_i128()?,
        })
    }
}

impl Arith for IntArith {
    /// `s_j = Σ_{i>j} Ĝ_ij x_i`, so `c_j = −s_j / d_j`
    type Center = i128;
    type Norm = i128;

    fn n(&self) -> usize {
        self.n
    }
    fn zero(&self) -> i128 {
        0
    }
    fn center(&self, j: usize, x: &[i64]) -> Option<i128> {
        let mut s: i128 = 0;
        for i in j + 1..self.n {
            if x[i] != 0 {
                s = s.checked_add(self.g[i][j].checked_mul(i128::from(x[i]))?)?;
            }
        }
        Some(s)
    }
    fn floor(&self, j: usize, s: &i128) -> Option<i64> {
        i64::try_from(Integer::div_floor(&s.checked_neg()?, &self.d[j])).ok()
    }
    fn extend(&self, j: usize, xj: i64, s: &i128, partial: &i128) -> Option<Option<i128>> {
        let y = i128::from(xj).checked_mul(self.d[j])?.checked_add(*s)?;
        let y2 = y.checked_mul(y)?;
        let den = self.den[j];
        let (q, r) = (y2 / den, y2 % den);
        let term = q
            .checked_mul(1i128 << FIXED_BITS)?
            .checked_add(r.checked_mul(1i128 << FIXED_BITS)? / den)?;
        let total = partial.checked_add(term)?;
        Some((total <= self.bound).then_some(total))
    }
}

struct RatArith {
    n: usize,
    l: RatMatrix,
    d: Vec<Rat>,
    bound: Rat,
}

impl Arith for RatArith {
    type Center = Rat;
    type Norm = Rat;

    fn n(&self) -> usize {
        self.n
    }
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn center(&self, j: usize, x: &[i64]) -> Option<Rat> {
        let mut c = Rat::zero();
        for i in j + 1..self.n {
            if x[i] != 0 {
                c -= &self.l[(i, j)] * Rat::from_integer(BigInt::from(x[i]));
            }
        }
        Some(c)
    }
    fn floor(&self, _j: usize, c: &Rat) -> Option<i64> {
        c.floor().to_integer().to_i64()
    }
    fn extend(&self, j: usize, xj: i64, c: &Rat, partial: &Rat) -> Option<Option<Rat>> {
        let diff = Rat::from_integer(BigInt::from(xj)) - c;
        let q = &self.d[j] * &diff * &diff + partial;
        Some((q <= self.bound).then_some(q))
    }
}

/// Why a search stopped early.
enum Stop {
    Overflow,
    Budget,
}

struct Search<'a, A> {
    arith: &'a A,
    node_cap: u64,
    /// Nodes visited across all parallel branches, flushed in batches.
    shared: &'a AtomicU64,
}

const FLUSH: u64 = 1024;

/// A partial assignment of the top coordinates; `level` is the next one to
/// fix.
struct Prefix<N> {
    level: usize,
    x: Vec<i64>,
    partial: N,
    free_sign: bool,
}

impl<A: Arith> Search<'_, A> {
    fn flush(&self, nodes: &mut u64) -> std::result::Result<(), Stop> {
        let total = self.shared.fetch_add(*nodes, Ordering::Relaxed) + *nodes;
        *nodes = 0;
        if total > self.node_cap {
            return Err(Stop::Budget);
        }
        Ok(())
    }

    /// Calls `emit(xj, q)` for every admissible value of coordinate `j`.
    /// `free_sign` means every higher coordinate is zero; then `x_j ≥ 0`,
    /// which keeps one of `±v`.
    fn level(
        &self,
        j: usize,
        x: &[i64],
        partial: &A::Norm,
        free_sign: bool,
        mut emit: impl FnMut(i64, A::Norm) -> std::result::Result<(), Stop>,
    ) -> std::result::Result<(), Stop> {
        let a = self.arith;
        let c = a.center(j, x).ok_or(Stop::Overflow)?;
        let fc = a.floor(j, &c).ok_or(Stop::Overflow)?;
        // the quadratic grows away from c, so each direction stops at the
        // first value outside the bound
        let mut up = fc.checked_add(1).ok_or(Stop::Overflow)?;
        if free_sign && up < 0 {
            up = 0;
        }
        while let Some(q) = a.extend(j, up, &c, partial).ok_or(Stop::Overflow)? {
            emit(up, q)?;
            up = up.checked_add(1).ok_or(Stop::Overflow)?;
        }
        let mut down = fc;
        while !(free_sign && down < 0) {
            match a.extend(j, down, &c, partial).ok_or(Stop::Overflow)? {
                Some(q) => emit(down, q)?,
                None => break,
            }
            down = down.checked_sub(1).ok_or(Stop::Overflow)?;
        }
        Ok(())
    }

    fn rec(
        &self,
        p: Prefix<A::Norm>,
        nodes: &mut u64,
        out: &mut Vec<Vec<i64>>,
    ) -> std::result::Result<(), Stop> {
        *nodes += 1;
        if *nodes == FLUSH {
            self.flush(nodes)?;
        }
        let j = p.level;
        let mut x = p.x.clone();
        self.level(j, &p.x, &p.partial, p.free_sign, |xj, q| {
            x[j] = xj;
            let free = p.free_sign && xj == 0;
            if j == 0 {
                if !free {
                    out.push(x.clone());
                }
                Ok(())
            } else {
                let child = Prefix {
                    level: j - 1,
                    x: x.clone(),
                    partial: q,
                    free_sign: free,
                };
                self.rec(child, nodes, out)
            }
        })
    }

    /// Expands the top levels serially until there are enough independent
    /// subtrees to share among threads.
    fn prefixes(&self) -> std::result::Result<Vec<Prefix<A::Norm>>, Stop> {
        let n = self.arith.n();
        let mut frontier = vec![Prefix {
            level: n - 1,
            x: vec![0; n],
            partial: self.arith.zero(),
            free_sign: true,
        }];
        let target = 64 * rayon::current_num_threads().max(1);
        while frontier.len() < target && frontier.iter().all(|p| p.level > 0) {
            let mut next = Vec::new();
            for p in frontier {
                let j = p.level;
                self.level(j, &p.x, &p.partial, p.free_sign, |xj, q| {
                    let mut x = p.x.clone();
                    x[j] = xj;
                    next.push(Prefix {
                        level: j - 1,
                        x,
                        partial: q,
                        free_sign: p.free_sign && xj == 0,
                    });
                    Ok(())
                })?;
            }
            frontier = next;
        }
        Ok(frontier)
    }
}

fn run<A: Arith>(arith: &A, node_cap: u64) -> std::result::Result<Vec<Vec<i64>>, Stop> {
    let shared = AtomicU64::new(0);
    let search = Search {
        arith,
        node_cap,
        shared: &shared,
    };
    let root = Prefix {
        level: arith.n() - 1,
        x: vec![0; arith.n()],
        partial: arith.zero(),
        free_sign: true,
    };
    if arith.n() == 1 {
        let mut all = Vec::new();
        search.rec(root, &mut 0, &mut all)?;
        return Ok(all);
    }
    let frontier = search.prefixes()?;
    let parts: Vec<std::result::Result<Vec<Vec<i64>>, Stop>> = frontier
        .into_par_iter()
        .map(|p| {
            let mut out = Vec::new();
            let mut nodes = 0u64;
            search.rec(p, &mut nodes, &mut out)?;
            search.flush(&mut nodes)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    Ok(all)
}

/// All nonzero integer vectors `x` with `xᵀ G x ≤ bound`, one of each pair
/// `±x` (the one whose last nonzero coordinate is positive), sorted by norm
/// and then lexicographically, together with their norms.
pub fn short_vectors(gram: &RatMatrix, bound: &Rat, node_cap: u64) -> Result<Vec<(Vec<i64>, Rat)>> {
    if !bound.is_positive() {
        return Err(Error::OutOfRange("norm bound must be positive".into()));
    }
    let (l, d) = ldl(gram)?;
    let budget = || Error::budget("short-vector enumeration nodes", node_cap);
    let fast = IntArith::new(gram, &l, &d, bound).map(|a| run(&a, node_cap));
    let vectors = match fast {
        Some(Ok(v)) => v,
        Some(Err(Stop::Budget)) => return Err(budget()),
        None | Some(Err(Stop::Overflow)) => {
            let slow = RatArith {
                n: d.len(),
                l,
                d,
                bound: bound.clone(),
            };
            match run(&slow, node_cap) {
                Ok(v) => v,
                Err(Stop::Budget) => return Err(budget()),
                Err(Stop::Overflow) => return Err(Error::Overflow("lattice coordinates")),
            }
        }
    };
    let norms = Norms::new(gram);
    let mut with_norms: Vec<(Vec<i64>, Rat)> = vectors
        .into_par_iter()
        .filter_map(|v| {
            let nv = norms.norm(&v);
            (&nv <= bound).then_some((v, nv))
        })
        .collect();
    with_norms.par_sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(with_norms)
}

/// Norm evaluation on an integer copy of `den·G` when it fits.
struct Norms<'a> {
    gram: &'a RatMatrix,
    scaled: Option<(Vec<Vec<i64>>, BigInt)>,
}

impl<'a> Norms<'a> {
    fn new(gram: &'a RatMatrix) -> Self {
        let den = common_denominator(gram.iter());
        let n = gram.rows();
        let scaled = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (&gram[(i, j)] * Rat::from_integer(den.clone())).to_integer().to_i64())
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()
            .map(|g| (g, den));
        Norms { gram, scaled }
    }

    fn norm(&self, x: &[i64]) -> Rat {
        if let Some((g, den)) = &self.scaled {
            let mut s: Option<i128> = Some(0);
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                let row = g[i].iter().zip(x).try_fold(0i128, |acc, (&gij, &xj)| {
                    acc.checked_add(i128::from(gij).checked_mul(i128::from(xj))?)
                });
                s = s
                    .zip(row)
                    .and_then(|(s, r)| s.checked_add(r.checked_mul(i128::from(xi))?));
            }
            if let Some(s) = s {
                return Rat::new(BigInt::from(s), den.clone());
            }
        }
        norm(self.gram, x)
    }
}

/// `xᵀ G x`, exact.
pub fn norm(gram: &RatMatrix, x: &[i64]) -> Rat {
    inner(gram, x, x)
}

/// `xᵀ G y`, exact.
pub fn inner(gram: &RatMatrix, x: &[i64], y: &[i64]) -> Rat {
    let mut s = Rat::zero();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 {
                s += &gram[(i, j)] * Rat::from_integer(BigInt::from(xi) * BigInt::from(yj));
            }
        }
    }
    s
}
