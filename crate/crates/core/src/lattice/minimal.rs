//! Minimal flags: chains of primitive sublattices with prescribed ranks
//! minimizing the product of their determinants.
//!
//! A greedy chain built from short independent vectors gives an incumbent
//! `U`. For each rank `r` the smallest determinant `δ_r` is found first;
//! then any member of rank `r` in an optimal chain satisfies
//! `det^{m_r} ≤ U / Π_{r'≠r} δ_{r'}^{m_{r'}}`, which bounds the candidate
//! lists. Chains are assembled from the largest rank down with
//! branch-and-bound against the running minimum.

use std::sync::Mutex;

use num_traits::FromPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::short_vectors;
use super::sublattice::{sublattices_upto, Echelon, Sublattice};
use super::{GammaData, Lattice, LatticeFlag, Weight};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::rational::{self, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct MinimalFlags {
    /// All minimizing chains, sorted.
    pub flags: Vec<LatticeFlag>,
    pub gamma: GammaData,
}

impl MinimalFlags {
    /// `s_λ`, the number of minimal flags.
    pub fn count(&self) -> usize {
        self.flags.len()
    }
}

/// Short independent vectors, greedily in order of norm, until `k` are found.
fn greedy_independent(lattice: &Lattice, k: usize, cfg: &Config) -> Result<Vec<Vec<i64>>> {
    let g = lattice.gram();
    let n = lattice.n();
    let diag: Vec<Rat> = (0..n).map(|i| g[(i, i)].clone()).collect();
    let max_diag = diag.iter().max().expect("n > 0").clone();
    let mut bound = diag.iter().min().expect("n > 0").clone();
    loop {
        let mut ech = Echelon::default();
        let mut picked = Vec::new();
        for (v, _) in short_vectors(g, &bound, cfg.enumeration_node_cap)? {
            if ech.insert(&v)? {
                picked.push(v);
                if picked.len() == k {
                    return Ok(picked);
                }
            }
        }
        // the unit vectors lie within the largest diagonal entry
        bound = (&bound * rational::int(2)).min(max_diag.clone());
    }
}

/// Smallest rational `x` of the form found by upward search with `x^m ≥ q`.
fn root_upper(q: &Rat, m: u32) -> Rat {
    if m == 1 {
        return q.clone();
    }
    let f = rational::to_f64(q).powf(1.0 / f64::from(m));
    let mut x = Rat::from_f64(f).unwrap_or_else(|| q.clone() + rational::one());
    let step = rational::rat(1001, 1000);
    while &rational::pow(&x, m) < q {
        x = &x * &step;
    }
    x
}

struct Chains<'a> {
    /// Candidates per distinct rank, largest rank first, sorted by det.
    levels: &'a [Vec<Sublattice>],
    mult: &'a [u32],
    /// `Π_{j ≥ i} δ_j^{m_j}`, with a trailing 1.
    tail_floor: &'a [Rat],
    best: &'a Mutex<Rat>,
    nodes: &'a std::sync::atomic::AtomicU64,
    cap: u64,
}

impl Chains<'_> {
    fn rec(
        &self,
        level: usize,
        chain: &mut Vec<Sublattice>,
        product: &Rat,
        out: &mut Vec<(Rat, Vec<Sublattice>)>,
    ) -> Result<()> {
        use std::sync::atomic::Ordering;
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            return Err(Error::budget("minimal flag search nodes", self.cap));
        }
        if level == self.levels.len() {
            let mut best = self.best.lock().expect("poisoned");
            if product <= &*best {
                *best = product.clone();
                out.push((product.clone(), chain.clone()));
            }
            return Ok(());
        }
        for cand in &self.levels[level] {
            let p = product * rational::pow(cand.det(), self.mult[level]);
            let floor = &p * &self.tail_floor[level + 1];
            if floor > *self.best.lock().expect("poisoned") {
                break;
            }
            if let Some(parent) = chain.last() {
                if !parent.contains(cand) {
                    continue;
                }
            }
            chain.push(cand.clone());
            self.rec(level + 1, chain, &p, out)?;
            chain.pop();
        }
        Ok(())
    }
}

/// The minimal flags of `lattice` for `weight` and the exact Hermite
/// invariant they realize.
pub fn minimal_flags(lattice: &Lattice, weight: &Weight, cfg: &Config) -> Result<MinimalFlags> {
    minimal_flags_with_slack(lattice, weight, cfg, &rational::one())
}

/// As [`minimal_flags`], with the initial incumbent multiplied by
/// `slack ≥ 1`. A larger slack widens every candidate list; the result must
/// not change, which makes this a completeness check.
pub fn minimal_flags_with_slack(
    lattice: &Lattice,
    weight: &Weight,
    cfg: &Config,
    slack: &Rat,
) -> Result<MinimalFlags> {
    if slack < &rational::one() {
        return Err(Error::OutOfRange("slack must be at least 1".into()));
    }
    let n = lattice.n();
    if weight.ranks()[0] >= n {
        return Err(Error::OutOfRange(format!("rank {} not below {n}", weight.ranks()[0])));
    }
    let g = lattice.gram();
    let ranks = weight.rank_multiplicities();
    let mult: Vec<u32> = ranks.iter().map(|&(_, m)| m).collect();

    let vs = greedy_independent(lattice, ranks[0].0, cfg)?;
    let greedy: Vec<Sublattice> = ranks
        .iter()
        .map(|&(r, _)| Sublattice::saturation_of(&vs[..r], g))
        .collect::<Result<_>>()?;
    let incumbent: Rat = greedy
        .iter()
        .zip(&mult)
        .map(|(s, &m)| rational::pow(s.det(), m))
        .product::<Rat>()
        * slack;

    let delta: Vec<Rat> = if ranks.len() == 1 {
        vec![greedy[0].det().clone()]
    } else {
        ranks
            .iter()
            .zip(&greedy)
            .map(|(&(r, _), s)| {
                let all = sublattices_upto(g, r, s.det(), cfg)?;
                Ok(all[0].det().clone())
            })
            .collect::<Result<_>>()?
    };
    let mut levels = Vec::with_capacity(ranks.len());
    for (i, &(r, m)) in ranks.iter().enumerate() {
        let others: Rat = (0..ranks.len())
            .filter(|&j| j != i)
            .map(|j| rational::pow(&delta[j], mult[j]))
            .product();
        let q = &incumbent / others;
        let mut list = sublattices_upto(g, r, &root_upper(&q, m), cfg)?;
        list.retain(|s| rational::pow(s.det(), m) <= q);
        levels.push(list);
    }
    let mut tail_floor = vec![rational::one(); ranks.len() + 1];
    for i in (0..ranks.len()).rev() {
        tail_floor[i] = &tail_floor[i + 1] * rational::pow(&delta[i], mult[i]);
    }

    let best = Mutex::new(incumbent);
    let nodes = std::sync::atomic::AtomicU64::new(0);
    let search = Chains {
        levels: &levels,
        mult: &mult,
        tail_floor: &tail_floor,
        best: &best,
        nodes: &nodes,
        cap: cfg.sublattice_node_cap,
    };
    let parts: Vec<Result<Vec<(Rat, Vec<Sublattice>)>>> = levels[0]
        .par_iter()
        .map(|top| {
            let mut out = Vec::new();
            let p = rational::pow(top.det(), mult[0]);
            if &p * &tail_floor[1] > *search.best.lock().expect("poisoned") {
                return Ok(out);
            }
            search.rec(1, &mut vec![top.clone()], &p, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut found = Vec::new();
    for part in parts {
        found.extend(part?);
    }
    let minimum = found
        .iter()
        .map(|(p, _)| p.clone())
        .min()
        .ok_or_else(|| Error::Empty("no chain within the incumbent bound".into()))?;
    let mut flags: Vec<LatticeFlag> = found
        .into_iter()
        .filter(|(p, _)| p == &minimum)
        .map(|(_, chain)| LatticeFlag::new(chain, mult.clone()))
        .collect();
    flags.sort();
    flags.dedup();
    Ok(MinimalFlags {
        flags,
        gamma: GammaData {
            product: minimum,
            det: lattice.det().clone(),
            exponent: rational::rat(i64::from(weight.size()), n as i64),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Partition;
    use crate::linalg::RatMatrix;
    use crate::rational::{int, rat};

    fn weight(parts: &[u32], n: usize) -> Weight {
        Weight::new(Partition::new(parts.to_vec()).unwrap(), n).unwrap()
    }

    fn lattice(rows: &[&[i64]]) -> Lattice {
        Lattice::new("test", RatMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn z2_and_a2() {
        let cfg = Config::default();
        let z2 = lattice(&[&[1, 0], &[0, 1]]);
        let r = minimal_flags(&z2, &weight(&[1], 2), &cfg).unwrap();
        assert_eq!(r.count(), 2);
        assert_eq!(r.gamma.product, int(1));
        let a2 = lattice(&[&[2, 1], &[1, 2]]);
        let r = minimal_flags(&a2, &weight(&[1], 2), &cfg).unwrap();
        assert_eq!(r.count(), 3);
        assert_eq!(
            r.gamma,
            GammaData {
                product: int(2),
                det: int(3),
                exponent: rat(1, 2)
            }
        );
    }

    #[test]
    fn repeated_rank_squares_the_determinant() {
        let a2 = lattice(&[&[2, 1], &[1, 2]]);
        let r = minimal_flags(&a2, &weight(&[2], 2), &Config::default()).unwrap();
        assert_eq!(r.count(), 3);
        assert_eq!(r.gamma.product, int(4));
        assert_eq!(r.flags[0].multiplicities(), &[2]);
    }

    #[test]
    fn two_rank_chain_in_a3() {
        // A3: planes of determinant 3 (A2 sublattices), each holding 3 roots
        let a3 = lattice(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let cfg = Config::default();
        let r = minimal_flags(&a3, &weight(&[2, 1], 3), &cfg).unwrap();
        assert_eq!(r.gamma.product, int(6));
        // A3 has 6 root pairs and 4 root A2 planes; each plane contains 3 pairs
        assert_eq!(r.count(), 12);
        let wider = minimal_flags_with_slack(&a3, &weight(&[2, 1], 3), &cfg, &int(2)).unwrap();
        assert_eq!(wider.flags, r.flags);
    }

    #[test]
    fn chain_members_nest() {
        let g = lattice(&[&[3, 1, 0, 1], &[1, 3, 1, 0], &[0, 1, 4, 1], &[1, 0, 1, 5]]);
        let r = minimal_flags(&g, &weight(&[2, 2, 1], 4), &Config::default()).unwrap();
        for f in &r.flags {
            let m = f.members();
            assert_eq!(m.len(), 2);
            assert!(m[0].contains(&m[1]));
            assert_eq!(f.product(), r.gamma.product);
        }
    }
}
