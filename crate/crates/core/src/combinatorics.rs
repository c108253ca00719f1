//! Partitions, Young tableaux and bitableaux.
//!
//! Diagrams are drawn row by row: row 1 is the longest. `T(i, j)` addresses
//! the box in column `i` and row `j` (both 1-based), so a column of `T` is
//! read upward through the rows. A tableau is standard when entries strictly
//! increase along columns and weakly increase along rows.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Non-increasing sequence of positive integers. The empty partition is the
/// trivial weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// |μ|
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Column lengths of the diagram.
    pub fn transpose(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=width)
                .map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32)
                .collect(),
        )
    }

    /// κ_t(μ) = Σ_{k ≥ t} μ_k, the number of boxes from row `t` upward.
    pub fn kappa(&self, t: usize) -> u32 {
        assert!(t >= 1, "kappa is indexed from 1");
        self.0.iter().skip(t - 1).sum()
    }

    /// All partitions of `k` with at most `max_parts` parts, in reverse
    /// lexicographic order.
    pub fn all_of(k: u32, max_parts: usize) -> Vec<Partition> {
        fn rec(rem: u32, cap: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if slots == 0 {
                return;
            }
            for p in (1..=cap.min(rem)).rev() {
                cur.push(p);
                rec(rem - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k, k, max_parts, &mut Vec::new(), &mut out);
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A filled diagram. `rows[j]` is row `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<u32>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len() as u32).collect())?;
        Ok(Tableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// T(i, j): column `i`, row `j`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[j - 1][i - 1]
    }

    /// Columns, each read upward from row 1.
    pub fn columns(&self) -> Vec<Vec<u32>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width)
            .map(|c| {
                self.rows
                    .iter()
                    .take_while(|r| r.len() > c)
                    .map(|r| r[c])
                    .collect()
            })
            .collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn is_standard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self
            .columns()
            .iter()
            .all(|c| c.windows(2).all(|w| w[0] < w[1]));
        rows_ok && cols_ok
    }

    /// C_T: number of occurrences of each entry.
    pub fn content(&self) -> BTreeMap<u32, usize> {
        let mut c = BTreeMap::new();
        for &v in self.rows.iter().flatten() {
            *c.entry(v).or_insert(0) += 1;
        }
        c
    }
}

/// All standard tableaux of `shape` with entries in `1..=max_entry`, in
/// lexicographic order of their row-major entry sequences.
pub fn standard_tableaux(shape: &Partition, max_entry: u32) -> Vec<Tableau> {
    let lens: Vec<usize> = shape.parts().iter().map(|&p| p as usize).collect();
    let cells: Vec<(usize, usize)> = lens
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut rows: Vec<Vec<u32>> = lens.iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();

    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        rows: &mut Vec<Vec<u32>>,
        max: u32,
        shape: &Partition,
        out: &mut Vec<Tableau>,
    ) {
        if k == cells.len() {
            out.push(Tableau {
                shape: shape.clone(),
                rows: rows.clone(),
            });
            return;
        }
        let (r, c) = cells[k];
        let mut lo = 1;
        if c > 0 {
            lo = lo.max(rows[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(rows[r - 1][c] + 1);
        }
        for v in lo..=max {
            rows[r][c] = v;
            fill(k + 1, cells, rows, max, shape, out);
        }
        rows[r][c] = 0;
    }

    fill(0, &cells, &mut rows, max_entry, shape, &mut out);
    out
}

/// The violation predicate used to select a basis of the traceless part.
///
/// For every value `v` shared by two distinct columns, count the values
/// `u < v` present in both columns (`repeated`) and those present in neither
/// (`absent`). The tableau has a violation when `repeated >= absent` for some
/// such pair. With this reading the violation-free tableaux of shape (2) are
/// exactly `n(n+1)/2 - 1` in number.
pub fn has_violation(t: &Tableau) -> bool {
    let cols = t.columns();
    for a in 0..cols.len() {
        for b in a + 1..cols.len() {
            let (ca, cb) = (&cols[a], &cols[b]);
            for &v in ca.iter().filter(|v| cb.contains(v)) {
                let mut repeated = 0;
                let mut absent = 0;
                for u in 1..v {
                    match (ca.contains(&u), cb.contains(&u)) {
                        (true, true) => repeated += 1,
                        (false, false) => absent += 1,
                        _ => {}
                    }
                }
                if repeated >= absent {
                    return true;
                }
            }
        }
    }
    false
}

/// A pair of tableaux of the same shape: left entries index rows of the
/// variable matrix, right entries index its columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bitableau {
    left: Tableau,
    right: Tableau,
}

impl Bitableau {
    pub fn new(left: Tableau, right: Tableau) -> Result<Self> {
        if left.shape != right.shape {
            return Err(Error::DimensionMismatch(format!(
                "bitableau shapes {} and {} differ",
                left.shape, right.shape
            )));
        }
        Ok(Bitableau { left, right })
    }

    pub fn left(&self) -> &Tableau {
        &self.left
    }

    pub fn right(&self) -> &Tableau {
        &self.right
    }

    pub fn shape(&self) -> &Partition {
        &self.left.shape
    }

    pub fn is_standard(&self) -> bool {
        self.left.is_standard() && self.right.is_standard()
    }

    pub fn content(&self) -> (BTreeMap<u32, usize>, BTreeMap<u32, usize>) {
        (self.left.content(), self.right.content())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn t(rows: &[&[u32]]) -> Tableau {
        Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[2, 1]).transpose(), p(&[2, 1]));
        assert_eq!(p(&[4]).transpose(), p(&[1, 1, 1, 1]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
    }

    #[test]
    fn kappa_examples() {
        let mu = p(&[2, 1]);
        assert_eq!(mu.kappa(1), 3);
        assert_eq!(mu.kappa(2), 1);
        assert_eq!(mu.kappa(3), 0);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
        assert_eq!(serde_json::from_str::<Partition>("[2,1]").unwrap(), p(&[2, 1]));
    }

    #[test]
    fn standard_tableaux_examples() {
        let col = standard_tableaux(&p(&[1, 1]), 2);
        assert_eq!(col, vec![t(&[&[1], &[2]])]);
        let row = standard_tableaux(&p(&[2]), 2);
        assert_eq!(row, vec![t(&[&[1, 1]]), t(&[&[1, 2]]), t(&[&[2, 2]])]);
        assert!(standard_tableaux(&p(&[1, 1, 1]), 2).is_empty());
    }

    /// Oracle: every filling of the shape with values in 1..=k, kept if standard.
    fn brute_force_count(shape: &Partition, k: u32) -> usize {
        let boxes = shape.degree() as usize;
        let lens: Vec<usize> = shape.parts().iter().map(|&x| x as usize).collect();
        let mut count = 0;
        let total = (k as usize).pow(boxes as u32);
        for code in 0..total {
            let mut c = code;
            let mut flat = Vec::with_capacity(boxes);
            for _ in 0..boxes {
                flat.push((c % k as usize) as u32 + 1);
                c /= k as usize;
            }
            let mut rows = Vec::new();
            let mut off = 0;
            for &l in &lens {
                rows.push(flat[off..off + l].to_vec());
                off += l;
            }
            if Tableau::new(rows).unwrap().is_standard() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_match_brute_force() {
        for k in 1..=6u32 {
            let k_us = k as usize;
            let row = standard_tableaux(&p(&[2]), k).len();
            let col = standard_tableaux(&p(&[1, 1]), k).len();
            assert_eq!(row, k_us * (k_us + 1) / 2);
            assert_eq!(col, k_us * (k_us - 1) / 2);
            assert_eq!(row, brute_force_count(&p(&[2]), k));
            assert_eq!(col, brute_force_count(&p(&[1, 1]), k));
        }
        for k in 1..=4 {
            assert_eq!(
                standard_tableaux(&p(&[2, 1]), k).len(),
                brute_force_count(&p(&[2, 1]), k)
            );
        }
    }

    #[test]
    fn violation_examples() {
        assert!(has_violation(&t(&[&[1, 1]])));
        assert!(!has_violation(&t(&[&[2, 2]])));
        assert!(!has_violation(&t(&[&[1, 2]])));
    }

    #[test]
    fn violation_free_count_for_two_boxes() {
        for n in 1..=8u32 {
            let free = standard_tableaux(&p(&[2]), n)
                .iter()
                .filter(|t| !has_violation(t))
                .count();
            assert_eq!(free as u32, n * (n + 1) / 2 - 1);
        }
    }

    #[test]
    fn partitions_enumeration() {
        assert_eq!(Partition::all_of(4, 4).len(), 5);
        assert_eq!(Partition::all_of(3, 2).len(), 2);
        assert_eq!(Partition::all_of(0, 3), vec![Partition::empty()]);
    }

    #[test]
    fn content_sums_to_degree() {
        let tab = t(&[&[1, 1, 3], &[2, 4]]);
        assert!(tab.is_standard());
        assert_eq!(tab.content().values().sum::<usize>(), 5);
        assert_eq!(tab.entry(3, 1), 3);
        assert_eq!(tab.entry(2, 2), 4);
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        prop::collection::vec(1u32..6, 0..6).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn transpose_is_involutive(mu in arb_partition()) {
            prop_assert_eq!(mu.transpose().transpose(), mu.clone());
            prop_assert_eq!(mu.transpose().degree(), mu.degree());
        }

        #[test]
        fn kappa_is_non_increasing(mu in arb_partition(), t in 1usize..8) {
            prop_assert!(mu.kappa(t) >= mu.kappa(t + 1));
            prop_assert_eq!(mu.kappa(1), mu.degree());
        }
    }
}
