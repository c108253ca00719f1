//! Dense exact simplex over the rationals with Bland's rule.

use num_traits::{Signed, Zero};

use crate::rational::Rat;

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Unbounded,
}

/// Tableau for `A x = b, x ≥ 0` with a basis; column `cols` holds `b`.
pub(crate) struct Tableau {
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for x in self.t[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · x` over columns allowed by `allowed`, starting from
    /// the current feasible basis. Bland's rule: lowest-index improving
    /// column enters, ratio ties leave by lowest basic index.
    fn maximize(&mut self, obj: &[Rat], allowed: &dyn Fn(usize) -> bool) -> Outcome {
        loop {
            let entering = (0..self.cols).filter(|&j| allowed(j)).find(|&j| {
                let z: Rat = self
                    .basis
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| !obj[b].is_zero())
                    .map(|(i, &b)| &obj[b] * &self.t[i][j])
                    .sum();
                obj[j] > z
            });
            let Some(c) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if a.is_positive() {
                    let ratio = &self.t[i][self.cols] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }

    pub(crate) fn value(&self, j: usize) -> Rat {
        self.basis
            .iter()
            .position(|&b| b == j)
            .map_or_else(Rat::zero, |i| self.t[i][self.cols].clone())
    }
}

/// Feasible basis for `A x = b, x ≥ 0` via phase one, with redundant rows
/// removed. `None` when infeasible.
pub(crate) fn phase_one(a: &[Vec<Rat>], b: &[Rat]) -> Option<Tableau> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let cols = k + m;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rat> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|j| Rat::from_integer(i64::from(i == j).into())));
        r.push(if flip { -bi } else { bi.clone() });
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (k..cols).collect(),
        cols,
    };
    let obj: Vec<Rat> = (0..cols)
        .map(|j| if j >= k { Rat::from_integer((-1).into()) } else { Rat::zero() })
        .collect();
    tab.maximize(&obj, &|_| true);
    let infeasible = (k..cols).any(|j| tab.value(j).is_positive());
    if infeasible {
        return None;
    }
    // drive zero-level artificials out of the basis or drop their rows
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= k {
            match (0..k).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    // forget the artificial columns
    for row in tab.t.iter_mut() {
        let rhs = row[cols].clone();
        row.truncate(k);
        row.push(rhs);
    }
    tab.cols = k;
    Some(tab)
}

/// Maximizes `obj · x` subject to `A x = b, x ≥ 0`. Returns the optimal
/// point, `Err(true)` if infeasible, `Err(false)` if unbounded.
pub(crate) fn solve(a: &[Vec<Rat>], b: &[Rat], obj: &[Rat]) -> Result<Vec<Rat>, bool> {
    let mut tab = phase_one(a, b).ok_or(true)?;
    match tab.maximize(obj, &|_| true) {
        Outcome::Optimal => Ok((0..tab.cols).map(|j| tab.value(j)).collect()),
        Outcome::Unbounded => Err(false),
    }
}
