//! Polynomials in the entries `x_{i,j}` of an `n × m` matrix of unknowns,
//! determinantal monomials of bitableaux, the `α!/|α|!` scalar product and
//! the shape criterion for determinantal ideals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinatorics::{standard_tableaux, Bitableau, Partition, Tableau};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{self, Rat};

/// Sparse exponent vector: sorted `((i, j), e)` with `e > 0`, 1-based
/// indices, row-major order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<((u32, u32), u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: u32, j: u32) -> Self {
        Monomial(vec![((i, j), 1)])
    }

    pub fn exponents(&self) -> &[((u32, u32), u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m: BTreeMap<(u32, u32), u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().collect())
    }

    /// α!/|α|!, the scalar square of the monomial.
    pub fn norm(&self) -> Rat {
        let fact = |k: u32| (1..=k).fold(BigInt::one(), |a, x| a * x);
        let num = self.0.iter().fold(BigInt::one(), |a, &(_, e)| a * fact(e));
        Rat::new(num, fact(self.degree()))
    }
}

/// Sparse polynomial with exact rational coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rat) -> Self {
        Polynomial::from_terms([(Monomial::one(), c)])
    }

    pub fn var(i: u32, j: u32) -> Self {
        Polynomial::from_terms([(Monomial::var(i, j), rational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-rational::one())
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<[u32; 3]>,
    numerator: String,
    denominator: String,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                exponents: m.0.iter().map(|&((i, j), e)| [i, j, e]).collect(),
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms: Vec<TermRepr> = Vec::deserialize(d)?;
        let mut p = Polynomial::zero();
        for t in terms {
            let c = rational::parse(&format!("{}/{}", t.numerator, t.denominator))
                .map_err(D::Error::custom)?;
            let mut m: BTreeMap<(u32, u32), u32> = BTreeMap::new();
            for [i, j, e] in t.exponents {
                if e > 0 {
                    *m.entry((i, j)).or_insert(0) += e;
                }
            }
            p.add_term(Monomial(m.into_iter().collect()), c);
        }
        Ok(p)
    }
}

/// Determinant of the minor of `X` with the given rows and columns, by
/// permutation expansion (minors here have at most a handful of rows).
fn minor(rows: &[u32], cols: &[u32]) -> Polynomial {
    let k = rows.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = Polynomial::zero();
    // Heap's algorithm tracks the sign by parity of swaps.
    let mut c = vec![0usize; k];
    let mut sign = 1i64;
    let emit = |perm: &[usize], sign: i64, out: &mut Polynomial| {
        let mut m = Monomial::one();
        for (a, &b) in perm.iter().enumerate() {
            m = m.mul(&Monomial::var(rows[a], cols[b]));
        }
        out.add_term(m, rational::int(sign));
    };
    emit(&perm, sign, &mut out);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            emit(&perm, sign, &mut out);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// 𝓜_B: product over the columns of `B` of the minor whose rows are read from
/// the left column and whose columns are read from the right column.
pub fn det_monomial(b: &Bitableau, n: u32, m: u32) -> Result<Polynomial> {
    let check = |t: &Tableau, bound: u32, side: &str| {
        if t.rows().iter().flatten().any(|&v| v == 0 || v > bound) {
            Err(Error::OutOfRange(format!("{side} entries must lie in 1..={bound}")))
        } else {
            Ok(())
        }
    };
    check(b.left(), n, "left")?;
    check(b.right(), m, "right")?;
    let mut out = Polynomial::constant(rational::one());
    for (lc, rc) in b.left().columns().iter().zip(b.right().columns()) {
        out = &out * &minor(lc, &rc);
    }
    Ok(out)
}

/// The scalar product making distinct monomials orthogonal, with
/// ⟨x^α, x^α⟩ = α!/|α|!.
pub fn scalar_product(f: &Polynomial, g: &Polynomial) -> Rat {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    small
        .terms
        .iter()
        .filter_map(|(m, a)| large.terms.get(m).map(|b| a * b * m.norm()))
        .fold(Rat::zero(), |acc, x| acc + x)
}

/// Whether a monomial of shape `sigma` lies in the ideal I^(μ)(X):
/// κ_t(σ) ≥ κ_t(μ) for every t.
pub fn shape_in_ideal(sigma: &Partition, mu: &Partition) -> bool {
    let depth = sigma.depth().max(mu.depth()).max(1);
    (1..=depth).all(|t| sigma.kappa(t) >= mu.kappa(t))
}

/// Size guard for [`standard_monomials_independent`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndependenceGuard {
    pub max_degree: u32,
    pub max_dim: u32,
}

impl Default for IndependenceGuard {
    fn default() -> Self {
        IndependenceGuard {
            max_degree: 4,
            max_dim: 3,
        }
    }
}

/// All standard bitableaux of total degree `degree` for an `n × m` matrix.
pub fn standard_bitableaux(degree: u32, n: u32, m: u32) -> Vec<Bitableau> {
    let depth = n.min(m) as usize;
    let mut out = Vec::new();
    for sigma in Partition::all_of(degree, depth) {
        let lefts = standard_tableaux(&sigma, n);
        let rights = standard_tableaux(&sigma, m);
        for l in &lefts {
            for r in &rights {
                out.push(Bitableau::new(l.clone(), r.clone()).expect("same shape"));
            }
        }
    }
    out
}

/// Exact check that the standard monomials of one degree are linearly
/// independent.
pub fn standard_monomials_independent(
    degree: u32,
    n: u32,
    m: u32,
    guard: IndependenceGuard,
) -> Result<bool> {
    if degree > guard.max_degree || n > guard.max_dim || m > guard.max_dim {
        return Err(Error::budget(
            format!("standard monomial check at degree {degree}, {n}x{m}"),
            u64::from(guard.max_degree.max(guard.max_dim)),
        ));
    }
    let polys: Vec<Polynomial> = standard_bitableaux(degree, n, m)
        .iter()
        .map(|b| det_monomial(b, n, m))
        .collect::<Result<_>>()?;
    if polys.is_empty() {
        return Ok(true);
    }
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in &polys {
        for (mono, _) in p.terms() {
            let next = index.len();
            index.entry(mono).or_insert(next);
        }
    }
    let mut mat = RatMatrix::zeros(polys.len(), index.len());
    for (r, p) in polys.iter().enumerate() {
        for (mono, c) in p.terms() {
            mat[(r, index[mono])] = c.clone();
        }
    }
    Ok(mat.rank() == polys.len())
}
