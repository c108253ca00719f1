//! Benchmark fixtures shared by the criterion targets.

use vexillar::catalog;
use vexillar::design::FlagSet;
use vexillar::lattice::Lattice;
use vexillar::rational;

pub fn lattice(name: &str) -> Lattice {
    catalog::builtin_lattice(name).expect("built-in lattice")
}

/// The lines through the minimal vectors of a built-in lattice.
pub fn minimal_lines(name: &str) -> FlagSet {
    let l = lattice(name);
    let vecs: Vec<Vec<_>> = l
        .minimal_vectors(u64::MAX)
        .expect("enumeration")
        .iter()
        .map(|v| v.iter().map(|&x| rational::int(x)).collect())
        .collect();
    FlagSet::lines(&vecs, Some(l.gram())).expect("lines")
}
