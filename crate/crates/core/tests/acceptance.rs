//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs without the libtest harness so the lines are always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vexillar::catalog;
use vexillar::combinatorics::{Bitableau, Partition, Tableau};
use vexillar::design::{self, haar_moment4, is_design, FlagSet};
use vexillar::detpoly::det_monomial;
use vexillar::extremality::{
    certify_extreme, lattice_proj_sums, ExtremalityReport, Verdict,
};
use vexillar::flags::{
    haar_sample_with, random_integer_flag, random_rational_orthogonal, Flag, FlagShape, FloatFlag,
};
use vexillar::groups::{self, MatGroup};
use vexillar::lattice::{minimal_flags, short_vectors, sublattices_upto, Lattice, Weight};
use vexillar::linalg::{hnf, IntMatrix, RatMatrix};
use vexillar::rational::{self, int, rat, Rat};
use vexillar::zonal::{zonal2, zonal2_full_sum};
use vexillar::Config;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn lattice(name: &str) -> Lattice {
    catalog::builtin_lattice(name).expect("built-in lattice")
}

fn weight(parts: &[u32], n: usize) -> Weight {
    Weight::new(Partition::new(parts.to_vec()).unwrap(), n).unwrap()
}

fn tab(rows: &[&[u32]]) -> Tableau {
    Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn lines_of(l: &Lattice, reps: &[Vec<i64>]) -> FlagSet {
    let vecs: Vec<Vec<Rat>> = reps
        .iter()
        .map(|v| v.iter().map(|&x| int(x)).collect())
        .collect();
    FlagSet::lines(&vecs, Some(l.gram())).unwrap()
}

fn straightening() -> Check {
    let theta1: &[&[u32]] = &[&[1, 2], &[3]];
    let m = |t: &[&[u32]]| det_monomial(&Bitableau::new(tab(t), tab(theta1)).unwrap(), 3, 3).unwrap();
    let t1 = m(&[&[1, 3], &[2]]);
    let t2 = m(&[&[1, 2], &[3]]);
    let t3 = m(&[&[3, 1], &[2]]);
    let sharp = det_monomial(
        &Bitableau::new(tab(&[&[1], &[2], &[3]]), tab(&[&[1], &[2], &[3]])).unwrap(),
        3,
        3,
    )
    .unwrap();
    ensure!(t3 == &(&t1 - &t2) + &sharp, "identity fails");
    ensure!(!tab(&[&[3, 1], &[2]]).is_standard(), "T3 should not be standard");
    Ok(format!("holds exactly ({} terms)", t3.len()))
}

/// A Haar flag snapped to a fine rational grid, so the exact and float
/// evaluations see the same flag.
fn snapped_flag<R: Rng>(shape: &FlagShape, rng: &mut R) -> Flag {
    let x = haar_sample_with(shape, rng);
    let n = shape.n();
    let grid = 1i64 << 30;
    let spans: Vec<RatMatrix> = shape
        .dims()
        .iter()
        .map(|&d| {
            RatMatrix::from_fn(n, d, |i, j| rat((x.get(i, j) * grid as f64).round() as i64, grid))
        })
        .collect();
    Flag::from_bases(&spans).unwrap()
}

fn zonal_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0f64;
    let mut pairs = 0;
    for n in [4usize, 8] {
        for dims in [vec![1], vec![2], vec![2, 1]] {
            let shape = FlagShape::new(n, dims).unwrap();
            for _ in 0..1000 {
                let f = snapped_flag(&shape, &mut rng);
                let g = snapped_flag(&shape, &mut rng);
                let (xf, xg) = (FloatFlag::from_flag(&f).unwrap(), FloatFlag::from_flag(&g).unwrap());
                for i in 0..shape.len() {
                    for j in 0..shape.len() {
                        let exact = rational::to_f64(&zonal2(&f, &g, i, j).unwrap());
                        worst = worst.max((zonal2_full_sum(&xf, &xg, i, j) - exact).abs());
                    }
                }
                pairs += 1;
            }
        }
    }
    ensure!(worst < 1e-9, "largest deviation {worst:e}");
    let shape = FlagShape::new(5, vec![3, 1]).unwrap();
    let f = random_integer_flag(&shape, None, &mut rng).unwrap();
    let g = random_integer_flag(&shape, None, &mut rng).unwrap();
    for _ in 0..20 {
        let q = random_rational_orthogonal(5, &mut rng);
        let (qf, qg) = (f.transform(&q).unwrap(), g.transform(&q).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                ensure!(
                    zonal2(&f, &g, i, j).unwrap() == zonal2(&qf, &qg, i, j).unwrap(),
                    "zonal2 changed under an orthogonal map"
                );
            }
        }
    }
    Ok(format!("{pairs} pairs, max deviation {worst:.1e}; 20 conjugations exact"))
}

fn haar_moments() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let samples = 1_000_000;
    let mut report = Vec::new();
    for (n, d, d2) in [(4usize, 1usize, 1usize), (8, 2, 1), (8, 2, 2)] {
        let (a, b) = haar_moment4(n, d, d2);
        let (nn, two) = (int(n as i64), int(2));
        ensure!(&a * &nn * &nn + &b * &two * &nn == int((d * d2) as i64), "trace contraction ({n},{d},{d2})");
        ensure!(
            &a * &nn + &b * (&nn * &nn + &nn) == int(d.min(d2) as i64),
            "mixed contraction ({n},{d},{d2})"
        );
        let dims = if d == d2 { vec![d] } else { vec![d, d2] };
        let (i2, shape) = (dims.len() - 1, FlagShape::new(n, dims).unwrap());
        // E[P_11 P'_11] = a + 2b, E[P_11 P'_22] = a, E[P_12 P'_12] = b
        let mut acc = [[0f64; 2]; 3];
        for _ in 0..samples {
            let x = haar_sample_with(&shape, &mut rng);
            let (p, q) = (x.projector(0), x.projector(i2));
            let v = [p[0] * q[0], p[0] * q[n + 1], p[1] * q[1]];
            for (s, y) in acc.iter_mut().zip(v) {
                s[0] += y;
                s[1] += y * y;
            }
        }
        let want = [&a + &b * &two, a.clone(), b.clone()].map(|x| rational::to_f64(&x));
        for (k, (s, w)) in acc.iter().zip(want).enumerate() {
            let mean = s[0] / samples as f64;
            let se = ((s[1] / samples as f64 - mean * mean) / samples as f64).sqrt();
            ensure!((mean - w).abs() <= 4.0 * se, "({n},{d},{d2}) entry {k}: {mean} vs {w} (se {se:e})");
        }
        report.push(format!("({n},{d},{d2})"));
    }
    Ok(format!("{} within 4 SE over 1e6 samples", report.join(" ")))
}

fn e8() -> Check {
    let l = lattice("e8");
    let cfg = Config::default();
    let reps = ok(l.minimal_vectors(cfg.enumeration_node_cap))?;
    ensure!(reps.len() == 120, "{} minimal vectors up to sign", reps.len());
    let w = weight(&[1], 8);
    let r = ok(certify_extreme(&l, &w, &cfg))?;
    ensure!(r.s_lambda == 120, "s_lambda = {}", r.s_lambda);
    ensure!(r.design.passes, "not a 4-design");
    ensure!(r.strongly_eutactic, "not strongly eutactic");
    let m = ok(minimal_flags(&l, &w, &cfg))?;
    let total = ok(lattice_proj_sums(&l, &m.flags))?
        .iter()
        .fold(RatMatrix::zeros(8, 8), |acc, s| &acc + s.matrix());
    ensure!(total == RatMatrix::identity(8).scale(&rat(120, 8)), "Σ Π ≠ (|λ|s/n) I");
    ensure!(r.perfection.perfect && r.perfection.rank == 36, "rank {}", r.perfection.rank);
    let c = r.c_matrix.as_ref().ok_or("no C-matrix report")?;
    ensure!(c.quadratic_ok && c.row_sums_ok && c.trace_ok, "C-matrix relation fails");
    ensure!(c.alpha == int(35) && c.rank == Some(36), "α = {}", c.alpha);
    ensure!(r.verdict == Verdict::ExtremeByStrongPerfection, "verdict {:?}", r.verdict);
    Ok(format!(
        "240 vectors, 120 flags, rank 36, ω₁ = {}, ω = {}, α = 35, extreme",
        c.omega1, c.omega
    ))
}

fn d4_group() -> Check {
    let cfg = Config::default();
    let g = ok(MatGroup::from_file(&catalog::builtin_group("aut_d4").unwrap(), cfg.max_group_order))?;
    ensure!(g.order() == 1152, "order {}", g.order());
    ensure!(ok(groups::orbit_design_strength(&g, 2))?.verdict, "criterion fails at t = 2");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sizes = Vec::new();
    for dims in [vec![1], vec![2], vec![2, 1]] {
        let shape = FlagShape::new(4, dims).unwrap();
        for _ in 0..3 {
            let f = ok(random_integer_flag(&shape, g.gram(), &mut rng))?;
            let orbit = ok(g.orbit(&f))?;
            ensure!(ok(is_design(&orbit, 2))?.passes, "orbit of shape {:?} fails t = 2", shape.dims());
            sizes.push(orbit.len());
        }
    }
    Ok(format!("order 1152, criterion t=2 holds, 9 orbits (sizes {sizes:?}) are 2-designs"))
}

fn cross_polytope() -> Check {
    let g = ok(MatGroup::from_file(&catalog::builtin_group("signed_perm3").unwrap(), 1000))?;
    let two = ok(groups::orbit_design_strength(&g, 2))?;
    let four = ok(groups::orbit_design_strength(&g, 4))?;
    ensure!(two.verdict && !four.verdict, "criterion: t=2 {}, t=4 {}", two.verdict, four.verdict);
    let line = Flag::from_bases(&[RatMatrix::from_i64(&[&[1], &[0], &[0]])]).unwrap();
    let orbit = ok(g.orbit(&line))?;
    let cert = ok(is_design(&orbit, 4))?;
    ensure!(cert.strength_verified == 3 && !cert.passes, "orbit design strength {}", cert.strength_verified);
    let w = cert
        .verdicts
        .iter()
        .find_map(|v| v.witness.clone())
        .ok_or("no witness")?;
    ensure!(w.observed != w.expected, "witness does not witness");
    Ok(format!(
        "criterion k=2 dim {} vs {}; orbit fails t=4 at {:?}: {} vs {}",
        four.degrees[1].invariant_dim, four.degrees[1].reference_dim, w.entry, w.observed, w.expected
    ))
}

fn k12() -> Check {
    let cfg = Config::default();
    let l = lattice("k12");
    let start = Instant::now();
    let reps = ok(l.minimal_vectors(cfg.enumeration_node_cap))?;
    ensure!(reps.len() == 378, "{} minimal vectors", 2 * reps.len());
    ensure!(ok(is_design(&lines_of(&l, &reps), 4))?.passes, "lines are not a 4-design");
    let vectors_time = start.elapsed();
    ensure!(vectors_time < Duration::from_secs(60), "vector tier took {vectors_time:?}");
    // flags tier at λ̆ = (2,1), within the default budgets
    match minimal_flags(&l, &weight(&[2, 1], 12), &cfg) {
        Ok(m) => {
            let r = ok(vexillar::extremality::certify_from(&l, &weight(&[2, 1], 12), &m, &cfg))?;
            ensure!(!r.design.passes, "minimal flags at (2,1) unexpectedly form a 4-design");
            check_eutaxy_implications(&r)?;
            Ok(format!(
                "756 vectors, 4-design; λ=(2,1): {} flags, degree-4 test fails as expected, verdict {:?}",
                r.s_lambda, r.verdict
            ))
        }
        Err(e) if e.is_budget() => Ok(format!("756 vectors, 4-design; flags tier: {e}")),
        Err(e) => Err(e.to_string()),
    }
}

fn bw16() -> Check {
    let l = lattice("bw16");
    let reps = ok(l.minimal_vectors(Config::default().enumeration_node_cap))?;
    ensure!(reps.len() == 2160, "{} minimal vectors", 2 * reps.len());
    let gram = ok(design::integral_gram(l.gram()))?;
    let hist = ok(design::pair_histogram(&reps, Some(&gram)))?;
    for t in [2, 4, 6] {
        ensure!(ok(hist.test(t))?.pass, "pair-sum fails at t = {t}");
    }
    Ok(format!("4320 vectors, pair-sum passes at t=2,4,6 (t=8: {})", ok(hist.test(8))?.pass))
}

fn leech() -> Check {
    let l = lattice("leech");
    let reps = ok(l.minimal_vectors(Config::default().enumeration_node_cap))?;
    ensure!(reps.len() == 98280, "{} minimal vectors", 2 * reps.len());
    let gram = ok(design::integral_gram(l.gram()))?;
    let hist = ok(design::pair_histogram(&reps, Some(&gram)))?;
    for t in [2, 4, 6, 8, 10] {
        ensure!(ok(hist.test(t))?.pass, "pair-sum fails at t = {t}");
    }
    // class-data path against element sums on enumerable groups
    for name in ["signed_perm2", "signed_perm3", "signed_perm4", "aut_d4"] {
        let g = ok(MatGroup::from_file(&catalog::builtin_group(name).unwrap(), 100_000))?;
        let c = ok(g.class_data())?;
        for k in 1..=3 {
            ensure!(
                ok(c.sym_sym_invariant_dim(k))? == ok(g.sym_sym_invariant_dim(k))?,
                "{name}: class sums differ at k = {k}"
            );
        }
    }
    Ok("196560 vectors, pair-sum passes at t=2..10; class sums match element sums".into())
}

fn check_eutaxy_implications(r: &ExtremalityReport) -> Result<(), String> {
    if r.design.strength_verified >= 2 && !r.strongly_eutactic {
        return Err(format!("{}: 2-design but not strongly eutactic", r.lattice));
    }
    if r.strongly_eutactic && !r.eutaxy.as_ref().is_some_and(|e| e.eutactic) {
        return Err(format!("{}: strongly eutactic but not eutactic", r.lattice));
    }
    Ok(())
}

fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let c = rng.gen_range(-2i64..=2);
            for k in 0..n {
                u[k][j] += c * u[k][i];
            }
        }
    }
    u
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect())
        .collect()
}

fn to_rat(m: &[Vec<i64>]) -> RatMatrix {
    RatMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cfg = Config::default();

    // projector idempotence and nesting
    for _ in 0..20 {
        let n = rng.gen_range(3..=6);
        let shape = FlagShape::new(n, vec![n - 1, 1]).unwrap();
        let f = ok(random_integer_flag(&shape, None, &mut rng))?;
        let (p, q) = (f.projector(0), f.projector(1));
        ensure!(&(p * p) == p && p.is_symmetric(), "projector not idempotent");
        ensure!(&(p * q) == q, "members not nested");
    }

    // HNF canonicality
    for _ in 0..20 {
        let m: Vec<Vec<i64>> = (0..3).map(|_| (0..5).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let u = random_unimodular(3, &mut rng);
        let a = ok(hnf(&ok(IntMatrix::from_rows(&m, 5))?))?;
        let b = ok(hnf(&ok(IntMatrix::from_rows(&int_mul(&u, &m), 5))?))?;
        ensure!(a == b, "HNF changed under a unimodular row change");
    }

    // γ under unimodular change and scaling
    for trial in 0..20 {
        let n = 2 + trial % 4;
        let b: Vec<Vec<i64>> = loop {
            let b: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            if to_rat(&b).rank() == n {
                break b;
            }
        };
        let bt: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| b[i][j]).collect()).collect();
        let l = ok(Lattice::new("random", to_rat(&int_mul(&bt, &b))))?;
        let parts: &[u32] = if n >= 3 && trial % 2 == 0 { &[2, 1] } else { &[1] };
        let w = weight(parts, n);
        let base = ok(minimal_flags(&l, &w, &cfg))?;
        let moved = ok(minimal_flags(&ok(l.rebased(&to_rat(&random_unimodular(n, &mut rng))))?, &w, &cfg))?;
        ensure!(base.count() == moved.count(), "s_λ changed under rebasing");
        ensure!(base.gamma.same_value(&moved.gamma), "γ changed under rebasing");
        let c = int(2 + (trial % 2) as i64);
        let scaled = ok(minimal_flags(&ok(l.scaled(&c))?, &w, &cfg))?;
        ensure!(
            scaled.gamma.product == &base.gamma.product * rational::pow(&c, w.size()),
            "product did not scale by c^|λ|"
        );
        ensure!(base.gamma.same_value(&scaled.gamma), "γ changed under scaling");
    }

    // design certificates under global orthogonal maps
    let b3 = ok(MatGroup::from_file(&catalog::builtin_group("signed_perm3").unwrap(), 1000))?;
    let e1 = Flag::from_bases(&[RatMatrix::from_i64(&[&[1], &[0], &[0]])]).unwrap();
    let cross = ok(b3.orbit(&e1))?;
    for _ in 0..5 {
        let moved = ok(cross.transform(&random_rational_orthogonal(3, &mut rng)))?;
        // witnesses are coordinates and move with the map; verdicts must not
        let verdicts = |c: design::DesignCertificate| {
            (c.strength_verified, c.verdicts.iter().map(|v| (v.degree, v.pass)).collect::<Vec<_>>())
        };
        ensure!(
            verdicts(ok(is_design(&moved, 5))?) == verdicts(ok(is_design(&cross, 5))?),
            "design verdict changed under an orthogonal map"
        );
    }

    // 2-design ⇒ strong eutaxy on every certified set
    let cases: [(&str, &[u32]); 9] = [
        ("z2", &[1]),
        ("z3", &[1]),
        ("a2", &[1]),
        ("d4", &[1]),
        ("d4", &[2, 1]),
        ("e6", &[1]),
        ("e6", &[2, 1]),
        ("e7", &[1]),
        ("e8", &[1]),
    ];
    for (name, parts) in cases {
        let l = lattice(name);
        check_eutaxy_implications(&ok(certify_extreme(&l, &weight(parts, l.n()), &cfg))?)?;
    }

    // degree-2 design ⇔ vanishing zonal sums, on 10 orbits
    let cyclic3 = vec![RatMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])];
    let cyclic4 = vec![RatMatrix::from_i64(&[&[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]])];
    let groups: Vec<MatGroup> = vec![
        b3.clone(),
        ok(MatGroup::from_file(&catalog::builtin_group("aut_d4").unwrap(), 2000))?,
        ok(MatGroup::close(&cyclic3, None, 10))?,
        ok(MatGroup::close(&cyclic4, None, 10))?,
        ok(MatGroup::from_file(&catalog::builtin_group("signed_perm4").unwrap(), 1000))?,
    ];
    let mut agree = 0;
    for k in 0..10 {
        let g = &groups[k % groups.len()];
        let dims = if k % 2 == 0 { vec![1] } else { vec![2, 1] };
        let shape = FlagShape::new(g.n(), dims).unwrap();
        let orbit = ok(g.orbit(&ok(random_integer_flag(&shape, None, &mut rng))?))?;
        let probes = ok(design::probe_flags(&shape, k as u64))?;
        ensure!(
            ok(design::zonal_sums_vanish(&orbit, &probes))? == ok(is_design(&orbit, 2))?.passes,
            "zonal and moment criteria disagree on orbit {k}"
        );
        agree += 1;
    }

    // thread-count independence of every enumeration
    let one = Config { threads: 1, ..Config::default() };
    let four = Config { threads: 4, ..Config::default() };
    for name in ["e8", "k12", "bw16"] {
        let l = lattice(name);
        let m = ok(l.minimum(u64::MAX))?;
        let a = one.install(|| short_vectors(l.gram(), &m, u64::MAX));
        let b = four.install(|| short_vectors(l.gram(), &m, u64::MAX));
        ensure!(ok(a)? == ok(b)?, "{name}: short vectors depend on threads");
    }
    let d4 = lattice("d4");
    let a = one.install(|| sublattices_upto(d4.gram(), 2, &int(12), &one));
    let b = four.install(|| sublattices_upto(d4.gram(), 2, &int(12), &four));
    ensure!(ok(a)? == ok(b)?, "sublattices depend on threads");
    let w = weight(&[2, 1], 4);
    let a = one.install(|| minimal_flags(&d4, &w, &one));
    let b = four.install(|| minimal_flags(&d4, &w, &four));
    let (a, b) = (ok(a)?, ok(b)?);
    ensure!(a.flags == b.flags && a.gamma == b.gamma, "minimal flags depend on threads");
    let g1 = one.install(|| MatGroup::from_file(&catalog::builtin_group("aut_d4").unwrap(), 2000));
    let g4 = four.install(|| MatGroup::from_file(&catalog::builtin_group("aut_d4").unwrap(), 2000));
    ensure!(ok(g1)?.elements() == ok(g4)?.elements(), "group closure depends on threads");

    Ok(format!("projectors, HNF, γ on 20 Grams, orthogonal invariance, 2-design implies strong eutaxy on 9 sets, {agree} orbits, thread parity"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("straightening identity", Duration::from_secs(1), straightening),
        ("zonal consistency", Duration::from_secs(60), zonal_consistency),
        ("Haar moment oracle", Duration::from_secs(120), haar_moments),
        ("E8 extremality", Duration::from_secs(60), e8),
        ("D4 group designs", Duration::from_secs(120), d4_group),
        ("cross-polytope falsifier", Duration::from_secs(10), cross_polytope),
        ("K12 vectors and flags", Duration::from_secs(7200), k12),
        ("Barnes-Wall pair sums", Duration::from_secs(300), bw16),
        ("Leech pair sums", Duration::from_secs(3600), leech),
        ("property suites", Duration::from_secs(600), properties),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let id = k + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > *budget => ("FAIL", format!("over the {budget:?} budget")),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} [PRIMARY] {name}: {status} ({:.2}s) {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
