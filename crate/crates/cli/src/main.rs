//! `vexillar`: certify designs, orbits and lattice extremality from JSON
//! inputs. Reports go to stdout as versioned JSON, or as text with
//! `--summary`.
//!
//! Exit codes: 0 when the computation completed (whatever the verdict),
//! 2 when a budget was exhausted, 3 on bad input.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use vexillar::catalog::{self, FlagFile, VectorFile};
use vexillar::combinatorics::Partition;
use vexillar::design::{self, FlagSet};
use vexillar::extremality::{certify_extreme, ExtremalityReport};
use vexillar::flags::{random_integer_flag, FlagShape};
use vexillar::groups::{self, MatGroup};
use vexillar::lattice::{Lattice, Weight};
use vexillar::rational;
use vexillar::{Config, Error};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "vexillar", version, about = "Exact certification of flag designs and lattice extremality")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (0: one per core). Never changes results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON file overriding budget defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the random flags some commands materialize.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    summary: bool,
    /// Record wall times (makes reports differ between runs).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal flags, design strength, eutaxy, perfection and the verdict.
    Certify {
        /// Lattice JSON file or built-in name.
        #[arg(long)]
        lattice: String,
        /// Weight λ as comma-separated parts, e.g. `2,1`.
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Invariant-dimension criterion for orbits of a finite group.
    GroupOrbit {
        /// Generator JSON file or built-in group name.
        #[arg(long, conflicts_with = "classes", required_unless_present = "classes")]
        generators: Option<String>,
        /// Conjugacy-class data `{order, classes: [{size, power_traces}]}`.
        #[arg(long)]
        classes: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        strength: u32,
        /// Flag shape, e.g. `2,1`: materialize one orbit and cross-check it.
        #[arg(long, requires = "generators")]
        shape: Option<String>,
    },
    /// Conjugacy-class data of an enumerable group, in class-file format.
    GroupClasses {
        #[arg(long)]
        generators: String,
    },
    /// Exact design test of a flag set, a vector set or a lattice's minimal
    /// vectors.
    DesignTest {
        #[arg(long, group = "input")]
        flags: Option<PathBuf>,
        #[arg(long, group = "input")]
        vectors: Option<PathBuf>,
        #[arg(long, group = "input")]
        lattice: Option<String>,
        #[arg(long, default_value_t = 4)]
        strength: u32,
        /// Pair-sum test at every even strength up to `--strength` (≤ 10).
        #[arg(long)]
        pair_sum: bool,
    },
    /// Minimum and minimal vectors (one per ± pair) of a lattice.
    MinimalVectors {
        #[arg(long)]
        lattice: String,
        /// Omit the vectors themselves.
        #[arg(long)]
        count_only: bool,
    },
    /// List the built-in lattices and groups, or print one.
    Catalog {
        name: Option<String>,
    },
}

struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

type Outcome = Result<Report, Failure>;

/// A command result: the JSON payload, the text summary, and the paths of
/// floating-point diagnostics inside the payload.
struct Report {
    command: &'static str,
    payload: Value,
    summary: String,
    floats: Vec<&'static str>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(Error::Parse(msg.into()))
}

fn parse_parts(s: &str) -> Result<Vec<u32>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|_| input_error(format!("bad integer {x:?} in {s:?}"))))
        .collect()
}

fn load_config(g: &Global) -> Result<Config, Failure> {
    let mut cfg = match &g.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| input_error(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| input_error(e.to_string()))?
        }
        None => Config::default(),
    };
    if let Some(t) = g.threads {
        cfg.threads = t;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn certify(lattice: &str, lambda: &str, cfg: &Config) -> Outcome {
    let l = catalog::load_lattice(lattice)?;
    let w = Weight::new(Partition::new(parse_parts(lambda)?)?, l.n())?;
    let r: ExtremalityReport = certify_extreme(&l, &w, cfg)?;
    let mut summary = format!(
        "{} λ={:?}: s_λ={} γ≈{:.6} (exact: {}^(1) / {}^({}))\n",
        r.lattice,
        r.lambda,
        r.s_lambda,
        r.gamma_float,
        rational::format(&r.gamma.product),
        rational::format(&r.gamma.det),
        rational::format(&r.gamma.exponent),
    );
    summary += &format!(
        "design strength {} (4-design: {}), strongly eutactic: {}, eutactic: {}, perfect: {} (rank {}/{})\n",
        r.design.strength_verified,
        r.design.passes,
        r.strongly_eutactic,
        r.eutaxy.as_ref().map_or("skipped".into(), |e| e.eutactic.to_string()),
        r.perfection.perfect,
        r.perfection.rank,
        r.perfection.dimension,
    );
    if let Some(c) = &r.c_matrix {
        summary += &format!(
            "C-matrix: relation {}, ω₁={}, ω={}, α={}\n",
            if c.quadratic_ok { "holds" } else { "fails" },
            rational::format(&c.omega1),
            rational::format(&c.omega),
            rational::format(&c.alpha),
        );
    }
    summary += &format!("verdict: {}", to_value(&r.verdict).as_str().unwrap_or("?"));
    Ok(Report {
        command: "certify",
        payload: to_value(&r),
        summary,
        floats: vec!["/report/gamma_float"],
    })
}

fn group_orbit(
    generators: Option<&str>,
    classes: Option<&PathBuf>,
    t: u32,
    shape: Option<&str>,
    cfg: &Config,
) -> Outcome {
    if let Some(path) = classes {
        let c = catalog::load_class_data(path)?;
        let r = groups::orbit_design_strength_from_classes(&c, t)?;
        let summary = format!(
            "class data, order {}: orbit {}-design criterion {}",
            c.order, t, r.verdict
        );
        return Ok(Report {
            command: "group-orbit",
            payload: json!({ "source": "classes", "order": c.order, "criterion": r }),
            summary,
            floats: vec![],
        });
    }
    let file = catalog::load_generators(generators.expect("clap requires one input"))?;
    let g = MatGroup::from_file(&file, cfg.max_group_order)?;
    let r = groups::orbit_design_strength(&g, t)?;
    let mut summary = format!(
        "{} (order {}): orbit {}-design criterion {}",
        file.name,
        g.order(),
        t,
        r.verdict
    );
    let mut payload = json!({
        "source": "generators",
        "group": file.name,
        "order": g.order(),
        "criterion": r,
    });
    if let Some(s) = shape {
        let shape = FlagShape::new(g.n(), parse_parts(s)?.into_iter().map(|d| d as usize).collect())?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let flag = random_integer_flag(&shape, g.gram(), &mut rng)?;
        let orbit = g.orbit(&flag)?;
        let strength = t.min(5);
        let cert = design::is_design(&orbit, strength)?;
        // the criterion guarantees the orbit design, never the converse
        let consistent = !r.verdict || cert.passes;
        summary += &format!(
            "\norbit of a random {:?} flag: {} flags, {}-design: {} (consistent: {consistent})",
            shape.dims(),
            orbit.len(),
            strength,
            cert.passes
        );
        payload["orbit"] = json!({
            "shape": shape.dims(),
            "size": orbit.len(),
            "design": cert,
            "consistent_with_criterion": consistent,
        });
    }
    Ok(Report {
        command: "group-orbit",
        payload,
        summary,
        floats: vec![],
    })
}

fn group_classes(generators: &str, cfg: &Config) -> Outcome {
    let file = catalog::load_generators(generators)?;
    let g = MatGroup::from_file(&file, cfg.max_group_order)?;
    let c = g.class_data()?;
    let summary = format!("{}: order {}, {} classes", file.name, c.order, c.classes.len());
    Ok(Report {
        command: "group-classes",
        payload: to_value(&c),
        summary,
        floats: vec![],
    })
}

fn pair_sums(vectors: &[Vec<i64>], gram: Option<&vexillar::linalg::IntMatrix>, t: u32) -> Outcome {
    if t > 10 || t < 2 {
        return Err(Failure(Error::Unsupported(format!("pair-sum strength {t}; use 2..=10"))));
    }
    let reps = design::antipodal_representatives(vectors)?;
    let hist = design::pair_histogram(&reps, gram)?;
    let results = (1..=t / 2)
        .map(|k| hist.test(2 * k))
        .collect::<vexillar::Result<Vec<_>>>()?;
    let verified = results.iter().take_while(|r| r.pass).last().map_or(1, |r| r.t + 1);
    let summary = results
        .iter()
        .map(|r| format!("t={}: {}", r.t, if r.pass { "pass" } else { "fail" }))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Report {
        command: "design-test",
        payload: json!({
            "method": "pair-sum",
            "vectors": hist.size,
            "norm": hist.norm,
            "strength_verified": verified,
            "passes": results.iter().all(|r| r.pass),
            "results": results,
        }),
        summary: format!("{} vectors of norm {}: {summary}", hist.size, hist.norm),
        floats: vec![],
    })
}

fn flag_design(set: &FlagSet, t: u32, timing: bool) -> Outcome {
    let cert = design::is_design_timed(set, t, timing)?;
    let mut summary = format!(
        "{} flags of shape {:?}: {}-design {} (verified strength {})",
        set.len(),
        set.shape().dims(),
        t,
        if cert.passes { "passes" } else { "fails" },
        cert.strength_verified
    );
    for v in &cert.verdicts {
        if let Some(w) = &v.witness {
            summary += &format!(
                "\nwitness at degree {}: entry {:?} (members {}, {}) observed {} expected {}",
                v.degree,
                w.entry,
                w.iota,
                w.iota2,
                rational::format(&w.observed),
                rational::format(&w.expected)
            );
        }
    }
    Ok(Report {
        command: "design-test",
        payload: json!({ "method": "moments", "flags": set.len(), "certificate": cert }),
        summary,
        floats: if timing { vec!["/report/certificate/elapsed_ms"] } else { vec![] },
    })
}

fn design_test(
    flags: Option<&PathBuf>,
    vectors: Option<&PathBuf>,
    lattice: Option<&str>,
    t: u32,
    pair_sum: bool,
    g: &Global,
    cfg: &Config,
) -> Outcome {
    if let Some(p) = flags {
        if pair_sum {
            return Err(input_error("--pair-sum needs vectors, not flags"));
        }
        return flag_design(&FlagFile::load(p)?.to_set()?, t, g.timing);
    }
    let (vecs, gram) = if let Some(p) = vectors {
        let f = VectorFile::load(p)?;
        (f.rational_vectors()?, f.gram.clone())
    } else if let Some(name) = lattice {
        let l: Lattice = catalog::load_lattice(name)?;
        let reps = l.minimal_vectors(cfg.enumeration_node_cap)?;
        let mut all = Vec::with_capacity(2 * reps.len());
        for v in reps {
            all.push(v.iter().map(|&x| rational::int(x)).collect::<Vec<_>>());
            all.push(v.iter().map(|&x| rational::int(-x)).collect());
        }
        (all, Some(l.gram().clone()))
    } else {
        return Err(input_error("one of --flags, --vectors, --lattice is required"));
    };
    if pair_sum {
        let ints = design::integer_vectors(&vecs)?;
        let gram = gram.as_ref().map(design::integral_gram).transpose()?;
        pair_sums(&ints, gram.as_ref(), t)
    } else {
        let gram = gram.filter(|m| *m != vexillar::linalg::RatMatrix::identity(m.rows()));
        flag_design(&FlagSet::lines(&vecs, gram.as_ref())?, t, g.timing)
    }
}

fn minimal_vectors(lattice: &str, count_only: bool, cfg: &Config) -> Outcome {
    let l = catalog::load_lattice(lattice)?;
    let m = l.minimum(cfg.enumeration_node_cap)?;
    let v = l.minimal_vectors(cfg.enumeration_node_cap)?;
    let summary = format!(
        "{}: minimum {}, {} minimal vectors ({} up to sign)",
        l.name(),
        rational::format(&m),
        2 * v.len(),
        v.len()
    );
    let mut payload = json!({
        "lattice": l.name(),
        "minimum": rational::format(&m),
        "count": 2 * v.len(),
        "up_to_sign": v.len(),
    });
    if !count_only {
        payload["vectors"] = to_value(&v);
    }
    Ok(Report {
        command: "minimal-vectors",
        payload,
        summary,
        floats: vec![],
    })
}

fn catalog_cmd(name: Option<&str>) -> Outcome {
    match name {
        None => {
            let lattices: Vec<&str> = catalog::lattice_names().collect();
            let groups: Vec<&str> = catalog::group_names().collect();
            Ok(Report {
                command: "catalog",
                summary: format!("lattices: {}\ngroups: {}", lattices.join(" "), groups.join(" ")),
                payload: json!({ "lattices": lattices, "groups": groups }),
                floats: vec![],
            })
        }
        Some(n) => {
            if let Ok(l) = catalog::builtin_lattice(n) {
                Ok(Report {
                    command: "catalog",
                    summary: format!(
                        "{}: n = {}, det = {}, {}",
                        l.name(),
                        l.n(),
                        rational::format(l.det()),
                        l.provenance().unwrap_or(l.scale_note())
                    ),
                    payload: json!({
                        "name": l.name(),
                        "n": l.n(),
                        "det": rational::format(l.det()),
                        "gram": l.gram(),
                        "scale_note": l.scale_note(),
                        "provenance": l.provenance(),
                    }),
                    floats: vec![],
                })
            } else {
                let g = catalog::builtin_group(n)?;
                Ok(Report {
                    command: "catalog",
                    summary: format!("{}: n = {}, {} generators", g.name, g.n, g.generators.len()),
                    payload: to_value(&g),
                    floats: vec![],
                })
            }
        }
    }
}

fn run(cli: &Cli, cfg: &Config) -> Outcome {
    match &cli.command {
        Command::Certify { lattice, lambda } => certify(lattice, lambda, cfg),
        Command::GroupOrbit {
            generators,
            classes,
            strength,
            shape,
        } => group_orbit(generators.as_deref(), classes.as_ref(), *strength, shape.as_deref(), cfg),
        Command::GroupClasses { generators } => group_classes(generators, cfg),
        Command::DesignTest {
            flags,
            vectors,
            lattice,
            strength,
            pair_sum,
        } => design_test(
            flags.as_ref(),
            vectors.as_ref(),
            lattice.as_deref(),
            *strength,
            *pair_sum,
            &cli.global,
            cfg,
        ),
        Command::MinimalVectors { lattice, count_only } => minimal_vectors(lattice, *count_only, cfg),
        Command::Catalog { name } => catalog_cmd(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match load_config(&cli.global) {
        Ok(c) => c,
        Err(Failure(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let start = Instant::now();
    match cfg.install(|| run(&cli, &cfg)) {
        Ok(mut r) => {
            if cli.global.summary {
                println!("{}", r.summary);
                if cli.global.timing {
                    println!("elapsed: {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
                }
                return ExitCode::SUCCESS;
            }
            let mut out = json!({
                "schema_version": SCHEMA_VERSION,
                "command": r.command,
                "report": r.payload,
            });
            if cli.global.timing {
                out["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
                r.floats.push("/elapsed_ms");
            }
            out["exactness"] = json!({
                "default": "exact",
                "float_diagnostic": r.floats,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            ExitCode::SUCCESS
        }
        Err(Failure(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 2 } else { 3 })
        }
    }
}
