//! The `dgwb` command line: argument grammar, input loading, dispatch and
//! exit codes.

pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dgalg::json::load_ref;
use crate::dgalg::{localize, DgAlgebra, DgMorphism, RationalPoint};
use crate::error::Error;
use crate::exactalg::{OrderKind, Polynomial, Rational};
use crate::homotopy::{brown_factorize, certify_quasi_iso, path_object, recognize_fibration};
use crate::resolution::{fiber_points, matching_object, resolve_truncated, verify_special, SimplicialDgAlgebra};
use crate::sampling;
use crate::site::{cech_hypercover, covering_verdict, shrink_report, verify_hypercover, Condition3};
use report::Status;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Degrevlex,
    Lex,
    Deglex,
}

impl Order {
    fn kind(self) -> OrderKind {
        match self {
            Order::Degrevlex => OrderKind::Degrevlex,
            Order::Lex => OrderKind::Lex,
            Order::Deglex => OrderKind::Deglex,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dgwb", version, about = "Exact computations with commutative dg algebras over ℚ")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Monomial order for parsed inputs.
    #[arg(long, value_enum, default_value = "degrevlex", global = true)]
    pub order: Order,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// JSON array of points, e.g. `[{"x": "1/2"}]`.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check degrees and δ² = 0.
    Validate { algebra: PathBuf },
    /// Presentation of H^k over A⁰, for one degree or 0 down to -depth.
    Cohomology {
        algebra: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i32>,
        #[arg(long, default_value_t = 3)]
        depth: i32,
    },
    /// Quasi-isomorphism verdict for a morphism.
    Qiso {
        morphism: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: i32,
    },
    /// Path object A → P → A ⊗ A.
    Path {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: i32,
    },
    /// Factor a morphism as a fibration after a quasi-isomorphism.
    Factorize {
        morphism: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: i32,
    },
    /// Simplicial resolution through level N.
    Resolve {
        algebra: PathBuf,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long, default_value_t = crate::resolution::build::DEFAULT_DEGREE_BOUND)]
        degree_bound: i32,
        /// Write the resolution to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check that a resolution file is special on sampled fibers.
    VerifySpecial {
        resolution: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: i32,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Matching object of a resolution file at one level.
    Matching {
        resolution: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        depth: i32,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Étale and covering verdicts for an atlas of basic opens.
    Cover {
        atlas: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: i32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Čech hypercover of an atlas through level N.
    Hypercover {
        atlas: PathBuf,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long, default_value_t = 3)]
        depth: i32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the hypercover to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// An invertible combination h = Σ g_i f_i of the atlas elements.
    Shrink { atlas: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Cohomology { .. } => "cohomology",
            Command::Qiso { .. } => "qiso",
            Command::Path { .. } => "path",
            Command::Factorize { .. } => "factorize",
            Command::Resolve { .. } => "resolve",
            Command::VerifySpecial { .. } => "verify-special",
            Command::Matching { .. } => "matching",
            Command::Cover { .. } => "cover",
            Command::Hypercover { .. } => "hypercover",
            Command::Shrink { .. } => "shrink",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure before a report exists.
enum Fail {
    Usage(String),
    Data(String),
    /// The input loaded but is not a valid algebra or morphism.
    Invalid(String),
    /// The operation does not apply to this input.
    Unsupported(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Schema(_) => Fail::Data(e.to_string()),
            Error::InvalidAlgebra(_) | Error::InvalidMorphism(_) => Fail::Invalid(e.to_string()),
            Error::Context(_) => Fail::Usage(e.to_string()),
            Error::Unsupported(_) | Error::Dimension(_) | Error::Invariant(_) => Fail::Unsupported(e.to_string()),
        }
    }
}

struct Session {
    order: OrderKind,
    inputs: Vec<Value>,
}

impl Session {
    fn read(&mut self, path: &Path) -> Result<String, Fail> {
        let bytes = std::fs::read(path).map_err(|e| Fail::Data(format!("{}: {e}", path.display())))?;
        self.inputs.push(json!({"path": path.display().to_string(), "sha256": hex::encode(Sha256::digest(&bytes))}));
        String::from_utf8(bytes).map_err(|e| Fail::Data(format!("{}: {e}", path.display())))
    }

    fn located(path: &Path, e: Error) -> Fail {
        match Fail::from(e) {
            Fail::Data(m) => Fail::Data(format!("{}: {m}", path.display())),
            f => f,
        }
    }

    fn json(&mut self, path: &Path) -> Result<Value, Fail> {
        let src = self.read(path)?;
        serde_json::from_str(&src).map_err(|e| Self::located(path, crate::dgalg::json::json_error(e)))
    }

    fn algebra(&mut self, path: &Path) -> Result<DgAlgebra, Fail> {
        let src = self.read(path)?;
        let a = DgAlgebra::from_json_str_ordered(&src, self.order).map_err(|e| Self::located(path, e))?;
        checked(&a)?;
        Ok(a)
    }

    fn morphism(&mut self, path: &Path) -> Result<DgMorphism, Fail> {
        let src = self.read(path)?;
        let m = DgMorphism::from_json_str_ordered(&src, path.parent(), self.order).map_err(|e| Self::located(path, e))?;
        checked(&m.source)?;
        checked(&m.target)?;
        Ok(m)
    }

    fn atlas(&mut self, path: &Path) -> Result<(DgAlgebra, Vec<Polynomial>), Fail> {
        let v = self.json(path)?;
        let obj = v.as_object().ok_or_else(|| Fail::Data(format!("{}: an atlas is a JSON object", path.display())))?;
        if let Some(k) = obj.keys().find(|k| *k != "algebra" && *k != "elements") {
            return Err(Fail::Data(format!("{}: unknown field '{k}'", path.display())));
        }
        let alg = obj.get("algebra").ok_or_else(|| Fail::Data(format!("{}: missing field 'algebra'", path.display())))?;
        let a = load_ref(alg, path.parent(), self.order).map_err(|e| Self::located(path, e))?;
        checked(&a)?;
        let elems = obj
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Fail::Data(format!("{}: 'elements' must be an array of strings", path.display())))?;
        let mut fs = Vec::new();
        for e in elems {
            let s = e.as_str().ok_or_else(|| Fail::Data(format!("{}: 'elements' must be an array of strings", path.display())))?;
            fs.push(a.base().parse(s).map_err(|e| Self::located(path, e))?);
        }
        Ok((a, fs))
    }

    fn points(&mut self, base: &crate::exactalg::BaseRing, s: &Sampling) -> Result<Vec<Vec<Rational>>, Fail> {
        match &s.samples {
            Some(p) => {
                let v = self.json(p)?;
                let pts: Vec<RationalPoint> = serde_json::from_value(v).map_err(|e| Fail::Data(format!("{}: {e}", p.display())))?;
                pts.iter().map(|q| q.coordinates(base).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))).collect()
            }
            None => Ok(sampling::sample_points_with_origin(base, s.seed, s.count)),
        }
    }
}

fn checked(a: &DgAlgebra) -> Result<(), Fail> {
    let v = a.validate();
    match v.failures.first() {
        None => Ok(()),
        Some(f) => Err(Fail::Invalid(format!("generator {}: {}", f.generator, f.message))),
    }
}

fn write_json(path: &Path, v: &Value) -> Result<(), Fail> {
    std::fs::write(path, report::to_json(v)).map_err(|e| Fail::Usage(format!("cannot write {}: {e}", path.display())))
}

fn execute(cmd: &Command, ss: &mut Session) -> Result<(Status, Value), Fail> {
    match cmd {
        Command::Validate { algebra } => {
            let src = ss.read(algebra)?;
            let a = DgAlgebra::from_json_str_ordered(&src, ss.order).map_err(|e| Session::located(algebra, e))?;
            let v = a.validate();
            let status = if v.valid { Status::Valid } else { Status::Invalid };
            Ok((status, json!({"validation": v, "algebra": a.to_json_value()})))
        }
        Command::Cohomology { algebra, degree, depth } => {
            let a = ss.algebra(algebra)?;
            let degrees: Vec<i32> = match degree {
                Some(k) if *k > 0 => return Err(Fail::Usage(format!("degree {k} is positive"))),
                Some(k) => vec![*k],
                None => (0..=*depth).map(|k| -k).collect(),
            };
            let mut out = Vec::new();
            for k in &degrees {
                let h = a.cohomology(*k)?;
                out.push(json!({"degree": k, "rank": h.rank, "relations": h.relation_strings()}));
            }
            let payload = if degree.is_some() { out.remove(0) } else { json!({"degrees": out}) };
            Ok((Status::Computed, payload))
        }
        Command::Qiso { morphism, depth } => {
            let m = ss.morphism(morphism)?;
            let v = certify_quasi_iso(&m, *depth)?;
            let fib = recognize_fibration(&m);
            Ok((Status::from_verdict(v.verdict), json!({"verdict": v.verdict, "depth": depth, "report": v, "fibration": fib})))
        }
        Command::Path { algebra, depth } => {
            let a = ss.algebra(algebra)?;
            let f = path_object(&a, *depth)?;
            Ok((Status::from_verdict(f.verdict.verdict), f.to_json_value()))
        }
        Command::Factorize { morphism, depth } => {
            let m = ss.morphism(morphism)?;
            let f = brown_factorize(&m, *depth)?;
            Ok((Status::from_verdict(f.verdict.verdict), f.to_json_value()))
        }
        Command::Resolve { algebra, levels, degree_bound, emit } => {
            let a = ss.algebra(algebra)?;
            if *degree_bound < 1 {
                return Err(Fail::Usage("--degree-bound must be at least 1".into()));
            }
            let r = resolve_truncated(&a, *levels, *degree_bound)?;
            let mut table = Vec::new();
            for (n, items) in r.items.iter().enumerate() {
                let mut counts: BTreeMap<String, usize> = BTreeMap::new();
                for it in items {
                    *counts.entry(it.degree.to_string()).or_default() += 1;
                }
                table.push(json!({
                    "level": n,
                    "adds": counts,
                    "base_variables": r.level(n).base().nvars(),
                    "generators": r.level(n).ngens(),
                }));
            }
            let ranks = r.rank_recursion();
            let identities = r.simplicial.check_identities()?;
            let pattern = r.check_block_pattern(&r.simplicial)?;
            let ok = identities.is_empty() && pattern.is_empty() && ranks.iter().all(|c| c.expected == c.actual);
            if let Some(p) = emit {
                write_json(p, &r.to_json_value())?;
            }
            let status = if ok { Status::Certified } else { Status::Refuted };
            Ok((
                status,
                json!({
                    "levels": levels,
                    "degree_bound": degree_bound,
                    "generator_counts": table,
                    "top_ranks": r.top_ranks(),
                    "rank_recursion": ranks,
                    "identity_failures": identities,
                    "block_pattern_failures": pattern,
                    "emitted": emit.as_ref().map(|p| p.display().to_string()),
                }),
            ))
        }
        Command::VerifySpecial { resolution, depth, sampling: smp } => {
            let v = ss.json(resolution)?;
            let s = SimplicialDgAlgebra::from_json_value(&v).map_err(|e| Session::located(resolution, e))?;
            for a in &s.levels {
                checked(a)?;
            }
            let bound = v.get("degree_bound").and_then(Value::as_i64).unwrap_or(crate::resolution::build::DEFAULT_DEGREE_BOUND as i64) as i32;
            let r = resolve_truncated(&s.levels[0], s.top_level(), bound)?;
            let pts = ss.points(s.levels[0].base(), smp)?;
            let rep = verify_special(&r, &s, &pts, *depth, smp.seed)?;
            let status = if rep.pass {
                Status::Certified
            } else if rep.inconclusive && rep.levels.iter().all(|l| l.structural.is_empty() && l.identities.is_empty()) {
                Status::Inconclusive
            } else {
                Status::Refuted
            };
            Ok((status, json!({"samples": pts.len(), "report": rep})))
        }
        Command::Matching { resolution, level, depth, sampling: smp } => {
            let v = ss.json(resolution)?;
            let s = SimplicialDgAlgebra::from_json_value(&v).map_err(|e| Session::located(resolution, e))?;
            if *level == 0 || *level > s.top_level() {
                return Err(Fail::Usage(format!("--level must be in 1..={}", s.top_level())));
            }
            let m = matching_object(&s, *level)?;
            let cone = m.verify_cone()?;
            let bound = v.get("degree_bound").and_then(Value::as_i64).unwrap_or(crate::resolution::build::DEFAULT_DEGREE_BOUND as i64) as i32;
            let r = resolve_truncated(&s.levels[0], s.top_level(), bound)?;
            let pts = ss.points(s.levels[0].base(), smp)?;
            let mut fibers = Vec::new();
            for p in fiber_points(&r, &s, *level, &pts, smp.seed) {
                let dims = (1..=*depth).map(|k| m.fiber(&s, &p, -k)).collect::<crate::Result<Vec<_>>>()?;
                fibers.push(json!({"point": p.iter().map(crate::exactalg::poly::fmt_rational).collect::<Vec<_>>(), "dims": dims}));
            }
            let status = if cone.is_empty() { Status::Certified } else { Status::Refuted };
            Ok((
                status,
                json!({
                    "level": level,
                    "faces": m.faces.iter().map(|f| crate::resolution::simplicial::subset_label(f)).collect::<Vec<_>>(),
                    "equations": m.equations.len(),
                    "cone_failures": cone,
                    "fibers": fibers,
                }),
            ))
        }
        Command::Cover { atlas, depth, seed, count } => {
            let (a, fs) = ss.atlas(atlas)?;
            let members = fs.iter().map(|f| localize(&a, f).map(|x| x.1)).collect::<crate::Result<Vec<_>>>()?;
            let v = covering_verdict(&a, &members, *depth, *seed, *count)?;
            let refuted = v.condition3 == Condition3::Refuted
                || v.members.iter().any(|m| m.condition1 == crate::site::Condition1::Refuted || m.condition2 == crate::homotopy::Verdict::Refuted);
            let status = if v.covering {
                Status::Certified
            } else if refuted {
                Status::Refuted
            } else {
                Status::Inconclusive
            };
            Ok((status, json!({"depth": depth, "verdict": v})))
        }
        Command::Hypercover { atlas, levels, depth, seed, emit } => {
            let (a, fs) = ss.atlas(atlas)?;
            let h = cech_hypercover(&a, &fs, *levels)?;
            let identities = h.check_identities()?;
            let checks = verify_hypercover(&h, *depth, *seed)?;
            if let Some(p) = emit {
                write_json(p, &h.to_json_value())?;
            }
            let sampled = checks
                .iter()
                .filter_map(|c| c.covering.as_ref())
                .any(|c| c.condition3 == Condition3::SampledOnly);
            let ok = identities.is_empty() && checks.iter().all(|c| c.certified);
            let status = if ok {
                Status::Certified
            } else if sampled && identities.is_empty() && checks.iter().skip(1).all(|c| c.certified) {
                Status::Inconclusive
            } else {
                Status::Refuted
            };
            Ok((
                status,
                json!({
                    "factor_counts": h.factor_counts(),
                    "expected_factor_counts": (0..=*levels).map(|n| crate::site::expected_factor_count(n, fs.len())).collect::<Vec<_>>(),
                    "identity_failures": identities,
                    "levels": checks,
                    "emitted": emit.as_ref().map(|p| p.display().to_string()),
                }),
            ))
        }
        Command::Shrink { atlas } => {
            let (a, fs) = ss.atlas(atlas)?;
            match shrink_report(&fs, &a) {
                Some(s) => Ok((Status::Certified, json!({"shrink": s}))),
                None => Ok((Status::Refuted, json!({"shrink": null, "reason": "the elements do not generate the unit ideal of H⁰"}))),
            }
        }
    }
}

fn configure_threads() -> Result<(), String> {
    match std::env::var("DGWB_THREADS") {
        Err(_) => Ok(()),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // A second call in one process keeps the first pool.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                Ok(())
            }
            _ => Err(format!("DGWB_THREADS must be a positive integer, got '{s}'")),
        },
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    if let Err(m) = configure_threads() {
        return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("dgwb: {m}\n") };
    }
    let start = Instant::now();
    let mut ss = Session { order: cli.order.kind(), inputs: Vec::new() };
    let (status, result) = match execute(&cli.command, &mut ss) {
        Ok(x) => x,
        Err(Fail::Usage(m)) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("dgwb: {m}\n") },
        Err(Fail::Data(m)) => return Outcome { code: EXIT_DATA, stdout: String::new(), stderr: format!("dgwb: {m}\n") },
        Err(Fail::Invalid(m)) => (Status::Invalid, json!({"error": m})),
        Err(Fail::Unsupported(m)) => (Status::Inconclusive, json!({"error": m})),
    };
    let mut rep = json!({
        "tool": "dgwb",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": cli.command.name(),
        "inputs": ss.inputs,
        "status": status.as_str(),
        "result": result,
    });
    if cli.timing {
        rep["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    let stdout = match cli.format {
        Format::Json => report::to_json(&rep),
        Format::Text => report::to_text(&rep),
    };
    Outcome { code: status.exit_code(), stdout, stderr: String::new() }
}
