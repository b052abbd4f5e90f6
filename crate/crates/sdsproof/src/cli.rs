//! The `sdsproof` command line: argument definitions and dispatch.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use sdsproof_core::canon::Canonicalizer;
use sdsproof_core::domain::{expand_domain_with, full_domain_with, manipulation_edges, DistanceTable, DomainError, DomainGraph};
use sdsproof_core::efficiency::{is_efficient_lottery, minimal_inefficient_supports, pareto_dominated_alternatives, Efficiency};
use sdsproof_core::encode::{build_system, emit_smtlib, sds_assignment, ConstraintSystem};
use sdsproof_core::lottery::{expected_utility, rsd, sample_consistent_utility, Lottery};
use sdsproof_core::prefs::{enumerate_weak_orders, PrefsError, Profile};
use sdsproof_core::verify::{
    check_assignment, check_certificate, check_unsat_with, replay_step, Budget, ProofStep, ReplayError, UnsatResult,
};

use crate::formats::{self, format_domain, load_appendix, load_profile, parse_domain, FormatError};
use crate::report::RunReport;
use crate::solver::{Solver, SolverError, SolverStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const DEFAULT_RNG_SEED: u64 = 20170901;

#[derive(Debug, Parser)]
#[command(name = "sdsproof", version, about = "Exact tools for impossibility proofs about social decision schemes")]
pub struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampled utilities.
    #[arg(long = "seed-rng", global = true, default_value_t = DEFAULT_RNG_SEED)]
    pub seed_rng: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count (or list) the weak orders over m alternatives.
    Enumerate {
        /// Number of alternatives.
        #[arg(short)]
        m: usize,
        /// Print every order, not just the count.
        #[arg(long)]
        list: bool,
    },
    /// Canonicalize a profile file, or count canonical profiles.
    Canon {
        /// Profile file, one weak order per line.
        file: Option<PathBuf>,
        /// Count the canonical profiles for -m alternatives and -n agents.
        #[arg(long)]
        count: bool,
        #[arg(short)]
        m: Option<usize>,
        #[arg(short)]
        n: Option<usize>,
    },
    /// Orbits and automorphisms of a profile.
    Orbits { file: PathBuf },
    /// Pareto-dominated alternatives, inefficient supports, and lottery efficiency.
    Eff {
        file: PathBuf,
        /// e.g. `1/2*a + 1/2*b`
        #[arg(long)]
        lottery: Option<String>,
    },
    /// Random serial dictatorship lottery of a profile.
    Rsd { file: PathBuf },
    /// Breadth-first manipulation domain from a seed profile.
    Expand {
        /// Seed profile file.
        #[arg(long)]
        seed: PathBuf,
        /// Manipulation distances per step, e.g. `1,2,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        schedule: Vec<u32>,
        /// Write the domain file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the constraint system as SMT-LIB.
    Encode {
        #[command(flatten)]
        input: Input,
        /// Name every assertion and request an unsat core.
        #[arg(long)]
        named: bool,
        /// Write the SMT-LIB text here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an external SMT solver on the constraint system.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Solver executable (default: $SDS_SOLVER, then z3 on PATH).
        #[arg(long)]
        solver: Option<PathBuf>,
        /// Seconds.
        #[arg(long)]
        timeout: Option<u64>,
        /// Request an unsat core.
        #[arg(long)]
        core: bool,
        /// Re-prove a returned core with the built-in checker.
        #[arg(long, requires = "core")]
        check_core: bool,
    },
    /// Prove the constraint system unsatisfiable with the built-in checker.
    VerifyUnsat {
        #[command(flatten)]
        input: Input,
        /// Branch budget before giving up as inconclusive.
        #[arg(long, default_value_t = Budget::default().max_nodes)]
        max_nodes: usize,
    },
    /// Replay the bundled proof script of an appendix directory.
    VerifyAppendix { dir: PathBuf },
    /// Check that random serial dictatorship satisfies every constraint.
    CheckRsd {
        #[command(flatten)]
        input: Input,
        /// Use every canonical profile for -m/-n.
        #[arg(long)]
        full: bool,
        #[arg(short)]
        m: Option<usize>,
        #[arg(short)]
        n: Option<usize>,
        /// Manipulation distance for --full.
        #[arg(long, default_value_t = 2)]
        distance: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Canon { .. } => "canon",
            Command::Orbits { .. } => "orbits",
            Command::Eff { .. } => "eff",
            Command::Rsd { .. } => "rsd",
            Command::Expand { .. } => "expand",
            Command::Encode { .. } => "encode",
            Command::Solve { .. } => "solve",
            Command::VerifyUnsat { .. } => "verify-unsat",
            Command::VerifyAppendix { .. } => "verify-appendix",
            Command::CheckRsd { .. } => "check-rsd",
        }
    }
}

/// Where a constraint system comes from: an appendix directory or domain
/// file given positionally, or one of the flags.
#[derive(Debug, Clone, Default, Args)]
pub struct Input {
    /// Appendix directory or domain file.
    pub path: Option<PathBuf>,
    /// Seed profile to expand with --schedule.
    #[arg(long)]
    pub seed: Option<PathBuf>,
    /// Manipulation distances per expansion step, e.g. `1,2,2`.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Vec<u32>,
    /// Domain file written by `expand`.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Appendix directory (profiles, manipulations, automorphisms, proof).
    #[arg(long)]
    pub appendix: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Prefs(#[from] PrefsError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => EXIT_SOLVER,
            _ => EXIT_USAGE,
        }
    }
}

/// What a command produced: text for the terminal and the report payload.
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
    pub text: String,
    pub parameters: BTreeMap<String, Value>,
    pub result: Value,
}

impl Outcome {
    fn new(status: &str, exit_code: i32, text: String, result: Value) -> Self {
        Outcome { status: status.to_string(), exit_code, text, parameters: BTreeMap::new(), result }
    }

    fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

/// Runs one parsed command. The returned text is what the text mode
/// prints; the report is what `--json` prints.
pub fn run(cli: &Cli) -> Result<(Outcome, RunReport), CliError> {
    let start = Instant::now();
    let outcome = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }?;
    let mut parameters = outcome.parameters.clone();
    if let Some(t) = cli.threads {
        parameters.insert("threads".into(), t.into());
    }
    parameters.insert("seed_rng".into(), cli.seed_rng.into());
    let report = RunReport {
        command: cli.command.name().to_string(),
        parameters,
        wall_seconds: start.elapsed().as_secs_f64(),
        status: outcome.status.clone(),
        exit_code: outcome.exit_code,
        result: outcome.result.clone(),
    };
    Ok((outcome, report))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Enumerate { m, list } => enumerate(*m, *list),
        Command::Canon { file, count, m, n } => canon(file.as_deref(), *count, *m, *n),
        Command::Orbits { file } => orbits(file),
        Command::Eff { file, lottery } => eff(file, lottery.as_deref(), cli.seed_rng),
        Command::Rsd { file } => rsd_cmd(file),
        Command::Expand { seed, schedule, out } => expand(seed, schedule, out.as_deref()),
        Command::Encode { input, named, out } => encode(input, *named, out.as_deref()),
        Command::Solve { input, solver, timeout, core, check_core } => {
            solve(input, solver.as_deref(), *timeout, *core, *check_core)
        }
        Command::VerifyUnsat { input, max_nodes } => verify_unsat(input, *max_nodes),
        Command::VerifyAppendix { dir } => verify_appendix(dir),
        Command::CheckRsd { input, full, m, n, distance } => check_rsd(input, *full, *m, *n, *distance),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn enumerate(m: usize, list: bool) -> Result<Outcome, CliError> {
    let orders = enumerate_weak_orders(m)?;
    let mut text = format!("{}\n", orders.len());
    if list {
        for o in &orders {
            text += &format!("{o}\n");
        }
    }
    let mut result = json!({ "m": m, "count": orders.len() });
    if list {
        result["orders"] = orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().into();
    }
    Ok(Outcome::new("ok", EXIT_OK, text, result).param("m", m))
}

fn canon(file: Option<&Path>, count: bool, m: Option<usize>, n: Option<usize>) -> Result<Outcome, CliError> {
    if count {
        let (Some(m), Some(n)) = (m, n) else {
            return Err(CliError::Usage("canon --count needs -m and -n".into()));
        };
        let total = count_canonical(m, n)?;
        return Ok(Outcome::new("ok", EXIT_OK, format!("{total}\n"), json!({ "m": m, "n": n, "count": total }))
            .param("m", m)
            .param("n", n));
    }
    let file = file.ok_or_else(|| CliError::Usage("canon needs a profile file or --count".into()))?;
    let profile = load_profile(file)?;
    let c = Canonicalizer::new(profile.num_alternatives())?;
    let cp = c.canonicalize_profile(&profile)?;
    let realized = c.realize(&cp.anon);
    let text = format!("{realized}\nkey: {}\nrelabeling: {}\nclass size: {}\n", cp.anon.key(), cp.witness, c.class_size(&cp.anon));
    let result = json!({
        "profile": realized.to_string().lines().collect::<Vec<_>>(),
        "key": cp.anon.key(),
        "relabeling": cp.witness.to_string(),
        "class_size": c.class_size(&cp.anon),
    });
    Ok(Outcome::new("ok", EXIT_OK, text, result).param("file", path_str(file)))
}

/// Number of canonical profiles, split by the smallest order index across
/// worker threads. Progress goes to stderr.
pub fn count_canonical(m: usize, n: usize) -> Result<usize, CliError> {
    let c = Canonicalizer::new(m)?;
    let firsts: Vec<usize> = (0..c.table().len()).collect();
    let done = AtomicUsize::new(0);
    let counts: Result<Vec<usize>, PrefsError> = firsts
        .par_iter()
        .map(|&f| {
            let k = c.canonical_profiles_starting_with(n, f)?.len();
            let d = done.fetch_add(1, Ordering::Relaxed) + 1;
            if firsts.len() > 20 && d.is_multiple_of(10) {
                eprintln!("canon: {d}/{} leading orders", firsts.len());
            }
            Ok(k)
        })
        .collect();
    Ok(counts?.into_iter().sum())
}

fn orbits(file: &Path) -> Result<Outcome, CliError> {
    let profile = load_profile(file)?;
    let c = Canonicalizer::new(profile.num_alternatives())?;
    let anon = c.anonymize(&profile)?;
    let orbits = c.orbits(&anon);
    let autos = c.automorphisms(&anon);
    let blocks: Vec<String> = orbits.blocks.iter().map(|b| b.to_string()).collect();
    let cycles: Vec<String> = autos.iter().map(|p| p.to_string()).collect();
    let text = format!("orbits: {}\nautomorphisms: {}\n", blocks.join(" "), cycles.join(" "));
    Ok(Outcome::new("ok", EXIT_OK, text, json!({ "orbits": blocks, "automorphisms": cycles })).param("file", path_str(file)))
}

fn eff(file: &Path, lottery: Option<&str>, seed: u64) -> Result<Outcome, CliError> {
    let profile = load_profile(file)?;
    let m = profile.num_alternatives();
    let dominated = pareto_dominated_alternatives(&profile);
    let supports: Vec<String> = minimal_inefficient_supports(&profile).iter().map(|s| s.to_string()).collect();
    let mut text = format!("pareto dominated: {dominated}\nminimal inefficient supports: {}\n", supports.join(" "));
    let mut result = json!({ "pareto_dominated": dominated.to_string(), "minimal_inefficient_supports": supports });
    let mut status = "ok";
    if let Some(l) = lottery {
        let p = Lottery::parse(l, m).map_err(|e| CliError::Usage(format!("lottery: {e}")))?;
        match is_efficient_lottery(&profile, &p)? {
            Efficiency::Efficient => {
                text += &format!("{p}: efficient\n");
                result["lottery"] = json!({ "lottery": p.to_string(), "efficient": true });
            }
            Efficiency::DominatedBy(q) => {
                status = "dominated";
                text += &format!("{p}: dominated by {q}\n");
                // sampled consistent utilities never rank the dominated lottery higher
                let checks: Vec<Value> = profile
                    .orders()
                    .iter()
                    .enumerate()
                    .map(|(i, o)| {
                        let u = sample_consistent_utility(o, seed.wrapping_add(i as u64));
                        let (eq, ep) = (expected_utility(&u, &q), expected_utility(&u, &p));
                        text += &format!("  agent {}: u = {u}, E[q] = {eq}, E[p] = {ep}\n", i + 1);
                        json!({ "agent": i + 1, "utility": u.to_string(), "dominator": eq.to_string(), "lottery": ep.to_string() })
                    })
                    .collect();
                result["lottery"] = json!({ "lottery": p.to_string(), "efficient": false, "dominated_by": q.to_string(), "sampled_utilities": checks });
            }
        }
    }
    Ok(Outcome::new(status, EXIT_OK, text, result).param("file", path_str(file)))
}

fn rsd_cmd(file: &Path) -> Result<Outcome, CliError> {
    let profile = load_profile(file)?;
    let p = rsd(&profile);
    let probs: Vec<String> = p.probs().iter().map(|r| r.to_string()).collect();
    Ok(Outcome::new("ok", EXIT_OK, format!("{p}\n"), json!({ "lottery": p.to_string(), "probabilities": probs }))
        .param("file", path_str(file)))
}

/// Breadth-first expansion with each level's edges computed in parallel.
pub fn expand_parallel(c: &Canonicalizer, seed: &Profile, schedule: &[u32]) -> Result<DomainGraph, DomainError> {
    let dist = DistanceTable::new(c);
    expand_domain_with(c, seed, schedule, |level, k| {
        level.par_iter().map(|src| manipulation_edges(c, &dist, src, k)).collect()
    })
}

fn expand(seed: &Path, schedule: &[u32], out: Option<&Path>) -> Result<Outcome, CliError> {
    let profile = load_profile(seed)?;
    let c = Canonicalizer::new(profile.num_alternatives())?;
    let g = expand_parallel(&c, &profile, schedule)?;
    let body = format_domain(&g);
    let mut result = json!({ "profiles": g.nodes.len(), "edges": g.edges.len() });
    let text = match out {
        Some(path) => {
            write_out(path, &body)?;
            result["out"] = path_str(path).into();
            format!("{} profiles, {} edges -> {}\n", g.nodes.len(), g.edges.len(), path.display())
        }
        None => body,
    };
    let schedule: Vec<Value> = schedule.iter().map(|&k| k.into()).collect();
    Ok(Outcome::new("ok", EXIT_OK, text, result).param("seed", path_str(seed)).param("schedule", schedule))
}

/// A loaded constraint source.
pub struct Loaded {
    pub canon: Canonicalizer,
    pub graph: DomainGraph,
    pub proof: Option<Vec<ProofStep>>,
    pub description: String,
}

impl Loaded {
    pub fn system(&self) -> ConstraintSystem {
        build_system(&self.canon, &self.graph, self.description.clone())
    }
}

pub fn load_input(input: &Input) -> Result<Loaded, CliError> {
    let mut sources = 0;
    let (mut appendix, mut domain) = (input.appendix.clone(), input.domain.clone());
    if let Some(p) = &input.path {
        if p.is_dir() {
            appendix = Some(p.clone());
        } else {
            domain = Some(p.clone());
        }
        sources += 1;
    }
    sources += usize::from(input.appendix.is_some()) + usize::from(input.domain.is_some()) + usize::from(input.seed.is_some());
    if sources != 1 {
        return Err(CliError::Usage("give exactly one of PATH, --appendix, --domain, --seed".into()));
    }
    if let Some(dir) = appendix {
        let canon = Canonicalizer::new(4)?;
        let app = load_appendix(&dir, &canon)?;
        let description = format!("appendix system from {}", dir.display());
        return Ok(Loaded { canon, graph: app.graph, proof: app.proof, description });
    }
    if let Some(file) = domain {
        let text = formats::read_file(&file)?;
        let graph = parse_domain(&text, &path_str(&file))?;
        let canon = Canonicalizer::new(graph.m)?;
        return Ok(Loaded { canon, graph, proof: None, description: format!("domain {}", file.display()) });
    }
    let seed = input.seed.as_ref().expect("one source");
    if input.schedule.is_empty() {
        return Err(CliError::Usage("--seed needs --schedule".into()));
    }
    let profile = load_profile(seed)?;
    let canon = Canonicalizer::new(profile.num_alternatives())?;
    let graph = expand_parallel(&canon, &profile, &input.schedule)?;
    let schedule: Vec<String> = input.schedule.iter().map(|k| k.to_string()).collect();
    let description = format!("domain from {} with schedule {}", seed.display(), schedule.join(","));
    Ok(Loaded { canon, graph, proof: None, description })
}

fn input_params(o: Outcome, input: &Input) -> Outcome {
    let mut o = o;
    for (k, v) in [("path", &input.path), ("seed", &input.seed), ("domain", &input.domain), ("appendix", &input.appendix)] {
        if let Some(p) = v {
            o = o.param(k, path_str(p));
        }
    }
    if !input.schedule.is_empty() {
        let s: Vec<Value> = input.schedule.iter().map(|&k| k.into()).collect();
        o = o.param("schedule", s);
    }
    o
}

fn encode(input: &Input, named: bool, out: Option<&Path>) -> Result<Outcome, CliError> {
    let system = load_input(input)?.system();
    let smt = emit_smtlib(&system, named);
    let mut result = json!({ "clauses": system.clauses.len(), "variables": system.variables().len(), "profiles": system.profiles.len() });
    let text = match out {
        Some(path) => {
            write_out(path, &smt)?;
            result["out"] = path_str(path).into();
            format!("{} clauses, {} variables -> {}\n", system.clauses.len(), system.variables().len(), path.display())
        }
        None => {
            result["smtlib"] = smt.clone().into();
            smt
        }
    };
    Ok(input_params(Outcome::new("ok", EXIT_OK, text, result), input).param("named", named))
}

fn solve(input: &Input, solver: Option<&Path>, timeout: Option<u64>, core: bool, check_core: bool) -> Result<Outcome, CliError> {
    let system = load_input(input)?.system();
    let solver = Solver::locate(solver)?.with_timeout(timeout.map(Duration::from_secs));
    let status = solver.run(&emit_smtlib(&system, core), core)?;
    let mut result = json!({ "solver": path_str(&solver.path), "clauses": system.clauses.len() });
    let (status_name, exit, mut text) = match &status {
        SolverStatus::Sat => ("sat", EXIT_OK, "sat\n".to_string()),
        SolverStatus::Unsat { core: None } => ("unsat", EXIT_OK, "unsat\n".to_string()),
        SolverStatus::Unsat { core: Some(names) } => {
            result["core"] = names.clone().into();
            ("unsat", EXIT_OK, format!("unsat\ncore ({}): {}\n", names.len(), names.join(" ")))
        }
        SolverStatus::Unknown { reason } => {
            result["reason"] = reason.clone().into();
            ("unknown", EXIT_SOLVER, format!("unknown: {reason}\n"))
        }
    };
    let mut exit = exit;
    if let (true, SolverStatus::Unsat { core: Some(names) }) = (check_core, &status) {
        let chosen: Vec<_> = system.clauses.iter().filter(|c| names.contains(&c.name)).cloned().collect();
        let verdict = check_unsat_with(&chosen, Budget::default());
        let checked = matches!(&verdict, UnsatResult::Unsat(cert) if check_certificate(&chosen, cert));
        text += &format!("core re-proved by built-in checker: {}\n", if checked { "yes" } else { "no" });
        result["core_checked"] = checked.into();
        if !checked {
            exit = EXIT_NEGATIVE;
        }
    }
    result["status"] = status_name.into();
    let mut o = input_params(Outcome::new(status_name, exit, text, result), input).param("core", core);
    if let Some(t) = timeout {
        o = o.param("timeout", t);
    }
    Ok(o)
}

fn verify_unsat(input: &Input, max_nodes: usize) -> Result<Outcome, CliError> {
    let system = load_input(input)?.system();
    let verdict = check_unsat_with(&system.clauses, Budget { max_nodes });
    let (status, exit, text, result) = match &verdict {
        UnsatResult::Unsat(cert) => {
            let checked = check_certificate(&system.clauses, cert);
            let result = json!({
                "clauses": system.clauses.len(),
                "branches": cert.branch_count(),
                "leaves": cert.leaf_count(),
                "farkas_certificates": cert.refutations().len(),
                "clauses_used": cert.used_clauses(&system.clauses).len(),
                "certificate_checked": checked,
            });
            let text = format!(
                "Unsat: {} clauses, {} branches, {} Farkas certificates, certificate {}\n",
                system.clauses.len(),
                cert.branch_count(),
                cert.refutations().len(),
                if checked { "checked" } else { "REJECTED" }
            );
            if checked {
                ("Unsat", EXIT_OK, text, result)
            } else {
                ("CertificateRejected", EXIT_NEGATIVE, text, result)
            }
        }
        UnsatResult::Sat(w) => {
            let assignment: BTreeMap<String, String> = w.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            ("Sat", EXIT_NEGATIVE, "Sat\n".to_string(), json!({ "clauses": system.clauses.len(), "assignment": assignment }))
        }
        UnsatResult::Inconclusive { nodes } => (
            "Inconclusive",
            EXIT_NEGATIVE,
            format!("Inconclusive after {nodes} branches\n"),
            json!({ "clauses": system.clauses.len(), "branches": nodes }),
        ),
    };
    Ok(input_params(Outcome::new(status, exit, text, result), input).param("max_nodes", max_nodes))
}

fn verify_appendix(dir: &Path) -> Result<Outcome, CliError> {
    let loaded = load_input(&Input { appendix: Some(dir.to_path_buf()), ..Input::default() })?;
    let steps = loaded
        .proof
        .clone()
        .ok_or_else(|| CliError::Usage(format!("{}: no proof.txt", dir.display())))?;
    let system = loaded.system();
    let reports: Result<Vec<_>, ReplayError> = steps.par_iter().map(|s| replay_step(s, &system)).collect();
    let reports = reports?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let (mut passed, mut branches) = (0, 0);
    for r in &reports {
        let ok = r.passed();
        passed += usize::from(ok);
        branches += r.branch_count();
        let entailed = r.claims.iter().filter(|c| c.entailed()).count();
        let kind = if r.expect_fail { "control" } else { "step" };
        text += &format!("{:<4} {:<8} {:<28} {}/{} claims\n", if ok { "PASS" } else { "FAIL" }, kind, r.name, entailed, r.claims.len());
        rows.push(json!({ "step": r.name, "passed": ok, "expect_fail": r.expect_fail, "claims": r.claims.len(), "entailed": entailed, "branches": r.branch_count() }));
    }
    let all = passed == reports.len();
    text += &format!("{passed}/{} steps pass, {branches} branches\n", reports.len());
    let result = json!({ "steps": rows, "passed": passed, "total": reports.len(), "branches": branches });
    Ok(Outcome::new(if all { "pass" } else { "fail" }, if all { EXIT_OK } else { EXIT_NEGATIVE }, text, result)
        .param("dir", path_str(dir)))
}

/// Every canonical profile with all edges up to `distance`, each profile's
/// edges computed in parallel.
pub fn full_domain_parallel(c: &Canonicalizer, n: usize, distance: u32) -> Result<DomainGraph, DomainError> {
    let dist = DistanceTable::new(c);
    full_domain_with(c, n, |profiles| profiles.par_iter().map(|p| manipulation_edges(c, &dist, p, distance)).collect())
}

fn check_rsd(input: &Input, full: bool, m: Option<usize>, n: Option<usize>, distance: u32) -> Result<Outcome, CliError> {
    let (system, graph, params) = if full {
        let (Some(m), Some(n)) = (m, n) else {
            return Err(CliError::Usage("check-rsd --full needs -m and -n".into()));
        };
        let c = Canonicalizer::new(m)?;
        let g = full_domain_parallel(&c, n, distance)?;
        let sys = build_system(&c, &g, format!("all canonical profiles, m = {m}, n = {n}"));
        (sys, g, vec![("m", Value::from(m)), ("n", n.into()), ("distance", distance.into()), ("full", true.into())])
    } else {
        let loaded = load_input(input)?;
        (loaded.system(), loaded.graph, Vec::new())
    };
    let assignment = sds_assignment(&graph, rsd);
    let violated: Vec<String> = system
        .clauses
        .par_iter()
        .filter(|cl| !cl.holds(&assignment).unwrap_or(false))
        .map(|cl| cl.name.clone())
        .collect();
    let holds = violated.is_empty();
    debug_assert_eq!(holds, check_assignment(&system.clauses, &assignment).unwrap_or(false));
    let text = if holds {
        format!("RSD satisfies all {} constraints on {} profiles\n", system.clauses.len(), graph.nodes.len())
    } else {
        format!("RSD violates {} of {} constraints: {}\n", violated.len(), system.clauses.len(), violated.join(" "))
    };
    let result = json!({ "clauses": system.clauses.len(), "profiles": graph.nodes.len(), "holds": holds, "violated": violated });
    let mut o = Outcome::new(if holds { "holds" } else { "violated" }, if holds { EXIT_OK } else { EXIT_NEGATIVE }, text, result);
    for (k, v) in params {
        o = o.param(k, v);
    }
    Ok(input_params(o, input))
}
