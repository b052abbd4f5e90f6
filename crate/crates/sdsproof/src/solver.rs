//! Runs an external SMT solver on emitted SMT-LIB text.

use std::env;
use std::ffi::OsStr;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use thiserror::Error;
use wait_timeout::ChildExt;

/// Environment variable naming the default solver executable.
pub const SOLVER_ENV: &str = "SDS_SOLVER";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverStatus {
    Sat,
    /// `core` holds the assertion names when a core was requested.
    Unsat { core: Option<Vec<String>> },
    Unknown { reason: String },
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("no solver found: pass --solver or set {SOLVER_ENV}")]
    NotFound,
    #[error("cannot run {path}: {source}")]
    Spawn { path: PathBuf, source: std::io::Error },
    #[error("solver i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("unexpected solver output: {0}")]
    Output(String),
}

#[derive(Debug, Clone)]
pub struct Solver {
    pub path: PathBuf,
    pub args: Vec<String>,
    pub timeout: Option<Duration>,
}

impl Solver {
    /// A solver reading SMT-LIB from stdin, with arguments chosen from the
    /// executable's name.
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let name = path.file_name().and_then(OsStr::to_str).unwrap_or("").to_ascii_lowercase();
        let args = if name.starts_with("z3") {
            vec!["-in".to_string(), "-smt2".to_string()]
        } else if name.starts_with("cvc") {
            vec!["--lang=smt2".to_string()]
        } else if name.starts_with("mathsat") {
            vec!["-input=smt2".to_string()]
        } else {
            Vec::new()
        };
        Solver { path, args, timeout: None }
    }

    /// `explicit`, else the `SDS_SOLVER` variable, else `z3` on `PATH`.
    pub fn locate(explicit: Option<&Path>) -> Result<Solver, SolverError> {
        if let Some(p) = explicit {
            return Ok(Solver::new(p));
        }
        if let Some(p) = env::var_os(SOLVER_ENV).filter(|p| !p.is_empty()) {
            return Ok(Solver::new(PathBuf::from(p)));
        }
        find_on_path("z3").map(Solver::new).ok_or(SolverError::NotFound)
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn run(&self, smt: &str, want_core: bool) -> Result<SolverStatus, SolverError> {
        let mut child = Command::new(&self.path)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolverError::Spawn { path: self.path.clone(), source })?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let input = smt.to_string();
        let writer = thread::spawn(move || {
            // a solver that exits early closes the pipe; its output decides
            let _ = stdin.write_all(input.as_bytes());
        });
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        let finished = match self.timeout {
            Some(t) => child.wait_timeout(t)?.is_some(),
            None => {
                child.wait()?;
                true
            }
        };
        if !finished {
            let _ = child.kill();
            let _ = child.wait();
            let _ = writer.join();
            let _ = reader.join();
            return Ok(SolverStatus::Unknown { reason: "timeout".to_string() });
        }
        let _ = writer.join();
        let out = reader.join().map_err(|_| SolverError::Output("reader thread panicked".into()))??;
        parse_output(&out, want_core)
    }
}

pub fn find_on_path(name: &str) -> Option<PathBuf> {
    let path = env::var_os("PATH")?;
    env::split_paths(&path).map(|d| d.join(name)).find(|p| p.is_file())
}

/// Reads the first status token, skipping banner lines. After `unsat`,
/// the first parenthesized list is taken as the core when requested.
pub fn parse_output(text: &str, want_core: bool) -> Result<SolverStatus, SolverError> {
    let mut lines = text.lines().map(str::trim);
    let status = lines
        .by_ref()
        .find(|l| matches!(*l, "sat" | "unsat" | "unknown"))
        .ok_or_else(|| SolverError::Output(first_line(text)))?;
    match status {
        "sat" => Ok(SolverStatus::Sat),
        "unknown" => Ok(SolverStatus::Unknown { reason: "solver returned unknown".to_string() }),
        _ if !want_core => Ok(SolverStatus::Unsat { core: None }),
        _ => {
            let rest: Vec<&str> = lines.collect();
            let rest = rest.join(" ");
            let open = rest.find('(').ok_or_else(|| SolverError::Output("missing unsat core".into()))?;
            let close = rest[open..].find(')').ok_or_else(|| SolverError::Output("unterminated unsat core".into()))?;
            let body = &rest[open + 1..open + close];
            if body.trim_start().starts_with("error") {
                return Err(SolverError::Output(body.trim().to_string()));
            }
            let core = body.split_whitespace().map(|s| s.trim_matches('|').to_string()).collect();
            Ok(SolverStatus::Unsat { core: Some(core) })
        }
    }
}

fn first_line(text: &str) -> String {
    text.lines().next().unwrap_or("(no output)").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_output("sat\n", false).unwrap(), SolverStatus::Sat);
        assert_eq!(parse_output("banner v1\nunsat\n", false).unwrap(), SolverStatus::Unsat { core: None });
        assert_eq!(
            parse_output("unsat\n(lot_R1_sum\n |S_1_2|)\n", true).unwrap(),
            SolverStatus::Unsat { core: Some(vec!["lot_R1_sum".into(), "S_1_2".into()]) }
        );
        assert!(matches!(parse_output("unknown\n", false).unwrap(), SolverStatus::Unknown { .. }));
        assert!(parse_output("(error \"bad\")\n", false).is_err());
        assert!(parse_output("unsat\n", true).is_err());
    }

    #[test]
    fn arguments_follow_the_executable() {
        assert_eq!(Solver::new("/usr/bin/z3").args, vec!["-in", "-smt2"]);
        assert!(Solver::new("yices-smt2").args.is_empty());
    }
}
