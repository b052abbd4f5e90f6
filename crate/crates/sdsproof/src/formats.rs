//! Text formats: profile files, linear atoms and clauses, the bundled
//! appendix dataset, domain graph files, and proof scripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sdsproof_core::canon::Canonicalizer;
use sdsproof_core::domain::{DomainError, DomainGraph, DomainNode, ManipulationEdge};
use sdsproof_core::encode::{Atom, Clause, LinExpr, Rel, Var};
use sdsproof_core::lottery::{parse_rational, Rational};
use sdsproof_core::prefs::{parse_weak_order, Alternative, Permutation, PrefsError, Profile};
use sdsproof_core::verify::ProofStep;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file}:{line}: {message}")]
    Syntax { file: String, line: usize, message: String },
    #[error("{0}")]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Prefs(#[from] PrefsError),
}

fn syntax(file: &str, line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { file: file.to_string(), line, message: message.into() }
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Lines with `#` comments removed, blank lines skipped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// One weak order per line.
pub fn parse_profile_text(text: &str, file: &str) -> Result<Profile, FormatError> {
    let mut orders = Vec::new();
    for (line, l) in content_lines(text) {
        orders.push(parse_weak_order(l).map_err(|e| syntax(file, line, e.to_string()))?);
    }
    if orders.is_empty() {
        return Err(syntax(file, 0, "no preference orders"));
    }
    Ok(Profile::new(orders)?)
}

pub fn load_profile(path: &Path) -> Result<Profile, FormatError> {
    parse_profile_text(&read_file(path)?, &path.display().to_string())
}

/// Profile in a single line: orders separated by `;`.
pub fn parse_inline_profile(text: &str) -> Result<Profile, PrefsError> {
    Profile::parse(text.split(';').map(str::trim))
}

pub fn format_inline_profile(p: &Profile) -> String {
    p.orders().iter().map(|o| o.to_string()).collect::<Vec<_>>().join("; ")
}

fn parse_label(s: &str) -> Option<usize> {
    s.trim().strip_prefix('R')?.parse().ok()
}

/// `p[R39][d]`.
fn parse_var(s: &str) -> Option<Var> {
    let rest = s.trim().strip_prefix("p[")?;
    let (label, rest) = rest.split_once("][")?;
    let alt = rest.strip_suffix(']')?;
    let mut cs = alt.chars();
    let x = Alternative::from_letter(cs.next()?)?;
    if cs.next().is_some() {
        return None;
    }
    Some(Var::new(parse_label(label)?, x))
}

/// Sum of terms such as `p[R1][a] + 2*p[R2][b] - 1/2`.
pub fn parse_expr(text: &str) -> Result<LinExpr, String> {
    let mut expr = LinExpr::zero();
    let mut sign = Rational::from_integer(1.into());
    let mut pending = String::new();
    let flush = |term: &str, sign: &Rational, expr: &mut LinExpr| -> Result<(), String> {
        let term = term.trim();
        if term.is_empty() {
            return Err("missing term".into());
        }
        let (coef, body) = match term.split_once('*') {
            Some((c, b)) => (parse_rational(c).ok_or_else(|| format!("bad coefficient '{c}'"))?, b.trim()),
            None => (Rational::from_integer(1.into()), term),
        };
        if let Some(v) = parse_var(body) {
            expr.add_term(v, sign * coef);
        } else if let Some(c) = parse_rational(body) {
            expr.add_constant(&(sign * coef * c));
        } else {
            return Err(format!("bad term '{term}'"));
        }
        Ok(())
    };
    let mut first = true;
    for c in text.chars() {
        match c {
            '+' | '-' => {
                if !(first && pending.trim().is_empty()) {
                    flush(&pending, &sign, &mut expr)?;
                }
                pending.clear();
                sign = Rational::from_integer(if c == '-' { (-1).into() } else { 1.into() });
            }
            _ => pending.push(c),
        }
        if !c.is_whitespace() {
            first = false;
        }
    }
    flush(&pending, &sign, &mut expr)?;
    Ok(expr)
}

/// `lhs OP rhs` with OP one of `<=`, `<`, `=`, `>=`, `>`.
pub fn parse_atom(text: &str) -> Result<Atom, String> {
    for (op, rel, swap) in [("<=", Rel::Le, false), (">=", Rel::Le, true), ("<", Rel::Lt, false), (">", Rel::Lt, true), ("=", Rel::Eq, false)] {
        if let Some((l, r)) = text.split_once(op) {
            let (l, r) = (parse_expr(l)?, parse_expr(r)?);
            return Ok(if swap { Atom::new(r, rel, l) } else { Atom::new(l, rel, r) });
        }
    }
    Err(format!("no relation in '{}'", text.trim()))
}

/// `NAME: atom & atom | atom`.
pub fn parse_clause(text: &str) -> Result<Clause, String> {
    let (name, body) = text.split_once(':').ok_or("missing ':' after the clause name")?;
    let cubes = body
        .split('|')
        .map(|cube| cube.split('&').map(parse_atom).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Clause { name: name.trim().to_string(), cubes })
}

pub fn parse_clause_file(text: &str, file: &str) -> Result<Vec<Clause>, FormatError> {
    content_lines(text).map(|(line, l)| parse_clause(l).map_err(|e| syntax(file, line, e))).collect()
}

/// `R1: order; order; ...` lines.
pub fn parse_profile_table(text: &str, file: &str) -> Result<Vec<(usize, Profile)>, FormatError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let (label, body) = l.split_once(':').ok_or_else(|| syntax(file, line, "expected 'R<id>: ...'"))?;
        let id = parse_label(label).ok_or_else(|| syntax(file, line, format!("bad profile label '{label}'")))?;
        let profile = parse_inline_profile(body).map_err(|e| syntax(file, line, e.to_string()))?;
        out.push((id, profile));
    }
    Ok(out)
}

/// `R10: (a d)(b c)` lines.
pub fn parse_automorphism_table(text: &str, file: &str, m: usize) -> Result<Vec<(usize, Permutation)>, FormatError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let (label, body) = l.split_once(':').ok_or_else(|| syntax(file, line, "expected 'R<id>: ...'"))?;
        let id = parse_label(label).ok_or_else(|| syntax(file, line, format!("bad profile label '{label}'")))?;
        let pi = Permutation::parse_cycles(body, m).map_err(|e| syntax(file, line, e.to_string()))?;
        out.push((id, pi));
    }
    Ok(out)
}

/// `NAME | R<src> | R<tgt> | agent (1-based) | truthful | misreport | map`.
pub fn parse_edge_table(text: &str, file: &str, m: usize) -> Result<Vec<ManipulationEdge>, FormatError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let f: Vec<&str> = l.split('|').map(str::trim).collect();
        if f.len() != 7 {
            return Err(syntax(file, line, format!("expected 7 fields, found {}", f.len())));
        }
        let err = |what: &str, v: &str| syntax(file, line, format!("bad {what} '{v}'"));
        let source = parse_label(f[1]).ok_or_else(|| err("source", f[1]))?;
        let target = parse_label(f[2]).ok_or_else(|| err("target", f[2]))?;
        let agent: usize = f[3].parse().ok().filter(|&a| a >= 1).ok_or_else(|| err("agent", f[3]))?;
        let truthful = parse_weak_order(f[4]).map_err(|_| err("order", f[4]))?;
        let misreport = parse_weak_order(f[5]).map_err(|_| err("order", f[5]))?;
        let map = Permutation::parse_cycles(f[6], m).map_err(|_| err("permutation", f[6]))?;
        out.push(ManipulationEdge { name: f[0].to_string(), source, target, agent: agent - 1, truthful, misreport, map });
    }
    Ok(out)
}

pub fn format_edge(e: &ManipulationEdge) -> String {
    format!("{} | R{} | R{} | {} | {} | {} | {}", e.name, e.source, e.target, e.agent + 1, e.truthful, e.misreport, e.map)
}

/// The bundled appendix dataset.
#[derive(Debug, Clone)]
pub struct Appendix {
    pub graph: DomainGraph,
    pub automorphisms: Vec<(usize, Permutation)>,
    pub proof: Option<Vec<ProofStep>>,
}

/// Loads `profiles.txt`, `manipulations.txt`, `automorphisms.txt` and, when
/// present, `proof.txt` from `dir`. Every manipulation row is checked.
pub fn load_appendix(dir: &Path, canon: &Canonicalizer) -> Result<Appendix, FormatError> {
    let m = canon.num_alternatives();
    let file = |name: &str| -> Result<(String, String), FormatError> {
        let p = dir.join(name);
        Ok((read_file(&p)?, p.display().to_string()))
    };
    let (text, name) = file("profiles.txt")?;
    let nodes = parse_profile_table(&text, &name)?;
    let (text, name) = file("manipulations.txt")?;
    let edges = parse_edge_table(&text, &name, m)?;
    let (text, name) = file("automorphisms.txt")?;
    let automorphisms = parse_automorphism_table(&text, &name, m)?;
    let graph = DomainGraph::from_parts(canon, nodes, edges)?;
    let proof_path = dir.join("proof.txt");
    let proof = if proof_path.exists() {
        Some(parse_proof_script(&read_file(&proof_path)?, &proof_path.display().to_string())?)
    } else {
        None
    };
    Ok(Appendix { graph, automorphisms, proof })
}

/// Domain graph file: header, profile section, edge section.
pub fn format_domain(g: &DomainGraph) -> String {
    let mut out = String::from("# sdsproof domain\n");
    let _ = writeln!(out, "m: {}", g.m);
    let _ = writeln!(out, "n: {}", g.n);
    if let Some(seed) = &g.seed {
        let _ = writeln!(out, "seed: {}", format_inline_profile(seed));
    }
    let schedule: Vec<String> = g.schedule.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(out, "schedule: {}", schedule.join(","));
    out.push_str("[profiles]\n");
    for node in &g.nodes {
        let _ = writeln!(out, "R{}: {}  # {}", node.id, format_inline_profile(&node.profile), node.anon.key());
    }
    out.push_str("[edges]\n");
    for e in &g.edges {
        let _ = writeln!(out, "{}", format_edge(e));
    }
    out
}

pub fn parse_domain(text: &str, file: &str) -> Result<DomainGraph, FormatError> {
    let mut header: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut section = "";
    let (mut profiles, mut edges) = (String::new(), String::new());
    for (line, l) in text.lines().enumerate() {
        let t = l.trim();
        if t == "[profiles]" || t == "[edges]" {
            section = t;
            continue;
        }
        match section {
            "[profiles]" => profiles.push_str(l),
            "[edges]" => edges.push_str(l),
            _ => {
                let t = t.split('#').next().unwrap_or("").trim();
                if let Some((k, v)) = t.split_once(':') {
                    header.insert(k.trim(), (line + 1, v.trim()));
                }
            }
        }
        profiles.push('\n');
        edges.push('\n');
    }
    let num = |key: &str| -> Result<usize, FormatError> {
        let (line, v) = header.get(key).ok_or_else(|| syntax(file, 0, format!("missing '{key}:' header")))?;
        v.parse().map_err(|_| syntax(file, *line, format!("bad {key}")))
    };
    let m = num("m")?;
    let n = num("n")?;
    let seed = match header.get("seed") {
        Some((line, v)) => Some(parse_inline_profile(v).map_err(|e| syntax(file, *line, e.to_string()))?),
        None => None,
    };
    let schedule = match header.get("schedule") {
        Some((line, v)) if !v.is_empty() => v
            .split(',')
            .map(|k| k.trim().parse().map_err(|_| syntax(file, *line, "bad schedule")))
            .collect::<Result<Vec<u32>, _>>()?,
        _ => Vec::new(),
    };
    let canon = Canonicalizer::new(m)?;
    let nodes = parse_profile_table(&profiles, file)?;
    let edges = parse_edge_table(&edges, file, m)?;
    let mut g = DomainGraph::from_parts(&canon, nodes, edges)?;
    if g.nodes.is_empty() {
        g.n = n;
    } else if g.n != n {
        return Err(syntax(file, 0, format!("header says n = {n} but profiles have {} agents", g.n)));
    }
    g.seed = seed;
    g.schedule = schedule;
    Ok(g)
}

pub fn node_by_label<'a>(g: &'a DomainGraph, label: &str) -> Option<&'a DomainNode> {
    g.node(parse_label(label)?)
}

/// Proof script: blocks opened by `step NAME`, followed by `use:`,
/// `assume:`, `claim:` and `expect: fail` lines. `use:` takes a
/// comma-separated list of clause names or `*` patterns.
pub fn parse_proof_script(text: &str, file: &str) -> Result<Vec<ProofStep>, FormatError> {
    let mut steps: Vec<ProofStep> = Vec::new();
    for (line, l) in content_lines(text) {
        if let Some(name) = l.strip_prefix("step ") {
            steps.push(ProofStep {
                name: name.trim().to_string(),
                assume: Vec::new(),
                uses: Vec::new(),
                claims: Vec::new(),
                expect_fail: false,
            });
            continue;
        }
        let step = steps.last_mut().ok_or_else(|| syntax(file, line, "expected 'step NAME'"))?;
        let (key, value) = l.split_once(':').ok_or_else(|| syntax(file, line, "expected 'key: value'"))?;
        let atom = |v: &str| parse_atom(v).map_err(|e| syntax(file, line, e));
        match key.trim() {
            "use" => step.uses.extend(value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty())),
            "assume" => step.assume.push(atom(value)?),
            "claim" => step.claims.push(atom(value)?),
            "expect" if value.trim() == "fail" => step.expect_fail = true,
            other => return Err(syntax(file, line, format!("unknown key '{other}'"))),
        }
    }
    for s in &steps {
        if s.claims.is_empty() {
            return Err(syntax(file, 0, format!("step '{}' has no claim", s.name)));
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sdsproof_core::lottery::rat;

    #[test]
    fn atoms() {
        let a = parse_atom("p[R39][d] <= 1/2").unwrap();
        assert_eq!(a.rel, Rel::Le);
        assert_eq!(a.to_string(), "p[R39][d] <= 1/2");
        let b = parse_atom("p[R1][a] + p[R1][b] > 2*p[R2][c] - 1").unwrap();
        assert_eq!(b.rel, Rel::Lt);
        assert_eq!(b.rhs.num_terms(), 2);
        let c = parse_atom("-p[R1][a] = 0").unwrap();
        assert_eq!(c.lhs.terms().next().unwrap().1, &rat(-1, 1));
        assert!(parse_atom("p[R1][a]").is_err());
        assert!(parse_atom("p[R1][z] = 0").is_err());
        assert!(parse_atom("p[R1][a] + = 0").is_err());
    }

    #[test]
    fn clauses() {
        let c = parse_clause("S_1_19: p[R19][a] < p[R1][a] | p[R19][a] = p[R1][a] & p[R19][b] = p[R1][b]").unwrap();
        assert_eq!(c.name, "S_1_19");
        assert_eq!(c.cubes.len(), 2);
        assert_eq!(c.cubes[1].len(), 2);
    }

    #[test]
    fn proof_scripts() {
        let text = "# demo\nstep uniform\nuse: lot_R45_*, orb_R45_*\nclaim: p[R45][a] = 1/4\n\nstep control\nuse: lot_R45_*\nclaim: p[R45][a] = 1/2\nexpect: fail\n";
        let steps = parse_proof_script(text, "t").unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].uses, vec!["lot_R45_*", "orb_R45_*"]);
        assert!(steps[1].expect_fail);
        assert!(parse_proof_script("use: x\n", "t").is_err());
        assert!(parse_proof_script("step a\nuse: x\n", "t").is_err());
    }
}
