//! Manipulation edges between profiles, Kendall-tau bounded domain
//! expansion, and lifting small profiles into larger ones.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{AnonymousProfile, CanonicalProfile, Canonicalizer};
use crate::prefs::{kendall_tau, Permutation, PrefsError, Profile, WeakOrder};

/// A profile in a domain. `profile` fixes the labeling that the node's
/// variables refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainNode {
    pub id: usize,
    pub profile: Profile,
    pub anon: AnonymousProfile,
}

impl DomainNode {
    pub fn label(&self) -> String {
        alloc::format!("R{}", self.id)
    }
}

/// Agent `agent` of the source profile, holding `truthful`, reports
/// `misreport`. Relabeling the manipulated profile by `map` yields the
/// target profile (up to agent order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationEdge {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub agent: usize,
    pub truthful: WeakOrder,
    pub misreport: WeakOrder,
    pub map: Permutation,
}

/// An edge out of a canonical profile before it is placed in a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdge {
    pub agent: usize,
    pub truthful: WeakOrder,
    pub misreport: WeakOrder,
    pub target: CanonicalProfile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainError {
    Prefs(PrefsError),
    UnknownNode(usize),
    WrongTruthfulOrder { edge: String },
    ZeroDistance { edge: String },
    BadMap { edge: String },
    DuplicateName(String),
    TooLarge { what: &'static str, have: usize, limit: usize },
}

impl core::error::Error for DomainError {}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::Prefs(e) => e.fmt(f),
            DomainError::UnknownNode(id) => write!(f, "no profile with id {id}"),
            DomainError::WrongTruthfulOrder { edge } => {
                write!(f, "{edge}: agent does not hold the stated truthful order")
            }
            DomainError::ZeroDistance { edge } => write!(f, "{edge}: misreport equals the truthful order"),
            DomainError::BadMap { edge } => {
                write!(f, "{edge}: map does not send the manipulated profile onto the target")
            }
            DomainError::DuplicateName(name) => write!(f, "duplicate edge name {name}"),
            DomainError::TooLarge { what, have, limit } => write!(f, "{what} {have} exceeds {limit}"),
        }
    }
}

impl From<PrefsError> for DomainError {
    fn from(e: PrefsError) -> Self {
        DomainError::Prefs(e)
    }
}

/// Profiles with manipulation edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainGraph {
    pub m: usize,
    pub n: usize,
    pub seed: Option<Profile>,
    pub schedule: Vec<u32>,
    pub nodes: Vec<DomainNode>,
    pub edges: Vec<ManipulationEdge>,
}

impl DomainGraph {
    /// Graph with explicit nodes and edges, every edge checked against
    /// its endpoints. Node ids must be distinct.
    pub fn from_parts(
        canon: &Canonicalizer,
        nodes: Vec<(usize, Profile)>,
        edges: Vec<ManipulationEdge>,
    ) -> Result<DomainGraph, DomainError> {
        let m = canon.num_alternatives();
        let n = nodes.first().map_or(0, |(_, p)| p.num_agents());
        let mut built = Vec::with_capacity(nodes.len());
        for (id, profile) in nodes {
            let anon = canon.anonymize(&profile)?;
            built.push(DomainNode { id, profile, anon });
        }
        let graph = DomainGraph { m, n, seed: None, schedule: Vec::new(), nodes: built, edges };
        let mut names = BTreeSet::new();
        for e in &graph.edges {
            if !names.insert(e.name.as_str()) {
                return Err(DomainError::DuplicateName(e.name.clone()));
            }
            graph.check_edge(canon, e)?;
        }
        Ok(graph)
    }

    pub fn node(&self, id: usize) -> Option<&DomainNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn profile_set(&self) -> BTreeSet<AnonymousProfile> {
        self.nodes.iter().map(|n| n.anon.clone()).collect()
    }

    /// Whether the edge's agent holds its truthful order, the misreport
    /// differs, and its map takes the manipulated source onto the target.
    pub fn check_edge(&self, canon: &Canonicalizer, e: &ManipulationEdge) -> Result<(), DomainError> {
        let src = self.node(e.source).ok_or(DomainError::UnknownNode(e.source))?;
        let tgt = self.node(e.target).ok_or(DomainError::UnknownNode(e.target))?;
        if e.agent >= src.profile.num_agents() || *src.profile.order(e.agent) != e.truthful {
            return Err(DomainError::WrongTruthfulOrder { edge: e.name.clone() });
        }
        if e.truthful == e.misreport {
            return Err(DomainError::ZeroDistance { edge: e.name.clone() });
        }
        let manipulated = src.profile.replace(e.agent, e.misreport.clone())?;
        if canon.anonymize(&manipulated.permuted(&e.map)?)? != tgt.anon {
            return Err(DomainError::BadMap { edge: e.name.clone() });
        }
        Ok(())
    }
}

/// Kendall tau distances between all pairs of weak orders in the table.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    dist: Vec<Vec<u32>>,
}

impl DistanceTable {
    pub fn new(canon: &Canonicalizer) -> Self {
        let orders = canon.table().orders();
        let dist = orders
            .iter()
            .map(|a| orders.iter().map(|b| kendall_tau(a, b).expect("same table")).collect())
            .collect();
        DistanceTable { dist }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.dist[i][j]
    }
}

/// One edge per distinct relation in `source` and misreport at distance
/// `1..=k`, with canonicalized targets. `agent` refers to the realized
/// profile of `source` (one agent per multiset entry, ascending).
pub fn manipulation_edges(
    canon: &Canonicalizer,
    dist: &DistanceTable,
    source: &AnonymousProfile,
    k: u32,
) -> Vec<RawEdge> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let members = source.members();
    let m = canon.num_alternatives();
    for (agent, &held) in members.iter().enumerate() {
        if agent > 0 && members[agent - 1] == held {
            continue;
        }
        for other in 0..canon.table().len() {
            let d = dist.get(held as usize, other);
            if d == 0 || d > k {
                continue;
            }
            let mut manipulated = members.to_vec();
            manipulated[agent] = other as u16;
            let target = canon.canonicalize(&AnonymousProfile::from_indices(m, manipulated));
            out.push(RawEdge {
                agent,
                truthful: canon.order(held as usize).clone(),
                misreport: canon.order(other).clone(),
                target,
            });
        }
    }
    out
}

/// Breadth-first expansion from the canonical form of `seed`: level `t`
/// consists of all targets of `schedule[t-1]`-manipulations from level
/// `t-1`. Every generated edge is kept.
pub fn expand_domain(canon: &Canonicalizer, seed: &Profile, schedule: &[u32]) -> Result<DomainGraph, DomainError> {
    let dist = DistanceTable::new(canon);
    expand_domain_with(canon, seed, schedule, |level, k| {
        level.iter().map(|src| manipulation_edges(canon, &dist, src, k)).collect()
    })
}

/// [`expand_domain`] with a caller-supplied level step, which must return
/// the edges of each frontier profile in frontier order. Lets callers
/// evaluate a level in parallel without changing the result.
pub fn expand_domain_with<F>(
    canon: &Canonicalizer,
    seed: &Profile,
    schedule: &[u32],
    mut step: F,
) -> Result<DomainGraph, DomainError>
where
    F: FnMut(&[AnonymousProfile], u32) -> Vec<Vec<RawEdge>>,
{
    let start = canon.canonicalize_profile(seed)?.anon;
    let mut ids: BTreeMap<AnonymousProfile, usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut intern = |anon: &AnonymousProfile, nodes: &mut Vec<DomainNode>| -> usize {
        if let Some(&id) = ids.get(anon) {
            return id;
        }
        let id = nodes.len() + 1;
        ids.insert(anon.clone(), id);
        nodes.push(DomainNode { id, profile: canon.realize(anon), anon: anon.clone() });
        id
    };
    intern(&start, &mut nodes);
    let mut seen_edges: BTreeSet<(usize, usize, WeakOrder)> = BTreeSet::new();
    let mut edges = Vec::new();
    let mut frontier = alloc::vec![start];
    for &k in schedule {
        let results = step(&frontier, k);
        let mut next = BTreeSet::new();
        for (src, raw) in frontier.iter().zip(results) {
            let source = intern(src, &mut nodes);
            for r in raw {
                let target = intern(&r.target.anon, &mut nodes);
                next.insert(r.target.anon.clone());
                if seen_edges.insert((source, r.agent, r.misreport.clone())) {
                    edges.push(ManipulationEdge {
                        name: String::new(),
                        source,
                        target,
                        agent: r.agent,
                        truthful: r.truthful,
                        misreport: r.misreport,
                        map: r.target.witness,
                    });
                }
            }
        }
        frontier = next.into_iter().collect();
    }
    name_edges(&mut edges);
    let n = seed.num_agents();
    Ok(DomainGraph { m: canon.num_alternatives(), n, seed: Some(seed.clone()), schedule: schedule.to_vec(), nodes, edges })
}

/// Every canonical profile with `n` agents, with all manipulation edges
/// of distance at most `k` between them.
pub fn full_domain(canon: &Canonicalizer, n: usize, k: u32) -> Result<DomainGraph, DomainError> {
    let dist = DistanceTable::new(canon);
    full_domain_with(canon, n, |profiles| profiles.iter().map(|p| manipulation_edges(canon, &dist, p, k)).collect())
}

/// [`full_domain`] with a caller-supplied edge generator, which must
/// return the edges of each profile in the given order.
pub fn full_domain_with<F>(canon: &Canonicalizer, n: usize, step: F) -> Result<DomainGraph, DomainError>
where
    F: FnOnce(&[AnonymousProfile]) -> Vec<Vec<RawEdge>>,
{
    let profiles = canon.enumerate_canonical_profiles(n)?;
    let ids: BTreeMap<&AnonymousProfile, usize> = profiles.iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
    let nodes = profiles
        .iter()
        .enumerate()
        .map(|(i, anon)| DomainNode { id: i + 1, profile: canon.realize(anon), anon: anon.clone() })
        .collect();
    let mut edges = Vec::new();
    for (i, raw) in step(&profiles).into_iter().enumerate() {
        for r in raw {
            edges.push(ManipulationEdge {
                name: String::new(),
                source: i + 1,
                target: ids[&r.target.anon],
                agent: r.agent,
                truthful: r.truthful,
                misreport: r.misreport,
                map: r.target.witness,
            });
        }
    }
    name_edges(&mut edges);
    Ok(DomainGraph { m: canon.num_alternatives(), n, seed: None, schedule: Vec::new(), nodes, edges })
}

// S_<source>_<target>, with _1, _2, ... appended when a pair repeats
fn name_edges(edges: &mut [ManipulationEdge]) {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in edges.iter() {
        *counts.entry((e.source, e.target)).or_default() += 1;
    }
    let mut used: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in edges.iter_mut() {
        let key = (e.source, e.target);
        e.name = if counts[&key] == 1 {
            alloc::format!("S_{}_{}", e.source, e.target)
        } else {
            let k = used.entry(key).or_default();
            *k += 1;
            alloc::format!("S_{}_{}_{}", e.source, e.target, k)
        };
    }
}

/// Embeds a profile over the first `m'` alternatives and `n'` agents into
/// `m` alternatives and `n` agents: existing agents rank the new
/// alternatives below all old ones and tie them, new agents are
/// indifferent between everything.
pub fn lift_profile(small: &Profile, m: usize, n: usize) -> Result<Profile, DomainError> {
    let (m0, n0) = (small.num_alternatives(), small.num_agents());
    if m0 > m {
        return Err(DomainError::TooLarge { what: "alternative count", have: m0, limit: m });
    }
    if n0 > n {
        return Err(DomainError::TooLarge { what: "agent count", have: n0, limit: n });
    }
    let mut orders = Vec::with_capacity(n);
    for o in small.orders() {
        let bottom = o.num_classes() as u8;
        let scores: Vec<u8> = (0..m).map(|x| if x < m0 { o.ranks()[x] } else { bottom }).collect();
        orders.push(WeakOrder::from_scores(&scores)?);
    }
    while orders.len() < n {
        orders.push(WeakOrder::indifferent(m));
    }
    Ok(Profile::new(orders)?)
}
