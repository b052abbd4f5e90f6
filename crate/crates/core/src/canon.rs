//! Anonymity and neutrality: anonymous profiles, lexicographically minimal
//! canonical representatives, automorphism groups, and orbits.
//!
//! Internally an anonymous profile is the sorted multiset of weak-order
//! indices. Comparing the positional count vectors lexicographically is the
//! reverse of comparing these sorted sequences lexicographically, so the
//! canonical (count-minimal) representative is the sequence-maximal one.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use crate::prefs::{AltSet, Alternative, Permutation, PrefsError, Profile, WeakOrder, WeakOrderTable};

/// Enumeration of canonical profiles is limited to this alternative count.
pub const MAX_CANONICAL_ALTERNATIVES: usize = 4;

/// Multiset of preference relations: the number of agents holding each
/// relation of the fixed enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnonymousProfile {
    m: u8,
    // sorted weak-order indices, one entry per agent
    members: Vec<u16>,
}

impl AnonymousProfile {
    pub fn from_indices(m: usize, mut members: Vec<u16>) -> Self {
        members.sort_unstable();
        AnonymousProfile { m: m as u8, members }
    }

    pub fn num_alternatives(&self) -> usize {
        self.m as usize
    }

    pub fn num_agents(&self) -> usize {
        self.members.len()
    }

    /// Sorted weak-order indices with repetition.
    pub fn members(&self) -> &[u16] {
        &self.members
    }

    /// `(order index, multiplicity)` pairs in ascending index order.
    pub fn counts(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &i in &self.members {
            match out.last_mut() {
                Some((j, c)) if *j == i as usize => *c += 1,
                _ => out.push((i as usize, 1)),
            }
        }
        out
    }

    /// Count of agents holding order `index`.
    pub fn count(&self, index: usize) -> usize {
        self.members.iter().filter(|&&i| i as usize == index).count()
    }

    /// Dense count vector over the full enumeration.
    pub fn count_vector(&self, table_len: usize) -> Vec<usize> {
        let mut v = alloc::vec![0; table_len];
        for &i in &self.members {
            v[i as usize] += 1;
        }
        v
    }

    /// Stable identifier: hyphen-joined `(orderIndex:count)` pairs.
    pub fn key(&self) -> String {
        let mut s = String::new();
        for (k, (i, c)) in self.counts().into_iter().enumerate() {
            if k > 0 {
                s.push('-');
            }
            let _ = write!(s, "({i}:{c})");
        }
        s
    }

    /// Parses the identifier produced by [`AnonymousProfile::key`].
    pub fn from_key(m: usize, key: &str) -> Option<Self> {
        let mut members = Vec::new();
        for part in key.split('-') {
            let inner = part.strip_prefix('(')?.strip_suffix(')')?;
            let (i, c) = inner.split_once(':')?;
            let i: u16 = i.parse().ok()?;
            let c: usize = c.parse().ok()?;
            members.extend(core::iter::repeat_n(i, c));
        }
        Some(AnonymousProfile::from_indices(m, members))
    }

    /// Orders the profiles by their count vectors, compared position by position.
    pub fn cmp_counts(&self, other: &Self) -> Ordering {
        cmp_count_vectors(&self.members, &other.members)
    }
}

fn cmp_count_vectors(a: &[u16], b: &[u16]) -> Ordering {
    // the first differing sorted entry belongs to the sequence with more
    // copies of the smaller index, i.e. the larger count vector
    b.cmp(a)
}

/// Anonymous profile together with the relabeling that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalProfile {
    pub anon: AnonymousProfile,
    /// Maps the input labeling onto the canonical labeling.
    pub witness: Permutation,
}

/// Partition of the alternatives into orbits of the automorphism group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub blocks: Vec<AltSet>,
}

impl OrbitPartition {
    pub fn block_of(&self, x: Alternative) -> AltSet {
        *self.blocks.iter().find(|b| b.contains(x)).expect("partition covers every alternative")
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Image of the partition under a relabeling, blocks re-sorted.
    pub fn permuted(&self, pi: &Permutation) -> OrbitPartition {
        let mut blocks: Vec<AltSet> = self.blocks.iter().map(|&b| pi.apply_set(b)).collect();
        blocks.sort_by_key(|b| b.iter().next().map(|x| x.index()));
        OrbitPartition { blocks }
    }
}

/// Canonicalization context for a fixed alternative count: the weak-order
/// enumeration, all permutations, and their action on order indices.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    table: WeakOrderTable,
    perms: Vec<Permutation>,
    // action[p][i]: index of orders[i] relabeled by perms[p]
    action: Vec<Vec<u16>>,
}

impl Canonicalizer {
    pub fn new(m: usize) -> Result<Self, PrefsError> {
        let table = WeakOrderTable::new(m)?;
        let perms = Permutation::all(m);
        let action = perms
            .iter()
            .map(|pi| {
                table
                    .orders()
                    .iter()
                    .map(|o| table.index_of(&o.permuted(pi).expect("same size")) as u16)
                    .collect()
            })
            .collect();
        Ok(Canonicalizer { table, perms, action })
    }

    pub fn num_alternatives(&self) -> usize {
        self.table.num_alternatives()
    }

    pub fn table(&self) -> &WeakOrderTable {
        &self.table
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn anonymize(&self, profile: &Profile) -> Result<AnonymousProfile, PrefsError> {
        crate::prefs::same_m(self.num_alternatives(), profile.num_alternatives())?;
        let members = profile.orders().iter().map(|o| self.table.index_of(o) as u16).collect();
        Ok(AnonymousProfile::from_indices(self.num_alternatives(), members))
    }

    /// One agent per multiset entry, in ascending order index.
    pub fn realize(&self, anon: &AnonymousProfile) -> Profile {
        let orders = anon.members.iter().map(|&i| self.table.get(i as usize).clone()).collect();
        Profile::new(orders).expect("anonymous profiles have at least one agent")
    }

    pub fn apply_permutation(&self, anon: &AnonymousProfile, pi: &Permutation) -> AnonymousProfile {
        let p = self.perm_index(pi);
        self.apply_index(&anon.members, p)
    }

    fn perm_index(&self, pi: &Permutation) -> usize {
        self.perms.binary_search(pi).expect("permutation over the table's alternatives")
    }

    fn apply_index(&self, members: &[u16], p: usize) -> AnonymousProfile {
        let act = &self.action[p];
        let mapped = members.iter().map(|&i| act[i as usize]).collect();
        AnonymousProfile::from_indices(self.num_alternatives(), mapped)
    }

    /// Lexicographically minimal relabeling of `anon` (compared on count
    /// vectors) and a permutation realizing it.
    pub fn canonicalize(&self, anon: &AnonymousProfile) -> CanonicalProfile {
        let mut scratch = Vec::with_capacity(anon.members.len());
        let mut best: Option<(Vec<u16>, usize)> = None;
        for p in 0..self.perms.len() {
            self.map_sorted(&anon.members, p, &mut scratch);
            let better = match &best {
                None => true,
                Some((b, _)) => cmp_count_vectors(&scratch, b) == Ordering::Less,
            };
            if better {
                best = Some((scratch.clone(), p));
            }
        }
        let (members, p) = best.expect("at least the identity permutation");
        CanonicalProfile {
            anon: AnonymousProfile { m: anon.m, members },
            witness: self.perms[p].clone(),
        }
    }

    pub fn canonicalize_profile(&self, profile: &Profile) -> Result<CanonicalProfile, PrefsError> {
        Ok(self.canonicalize(&self.anonymize(profile)?))
    }

    fn map_sorted(&self, members: &[u16], p: usize, out: &mut Vec<u16>) {
        let act = &self.action[p];
        out.clear();
        out.extend(members.iter().map(|&i| act[i as usize]));
        out.sort_unstable();
    }

    /// Whether `members` (sorted) is its own canonical representative.
    fn is_canonical_members(&self, members: &[u16], scratch: &mut Vec<u16>) -> bool {
        (1..self.perms.len()).all(|p| {
            self.map_sorted(members, p, scratch);
            cmp_count_vectors(scratch, members) != Ordering::Less
        })
    }

    pub fn is_canonical(&self, anon: &AnonymousProfile) -> bool {
        self.is_canonical_members(&anon.members, &mut Vec::new())
    }

    /// All permutations fixing the anonymous profile, in lexicographic order.
    pub fn automorphisms(&self, anon: &AnonymousProfile) -> Vec<Permutation> {
        let mut scratch = Vec::new();
        (0..self.perms.len())
            .filter(|&p| {
                self.map_sorted(&anon.members, p, &mut scratch);
                scratch == anon.members
            })
            .map(|p| self.perms[p].clone())
            .collect()
    }

    /// Finest partition merging `x` and `π(x)` for every automorphism `π`.
    pub fn orbits(&self, anon: &AnonymousProfile) -> OrbitPartition {
        let m = self.num_alternatives();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for pi in self.automorphisms(anon) {
            for (x, &y) in pi.images().iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y as usize));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        let mut blocks: Vec<AltSet> = Vec::new();
        for x in 0..m {
            let root = find(&mut parent, x);
            match blocks.iter_mut().find(|b| b.iter().next().map(|a| a.index()) == Some(root)) {
                Some(b) => b.insert(Alternative::new(x)),
                None => blocks.push(AltSet::singleton(Alternative::new(x))),
            }
        }
        OrbitPartition { blocks }
    }

    fn check_enumeration_size(&self) -> Result<(), PrefsError> {
        if self.num_alternatives() > MAX_CANONICAL_ALTERNATIVES {
            Err(PrefsError::AlternativeCount(self.num_alternatives()))
        } else {
            Ok(())
        }
    }

    /// Canonical profiles with `n` agents whose smallest order index is
    /// `first`, in ascending sequence order. Splitting the enumeration by
    /// `first` lets callers partition work deterministically.
    pub fn canonical_profiles_starting_with(
        &self,
        n: usize,
        first: usize,
    ) -> Result<Vec<AnonymousProfile>, PrefsError> {
        self.check_enumeration_size()?;
        let mut out = Vec::new();
        if n == 0 || first >= self.table.len() {
            return Ok(out);
        }
        let mut seq = alloc::vec![first as u16; n];
        let mut scratch = Vec::with_capacity(n);
        let w = self.table.len() as u16;
        loop {
            if self.is_canonical_members(&seq, &mut scratch) {
                out.push(AnonymousProfile { m: self.num_alternatives() as u8, members: seq.clone() });
            }
            // next non-decreasing sequence with a fixed first entry
            let mut i = n - 1;
            while i > 0 && seq[i] == w - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let v = seq[i] + 1;
            for s in &mut seq[i..] {
                *s = v;
            }
        }
        Ok(out)
    }

    /// One representative per anonymity + neutrality class, sorted.
    pub fn enumerate_canonical_profiles(&self, n: usize) -> Result<Vec<AnonymousProfile>, PrefsError> {
        let mut out = Vec::new();
        for first in 0..self.table.len() {
            out.extend(self.canonical_profiles_starting_with(n, first)?);
        }
        Ok(out)
    }

    /// Number of labeled anonymous profiles in the class of `anon`.
    pub fn class_size(&self, anon: &AnonymousProfile) -> usize {
        self.perms.len() / self.automorphisms(anon).len()
    }

    pub fn order(&self, index: usize) -> &WeakOrder {
        self.table.get(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::parse_weak_order;

    fn example1() -> Profile {
        Profile::parse(["{a,c},{b,d}", "{b,d},{a,c}", "{a,d},b,c", "{b,c},a,d"]).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        Permutation::parse_cycles(s, 4).unwrap()
    }

    #[test]
    fn anonymize_counts() {
        let c = Canonicalizer::new(4).unwrap();
        let o = parse_weak_order("a,b,{c,d}").unwrap();
        let p = Profile::new(vec![o.clone(), o.clone(), WeakOrder::chain(4)]).unwrap();
        let anon = c.anonymize(&p).unwrap();
        assert_eq!(anon.count(c.table().index_of(&o)), 2);
        let shuffled = Profile::new(vec![WeakOrder::chain(4), o.clone(), o]).unwrap();
        assert_eq!(c.anonymize(&shuffled).unwrap(), anon);
        let ex = c.anonymize(&example1()).unwrap();
        assert_eq!(ex.counts().len(), 4);
        assert!(ex.counts().iter().all(|&(_, k)| k == 1));
        assert_eq!(AnonymousProfile::from_key(4, &ex.key()).unwrap(), ex);
    }

    #[test]
    fn sequence_order_matches_dense_count_order() {
        let c = Canonicalizer::new(3).unwrap();
        let w = c.table().len();
        let all = c.enumerate_canonical_profiles(2).unwrap();
        for a in &all {
            for b in &all {
                let dense = a.count_vector(w).cmp(&b.count_vector(w));
                assert_eq!(a.cmp_counts(b), dense);
            }
        }
    }

    #[test]
    fn canonicalization_is_idempotent_and_neutral() {
        let c = Canonicalizer::new(3).unwrap();
        let w = c.table().len() as u16;
        for i in 0..w {
            for j in i..w {
                let anon = AnonymousProfile::from_indices(3, vec![i, j]);
                let canon = c.canonicalize(&anon);
                assert_eq!(c.apply_permutation(&anon, &canon.witness), canon.anon);
                assert_eq!(c.canonicalize(&canon.anon).anon, canon.anon);
                assert!(c.is_canonical(&canon.anon));
                for pi in c.permutations() {
                    let moved = c.apply_permutation(&anon, pi);
                    assert_eq!(c.canonicalize(&moved).anon, canon.anon);
                }
                // dense lexicographic minimum over all relabelings
                let dense_min = c
                    .permutations()
                    .iter()
                    .map(|pi| c.apply_permutation(&anon, pi).count_vector(w as usize))
                    .min()
                    .unwrap();
                assert_eq!(canon.anon.count_vector(w as usize), dense_min);
            }
        }
    }

    #[test]
    fn example_profile_symmetry() {
        let c = Canonicalizer::new(4).unwrap();
        let anon = c.anonymize(&example1()).unwrap();
        assert_eq!(c.apply_permutation(&anon, &perm("(a b)(c d)")), anon);
        assert_eq!(c.automorphisms(&anon), vec![Permutation::identity(4), perm("(a b)(c d)")]);
        let orbits = c.orbits(&anon);
        assert_eq!(orbits.blocks, vec![AltSet::from_bits(0b0011), AltSet::from_bits(0b1100)]);
    }

    #[test]
    fn unanimous_chain_has_no_symmetry() {
        let c = Canonicalizer::new(4).unwrap();
        let p = Profile::new(vec![WeakOrder::chain(4); 4]).unwrap();
        let anon = c.anonymize(&p).unwrap();
        assert_eq!(c.automorphisms(&anon), vec![Permutation::identity(4)]);
        assert!(c.orbits(&anon).is_trivial());
    }

    #[test]
    fn four_cycle_merges_all_alternatives() {
        let c = Canonicalizer::new(4).unwrap();
        let r45 = Profile::parse(["{a,c},d,b", "{b,d},a,c", "{a,b},c,d", "{c,d},b,a"]).unwrap();
        let anon = c.anonymize(&r45).unwrap();
        let autos = c.automorphisms(&anon);
        assert!(autos.contains(&perm("(a b d c)")));
        assert_eq!(c.orbits(&anon).blocks, vec![AltSet::full(4)]);
    }

    #[test]
    fn automorphisms_form_a_group() {
        let c = Canonicalizer::new(4).unwrap();
        let anon = c.anonymize(&example1()).unwrap();
        let autos = c.automorphisms(&anon);
        for g in &autos {
            assert!(autos.contains(&g.inverse()));
            for h in &autos {
                assert!(autos.contains(&g.compose(h)));
            }
        }
    }

    #[test]
    fn orbits_follow_relabeling() {
        let c = Canonicalizer::new(4).unwrap();
        let anon = c.anonymize(&example1()).unwrap();
        for pi in c.permutations() {
            let moved = c.apply_permutation(&anon, pi);
            assert_eq!(c.orbits(&moved), c.orbits(&anon).permuted(pi));
        }
    }

    /// Counts classes of 3-alternative, 4-agent profiles by grouping all
    /// labeled profiles under agent shuffles and alternative relabelings.
    #[test]
    fn canonical_count_matches_orbit_grouping_oracle() {
        use alloc::collections::BTreeSet;
        let c = Canonicalizer::new(3).unwrap();
        let orders = c.table().orders().to_vec();
        let perms = Permutation::all(3);
        let mut seen: BTreeSet<Vec<WeakOrder>> = BTreeSet::new();
        let mut classes = 0;
        let w = orders.len();
        for code in 0..w.pow(4) {
            let profile: Vec<WeakOrder> =
                (0..4).map(|k| orders[(code / w.pow(k)) % w].clone()).collect();
            let mut sorted = profile.clone();
            sorted.sort();
            if seen.contains(&sorted) {
                continue;
            }
            classes += 1;
            for pi in &perms {
                let mut moved: Vec<WeakOrder> = profile.iter().map(|o| o.permuted(pi).unwrap()).collect();
                moved.sort();
                seen.insert(moved);
            }
        }
        assert_eq!(c.enumerate_canonical_profiles(4).unwrap().len(), classes);
    }

    #[test]
    fn single_alternative_has_one_class() {
        let c = Canonicalizer::new(1).unwrap();
        for n in 1..4 {
            assert_eq!(c.enumerate_canonical_profiles(n).unwrap().len(), 1);
        }
    }

    #[test]
    fn enumeration_refuses_large_alternative_counts() {
        let c = Canonicalizer::new(5).unwrap();
        assert!(c.enumerate_canonical_profiles(2).is_err());
    }
}
