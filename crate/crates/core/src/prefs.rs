//! Weak orders, preference profiles, alternative permutations, and the
//! Kendall tau distance used to bound manipulations.
//!
//! Alternatives are named `a`, `b`, `c`, ... in text and indexed from zero
//! internally. A weak order is stored as a rank per alternative (rank 0 is
//! the best indifference class), which makes equality structural.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest alternative count the crate supports.
pub const MAX_ALTERNATIVES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefsError {
    AlternativeCount(usize),
    Mismatch { expected: usize, found: usize },
    AgentOutOfRange { agent: usize, agents: usize },
    EmptyProfile,
    NotAWeakOrder,
    Parse(ParseError),
}

impl core::error::Error for PrefsError {}

impl fmt::Display for PrefsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefsError::AlternativeCount(m) => {
                write!(f, "alternative count {m} outside 1..={MAX_ALTERNATIVES}")
            }
            PrefsError::Mismatch { expected, found } => {
                write!(f, "expected {expected} alternatives, found {found}")
            }
            PrefsError::AgentOutOfRange { agent, agents } => {
                write!(f, "agent {agent} out of range for {agents} agents")
            }
            PrefsError::EmptyProfile => f.write_str("profile has no agents"),
            PrefsError::NotAWeakOrder => f.write_str("classes do not partition the alternatives"),
            PrefsError::Parse(e) => e.fmt(f),
        }
    }
}

impl From<ParseError> for PrefsError {
    fn from(e: ParseError) -> Self {
        PrefsError::Parse(e)
    }
}

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

impl core::error::Error for ParseError {}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative(u8);

impl Alternative {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_ALTERNATIVES, "alternative index {index} out of range");
        Alternative(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn from_letter(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() && ((c as u8 - b'a') as usize) < MAX_ALTERNATIVES {
            Some(Alternative(c as u8 - b'a'))
        } else {
            None
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A set of alternatives packed into a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AltSet(u8);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub fn full(m: usize) -> Self {
        AltSet(((1u16 << m) - 1) as u8)
    }

    pub fn from_bits(bits: u8) -> Self {
        AltSet(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn singleton(x: Alternative) -> Self {
        AltSet(1 << x.0)
    }

    pub fn contains(self, x: Alternative) -> bool {
        self.0 & (1 << x.0) != 0
    }

    pub fn insert(&mut self, x: Alternative) {
        self.0 |= 1 << x.0;
    }

    pub fn union(self, other: AltSet) -> AltSet {
        AltSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        (0..8u8).filter(move |i| self.0 & (1 << i) != 0).map(Alternative)
    }
}

impl FromIterator<Alternative> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Display for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Complete transitive preference relation, stored as one rank per
/// alternative. Ranks are contiguous from zero, so two equal relations
/// always have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeakOrder {
    ranks: Vec<u8>,
}

impl WeakOrder {
    /// Builds an order from indifference classes listed best first.
    pub fn from_classes(m: usize, classes: &[Vec<Alternative>]) -> Result<Self, PrefsError> {
        check_m(m)?;
        let mut ranks = vec![u8::MAX; m];
        for (rank, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(PrefsError::NotAWeakOrder);
            }
            for &x in class {
                if x.index() >= m || ranks[x.index()] != u8::MAX {
                    return Err(PrefsError::NotAWeakOrder);
                }
                ranks[x.index()] = rank as u8;
            }
        }
        if ranks.contains(&u8::MAX) {
            return Err(PrefsError::NotAWeakOrder);
        }
        Ok(WeakOrder { ranks })
    }

    /// Builds an order from arbitrary per-alternative scores where a lower
    /// score means more preferred. Scores are compressed to contiguous ranks.
    pub fn from_scores(scores: &[u8]) -> Result<Self, PrefsError> {
        check_m(scores.len())?;
        let mut distinct: Vec<u8> = scores.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks = scores
            .iter()
            .map(|s| distinct.binary_search(s).unwrap() as u8)
            .collect();
        Ok(WeakOrder { ranks })
    }

    /// Complete indifference over `m` alternatives.
    pub fn indifferent(m: usize) -> Self {
        WeakOrder { ranks: vec![0; m] }
    }

    /// The strict chain a ≻ b ≻ c ≻ ...
    pub fn chain(m: usize) -> Self {
        WeakOrder { ranks: (0..m as u8).collect() }
    }

    pub fn num_alternatives(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, x: Alternative) -> usize {
        self.ranks[x.index()] as usize
    }

    pub fn ranks(&self) -> &[u8] {
        &self.ranks
    }

    pub fn num_classes(&self) -> usize {
        self.ranks.iter().copied().max().map_or(0, |r| r as usize + 1)
    }

    /// Indifference classes, best first, members in index order.
    pub fn classes(&self) -> Vec<Vec<Alternative>> {
        let mut classes = vec![Vec::new(); self.num_classes()];
        for (x, &r) in self.ranks.iter().enumerate() {
            classes[r as usize].push(Alternative::new(x));
        }
        classes
    }

    pub fn class_sets(&self) -> Vec<AltSet> {
        self.classes().into_iter().map(|c| c.into_iter().collect()).collect()
    }

    pub fn weakly_prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.ranks[x.index()] <= self.ranks[y.index()]
    }

    pub fn strictly_prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.ranks[x.index()] < self.ranks[y.index()]
    }

    /// Alternatives weakly preferred to `x`.
    pub fn upper_contour(&self, x: Alternative) -> AltSet {
        let r = self.ranks[x.index()];
        self.alternatives().filter(|y| self.ranks[y.index()] <= r).collect()
    }

    /// Distinct upper contour sets, smallest first; the last one is the full set.
    pub fn prefixes(&self) -> Vec<AltSet> {
        let mut acc = AltSet::EMPTY;
        self.class_sets()
            .into_iter()
            .map(|c| {
                acc = acc.union(c);
                acc
            })
            .collect()
    }

    /// Most preferred alternatives within `within`.
    pub fn maximal_in(&self, within: AltSet) -> AltSet {
        let best = within.iter().map(|x| self.ranks[x.index()]).min();
        match best {
            Some(b) => within.iter().filter(|x| self.ranks[x.index()] == b).collect(),
            None => AltSet::EMPTY,
        }
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> {
        (0..self.ranks.len()).map(Alternative::new)
    }

    /// The relation after renaming every alternative `x` to `π(x)`.
    pub fn permuted(&self, pi: &Permutation) -> Result<WeakOrder, PrefsError> {
        same_m(self.ranks.len(), pi.len())?;
        let mut ranks = vec![0; self.ranks.len()];
        for (x, &r) in self.ranks.iter().enumerate() {
            ranks[pi.image[x] as usize] = r;
        }
        Ok(WeakOrder { ranks })
    }

    /// Restriction of this order to the first `m` alternatives.
    pub fn restricted(&self, m: usize) -> WeakOrder {
        let scores: Vec<u8> = self.ranks[..m].to_vec();
        WeakOrder::from_scores(&scores).expect("restriction of a valid order")
    }

    /// Radix encoding of the rank vector, unique per order for a fixed `m`.
    pub fn code(&self) -> usize {
        let m = self.ranks.len();
        self.ranks.iter().rev().fold(0, |acc, &r| acc * m + r as usize)
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, class) in self.classes().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if class.len() == 1 {
                write!(f, "{}", class[0])?;
            } else {
                f.write_str("{")?;
                for (j, x) in class.iter().enumerate() {
                    if j > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")?;
            }
        }
        Ok(())
    }
}

/// Formats an order in the list notation, e.g. `{c,d},{a,b}`.
pub fn format_weak_order(order: &WeakOrder) -> String {
    alloc::format!("{order}")
}

/// Parses the list notation `item ("," item)*` where an item is a single
/// letter or a braced group of letters. Whitespace is ignored. The
/// alternative count is the number of letters, which must be `a..` contiguous.
pub fn parse_weak_order(text: &str) -> Result<WeakOrder, ParseError> {
    let mut classes: Vec<Vec<Alternative>> = Vec::new();
    let mut seen = AltSet::EMPTY;
    let mut chars = text.char_indices().filter(|(_, c)| !c.is_whitespace()).peekable();

    let take_alt = |pos: usize, c: char, seen: &mut AltSet| -> Result<Alternative, ParseError> {
        let x = Alternative::from_letter(c)
            .ok_or_else(|| ParseError::new(pos, alloc::format!("unexpected character '{c}'")))?;
        if seen.contains(x) {
            return Err(ParseError::new(pos, alloc::format!("duplicate alternative '{c}'")));
        }
        seen.insert(x);
        Ok(x)
    };

    loop {
        let (pos, c) = chars
            .next()
            .ok_or_else(|| ParseError::new(text.len(), "expected alternative or '{'"))?;
        if c == '{' {
            let mut class = Vec::new();
            loop {
                let (pos, c) = chars
                    .next()
                    .ok_or_else(|| ParseError::new(text.len(), "unterminated '{'"))?;
                class.push(take_alt(pos, c, &mut seen)?);
                match chars.next() {
                    Some((_, ',')) => continue,
                    Some((_, '}')) => break,
                    Some((pos, c)) => {
                        return Err(ParseError::new(pos, alloc::format!("expected ',' or '}}', found '{c}'")))
                    }
                    None => return Err(ParseError::new(text.len(), "unterminated '{'")),
                }
            }
            classes.push(class);
        } else {
            classes.push(vec![take_alt(pos, c, &mut seen)?]);
        }
        match chars.next() {
            None => break,
            Some((_, ',')) => continue,
            Some((pos, c)) => {
                return Err(ParseError::new(pos, alloc::format!("expected ',', found '{c}'")))
            }
        }
    }

    let m = seen.len();
    if seen != AltSet::full(m) {
        return Err(ParseError::new(0, "alternatives must be a contiguous range starting at 'a'"));
    }
    WeakOrder::from_classes(m, &classes).map_err(|e| ParseError::new(0, alloc::format!("{e}")))
}

/// Kendall tau distance between weak orders: per unordered pair, 0 if the
/// orders agree, 1 if exactly one of them ties the pair, 2 if they disagree
/// strictly.
pub fn kendall_tau(r1: &WeakOrder, r2: &WeakOrder) -> Result<u32, PrefsError> {
    same_m(r1.num_alternatives(), r2.num_alternatives())?;
    let m = r1.num_alternatives();
    let mut total = 0;
    for x in 0..m {
        for y in x + 1..m {
            let s1 = (r1.ranks[x] as i8 - r1.ranks[y] as i8).signum();
            let s2 = (r2.ranks[x] as i8 - r2.ranks[y] as i8).signum();
            total += (s1 - s2).unsigned_abs() as u32;
        }
    }
    Ok(total)
}

/// Bijection on the alternatives; `image[x]` is `π(x)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { image: (0..m as u8).collect() }
    }

    pub fn from_images(image: Vec<u8>) -> Result<Self, PrefsError> {
        check_m(image.len())?;
        let mut seen = AltSet::EMPTY;
        for &y in &image {
            if y as usize >= image.len() || seen.contains(Alternative(y)) {
                return Err(PrefsError::NotAWeakOrder);
            }
            seen.insert(Alternative(y));
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.image
    }

    pub fn apply(&self, x: Alternative) -> Alternative {
        Alternative(self.image[x.index()])
    }

    pub fn apply_set(&self, s: AltSet) -> AltSet {
        s.iter().map(|x| self.apply(x)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { image: other.image.iter().map(|&y| self.image[y as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u8;
        }
        Permutation { image }
    }

    /// All `m!` permutations in lexicographic order of their image vectors.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut current: Vec<u8> = (0..m as u8).collect();
        let mut out = vec![Permutation { image: current.clone() }];
        while next_permutation(&mut current) {
            out.push(Permutation { image: current.clone() });
        }
        out
    }

    /// Cycles of length two or more, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<Alternative>> {
        let mut done = AltSet::EMPTY;
        let mut cycles = Vec::new();
        for start in 0..self.image.len() {
            let x0 = Alternative::new(start);
            if done.contains(x0) {
                continue;
            }
            let mut cycle = vec![x0];
            done.insert(x0);
            let mut x = self.apply(x0);
            while x != x0 {
                cycle.push(x);
                done.insert(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Parses cycle notation such as `(a b)(c d)` or `(a)(b c)(d)`.
    /// `()` and the empty string denote the identity.
    pub fn parse_cycles(text: &str, m: usize) -> Result<Permutation, ParseError> {
        let mut image: Vec<u8> = (0..m as u8).collect();
        let mut touched = AltSet::EMPTY;
        let mut chars = text.char_indices().peekable();
        while let Some((pos, c)) = chars.next() {
            match c {
                c if c.is_whitespace() => {}
                '(' => {
                    let mut cycle: Vec<Alternative> = Vec::new();
                    loop {
                        match chars.next() {
                            Some((_, ')')) => break,
                            Some((_, c)) if c.is_whitespace() => {}
                            Some((p, c)) => {
                                let x = Alternative::from_letter(c)
                                    .filter(|x| x.index() < m)
                                    .ok_or_else(|| {
                                        ParseError::new(p, alloc::format!("unexpected character '{c}'"))
                                    })?;
                                if touched.contains(x) {
                                    return Err(ParseError::new(p, alloc::format!("'{c}' appears twice")));
                                }
                                touched.insert(x);
                                cycle.push(x);
                            }
                            None => return Err(ParseError::new(text.len(), "unterminated cycle")),
                        }
                    }
                    for (i, x) in cycle.iter().enumerate() {
                        image[x.index()] = cycle[(i + 1) % cycle.len()].0;
                    }
                }
                _ => return Err(ParseError::new(pos, alloc::format!("unexpected character '{c}'"))),
            }
        }
        Ok(Permutation { image })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Preference profile: one weak order per agent, all over the same alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    orders: Vec<WeakOrder>,
}

impl Profile {
    pub fn new(orders: Vec<WeakOrder>) -> Result<Self, PrefsError> {
        let m = orders.first().ok_or(PrefsError::EmptyProfile)?.num_alternatives();
        for o in &orders {
            same_m(m, o.num_alternatives())?;
        }
        Ok(Profile { orders })
    }

    /// Parses one order per entry.
    pub fn parse<'a>(lines: impl IntoIterator<Item = &'a str>) -> Result<Self, PrefsError> {
        let orders = lines
            .into_iter()
            .map(parse_weak_order)
            .collect::<Result<Vec<_>, _>>()?;
        Profile::new(orders)
    }

    pub fn num_agents(&self) -> usize {
        self.orders.len()
    }

    pub fn num_alternatives(&self) -> usize {
        self.orders[0].num_alternatives()
    }

    pub fn orders(&self) -> &[WeakOrder] {
        &self.orders
    }

    pub fn order(&self, agent: usize) -> &WeakOrder {
        &self.orders[agent]
    }

    /// The profile with agent `agent`'s order replaced.
    pub fn replace(&self, agent: usize, order: WeakOrder) -> Result<Profile, PrefsError> {
        if agent >= self.orders.len() {
            return Err(PrefsError::AgentOutOfRange { agent, agents: self.orders.len() });
        }
        same_m(self.num_alternatives(), order.num_alternatives())?;
        let mut orders = self.orders.clone();
        orders[agent] = order;
        Ok(Profile { orders })
    }

    pub fn permuted(&self, pi: &Permutation) -> Result<Profile, PrefsError> {
        let orders = self
            .orders
            .iter()
            .map(|o| o.permuted(pi))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Profile { orders })
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Every weak order on `m` alternatives, in the fixed order used throughout
/// the crate: ordered set partitions built best class first, with each class
/// chosen in lexicographic order of its sorted member indices.
pub fn enumerate_weak_orders(m: usize) -> Result<Vec<WeakOrder>, PrefsError> {
    check_m(m)?;
    let mut out = Vec::new();
    let mut ranks = vec![0u8; m];
    extend_partitions(AltSet::full(m), 0, &mut ranks, &mut out);
    Ok(out)
}

fn extend_partitions(remaining: AltSet, rank: u8, ranks: &mut Vec<u8>, out: &mut Vec<WeakOrder>) {
    if remaining.is_empty() {
        out.push(WeakOrder { ranks: ranks.clone() });
        return;
    }
    let members: Vec<Alternative> = remaining.iter().collect();
    for class in subsets_lexicographic(&members) {
        for &x in &class {
            ranks[x.index()] = rank;
        }
        let rest = AltSet(remaining.0 & !class.iter().copied().collect::<AltSet>().0);
        extend_partitions(rest, rank + 1, ranks, out);
    }
}

/// Non-empty subsets of `items` (sorted) in lexicographic order of their
/// sorted member lists: {a} < {a,b} < {a,b,c} < {a,c} < {b} < ...
fn subsets_lexicographic(items: &[Alternative]) -> Vec<Vec<Alternative>> {
    fn go(items: &[Alternative], start: usize, current: &mut Vec<Alternative>, out: &mut Vec<Vec<Alternative>>) {
        for i in start..items.len() {
            current.push(items[i]);
            out.push(current.clone());
            go(items, i + 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), &mut out);
    out
}

/// The fixed enumeration of weak orders with constant-time index lookup.
#[derive(Debug, Clone)]
pub struct WeakOrderTable {
    m: usize,
    orders: Vec<WeakOrder>,
    index_by_code: Vec<u16>,
}

impl WeakOrderTable {
    pub fn new(m: usize) -> Result<Self, PrefsError> {
        let orders = enumerate_weak_orders(m)?;
        let mut index_by_code = vec![u16::MAX; m.pow(m as u32)];
        for (i, o) in orders.iter().enumerate() {
            index_by_code[o.code()] = i as u16;
        }
        Ok(WeakOrderTable { m, orders, index_by_code })
    }

    pub fn num_alternatives(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[WeakOrder] {
        &self.orders
    }

    pub fn get(&self, index: usize) -> &WeakOrder {
        &self.orders[index]
    }

    pub fn index_of(&self, order: &WeakOrder) -> usize {
        assert_eq!(order.num_alternatives(), self.m, "order over a different alternative count");
        self.index_by_code[order.code()] as usize
    }
}

pub(crate) fn check_m(m: usize) -> Result<(), PrefsError> {
    if (1..=MAX_ALTERNATIVES).contains(&m) {
        Ok(())
    } else {
        Err(PrefsError::AlternativeCount(m))
    }
}

pub(crate) fn same_m(expected: usize, found: usize) -> Result<(), PrefsError> {
    if expected == found {
        Ok(())
    } else {
        Err(PrefsError::Mismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wo(s: &str) -> WeakOrder {
        parse_weak_order(s).unwrap()
    }

    /// Counts complete, transitive relations on `m` elements by brute force
    /// over all 2^(m*m) binary relations.
    fn brute_force_weak_order_count(m: usize) -> usize {
        let bits = m * m;
        (0u32..1 << bits)
            .filter(|&rel| {
                let r = |x: usize, y: usize| rel & (1 << (x * m + y)) != 0;
                let complete = (0..m).all(|x| (0..m).all(|y| r(x, y) || r(y, x)));
                let transitive = (0..m).all(|x| {
                    (0..m).all(|y| (0..m).all(|z| !(r(x, y) && r(y, z)) || r(x, z)))
                });
                complete && transitive
            })
            .count()
    }

    #[test]
    fn weak_order_counts_match_relation_filter() {
        for m in 1..=3 {
            assert_eq!(enumerate_weak_orders(m).unwrap().len(), brute_force_weak_order_count(m), "m={m}");
        }
        assert_eq!(enumerate_weak_orders(2).unwrap().len(), 3);
        assert_eq!(enumerate_weak_orders(3).unwrap().len(), 13);
        assert_eq!(enumerate_weak_orders(4).unwrap().len(), 75);
        assert_eq!(75usize.pow(4), 31_640_625);
    }

    #[test]
    fn enumeration_order_is_fixed() {
        let orders = enumerate_weak_orders(3).unwrap();
        assert_eq!(format_weak_order(&orders[0]), "a,b,c");
        assert_eq!(format_weak_order(&orders[1]), "a,{b,c}");
        assert_eq!(format_weak_order(&orders[2]), "a,c,b");
        assert_eq!(format_weak_order(&orders[3]), "{a,b},c");
        assert_eq!(format_weak_order(&orders[4]), "{a,b,c}");
        assert_eq!(enumerate_weak_orders(1).unwrap(), vec![WeakOrder::indifferent(1)]);
        assert!(enumerate_weak_orders(0).is_err());
        assert!(enumerate_weak_orders(7).is_err());
    }

    #[test]
    fn table_lookup_inverts_enumeration() {
        let t = WeakOrderTable::new(4).unwrap();
        for (i, o) in t.orders().iter().enumerate() {
            assert_eq!(t.index_of(o), i);
        }
    }

    #[test]
    fn kendall_tau_examples() {
        let r = wo("a,b,c");
        assert_eq!(kendall_tau(&r, &r).unwrap(), 0);
        assert_eq!(kendall_tau(&r, &wo("b,a,c")).unwrap(), 2);
        assert_eq!(kendall_tau(&r, &wo("{a,b},c")).unwrap(), 1);
        assert_eq!(kendall_tau(&r, &wo("c,b,a")).unwrap(), 6);
        assert!(kendall_tau(&r, &wo("a,b")).is_err());
    }

    #[test]
    fn kendall_tau_is_a_metric_on_three_alternatives() {
        let all = enumerate_weak_orders(3).unwrap();
        for x in &all {
            for y in &all {
                let dxy = kendall_tau(x, y).unwrap();
                assert_eq!(dxy, kendall_tau(y, x).unwrap());
                assert_eq!(dxy == 0, x == y);
                for z in &all {
                    assert!(kendall_tau(x, z).unwrap() <= dxy + kendall_tau(y, z).unwrap());
                }
            }
        }
    }

    #[test]
    fn parse_examples() {
        let r = wo("{c,d},{a,b}");
        assert_eq!(r.classes().len(), 2);
        assert_eq!(r.class_sets()[0], AltSet::from_bits(0b1100));
        assert_eq!(wo("a,b,c,d"), WeakOrder::chain(4));
        assert_eq!(wo(" { a , b } , c "), wo("{a,b},c"));
        let err = parse_weak_order("a,a,b").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(err.message.contains("duplicate"));
        assert!(parse_weak_order("a,c").is_err());
        assert!(parse_weak_order("{a,b").is_err());
        assert!(parse_weak_order("a;b").is_err());
        assert!(parse_weak_order("").is_err());
    }

    #[test]
    fn round_trip_all_small_orders() {
        for m in 1..=4 {
            for o in enumerate_weak_orders(m).unwrap() {
                assert_eq!(parse_weak_order(&format_weak_order(&o)).unwrap(), o);
            }
        }
    }

    #[test]
    fn permutation_action() {
        let pi = Permutation::parse_cycles("(a b)(c d)", 4).unwrap();
        let r = wo("a,{b,c},d");
        assert_eq!(r.permuted(&pi).unwrap(), wo("b,{a,d},c"));
        assert_eq!(r.permuted(&pi).unwrap().permuted(&pi).unwrap(), r);
        assert_eq!(r.permuted(&Permutation::identity(4)).unwrap(), r);
        let rho = Permutation::parse_cycles("(a c b d)", 4).unwrap();
        assert_eq!(rho.apply(Alternative::new(0)), Alternative::new(2));
        assert_eq!(rho.apply(Alternative::new(3)), Alternative::new(0));
        assert_eq!(rho.compose(&rho.inverse()), Permutation::identity(4));
        assert_eq!(format!("{rho}"), "(a c b d)");
        assert_eq!(Permutation::parse_cycles("(a)(b)(c)(d)", 4).unwrap(), Permutation::identity(4));
        assert_eq!(format!("{}", Permutation::identity(3)), "()");
        assert!(Permutation::parse_cycles("(a b)(b c)", 4).is_err());
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn permuting_preserves_class_sizes() {
        for o in enumerate_weak_orders(4).unwrap() {
            let mut sizes: Vec<usize> = o.classes().iter().map(|c| c.len()).collect();
            for pi in Permutation::all(4) {
                let p = o.permuted(&pi).unwrap();
                let mut ps: Vec<usize> = p.classes().iter().map(|c| c.len()).collect();
                sizes.sort();
                ps.sort();
                assert_eq!(sizes, ps);
            }
        }
    }

    #[test]
    fn replace_agents() {
        let r = Profile::parse(["{c,d},{a,b}", "{b,d},a,c", "a,b,{c,d}", "{a,c},{b,d}"]).unwrap();
        assert_eq!(r.replace(2, r.order(2).clone()).unwrap(), r);
        let twice = r.replace(0, wo("a,b,c,d")).unwrap().replace(0, wo("d,c,b,a")).unwrap();
        assert_eq!(twice.order(0), &wo("d,c,b,a"));
        assert!(r.replace(4, wo("a,b,c,d")).is_err());
        assert!(r.replace(0, wo("a,b,c")).is_err());
    }

    #[test]
    fn contour_sets_and_prefixes() {
        let r = wo("a,{b,c},d");
        assert_eq!(r.upper_contour(Alternative::new(2)), AltSet::from_bits(0b0111));
        assert_eq!(
            r.prefixes(),
            vec![AltSet::from_bits(0b0001), AltSet::from_bits(0b0111), AltSet::from_bits(0b1111)]
        );
        assert_eq!(r.maximal_in(AltSet::from_bits(0b1110)), AltSet::from_bits(0b0110));
    }
}
