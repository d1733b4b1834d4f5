//! Vertex sets, hyperedges, dyperedges, mixed hypergraphs and subpartitions,
//! together with the entering predicates every other module is built on.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use thiserror::Error;

/// Largest supported vertex universe. All set operations are single-word
/// bit operations.
pub const MAX_VERTICES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("universe must have between 1 and {MAX_VERTICES} vertices, got {0}")]
    UniverseSize(usize),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("vertex set {0} is not contained in the universe")]
    OutsideUniverse(VertexSet),
    #[error("hyperedge {0} has fewer than two vertices")]
    HyperedgeTooSmall(VertexSet),
    #[error("dyperedge has an empty tail set")]
    EmptyTails,
    #[error("dyperedge head {head} lies in its own tail set {tails}")]
    HeadInTails { head: usize, tails: VertexSet },
    #[error("vertex {head} is not a member of hyperedge {edge}")]
    InvalidHead { edge: VertexSet, head: usize },
    #[error("vertex {tail} is not a tail of the dyperedge")]
    InvalidTail { tail: usize },
    #[error("subpartition member is empty")]
    EmptyMember,
    #[error("subpartition members {0} and {1} overlap")]
    OverlappingMembers(VertexSet, VertexSet),
    #[error("edge multiplicity must be at least one")]
    ZeroMultiplicity,
}

/// Ordered list of distinct vertex names; index `i` is the `i`-th label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexUniverse {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl VertexUniverse {
    pub fn new<I, S>(labels: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_VERTICES {
            return Err(ModelError::UniverseSize(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(ModelError::DuplicateLabel(label.clone()));
            }
        }
        Ok(VertexUniverse { labels, index })
    }

    /// Universe labelled `a`, `b`, `c`, ... (falls back to `v<i>` past `z`).
    pub fn alphabetic(n: usize) -> Result<Self, ModelError> {
        Self::new((0..n).map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("v{i}")
            }
        }))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ModelError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| ModelError::UnknownLabel(label.to_string()))
    }

    pub fn full(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet, ModelError> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()).map(VertexSet::singleton))
            .try_fold(VertexSet::EMPTY, |acc, s| s.map(|s| acc | s))
    }

    pub fn labels_of(&self, set: VertexSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn check_set(&self, set: VertexSet) -> Result<(), ModelError> {
        if set.is_subset(self.full()) {
            Ok(())
        } else {
            Err(ModelError::OutsideUniverse(set))
        }
    }

    /// Every subset of the universe, in ascending mask order.
    pub fn subsets(&self) -> impl Iterator<Item = VertexSet> {
        (0..1u32 << self.len()).map(VertexSet)
    }
}

/// A subset of the universe stored as a bit mask over vertex indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1 << v)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        VertexSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(Self::EMPTY, |acc, v| acc | Self::singleton(v))
    }

    pub fn contains(self, v: usize) -> bool {
        v < 32 && self.0 >> v & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// `self ∩ other ≠ ∅`, `self ⊄ other` and `other ⊄ self`.
    pub fn crosses(self, other: VertexSet) -> bool {
        self.intersects(other) && !self.is_subset(other) && !other.is_subset(self)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn with(self, v: usize) -> Self {
        self | Self::singleton(v)
    }

    pub fn without(self, v: usize) -> Self {
        self - Self::singleton(v)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    /// All subsets of `self`, in ascending mask order.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(VertexSet(cur))
        })
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_indices(iter)
    }
}

pub struct VertexIter(u32);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// An undirected hyperedge: a vertex set of size at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperedge {
    members: VertexSet,
}

impl Hyperedge {
    pub fn new(members: VertexSet) -> Result<Self, ModelError> {
        if members.len() < 2 {
            return Err(ModelError::HyperedgeTooSmall(members));
        }
        Ok(Hyperedge { members })
    }

    pub fn members(&self) -> VertexSet {
        self.members
    }
}

/// A directed hyperedge `(tails, head)` with `head ∉ tails`. An arc is a
/// dyperedge with a single tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyperedge {
    tails: VertexSet,
    head: usize,
}

impl Dyperedge {
    pub fn new(tails: VertexSet, head: usize) -> Result<Self, ModelError> {
        if tails.is_empty() {
            return Err(ModelError::EmptyTails);
        }
        if tails.contains(head) {
            return Err(ModelError::HeadInTails { head, tails });
        }
        Ok(Dyperedge { tails, head })
    }

    pub fn arc(tail: usize, head: usize) -> Result<Self, ModelError> {
        Self::new(VertexSet::singleton(tail), head)
    }

    pub fn tails(&self) -> VertexSet {
        self.tails
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn is_arc(&self) -> bool {
        self.tails.len() == 1
    }

    /// All vertices touched by the dyperedge.
    pub fn span(&self) -> VertexSet {
        self.tails.with(self.head)
    }
}

/// `edge ∩ set ≠ ∅ ≠ edge \ set`.
pub fn hyperedge_enters(edge: &Hyperedge, set: VertexSet) -> bool {
    edge.members.intersects(set) && !edge.members.is_subset(set)
}

/// The head lies in `set` and some tail lies outside it.
pub fn dyperedge_enters(edge: &Dyperedge, set: VertexSet) -> bool {
    set.contains(edge.head) && !edge.tails.is_subset(set)
}

/// Replace a hyperedge by the dyperedge `(members − head, head)`.
pub fn orient_edge(edge: &Hyperedge, head: usize) -> Result<Dyperedge, ModelError> {
    if !edge.members.contains(head) {
        return Err(ModelError::InvalidHead {
            edge: edge.members,
            head,
        });
    }
    Dyperedge::new(edge.members.without(head), head)
}

/// Replace a dyperedge by the arc from `tail` to its head.
pub fn trim(edge: &Dyperedge, tail: usize) -> Result<Dyperedge, ModelError> {
    if !edge.tails.contains(tail) {
        return Err(ModelError::InvalidTail { tail });
    }
    Dyperedge::arc(tail, edge.head)
}

/// Mixed hypergraph `(V, E ∪ A)`. Both edge families are multisets stored
/// as `(edge, multiplicity)` entries in first-insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedHypergraph {
    universe: VertexUniverse,
    hyperedges: Vec<(Hyperedge, u32)>,
    dyperedges: Vec<(Dyperedge, u32)>,
}

impl MixedHypergraph {
    pub fn new(universe: VertexUniverse) -> Self {
        MixedHypergraph {
            universe,
            hyperedges: Vec::new(),
            dyperedges: Vec::new(),
        }
    }

    pub fn universe(&self) -> &VertexUniverse {
        &self.universe
    }

    pub fn hyperedges(&self) -> &[(Hyperedge, u32)] {
        &self.hyperedges
    }

    pub fn dyperedges(&self) -> &[(Dyperedge, u32)] {
        &self.dyperedges
    }

    /// Adds `multiplicity` copies, merging with an existing identical entry.
    pub fn add_hyperedge(&mut self, edge: Hyperedge, multiplicity: u32) -> Result<(), ModelError> {
        self.universe.check_set(edge.members)?;
        if multiplicity == 0 {
            return Err(ModelError::ZeroMultiplicity);
        }
        match self.hyperedges.iter_mut().find(|(e, _)| *e == edge) {
            Some((_, m)) => *m += multiplicity,
            None => self.hyperedges.push((edge, multiplicity)),
        }
        Ok(())
    }

    /// Adds `multiplicity` copies, merging with an existing identical entry.
    pub fn add_dyperedge(&mut self, edge: Dyperedge, multiplicity: u32) -> Result<(), ModelError> {
        self.universe.check_set(edge.span())?;
        if multiplicity == 0 {
            return Err(ModelError::ZeroMultiplicity);
        }
        match self.dyperedges.iter_mut().find(|(e, _)| *e == edge) {
            Some((_, m)) => *m += multiplicity,
            None => self.dyperedges.push((edge, multiplicity)),
        }
        Ok(())
    }

    /// Removes one copy of the hyperedge entry at `entry`.
    pub fn remove_hyperedge_copy(&mut self, entry: usize) -> Hyperedge {
        let (edge, m) = &mut self.hyperedges[entry];
        let edge = *edge;
        *m -= 1;
        if *m == 0 {
            self.hyperedges.remove(entry);
        }
        edge
    }

    pub fn hyperedge_count(&self) -> u64 {
        self.hyperedges.iter().map(|&(_, m)| u64::from(m)).sum()
    }

    pub fn dyperedge_count(&self) -> u64 {
        self.dyperedges.iter().map(|&(_, m)| u64::from(m)).sum()
    }

    /// Hyperedges with multiplicity expanded, in storage order.
    pub fn hyperedge_list(&self) -> Vec<Hyperedge> {
        expand(&self.hyperedges)
    }

    pub fn dyperedge_list(&self) -> Vec<Dyperedge> {
        expand(&self.dyperedges)
    }

    /// `E(P)` and `A(P)`: entry indices of the edges entering some member.
    pub fn entering_edges(&self, p: &Subpartition) -> EnteringEdges {
        EnteringEdges {
            hyperedges: self
                .hyperedges
                .iter()
                .enumerate()
                .filter(|(_, (e, _))| p.members.iter().any(|&x| hyperedge_enters(e, x)))
                .map(|(i, &(_, m))| (i, m))
                .collect(),
            dyperedges: self
                .dyperedges
                .iter()
                .enumerate()
                .filter(|(_, (e, _))| p.members.iter().any(|&x| dyperedge_enters(e, x)))
                .map(|(i, &(_, m))| (i, m))
                .collect(),
        }
    }

    /// `e(P)`: the number of edge copies entering at least one member of `p`.
    pub fn entering_count(&self, p: &Subpartition) -> u64 {
        let hyper: u64 = self
            .hyperedges
            .iter()
            .filter(|(e, _)| p.members.iter().any(|&x| hyperedge_enters(e, x)))
            .map(|&(_, m)| u64::from(m))
            .sum();
        let dyper: u64 = self
            .dyperedges
            .iter()
            .filter(|(e, _)| p.members.iter().any(|&x| dyperedge_enters(e, x)))
            .map(|&(_, m)| u64::from(m))
            .sum();
        hyper + dyper
    }

    /// In-degree `d⁻(X)`: the number of edge copies entering the single set `x`.
    pub fn in_degree(&self, x: VertexSet) -> u64 {
        let hyper: u64 = self
            .hyperedges
            .iter()
            .filter(|(e, _)| hyperedge_enters(e, x))
            .map(|&(_, m)| u64::from(m))
            .sum();
        let dyper: u64 = self
            .dyperedges
            .iter()
            .filter(|(e, _)| dyperedge_enters(e, x))
            .map(|&(_, m)| u64::from(m))
            .sum();
        hyper + dyper
    }
}

fn expand<T: Copy>(entries: &[(T, u32)]) -> Vec<T> {
    entries
        .iter()
        .flat_map(|&(e, m)| std::iter::repeat_n(e, m as usize))
        .collect()
}

/// Entering multisets as `(entry index, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnteringEdges {
    pub hyperedges: Vec<(usize, u32)>,
    pub dyperedges: Vec<(usize, u32)>,
}

impl EnteringEdges {
    pub fn count(&self) -> u64 {
        self.hyperedges
            .iter()
            .chain(&self.dyperedges)
            .map(|&(_, m)| u64::from(m))
            .sum()
    }
}

/// Pairwise disjoint nonempty vertex sets, kept sorted by minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subpartition {
    members: Vec<VertexSet>,
    ground: VertexSet,
}

impl Subpartition {
    pub fn empty() -> Self {
        Subpartition::default()
    }

    pub fn new(mut members: Vec<VertexSet>) -> Result<Self, ModelError> {
        let mut ground = VertexSet::EMPTY;
        for &m in &members {
            if m.is_empty() {
                return Err(ModelError::EmptyMember);
            }
            if ground.intersects(m) {
                let other = *members.iter().find(|o| o.intersects(m)).unwrap();
                return Err(ModelError::OverlappingMembers(other, m));
            }
            ground = ground | m;
        }
        members.sort_by_key(|&m| VertexSet::min(m));
        Ok(Subpartition { members, ground })
    }

    /// Members must already be nonempty, disjoint and in canonical order.
    pub(crate) fn from_canonical(members: Vec<VertexSet>) -> Self {
        let ground = members.iter().fold(VertexSet::EMPTY, |acc, &m| acc | m);
        debug_assert!(members.windows(2).all(|w| w[0].min() < w[1].min()));
        debug_assert_eq!(
            members.iter().map(|m| m.len()).sum::<usize>(),
            ground.len()
        );
        Subpartition { members, ground }
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    /// `∪P`.
    pub fn ground(&self) -> VertexSet {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
