//! Matroid rank oracles over a multiset of root vertices.
//!
//! Ground elements are `(vertex, copy)` pairs numbered `0..m` in placement
//! order, so two copies of the same vertex are independent elements unless
//! the matroid makes them parallel.

use thiserror::Error;

use crate::model::{VertexSet, VertexUniverse};

/// Largest ground set a [`GroundSet`] mask can address.
pub const MAX_GROUND: usize = 64;
/// Largest ground set accepted for explicit rank tables.
pub const MAX_TABLE_GROUND: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set of size {0} exceeds the supported maximum")]
    GroundTooLarge(usize),
    #[error("root vertex {0} is outside the universe")]
    RootOutsideUniverse(usize),
    #[error("root multiplicity must be at least one")]
    ZeroMultiplicity,
    #[error("partition classes must cover each of the {0} ground elements exactly once")]
    BadPartition(usize),
    #[error("partition has {classes} classes but {capacities} capacities")]
    CapacityCount { classes: usize, capacities: usize },
    #[error("graphic matroid has {edges} edges but the ground set has {ground} elements")]
    EdgeCount { edges: usize, ground: usize },
    #[error("graphic edge endpoint {0} is not a node")]
    BadNode(usize),
    #[error("rank table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("rank table violates the matroid axioms at {0:#b}: {1}")]
    Axiom(u64, &'static str),
}

/// A subset of the matroid ground set.
pub type GroundSet = u64;

/// The root multiset `S`: vertices with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootPlacement {
    roots: Vec<(usize, u32)>,
    element_vertex: Vec<usize>,
}

impl RootPlacement {
    pub fn new(roots: Vec<(usize, u32)>) -> Result<Self, MatroidError> {
        if roots.iter().any(|&(_, m)| m == 0) {
            return Err(MatroidError::ZeroMultiplicity);
        }
        let element_vertex: Vec<usize> = roots
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m as usize))
            .collect();
        if element_vertex.len() > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(element_vertex.len()));
        }
        Ok(RootPlacement {
            roots,
            element_vertex,
        })
    }

    /// One copy of each listed vertex, in order.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Self, MatroidError> {
        Self::new(vertices.into_iter().map(|v| (v, 1)).collect())
    }

    pub fn check_universe(&self, universe: &VertexUniverse) -> Result<(), MatroidError> {
        match self.roots.iter().find(|&&(v, _)| v >= universe.len()) {
            Some(&(v, _)) => Err(MatroidError::RootOutsideUniverse(v)),
            None => Ok(()),
        }
    }

    pub fn roots(&self) -> &[(usize, u32)] {
        &self.roots
    }

    /// Ground size `m = |S|`.
    pub fn len(&self) -> usize {
        self.element_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_vertex.is_empty()
    }

    /// The vertex carrying ground element `e`.
    pub fn vertex_of(&self, e: usize) -> usize {
        self.element_vertex[e]
    }

    pub fn all(&self) -> GroundSet {
        full_ground(self.len())
    }

    /// `S_X`: every ground copy whose vertex lies in `x`.
    pub fn restrict_to(&self, x: VertexSet) -> GroundSet {
        self.element_vertex
            .iter()
            .enumerate()
            .filter(|&(_, &v)| x.contains(v))
            .fold(0, |acc, (e, _)| acc | 1 << e)
    }

    /// `|S_X|`.
    pub fn count_in(&self, x: VertexSet) -> u64 {
        u64::from(self.restrict_to(x).count_ones())
    }
}

fn full_ground(m: usize) -> GroundSet {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidKind {
    Free,
    Uniform { rank: u32 },
    /// Classes of ground element indices; each class contributes at most its capacity.
    Partition {
        classes: Vec<Vec<usize>>,
        capacities: Vec<u32>,
    },
    /// Ground element `i` is `edges[i]` in a multigraph on `nodes` nodes.
    Graphic {
        nodes: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Rank of every subset, indexed by ground mask.
    Table { ranks: Vec<u32> },
}

/// A matroid bound to a ground set of a fixed size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    kind: MatroidKind,
    ground_size: usize,
    class_masks: Vec<GroundSet>,
}

impl Matroid {
    pub fn new(kind: MatroidKind, ground_size: usize) -> Result<Self, MatroidError> {
        if ground_size > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(ground_size));
        }
        let mut class_masks = Vec::new();
        match &kind {
            MatroidKind::Free | MatroidKind::Uniform { .. } => {}
            MatroidKind::Partition {
                classes,
                capacities,
            } => {
                if classes.len() != capacities.len() {
                    return Err(MatroidError::CapacityCount {
                        classes: classes.len(),
                        capacities: capacities.len(),
                    });
                }
                let mut seen: GroundSet = 0;
                for class in classes {
                    let mut mask = 0;
                    for &e in class {
                        if e >= ground_size || (seen | mask) >> e & 1 == 1 {
                            return Err(MatroidError::BadPartition(ground_size));
                        }
                        mask |= 1 << e;
                    }
                    seen |= mask;
                    class_masks.push(mask);
                }
                if seen != full_ground(ground_size) {
                    return Err(MatroidError::BadPartition(ground_size));
                }
            }
            MatroidKind::Graphic { nodes, edges } => {
                if edges.len() != ground_size {
                    return Err(MatroidError::EdgeCount {
                        edges: edges.len(),
                        ground: ground_size,
                    });
                }
                if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= *nodes || v >= *nodes) {
                    return Err(MatroidError::BadNode(u.max(v)));
                }
            }
            MatroidKind::Table { ranks } => {
                if ground_size > MAX_TABLE_GROUND {
                    return Err(MatroidError::GroundTooLarge(ground_size));
                }
                validate_table(ranks, ground_size)?;
            }
        }
        Ok(Matroid {
            kind,
            ground_size,
            class_masks,
        })
    }

    pub fn free(ground_size: usize) -> Self {
        Self::new(MatroidKind::Free, ground_size).expect("free matroid is always valid")
    }

    pub fn uniform(rank: u32, ground_size: usize) -> Self {
        Self::new(MatroidKind::Uniform { rank }, ground_size).expect("uniform matroid is always valid")
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ground(&self) -> GroundSet {
        full_ground(self.ground_size)
    }

    pub fn rank(&self, set: GroundSet) -> u32 {
        debug_assert_eq!(set & !self.ground(), 0, "set outside ground");
        match &self.kind {
            MatroidKind::Free => set.count_ones(),
            MatroidKind::Uniform { rank } => set.count_ones().min(*rank),
            MatroidKind::Partition { capacities, .. } => self
                .class_masks
                .iter()
                .zip(capacities)
                .map(|(&mask, &cap)| (set & mask).count_ones().min(cap))
                .sum(),
            MatroidKind::Graphic { nodes, edges } => graphic_rank(*nodes, edges, set),
            MatroidKind::Table { ranks } => ranks[set as usize],
        }
    }

    pub fn full_rank(&self) -> u32 {
        self.rank(self.ground())
    }

    pub fn is_independent(&self, set: GroundSet) -> bool {
        self.rank(set) == set.count_ones()
    }

    pub fn is_basis(&self, set: GroundSet) -> bool {
        self.is_independent(set) && set.count_ones() == self.full_rank()
    }

    /// All bases as ground masks, in ascending order. Intended for small ground sets.
    pub fn bases(&self) -> Vec<GroundSet> {
        assert!(self.ground_size <= 20, "basis enumeration is exponential");
        let r = self.full_rank();
        (0..=self.ground())
            .filter(|&s| s.count_ones() == r && self.is_independent(s))
            .collect()
    }
}

/// Number of edges in a spanning forest of the edges selected by `set`.
fn graphic_rank(nodes: usize, edges: &[(usize, usize)], set: GroundSet) -> u32 {
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut rank = 0;
    for (i, &(u, v)) in edges.iter().enumerate() {
        if set >> i & 1 == 0 {
            continue;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            rank += 1;
        }
    }
    rank
}

fn validate_table(ranks: &[u32], m: usize) -> Result<(), MatroidError> {
    let expected = 1usize << m;
    if ranks.len() != expected {
        return Err(MatroidError::TableLength {
            got: ranks.len(),
            expected,
        });
    }
    if ranks[0] != 0 {
        return Err(MatroidError::Axiom(0, "rank of the empty set must be zero"));
    }
    for s in 0..expected {
        for e in (0..m).filter(|e| s >> e & 1 == 0) {
            let se = s | 1 << e;
            let step = i64::from(ranks[se]) - i64::from(ranks[s]);
            if step < 0 {
                return Err(MatroidError::Axiom(se as u64, "rank is not monotone"));
            }
            if step > 1 {
                return Err(MatroidError::Axiom(se as u64, "rank grows by more than one"));
            }
            // Local submodularity plus unit increments implies submodularity.
            for f in (e + 1..m).filter(|f| s >> f & 1 == 0) {
                let sf = s | 1 << f;
                if ranks[se] + ranks[sf] < ranks[se | 1 << f] + ranks[s] {
                    return Err(MatroidError::Axiom(
                        (se | 1 << f) as u64,
                        "rank is not submodular",
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_ranks() {
        assert_eq!(Matroid::uniform(1, 2).rank(0b11), 1);
        assert_eq!(Matroid::free(3).rank(0b101), 2);
        let triangle = Matroid::new(
            MatroidKind::Graphic {
                nodes: 3,
                edges: vec![(0, 1), (1, 2), (2, 0)],
            },
            3,
        )
        .unwrap();
        assert_eq!(triangle.rank(0b111), 2);
        assert_eq!(triangle.rank(0b011), 2);
        let partition = Matroid::new(
            MatroidKind::Partition {
                classes: vec![vec![0, 1], vec![2]],
                capacities: vec![1, 1],
            },
            3,
        )
        .unwrap();
        assert_eq!(partition.rank(0b011), 1);
        assert_eq!(partition.rank(0b111), 2);
        assert_eq!(partition.bases(), vec![0b101, 0b110]);
    }

    #[test]
    fn restriction_follows_multiplicity() {
        let s = RootPlacement::new(vec![(0, 2), (1, 1)]).unwrap();
        assert_eq!(s.restrict_to(VertexSet::singleton(0)), 0b011);
        assert_eq!(s.restrict_to(VertexSet::EMPTY), 0);
        let s = RootPlacement::from_vertices([0, 1]).unwrap();
        assert_eq!(s.restrict_to(VertexSet::from_indices([1, 2])), 0b10);
    }

    #[test]
    fn table_axioms_are_enforced() {
        // Uniform rank one on two elements.
        assert!(Matroid::new(MatroidKind::Table { ranks: vec![0, 1, 1, 1] }, 2).is_ok());
        let bad = [
            vec![1, 1, 1, 1],
            vec![0, 2, 1, 2],
            vec![0, 1, 1, 0],
            vec![0, 1, 1],
        ];
        for ranks in bad {
            assert!(Matroid::new(MatroidKind::Table { ranks }, 2).is_err());
        }
        // Two parallel classes {0,1} and {2,3}.
        let mut ranks = vec![0u32; 16];
        for s in 1..16usize {
            ranks[s] = if s == 0b0011 || s == 0b1100 { 1 } else { s.count_ones().min(2) };
        }
        ranks[0b1111] = 2;
        assert!(Matroid::new(MatroidKind::Table { ranks }, 4).is_ok());
    }

    #[test]
    fn malformed_structures_rejected() {
        assert!(Matroid::new(
            MatroidKind::Partition { classes: vec![vec![0]], capacities: vec![1] },
            2
        )
        .is_err());
        assert!(Matroid::new(
            MatroidKind::Graphic { nodes: 2, edges: vec![(0, 2)] },
            1
        )
        .is_err());
        assert!(Matroid::new(MatroidKind::Graphic { nodes: 2, edges: vec![] }, 1).is_err());
    }
}
