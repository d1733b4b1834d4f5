//! Packing characterizations for (mixed hyper)arborescences: closed-form
//! condition checkers, and a brute-force packing search to validate them
//! against at desk scale.
//!
//! | mode | packing sought |
//! |------|----------------|
//! | `edmonds` | one spanning arborescence per root copy in `S` |
//! | `k_regular` | one arborescence per root copy, every vertex in exactly `k` |
//! | `fg_bounded` | `k` spanning arborescences, `f(v) ≤ #rooted at v ≤ g(v)` |
//! | `m_based` | roots from `S`; at every vertex the roots reaching it form a basis of `M` |
//! | `m_rooted_fgk_dyper` | roots form a basis of `M`, `k`-regular, `(f, g)`-bounded |
//! | `m_rooted_fgk_mixed` | as above, hyperedges may be oriented and trimmed freely |
//!
//! Dyperedges are used through trimming to a single arc, hyperedges through
//! orientation followed by trimming; every edge copy serves at most one
//! arborescence.

mod checkers;
mod search;
mod witness;

use thiserror::Error;

use crate::matroids::{Matroid, MatroidError, RootPlacement};
use crate::model::MixedHypergraph;
use crate::oracle::OracleError;

pub use checkers::{
    check, check_edmonds, check_fg_bounded, check_k_regular, check_m_based, check_m_rooted_fgk,
    Condition, Violation,
};
pub use search::{exhaustive_packing_search, SearchCaps};
pub use witness::{validate_witness, EdgeKind, EdgeRef, PackingWitness, WitnessArc, WitnessArborescence, WitnessError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("mode `{0}` works on dypergraphs, but the instance has hyperedges")]
    HyperedgesNotAllowed(&'static str),
    #[error("{what} has {got} entries for {expected} vertices")]
    VectorLength {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("matroid ground size {matroid} differs from the {roots} root copies")]
    GroundMismatch { matroid: usize, roots: usize },
    #[error("{what} = {got} exceeds the cap of {cap}")]
    Capacity {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("unknown packing mode `{0}`")]
    UnknownMode(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PackingMode {
    Edmonds,
    KRegular,
    FgBounded,
    MBased,
    MRootedFgkDyper,
    MRootedFgkMixed,
}

impl PackingMode {
    pub const ALL: [PackingMode; 6] = [
        PackingMode::Edmonds,
        PackingMode::KRegular,
        PackingMode::FgBounded,
        PackingMode::MBased,
        PackingMode::MRootedFgkDyper,
        PackingMode::MRootedFgkMixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PackingMode::Edmonds => "edmonds",
            PackingMode::KRegular => "k_regular",
            PackingMode::FgBounded => "fg_bounded",
            PackingMode::MBased => "m_based",
            PackingMode::MRootedFgkDyper => "m_rooted_fgk_dyper",
            PackingMode::MRootedFgkMixed => "m_rooted_fgk_mixed",
        }
    }

    pub fn is_mixed(self) -> bool {
        self == PackingMode::MRootedFgkMixed
    }
}

impl std::str::FromStr for PackingMode {
    type Err = PackingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PackingMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| PackingError::UnknownMode(s.to_string()))
    }
}

impl std::fmt::Display for PackingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything a packing question can refer to; each mode reads the subset
/// of fields it needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingInstance {
    pub graph: MixedHypergraph,
    pub k: u32,
    pub f: Vec<u32>,
    pub g: Vec<u32>,
    pub roots: RootPlacement,
    pub matroid: Matroid,
    pub mode: PackingMode,
}

impl PackingInstance {
    /// Instance with `f ≡ 0`, `g ≡ k`, no roots and the free matroid.
    pub fn new(graph: MixedHypergraph, mode: PackingMode, k: u32) -> Self {
        let n = graph.universe().len();
        PackingInstance {
            graph,
            k,
            f: vec![0; n],
            g: vec![k; n],
            roots: RootPlacement::default(),
            matroid: Matroid::free(0),
            mode,
        }
    }

    pub fn with_roots(mut self, roots: RootPlacement, matroid: Matroid) -> Self {
        self.roots = roots;
        self.matroid = matroid;
        self
    }

    pub fn with_bounds(mut self, f: Vec<u32>, g: Vec<u32>) -> Self {
        self.f = f;
        self.g = g;
        self
    }

    pub fn validate(&self) -> Result<(), PackingError> {
        let n = self.graph.universe().len();
        for (what, v) in [("f", &self.f), ("g", &self.g)] {
            if v.len() != n {
                return Err(PackingError::VectorLength {
                    what,
                    got: v.len(),
                    expected: n,
                });
            }
        }
        self.roots.check_universe(self.graph.universe())?;
        if self.matroid.ground_size() != self.roots.len() {
            return Err(PackingError::GroundMismatch {
                matroid: self.matroid.ground_size(),
                roots: self.roots.len(),
            });
        }
        if !self.mode.is_mixed() && self.graph.hyperedge_count() > 0 {
            return Err(PackingError::HyperedgesNotAllowed(self.mode.as_str()));
        }
        Ok(())
    }

    /// `g_k(v) = min{g(v), k}`.
    pub fn g_k(&self, v: usize) -> u32 {
        self.g[v].min(self.k)
    }
}
