//! Orientation of mixed hypergraphs under supermodular-minus-submodular
//! covering demands, plus exhaustive desk-scale checkers for the related
//! arborescence packing characterizations.
//!
//! The central routine is [`orienter::orient_all`]: given a mixed hypergraph
//! `F = (V, E ∪ A)`, an intersecting supermodular demand `h` and a
//! submodular budget `b`, it either finds a subpartition `P` with
//! `e(P) < Σ_{X∈P} h(X) − b(∪P)` or orients every hyperedge so that the
//! resulting dypergraph still satisfies that inequality for every
//! subpartition. Everything is exhaustive over subpartitions and intended
//! for universes of at most a dozen vertices.
//!
//! See the guide in `book/` for a walkthrough of the concepts.

pub mod format;
pub mod gen;
pub mod matroids;
pub mod model;
pub mod oracle;
pub mod orienter;
pub mod packinglab;
pub mod setfuncs;
pub mod uncrossing;

/// Result of checking a universally quantified condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<W> {
    Satisfied,
    Violated(W),
}

impl<W> Outcome<W> {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Outcome::Satisfied)
    }

    pub fn violation(self) -> Option<W> {
        match self {
            Outcome::Satisfied => None,
            Outcome::Violated(w) => Some(w),
        }
    }

    pub fn as_violation(&self) -> Option<&W> {
        match self {
            Outcome::Satisfied => None,
            Outcome::Violated(w) => Some(w),
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/set-functions.md")]
    mod set_functions {}
    #[doc = include_str!("../../../book/src/matroids.md")]
    mod matroids {}
    #[doc = include_str!("../../../book/src/subpartitions.md")]
    mod subpartitions {}
    #[doc = include_str!("../../../book/src/orientation.md")]
    mod orientation {}
    #[doc = include_str!("../../../book/src/uncrossing.md")]
    mod uncrossing {}
    #[doc = include_str!("../../../book/src/packing.md")]
    mod packing {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
