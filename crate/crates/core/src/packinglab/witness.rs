//! Packing witnesses and an independent validator for them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::VertexSet;

use super::{PackingInstance, PackingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Hyperedge,
    Dyperedge,
}

/// One copy of an edge entry of the instance graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub kind: EdgeKind,
    pub entry: usize,
    pub copy: u32,
}

/// The arc `tail → head` an edge copy was oriented and trimmed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessArc {
    pub edge: EdgeRef,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessArborescence {
    pub root: usize,
    /// Ground element of `S` the member is rooted at, when the mode uses `S`.
    pub root_element: Option<usize>,
    pub arcs: Vec<WitnessArc>,
}

impl WitnessArborescence {
    pub fn vertices(&self) -> VertexSet {
        self.arcs
            .iter()
            .fold(VertexSet::singleton(self.root), |acc, a| acc.with(a.tail).with(a.head))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PackingWitness {
    pub arborescences: Vec<WitnessArborescence>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("member {member}: edge reference {edge:?} does not exist")]
    UnknownEdge { member: usize, edge: EdgeRef },
    #[error("edge copy {0:?} is used twice")]
    EdgeReused(EdgeRef),
    #[error("member {member}: arc {tail} -> {head} is not a trim of its edge")]
    BadArc { member: usize, tail: usize, head: usize },
    #[error("member {member}: hyperedges may only be used in mixed mode")]
    HyperedgeInDyperMode { member: usize },
    #[error("member {member}: vertex {vertex} is outside the universe")]
    OutsideUniverse { member: usize, vertex: usize },
    #[error("member {member} is not an arborescence rooted at {root}")]
    NotArborescence { member: usize, root: usize },
    #[error("member {0} needs a root element")]
    MissingRootElement(usize),
    #[error("member {member}: root element {element} is invalid or not at its root")]
    BadRootElement { member: usize, element: usize },
    #[error("root element {0} is used by two members")]
    RootElementReused(usize),
    #[error("expected {expected} members, found {got}")]
    MemberCount { expected: usize, got: usize },
    #[error("member {0} must be spanning")]
    NotSpanning(usize),
    #[error("vertex {vertex} lies in {got} members instead of {expected}")]
    Regularity { vertex: usize, got: usize, expected: usize },
    #[error("vertex {vertex} roots {got} members, outside [{f}, {g}]")]
    RootBounds { vertex: usize, got: u32, f: u32, g: u32 },
    #[error("the root elements do not form a basis")]
    RootsNotBasis,
    #[error("the roots of the members containing vertex {0} do not form a basis")]
    LocalRootsNotBasis(usize),
}

/// Checks a witness against the instance from scratch: edge references and
/// trims, disjointness, the arborescence property of every member, and the
/// constraints of the instance's mode.
pub fn validate_witness(instance: &PackingInstance, witness: &PackingWitness) -> Result<(), WitnessError> {
    let graph = &instance.graph;
    let n = graph.universe().len();
    let members = &witness.arborescences;
    let mut used = HashSet::new();

    for (j, member) in members.iter().enumerate() {
        if member.root >= n {
            return Err(WitnessError::OutsideUniverse {
                member: j,
                vertex: member.root,
            });
        }
        for arc in &member.arcs {
            for v in [arc.tail, arc.head] {
                if v >= n {
                    return Err(WitnessError::OutsideUniverse { member: j, vertex: v });
                }
            }
            let bad_arc = WitnessError::BadArc {
                member: j,
                tail: arc.tail,
                head: arc.head,
            };
            let unknown = WitnessError::UnknownEdge {
                member: j,
                edge: arc.edge,
            };
            match arc.edge.kind {
                EdgeKind::Dyperedge => {
                    let (edge, mult) = graph.dyperedges().get(arc.edge.entry).ok_or(unknown.clone())?;
                    if arc.edge.copy >= *mult {
                        return Err(unknown);
                    }
                    if edge.head() != arc.head || !edge.tails().contains(arc.tail) {
                        return Err(bad_arc);
                    }
                }
                EdgeKind::Hyperedge => {
                    if !instance.mode.is_mixed() {
                        return Err(WitnessError::HyperedgeInDyperMode { member: j });
                    }
                    let (edge, mult) = graph.hyperedges().get(arc.edge.entry).ok_or(unknown.clone())?;
                    if arc.edge.copy >= *mult {
                        return Err(unknown);
                    }
                    let x = edge.members();
                    if arc.tail == arc.head || !x.contains(arc.tail) || !x.contains(arc.head) {
                        return Err(bad_arc);
                    }
                }
            }
            if !used.insert(arc.edge) {
                return Err(WitnessError::EdgeReused(arc.edge));
            }
        }
        if !is_arborescence(member) {
            return Err(WitnessError::NotArborescence {
                member: j,
                root: member.root,
            });
        }
    }

    let spans: Vec<VertexSet> = members.iter().map(WitnessArborescence::vertices).collect();
    let full = graph.universe().full();
    let mode = instance.mode;

    let uses_roots = !matches!(mode, PackingMode::FgBounded);
    let mut elements = 0u64;
    if uses_roots {
        for (j, member) in members.iter().enumerate() {
            let e = member.root_element.ok_or(WitnessError::MissingRootElement(j))?;
            if e >= instance.roots.len() || instance.roots.vertex_of(e) != member.root {
                return Err(WitnessError::BadRootElement { member: j, element: e });
            }
            if elements & 1 << e != 0 {
                return Err(WitnessError::RootElementReused(e));
            }
            elements |= 1 << e;
        }
    }

    match mode {
        PackingMode::Edmonds | PackingMode::KRegular => {
            if members.len() != instance.roots.len() {
                return Err(WitnessError::MemberCount {
                    expected: instance.roots.len(),
                    got: members.len(),
                });
            }
            if mode == PackingMode::Edmonds {
                spanning(&spans, full)?;
            } else {
                regular(&spans, n, instance.k as usize)?;
            }
        }
        PackingMode::FgBounded => {
            if members.len() != instance.k as usize {
                return Err(WitnessError::MemberCount {
                    expected: instance.k as usize,
                    got: members.len(),
                });
            }
            spanning(&spans, full)?;
            root_bounds(members, instance, |v| instance.g[v])?;
        }
        PackingMode::MBased => {
            for v in 0..n {
                let local = members
                    .iter()
                    .zip(&spans)
                    .filter(|(_, span)| span.contains(v))
                    .fold(0u64, |acc, (m, _)| acc | 1 << m.root_element.unwrap_or(0));
                if !instance.matroid.is_basis(local) {
                    return Err(WitnessError::LocalRootsNotBasis(v));
                }
            }
        }
        PackingMode::MRootedFgkDyper | PackingMode::MRootedFgkMixed => {
            if !instance.matroid.is_basis(elements) {
                return Err(WitnessError::RootsNotBasis);
            }
            regular(&spans, n, instance.k as usize)?;
            root_bounds(members, instance, |v| instance.g[v])?;
        }
    }
    Ok(())
}

/// `|X| − 1` arcs on `X`, in-degree 1 off the root, 0 at the root, and
/// everything reachable from the root.
fn is_arborescence(member: &WitnessArborescence) -> bool {
    let span = member.vertices();
    if member.arcs.len() + 1 != span.len() {
        return false;
    }
    let mut indegree = [0usize; 32];
    for arc in &member.arcs {
        indegree[arc.head] += 1;
    }
    let degrees_ok = span
        .iter()
        .all(|v| indegree[v] == usize::from(v != member.root));
    if !degrees_ok {
        return false;
    }
    let mut reached = VertexSet::singleton(member.root);
    loop {
        let next = member
            .arcs
            .iter()
            .filter(|a| reached.contains(a.tail))
            .fold(reached, |acc, a| acc.with(a.head));
        if next == reached {
            return reached == span;
        }
        reached = next;
    }
}

fn spanning(spans: &[VertexSet], full: VertexSet) -> Result<(), WitnessError> {
    match spans.iter().position(|&s| s != full) {
        Some(j) => Err(WitnessError::NotSpanning(j)),
        None => Ok(()),
    }
}

fn regular(spans: &[VertexSet], n: usize, k: usize) -> Result<(), WitnessError> {
    for v in 0..n {
        let got = spans.iter().filter(|s| s.contains(v)).count();
        if got != k {
            return Err(WitnessError::Regularity { vertex: v, got, expected: k });
        }
    }
    Ok(())
}

fn root_bounds(
    members: &[WitnessArborescence],
    instance: &PackingInstance,
    upper: impl Fn(usize) -> u32,
) -> Result<(), WitnessError> {
    for v in 0..instance.graph.universe().len() {
        let got = members.iter().filter(|m| m.root == v).count() as u32;
        let (f, g) = (instance.f[v], upper(v));
        if got < f || got > g {
            return Err(WitnessError::RootBounds { vertex: v, got, f, g });
        }
    }
    Ok(())
}
