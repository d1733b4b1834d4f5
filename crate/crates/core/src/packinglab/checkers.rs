//! Closed-form packing conditions, each checked by exhaustive enumeration
//! over vertex sets and subpartitions.

use crate::model::{MixedHypergraph, Subpartition, VertexSet};
use crate::oracle::{enumerate_subpartitions, subpartitions_within};
use crate::Outcome;

use super::{PackingError, PackingInstance, PackingMode};

/// Universe cap for the triple loop of the matroid-rooted conditions.
pub const MAX_ROOTED_VERTICES: usize = 8;
/// Universe cap for the set-indexed in-degree conditions.
pub const MAX_SET_VERTICES: usize = 20;

/// Which inequality family failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `d⁻(X) ≥ |S_{V−X}|`.
    SpanningInDegree,
    /// `k ≥ |S_v|`.
    RootMultiplicity,
    /// `d⁻(X) ≥ k − |S_X|`.
    RegularInDegree,
    /// `g(v) ≥ f(v)`.
    BoundOrder,
    /// `e(P) ≥ k|P| − min{k − f(V − ∪P), g(∪P)}`.
    FlexibleCover,
    /// `d⁻(X) ≥ r(S) − r(S_X)`.
    RankInDegree,
    /// `g_k(v) ≥ f(v)`.
    TruncatedBoundOrder,
    /// `r(S_U) + g_k(V − U) ≥ r(S)`.
    RankSpan,
    /// `e(P) + r(S_U) + g_k(W − U) ≥ k|P| + f(U − W)`.
    RootedCover,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::SpanningInDegree => "spanning_in_degree",
            Condition::RootMultiplicity => "root_multiplicity",
            Condition::RegularInDegree => "regular_in_degree",
            Condition::BoundOrder => "bound_order",
            Condition::FlexibleCover => "flexible_cover",
            Condition::RankInDegree => "rank_in_degree",
            Condition::TruncatedBoundOrder => "truncated_bound_order",
            Condition::RankSpan => "rank_span",
            Condition::RootedCover => "rooted_cover",
        }
    }
}

/// The first failing instance of a condition, with both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub vertex: Option<usize>,
    pub set: Option<VertexSet>,
    /// `W` for the rooted cover condition.
    pub outer: Option<VertexSet>,
    pub subpartition: Option<Subpartition>,
    pub lhs: i64,
    pub rhs: i64,
}

impl Violation {
    fn at_vertex(condition: Condition, v: usize, lhs: i64, rhs: i64) -> Self {
        Violation {
            condition,
            vertex: Some(v),
            set: None,
            outer: None,
            subpartition: None,
            lhs,
            rhs,
        }
    }

    fn at_set(condition: Condition, x: VertexSet, lhs: i64, rhs: i64) -> Self {
        Violation {
            set: Some(x),
            vertex: None,
            ..Violation::at_vertex(condition, 0, lhs, rhs)
        }
    }
}

type Checked = Result<Outcome<Violation>, PackingError>;

fn dyper_only(graph: &MixedHypergraph, mode: PackingMode) -> Result<(), PackingError> {
    if graph.hyperedge_count() > 0 {
        Err(PackingError::HyperedgesNotAllowed(mode.as_str()))
    } else {
        Ok(())
    }
}

fn cap(what: &'static str, got: usize, cap: usize) -> Result<(), PackingError> {
    if got > cap {
        Err(PackingError::Capacity { what, got, cap })
    } else {
        Ok(())
    }
}

fn sum_over(x: VertexSet, values: impl Fn(usize) -> u32) -> i64 {
    x.iter().map(|v| i64::from(values(v))).sum()
}

fn nonempty_sets(graph: &MixedHypergraph) -> impl Iterator<Item = VertexSet> {
    graph.universe().subsets().skip(1)
}

/// Dispatches on the instance's mode.
pub fn check(instance: &PackingInstance) -> Checked {
    instance.validate()?;
    match instance.mode {
        PackingMode::Edmonds => check_edmonds(instance),
        PackingMode::KRegular => check_k_regular(instance),
        PackingMode::FgBounded => check_fg_bounded(instance),
        PackingMode::MBased => check_m_based(instance),
        PackingMode::MRootedFgkDyper => check_m_rooted_fgk(instance, false),
        PackingMode::MRootedFgkMixed => check_m_rooted_fgk(instance, true),
    }
}

/// Spanning arborescences rooted at each copy of `S`.
pub fn check_edmonds(instance: &PackingInstance) -> Checked {
    let graph = &instance.graph;
    dyper_only(graph, PackingMode::Edmonds)?;
    cap("vertices", graph.universe().len(), MAX_SET_VERTICES)?;
    let full = graph.universe().full();
    for x in nonempty_sets(graph) {
        let lhs = graph.in_degree(x) as i64;
        let rhs = instance.roots.count_in(full - x) as i64;
        if lhs < rhs {
            return Ok(Outcome::Violated(Violation::at_set(Condition::SpanningInDegree, x, lhs, rhs)));
        }
    }
    Ok(Outcome::Satisfied)
}

/// Arborescences rooted at each copy of `S`, every vertex covered exactly `k` times.
pub fn check_k_regular(instance: &PackingInstance) -> Checked {
    let graph = &instance.graph;
    dyper_only(graph, PackingMode::KRegular)?;
    cap("vertices", graph.universe().len(), MAX_SET_VERTICES)?;
    let k = i64::from(instance.k);
    for v in 0..graph.universe().len() {
        let copies = instance.roots.count_in(VertexSet::singleton(v)) as i64;
        if k < copies {
            return Ok(Outcome::Violated(Violation::at_vertex(
                Condition::RootMultiplicity,
                v,
                k,
                copies,
            )));
        }
    }
    for x in nonempty_sets(graph) {
        let lhs = graph.in_degree(x) as i64;
        let rhs = k - instance.roots.count_in(x) as i64;
        if lhs < rhs {
            return Ok(Outcome::Violated(Violation::at_set(Condition::RegularInDegree, x, lhs, rhs)));
        }
    }
    Ok(Outcome::Satisfied)
}

/// `k` spanning arborescences with per-vertex root counts in `[f, g]`.
pub fn check_fg_bounded(instance: &PackingInstance) -> Checked {
    let graph = &instance.graph;
    dyper_only(graph, PackingMode::FgBounded)?;
    let n = graph.universe().len();
    for v in 0..n {
        if instance.g[v] < instance.f[v] {
            return Ok(Outcome::Violated(Violation::at_vertex(
                Condition::BoundOrder,
                v,
                i64::from(instance.g[v]),
                i64::from(instance.f[v]),
            )));
        }
    }
    let k = i64::from(instance.k);
    let full = graph.universe().full();
    for p in enumerate_subpartitions(graph.universe())? {
        let lhs = graph.entering_count(&p) as i64;
        let outside_f = sum_over(full - p.ground(), |v| instance.f[v]);
        let inside_g = sum_over(p.ground(), |v| instance.g[v]);
        let rhs = k * p.len() as i64 - (k - outside_f).min(inside_g);
        if lhs < rhs {
            return Ok(Outcome::Violated(Violation {
                condition: Condition::FlexibleCover,
                vertex: None,
                set: None,
                outer: None,
                subpartition: Some(p),
                lhs,
                rhs,
            }));
        }
    }
    Ok(Outcome::Satisfied)
}

/// Roots from `S` such that the roots reaching each vertex form a basis.
pub fn check_m_based(instance: &PackingInstance) -> Checked {
    let graph = &instance.graph;
    dyper_only(graph, PackingMode::MBased)?;
    cap("vertices", graph.universe().len(), MAX_SET_VERTICES)?;
    let m = &instance.matroid;
    let total = i64::from(m.full_rank());
    for x in nonempty_sets(graph) {
        let lhs = graph.in_degree(x) as i64;
        let rhs = total - i64::from(m.rank(instance.roots.restrict_to(x)));
        if lhs < rhs {
            return Ok(Outcome::Violated(Violation::at_set(Condition::RankInDegree, x, lhs, rhs)));
        }
    }
    Ok(Outcome::Satisfied)
}

/// Matroid-rooted, `(f, g)`-bounded, `k`-regular packings. With `mixed`
/// the entering counts include hyperedges; otherwise hyperedges are rejected.
pub fn check_m_rooted_fgk(instance: &PackingInstance, mixed: bool) -> Checked {
    let graph = &instance.graph;
    if !mixed {
        dyper_only(graph, PackingMode::MRootedFgkDyper)?;
    }
    let n = graph.universe().len();
    cap("vertices", n, MAX_ROOTED_VERTICES)?;
    let m = &instance.matroid;
    let roots = &instance.roots;
    let rank_of = |x: VertexSet| i64::from(m.rank(roots.restrict_to(x)));
    let g_k = |x: VertexSet| sum_over(x, |v| instance.g_k(v));
    let f = |x: VertexSet| sum_over(x, |v| instance.f[v]);
    let full = graph.universe().full();
    let k = i64::from(instance.k);

    for v in 0..n {
        let (lhs, rhs) = (i64::from(instance.g_k(v)), i64::from(instance.f[v]));
        if lhs < rhs {
            return Ok(Outcome::Violated(Violation::at_vertex(
                Condition::TruncatedBoundOrder,
                v,
                lhs,
                rhs,
            )));
        }
    }
    let total = rank_of(full);
    for u in graph.universe().subsets() {
        let lhs = rank_of(u) + g_k(full - u);
        if lhs < total {
            return Ok(Outcome::Violated(Violation::at_set(Condition::RankSpan, u, lhs, total)));
        }
    }
    for w in graph.universe().subsets() {
        for p in subpartitions_within(w)? {
            let e = graph.entering_count(&p) as i64;
            let demand = k * p.len() as i64;
            for u in graph.universe().subsets() {
                let lhs = e + rank_of(u) + g_k(w - u);
                let rhs = demand + f(u - w);
                if lhs < rhs {
                    return Ok(Outcome::Violated(Violation {
                        condition: Condition::RootedCover,
                        vertex: None,
                        set: Some(u),
                        outer: Some(w),
                        subpartition: Some(p),
                        lhs,
                        rhs,
                    }));
                }
            }
        }
    }
    Ok(Outcome::Satisfied)
}
