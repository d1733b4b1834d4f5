//! Uncrossing two subpartitions into a laminar double cover, and the
//! inequalities and tightness transfer that come with it.
//!
//! `P₁ ⊎ P₂` covers every vertex of `∪P₁ ∩ ∪P₂` twice and every other
//! vertex of `∪P₁ ∪ ∪P₂` once. Replacing a crossing pair `(X, Y)` by
//! `(X ∩ Y, X ∪ Y)` keeps those multiplicities and strictly increases
//! `Σ |X|²`, so repeating it ends in a laminar family `P′`. The maximal
//! sets of `P′` partition the union (`P₄`) and the rest partition the
//! intersection (`P₃`).

use thiserror::Error;

use crate::model::{hyperedge_enters, Hyperedge, MixedHypergraph, Subpartition, VertexSet};
use crate::oracle::{deficiency, OracleError};
use crate::setfuncs::{SetFuncError, SetFunctionSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UncrossError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    SetFunction(#[from] SetFuncError),
    #[error("integer overflow in an uncrossing inequality")]
    Overflow,
    #[error("demand/budget inequality fails; h or b violates its modularity hypothesis")]
    HypothesisViolation(Box<UncrossReport>),
    #[error("tightness transfer precondition: {0}")]
    Precondition(&'static str),
    #[error("tightness transfer failed: {0}")]
    TransferFailure(&'static str),
}

/// A multiset of nonempty vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiCover {
    pub sets: Vec<VertexSet>,
}

impl MultiCover {
    /// Number of sets containing `v`.
    pub fn multiplicity(&self, v: usize) -> usize {
        self.sets.iter().filter(|s| s.contains(v)).count()
    }

    pub fn is_laminar(&self) -> bool {
        self.sets
            .iter()
            .enumerate()
            .all(|(i, x)| self.sets[i + 1..].iter().all(|y| !x.crosses(*y)))
    }

    fn support(&self) -> VertexSet {
        self.sets.iter().fold(VertexSet::EMPTY, |acc, &s| acc | s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncrossResult {
    /// Partition of `∪P₁ ∩ ∪P₂`.
    pub p3: Subpartition,
    /// Partition of `∪P₁ ∪ ∪P₂`.
    pub p4: Subpartition,
    /// The laminar family `P′`.
    pub laminar: MultiCover,
    /// Number of uncrossing replacements performed.
    pub steps: usize,
}

/// Uncrosses `P₁ ⊎ P₂`, always replacing the first crossing pair in list order.
pub fn uncross_pair(p1: &Subpartition, p2: &Subpartition) -> UncrossResult {
    let mut sets: Vec<VertexSet> = p1.members().iter().chain(p2.members()).copied().collect();
    let mut steps = 0;
    while let Some((i, j)) = first_crossing(&sets) {
        let (x, y) = (sets[i], sets[j]);
        sets[i] = x & y;
        sets[j] = x | y;
        steps += 1;
    }

    // Maximal sets go to P₄ (one copy of a duplicated maximal set), the rest to P₃.
    let mut p4 = Vec::new();
    let mut p3 = Vec::new();
    for (i, &s) in sets.iter().enumerate() {
        let strictly_inside = sets.iter().any(|&t| t != s && s.is_subset(t));
        let duplicate_taken = sets[..i].contains(&s) && p4.contains(&s);
        if strictly_inside || duplicate_taken {
            p3.push(s);
        } else {
            p4.push(s);
        }
    }
    UncrossResult {
        p3: Subpartition::new(p3).expect("non-maximal sets of a laminar double cover are disjoint"),
        p4: Subpartition::new(p4).expect("maximal sets of a laminar family are disjoint"),
        laminar: MultiCover { sets },
        steps,
    }
}

fn first_crossing(sets: &[VertexSet]) -> Option<(usize, usize)> {
    (0..sets.len()).find_map(|i| {
        (i + 1..sets.len())
            .find(|&j| sets[i].crosses(sets[j]))
            .map(|j| (i, j))
    })
}

/// Structural facts about an [`UncrossResult`], each checked independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UncrossInvariants {
    pub multiplicity_conserved: bool,
    pub laminar: bool,
    pub p3_ground_is_intersection: bool,
    pub p4_ground_is_union: bool,
    /// Steps do not exceed the `Σ|X|²` potential bound.
    pub within_step_bound: bool,
}

impl UncrossInvariants {
    pub fn all(&self) -> bool {
        self.multiplicity_conserved
            && self.laminar
            && self.p3_ground_is_intersection
            && self.p4_ground_is_union
            && self.within_step_bound
    }
}

pub fn check_invariants(p1: &Subpartition, p2: &Subpartition, r: &UncrossResult) -> UncrossInvariants {
    let original = MultiCover {
        sets: p1.members().iter().chain(p2.members()).copied().collect(),
    };
    let support = original.support() | r.laminar.support();
    let multiplicity_conserved = r.laminar.sets.len() == original.sets.len()
        && r.laminar.sets.iter().all(|s| !s.is_empty())
        && support
            .iter()
            .all(|v| original.multiplicity(v) == r.laminar.multiplicity(v));
    let n = support.len();
    let potential = |c: &MultiCover| c.sets.iter().map(|s| s.len() * s.len()).sum::<usize>();
    let bound = (2 * n * n * n).saturating_sub(potential(&original));
    let all_assigned = r.p3.members().iter().chain(r.p4.members()).count() == r.laminar.sets.len();
    UncrossInvariants {
        multiplicity_conserved: multiplicity_conserved && all_assigned,
        laminar: r.laminar.is_laminar(),
        p3_ground_is_intersection: r.p3.ground() == p1.ground() & p2.ground(),
        p4_ground_is_union: r.p4.ground() == p1.ground() | p2.ground(),
        within_step_bound: r.steps <= bound && potential(&r.laminar) >= potential(&original) + r.steps,
    }
}

/// Both sides of the demand/budget inequality and of the entering-edge
/// containment, with slacks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncrossReport {
    /// `Σ_{P₁}h − b(∪P₁) + Σ_{P₂}h − b(∪P₂)`.
    pub demand_before: i64,
    /// `Σ_{P₃}h − b(∪P₃) + Σ_{P₄}h − b(∪P₄)`.
    pub demand_after: i64,
    /// `demand_after − demand_before`; nonnegative when the inequality holds.
    pub demand_slack: i64,
    /// `e(P₁) + e(P₂)`.
    pub entering_before: u64,
    /// `e(P₃) + e(P₄)`.
    pub entering_after: u64,
    /// Per edge entry, `E(P₁) ⊎ E(P₂) ⊇ E(P₃) ⊎ E(P₄)` (and likewise for dyperedges).
    pub containment_holds: bool,
    /// Whether the two multisets are equal, not just contained.
    pub containment_equal: bool,
}

impl UncrossReport {
    pub fn demand_holds(&self) -> bool {
        self.demand_slack >= 0
    }

    pub fn entering_slack(&self) -> i64 {
        self.entering_before as i64 - self.entering_after as i64
    }
}

fn net_demand(h: &SetFunctionSpec, b: &SetFunctionSpec, p: &Subpartition) -> Result<i64, UncrossError> {
    let mut total = 0i64;
    for &x in p.members() {
        total = total.checked_add(h.eval(x)?).ok_or(UncrossError::Overflow)?;
    }
    total.checked_sub(b.eval(p.ground())?).ok_or(UncrossError::Overflow)
}

/// Per-entry counts `(hyperedges, dyperedges)` of the edges entering `p`.
fn entering_profile(graph: &MixedHypergraph, p: &Subpartition) -> (Vec<u64>, Vec<u64>) {
    let mut hyper = vec![0; graph.hyperedges().len()];
    let mut dyper = vec![0; graph.dyperedges().len()];
    let entering = graph.entering_edges(p);
    for (i, m) in entering.hyperedges {
        hyper[i] += u64::from(m);
    }
    for (i, m) in entering.dyperedges {
        dyper[i] += u64::from(m);
    }
    (hyper, dyper)
}

fn add(a: (Vec<u64>, Vec<u64>), b: (Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    let zip = |x: Vec<u64>, y: Vec<u64>| x.into_iter().zip(y).map(|(p, q)| p + q).collect();
    (zip(a.0, b.0), zip(a.1, b.1))
}

pub fn check_uncross_inequalities(
    p1: &Subpartition,
    p2: &Subpartition,
    result: &UncrossResult,
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
) -> Result<UncrossReport, UncrossError> {
    let sum = |x: i64, y: i64| x.checked_add(y).ok_or(UncrossError::Overflow);
    let demand_before = sum(net_demand(h, b, p1)?, net_demand(h, b, p2)?)?;
    let demand_after = sum(net_demand(h, b, &result.p3)?, net_demand(h, b, &result.p4)?)?;

    let before = add(entering_profile(graph, p1), entering_profile(graph, p2));
    let after = add(entering_profile(graph, &result.p3), entering_profile(graph, &result.p4));
    let pairs = || {
        before
            .0
            .iter()
            .zip(&after.0)
            .chain(before.1.iter().zip(&after.1))
    };
    let report = UncrossReport {
        demand_before,
        demand_after,
        demand_slack: demand_after
            .checked_sub(demand_before)
            .ok_or(UncrossError::Overflow)?,
        entering_before: before.0.iter().chain(&before.1).sum(),
        entering_after: after.0.iter().chain(&after.1).sum(),
        containment_holds: pairs().all(|(x, y)| x >= y),
        containment_equal: pairs().all(|(x, y)| x == y),
    };
    if !report.demand_holds() {
        return Err(UncrossError::HypothesisViolation(Box::new(report)));
    }
    Ok(report)
}

/// Evidence that `P₃` is again tight and entered by the pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferProof {
    pub result: UncrossResult,
    pub report: UncrossReport,
    pub p3_deficiency: i64,
}

/// For tight `P₁`, `P₂` whose grounds the pivot `Y` enters, shows that the
/// uncrossed `P₃` is tight, that the entering multisets are equal, and that
/// `Y` enters `∪P₃`.
///
/// The grounds of `P₁` and `P₂` must intersect; the covering condition is
/// assumed to hold on `graph`.
pub fn tightness_transfer(
    p1: &Subpartition,
    p2: &Subpartition,
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    pivot: &Hyperedge,
) -> Result<TransferProof, UncrossError> {
    for p in [p1, p2] {
        if deficiency(graph, h, b, p)? != 0 {
            return Err(UncrossError::Precondition("input subpartition is not tight"));
        }
        if !hyperedge_enters(pivot, p.ground()) {
            return Err(UncrossError::Precondition("pivot does not enter an input ground"));
        }
    }
    if !p1.ground().intersects(p2.ground()) {
        return Err(UncrossError::Precondition("input grounds are disjoint"));
    }

    let result = uncross_pair(p1, p2);
    let report = check_uncross_inequalities(p1, p2, &result, graph, h, b)?;
    if !report.containment_holds {
        return Err(UncrossError::TransferFailure("entering multisets are not contained"));
    }
    if !report.containment_equal {
        return Err(UncrossError::TransferFailure("entering multisets are not equal"));
    }
    let p3_deficiency = deficiency(graph, h, b, &result.p3)?;
    if p3_deficiency != 0 {
        return Err(UncrossError::TransferFailure("intersection subpartition is not tight"));
    }
    if !hyperedge_enters(pivot, result.p3.ground()) {
        return Err(UncrossError::TransferFailure("pivot does not enter the intersection ground"));
    }
    Ok(TransferProof {
        result,
        report,
        p3_deficiency,
    })
}
