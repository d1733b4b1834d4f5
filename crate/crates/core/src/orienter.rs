//! Sequential hyperedge orientation.
//!
//! Hyperedges are oriented one copy at a time. Before orienting `Y` we
//! collect the tight subpartitions whose ground `Y` enters. If there are
//! none, no subpartition can lose its slack by `Y` turning into a dyperedge,
//! so any head works. Otherwise the grounds of the tight family are closed
//! under intersection, the intersection is itself the ground of a tight
//! member and meets `Y`; a head chosen inside it keeps `Y` entering every
//! tight subpartition, so the covering condition survives the step.

use thiserror::Error;

use crate::model::{
    dyperedge_enters, hyperedge_enters, orient_edge, Dyperedge, Hyperedge, MixedHypergraph, ModelError,
    VertexSet,
};
use crate::oracle::{
    check_condition_parallel, min_tight_ground, tight_subpartitions, ConditionTable, OracleError,
    TightFamily, ViolationCertificate, MAX_ENUM_VERTICES, MAX_TABLE_VERTICES,
};
use crate::setfuncs::SetFunctionSpec;
use crate::Outcome;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrienterError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("processing order is not a permutation of the {0} hyperedge copies")]
    BadOrder(usize),
    #[error("covering condition failed after orienting step {step}")]
    InvariantBroken {
        step: usize,
        certificate: Box<ViolationCertificate>,
    },
    #[error("empty tight family at step {step}, yet subpartition {subpartition:?} is tight with the pivot entering a member")]
    UncoveredCase {
        step: usize,
        subpartition: crate::model::Subpartition,
    },
    #[error("orientation still contains hyperedges")]
    NotOriented,
}

/// Which head-selection rule fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadRule {
    /// No tight subpartition is entered by the pivot; smallest vertex of `Y`.
    EmptyFamilyArbitrary,
    /// Smallest vertex of `Y ∩ common_ground`.
    MinTightIntersection,
}

impl HeadRule {
    pub fn as_str(self) -> &'static str {
        match self {
            HeadRule::EmptyFamilyArbitrary => "empty_family_arbitrary",
            HeadRule::MinTightIntersection => "min_tight_intersection",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationStep {
    /// Position of the pivot in the expanded hyperedge list of the input.
    pub edge_index: usize,
    pub edge: Hyperedge,
    pub family_size: usize,
    pub common_ground: Option<VertexSet>,
    pub chosen_head: usize,
    pub rule: HeadRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationResult {
    /// The input with every hyperedge replaced by its chosen dyperedge.
    pub oriented: MixedHypergraph,
    pub steps: Vec<OrientationStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientOutcome {
    Oriented(OrientationResult),
    Infeasible(ViolationCertificate),
}

#[derive(Debug, Clone, Default)]
pub struct OrientOptions {
    /// Processing order as a permutation of expanded hyperedge positions;
    /// input order when absent.
    pub order: Option<Vec<usize>>,
    /// Re-run the full covering check after every step and confirm the
    /// empty-family case analysis by enumeration.
    pub recheck_each_step: bool,
    /// Threads for the full covering checks.
    pub workers: usize,
}

/// Orients every hyperedge, or returns a certificate that no orientation
/// can exist.
pub fn orient_all(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
) -> Result<OrientOutcome, OrienterError> {
    orient_all_with(graph, h, b, &OrientOptions::default())
}

pub fn orient_all_with(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    options: &OrientOptions,
) -> Result<OrientOutcome, OrienterError> {
    let workers = options.workers.max(1);
    if let Outcome::Violated(cert) = check_condition_parallel(graph, h, b, workers)? {
        return Ok(OrientOutcome::Infeasible(cert));
    }

    let pivots = graph.hyperedge_list();
    let order = match &options.order {
        None => (0..pivots.len()).collect(),
        Some(order) => {
            let mut seen = vec![false; pivots.len()];
            for &i in order {
                if i >= pivots.len() || std::mem::replace(&mut seen[i], true) {
                    return Err(OrienterError::BadOrder(pivots.len()));
                }
            }
            if order.len() != pivots.len() {
                return Err(OrienterError::BadOrder(pivots.len()));
            }
            order.clone()
        }
    };

    let n = graph.universe().len();
    let mut scanner = if n <= MAX_TABLE_VERTICES {
        Scanner::cached(graph, h, b)?
    } else if n <= MAX_ENUM_VERTICES {
        Scanner::Streaming
    } else {
        return Err(OracleError::Capacity {
            got: n,
            cap: MAX_ENUM_VERTICES,
        }
        .into());
    };

    let mut current = graph.clone();
    let mut steps = Vec::with_capacity(order.len());
    for (step, &edge_index) in order.iter().enumerate() {
        let pivot = pivots[edge_index];
        let family = scanner.tight_family(&current, h, b, &pivot)?;
        let (head, rule, common) = if family.is_empty() {
            if options.recheck_each_step || cfg!(debug_assertions) {
                confirm_empty_case(&scanner, &current, h, b, &pivot, step)?;
            }
            let head = pivot.members().min().expect("hyperedges are nonempty");
            (head, HeadRule::EmptyFamilyArbitrary, None)
        } else {
            let common = min_tight_ground(&family, &pivot)?;
            let head = (pivot.members() & common)
                .min()
                .expect("min_tight_ground checked the intersection");
            (head, HeadRule::MinTightIntersection, Some(common))
        };

        let oriented = orient_edge(&pivot, head)?;
        let entry = current
            .hyperedges()
            .iter()
            .position(|(e, _)| *e == pivot)
            .expect("pivot copy is still present");
        current.remove_hyperedge_copy(entry);
        current.add_dyperedge(oriented, 1)?;
        scanner.record(&pivot, &oriented);

        steps.push(OrientationStep {
            edge_index,
            edge: pivot,
            family_size: family.len(),
            common_ground: common,
            chosen_head: head,
            rule,
        });

        if options.recheck_each_step {
            if let Outcome::Violated(cert) = check_condition_parallel(&current, h, b, workers)? {
                return Err(OrienterError::InvariantBroken {
                    step,
                    certificate: Box::new(cert),
                });
            }
        }
    }

    Ok(OrientOutcome::Oriented(OrientationResult {
        oriented: current,
        steps,
    }))
}

/// With no tight subpartition entered by the pivot, every subpartition
/// either keeps its entering count whatever the head, or has slack at least
/// one.
fn confirm_empty_case(
    scanner: &Scanner,
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    pivot: &Hyperedge,
    step: usize,
) -> Result<(), OrienterError> {
    let entering_member =
        |p: &crate::model::Subpartition| p.members().iter().any(|&x| hyperedge_enters(pivot, x));
    let check = |p: &crate::model::Subpartition, d: i64| -> Result<(), OrienterError> {
        let keeps_count = !entering_member(p) || !hyperedge_enters(pivot, p.ground());
        if keeps_count || d <= -1 {
            Ok(())
        } else {
            Err(OrienterError::UncoveredCase {
                step,
                subpartition: p.clone(),
            })
        }
    };
    match scanner {
        Scanner::Cached { table, entering } => {
            for (i, p) in table.subpartitions().iter().enumerate() {
                check(p, table.deficiency(i, entering[i])?)?;
            }
        }
        Scanner::Streaming => {
            for p in crate::oracle::enumerate_subpartitions(graph.universe())? {
                check(&p, crate::oracle::deficiency(graph, h, b, &p)?)?;
            }
        }
    }
    Ok(())
}

enum Scanner {
    Cached { table: ConditionTable, entering: Vec<u64> },
    Streaming,
}

impl Scanner {
    fn cached(graph: &MixedHypergraph, h: &SetFunctionSpec, b: &SetFunctionSpec) -> Result<Self, OracleError> {
        let table = ConditionTable::build(graph.universe(), h, b)?;
        let entering = table.entering_counts(graph);
        Ok(Scanner::Cached { table, entering })
    }

    fn tight_family(
        &self,
        graph: &MixedHypergraph,
        h: &SetFunctionSpec,
        b: &SetFunctionSpec,
        pivot: &Hyperedge,
    ) -> Result<TightFamily, OracleError> {
        match self {
            Scanner::Cached { table, entering } => table.tight_family(entering, pivot),
            Scanner::Streaming => tight_subpartitions(graph, h, b, pivot),
        }
    }

    /// Updates cached entering counts after one copy of `from` became `to`.
    fn record(&mut self, from: &Hyperedge, to: &Dyperedge) {
        if let Scanner::Cached { table, entering } = self {
            for (p, e) in table.subpartitions().iter().zip(entering.iter_mut()) {
                let before = p.members().iter().any(|&x| hyperedge_enters(from, x));
                let after = p.members().iter().any(|&x| dyperedge_enters(to, x));
                match (before, after) {
                    (true, false) => *e -= 1,
                    (false, true) => *e += 1,
                    _ => {}
                }
            }
        }
    }
}

/// Checks the covering condition on a fully oriented dypergraph.
pub fn verify_orientation(
    result: &OrientationResult,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
) -> Result<Outcome<ViolationCertificate>, OrienterError> {
    verify_oriented_graph(&result.oriented, h, b, 1)
}

pub fn verify_oriented_graph(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    workers: usize,
) -> Result<Outcome<ViolationCertificate>, OrienterError> {
    if graph.hyperedge_count() > 0 {
        return Err(OrienterError::NotOriented);
    }
    Ok(check_condition_parallel(graph, h, b, workers)?)
}
