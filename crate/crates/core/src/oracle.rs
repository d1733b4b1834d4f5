//! Exhaustive subpartition machinery: enumeration, deficiency evaluation,
//! covering-condition checks with certificates, and tight families.
//!
//! For a mixed hypergraph `F`, a demand `h` (nonempty sets) and a budget
//! `b`, the deficiency of a subpartition `P` is
//!
//! ```text
//! Σ_{X∈P} h(X) − b(∪P) − e(P)
//! ```
//!
//! and the covering condition asks that it be `≤ 0` for every subpartition,
//! the empty one included (which reads `b(∅) ≥ 0`).

use thiserror::Error;

use crate::model::{hyperedge_enters, Hyperedge, MixedHypergraph, Subpartition, VertexSet, VertexUniverse};
use crate::setfuncs::{SetFuncError, SetFunctionSpec, Tabulated};
use crate::Outcome;

/// Largest universe the subpartition enumerator accepts. `Bell(13) ≈ 2.8·10⁷`
/// subpartitions at the cap.
pub const MAX_ENUM_VERTICES: usize = 12;

/// Largest universe for which a [`ConditionTable`] is materialized.
pub const MAX_TABLE_VERTICES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("universe of {got} vertices exceeds the enumeration cap of {cap}")]
    Capacity { got: usize, cap: usize },
    #[error(transparent)]
    SetFunction(#[from] SetFuncError),
    #[error("integer overflow while evaluating a deficiency")]
    Overflow,
    #[error("covering condition is violated; tight families are only meaningful on feasible instances")]
    Infeasible(Box<ViolationCertificate>),
    #[error("tight family is empty")]
    EmptyFamily,
    #[error("tight family for hyperedge {pivot:?} is not closed under intersection: {reason}")]
    ClosureViolation {
        pivot: Hyperedge,
        family: Box<TightFamily>,
        reason: &'static str,
    },
}

fn cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap {
        Err(OracleError::Capacity { got: n, cap })
    } else {
        Ok(())
    }
}

/// Every subpartition of a vertex set, each exactly once.
///
/// Walks restricted growth strings over the elements with an extra class 0
/// meaning "uncovered"; classes `1..` are the members. Members come out in
/// ascending order of minimum element, so each yielded subpartition is
/// already canonical. The first item is the empty subpartition.
#[derive(Debug, Clone)]
pub struct SubpartitionIter {
    elements: Vec<usize>,
    labels: Vec<u8>,
    exhausted: bool,
}

impl SubpartitionIter {
    fn new(set: VertexSet) -> Self {
        let elements: Vec<usize> = set.iter().collect();
        SubpartitionIter {
            labels: vec![0; elements.len()],
            elements,
            exhausted: false,
        }
    }

    fn current(&self) -> Subpartition {
        let classes = self.labels.iter().copied().max().unwrap_or(0) as usize;
        let mut members = vec![VertexSet::EMPTY; classes];
        for (&v, &l) in self.elements.iter().zip(&self.labels) {
            if l > 0 {
                members[l as usize - 1] = members[l as usize - 1].with(v);
            }
        }
        Subpartition::from_canonical(members)
    }

    fn advance(&mut self) {
        let mut prefix_max = Vec::with_capacity(self.labels.len());
        let mut m = 0;
        for &l in &self.labels {
            prefix_max.push(m);
            m = m.max(l);
        }
        for i in (0..self.labels.len()).rev() {
            if self.labels[i] <= prefix_max[i] {
                self.labels[i] += 1;
                self.labels[i + 1..].fill(0);
                return;
            }
        }
        self.exhausted = true;
    }
}

impl Iterator for SubpartitionIter {
    type Item = Subpartition;

    fn next(&mut self) -> Option<Subpartition> {
        if self.exhausted {
            return None;
        }
        let p = self.current();
        self.advance();
        Some(p)
    }
}

/// All subpartitions of the universe, `Bell(n + 1)` of them.
pub fn enumerate_subpartitions(universe: &VertexUniverse) -> Result<SubpartitionIter, OracleError> {
    cap(universe.len(), MAX_ENUM_VERTICES)?;
    Ok(SubpartitionIter::new(universe.full()))
}

/// All subpartitions whose ground lies inside `set`.
pub fn subpartitions_within(set: VertexSet) -> Result<SubpartitionIter, OracleError> {
    cap(set.len(), MAX_ENUM_VERTICES)?;
    Ok(SubpartitionIter::new(set))
}

/// Bell numbers by the triangle recurrence, for sizing and tests.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// A subpartition with positive deficiency, its three terms recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationCertificate {
    pub subpartition: Subpartition,
    pub deficiency: i64,
    /// `Σ_{X∈P} h(X)`.
    pub h_sum: i64,
    /// `b(∪P)`.
    pub b_value: i64,
    /// `e(P)`.
    pub entering: u64,
}

impl ViolationCertificate {
    /// Recomputes the deficiency from scratch and compares every term.
    pub fn reevaluate(
        &self,
        graph: &MixedHypergraph,
        h: &SetFunctionSpec,
        b: &SetFunctionSpec,
    ) -> Result<bool, OracleError> {
        let terms = Terms::evaluate(graph, h, b, &self.subpartition)?;
        Ok(terms.h_sum == self.h_sum
            && terms.b_value == self.b_value
            && terms.entering == self.entering
            && terms.deficiency()? == self.deficiency
            && self.deficiency >= 1)
    }
}

#[derive(Debug, Clone, Copy)]
struct Terms {
    h_sum: i64,
    b_value: i64,
    entering: u64,
}

impl Terms {
    fn evaluate(
        graph: &MixedHypergraph,
        h: &SetFunctionSpec,
        b: &SetFunctionSpec,
        p: &Subpartition,
    ) -> Result<Self, OracleError> {
        let h_sum = p
            .members()
            .iter()
            .try_fold(0i64, |acc, &x| acc.checked_add(h.eval(x)?).ok_or(OracleError::Overflow))?;
        Ok(Terms {
            h_sum,
            b_value: b.eval(p.ground())?,
            entering: graph.entering_count(p),
        })
    }

    fn deficiency(&self) -> Result<i64, OracleError> {
        let e = i64::try_from(self.entering).map_err(|_| OracleError::Overflow)?;
        self.h_sum
            .checked_sub(self.b_value)
            .and_then(|r| r.checked_sub(e))
            .ok_or(OracleError::Overflow)
    }

    fn certificate(self, p: Subpartition) -> Result<ViolationCertificate, OracleError> {
        Ok(ViolationCertificate {
            deficiency: self.deficiency()?,
            subpartition: p,
            h_sum: self.h_sum,
            b_value: self.b_value,
            entering: self.entering,
        })
    }
}

/// `Σ_{X∈P} h(X) − b(∪P) − e(P)`; positive means violated.
pub fn deficiency(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    p: &Subpartition,
) -> Result<i64, OracleError> {
    Terms::evaluate(graph, h, b, p)?.deficiency()
}

/// `Σ_{X∈P} h(X) − b(∪P)` against tabulated functions.
fn requirement(h: &Tabulated, b: &Tabulated, p: &Subpartition) -> Result<(i64, i64), OracleError> {
    let h_sum = p
        .members()
        .iter()
        .try_fold(0i64, |acc, &x| acc.checked_add(h.get(x)))
        .ok_or(OracleError::Overflow)?;
    Ok((h_sum, b.try_get(p.ground())?))
}

fn tabulate_pair(
    universe: &VertexUniverse,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
) -> Result<(Tabulated, Tabulated), OracleError> {
    h.check_universe(universe)?;
    b.check_universe(universe)?;
    let n = universe.len();
    Ok((h.tabulate(n)?, b.tabulate(n)?))
}

/// Position of a subpartition in certificate order: smaller ground mask
/// first, then more members, then enumeration index.
type Rank = (u32, std::cmp::Reverse<usize>, usize);

fn rank(p: &Subpartition, index: usize) -> Rank {
    (p.ground().bits(), std::cmp::Reverse(p.len()), index)
}

/// Worst subpartition seen by one scan: `(deficiency, certificate order)`.
type Worst = Option<(i64, Rank)>;

fn better(a: Worst, b: Worst) -> Worst {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
    }
}

/// Checks the covering condition over every subpartition.
///
/// On failure the certificate is the maximum-deficiency subpartition. Ties
/// go to the smallest ground mask, then to the finer subpartition.
pub fn check_condition(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
) -> Result<Outcome<ViolationCertificate>, OracleError> {
    check_condition_parallel(graph, h, b, 1)
}

/// [`check_condition`] with the enumeration split round-robin across
/// `workers` threads. The answer does not depend on `workers`.
pub fn check_condition_parallel(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    workers: usize,
) -> Result<Outcome<ViolationCertificate>, OracleError> {
    let universe = graph.universe();
    cap(universe.len(), MAX_ENUM_VERTICES)?;
    let (ht, bt) = tabulate_pair(universe, h, b)?;
    let workers = workers.max(1);

    let scan = |worker: usize| -> Result<Worst, OracleError> {
        let mut worst: Worst = None;
        for (i, p) in SubpartitionIter::new(universe.full()).enumerate() {
            if i % workers != worker {
                continue;
            }
            let (h_sum, b_value) = requirement(&ht, &bt, &p)?;
            let terms = Terms {
                h_sum,
                b_value,
                entering: graph.entering_count(&p),
            };
            let d = terms.deficiency()?;
            if d > 0 {
                worst = better(worst, Some((d, rank(&p, i))));
            }
        }
        Ok(worst)
    };

    let worst = if workers == 1 {
        scan(0)?
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|w| s.spawn(move || scan(w))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .try_fold(None, |acc, r| r.map(|w| better(acc, w)))
        })?
    };

    match worst {
        None => Ok(Outcome::Satisfied),
        Some((_, (_, _, index))) => {
            let p = SubpartitionIter::new(universe.full())
                .nth(index)
                .expect("index came from the same enumeration");
            let terms = Terms::evaluate(graph, h, b, &p)?;
            Ok(Outcome::Violated(terms.certificate(p)?))
        }
    }
}

/// Tight subpartitions whose ground is entered by one pivot hyperedge, and
/// the intersection of their grounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightFamily {
    pub members: Vec<Subpartition>,
    /// `∩ ∪P` over the family; the full universe when the family is empty.
    pub common_ground: VertexSet,
}

impl TightFamily {
    fn collect(universe: VertexSet, members: Vec<Subpartition>) -> Self {
        let common_ground = members
            .iter()
            .fold(universe, |acc, p| acc & p.ground());
        TightFamily {
            members,
            common_ground,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// Every subpartition `P` with deficiency exactly zero and `pivot` entering
/// `∪P`, without checking feasibility first.
pub fn tight_subpartitions(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    pivot: &Hyperedge,
) -> Result<TightFamily, OracleError> {
    let universe = graph.universe();
    cap(universe.len(), MAX_ENUM_VERTICES)?;
    let (ht, bt) = tabulate_pair(universe, h, b)?;
    let mut members = Vec::new();
    for p in SubpartitionIter::new(universe.full()) {
        if !hyperedge_enters(pivot, p.ground()) {
            continue;
        }
        let (h_sum, b_value) = requirement(&ht, &bt, &p)?;
        let terms = Terms {
            h_sum,
            b_value,
            entering: graph.entering_count(&p),
        };
        if terms.deficiency()? == 0 {
            members.push(p);
        }
    }
    Ok(TightFamily::collect(universe.full(), members))
}

/// The tight family of `pivot`. The instance must satisfy the covering
/// condition; debug builds re-check this and report a violation as
/// [`OracleError::Infeasible`].
pub fn tight_family(
    graph: &MixedHypergraph,
    h: &SetFunctionSpec,
    b: &SetFunctionSpec,
    pivot: &Hyperedge,
) -> Result<TightFamily, OracleError> {
    if cfg!(debug_assertions) {
        if let Outcome::Violated(cert) = check_condition(graph, h, b)? {
            return Err(OracleError::Infeasible(Box::new(cert)));
        }
    }
    tight_subpartitions(graph, h, b, pivot)
}

/// The intersection of the family's grounds, after confirming that some
/// member realizes it and that `pivot` meets it.
pub fn min_tight_ground(family: &TightFamily, pivot: &Hyperedge) -> Result<VertexSet, OracleError> {
    if family.is_empty() {
        return Err(OracleError::EmptyFamily);
    }
    let violation = |reason| OracleError::ClosureViolation {
        pivot: *pivot,
        family: Box::new(family.clone()),
        reason,
    };
    let common = family.common_ground;
    if !family.members.iter().any(|p| p.ground() == common) {
        return Err(violation("no member realizes the common ground"));
    }
    if !pivot.members().intersects(common) {
        return Err(violation("pivot misses the common ground"));
    }
    Ok(common)
}

/// Subpartitions of a universe with their `Σh − b(∪P)` terms cached, for
/// repeated scans against a changing edge set.
#[derive(Debug, Clone)]
pub struct ConditionTable {
    universe: VertexSet,
    subpartitions: Vec<Subpartition>,
    h_sums: Vec<i64>,
    b_values: Vec<i64>,
}

impl ConditionTable {
    pub fn build(
        universe: &VertexUniverse,
        h: &SetFunctionSpec,
        b: &SetFunctionSpec,
    ) -> Result<Self, OracleError> {
        cap(universe.len(), MAX_TABLE_VERTICES)?;
        let (ht, bt) = tabulate_pair(universe, h, b)?;
        let subpartitions: Vec<Subpartition> = SubpartitionIter::new(universe.full()).collect();
        let mut h_sums = Vec::with_capacity(subpartitions.len());
        let mut b_values = Vec::with_capacity(subpartitions.len());
        for p in &subpartitions {
            let (hs, bv) = requirement(&ht, &bt, p)?;
            h_sums.push(hs);
            b_values.push(bv);
        }
        Ok(ConditionTable {
            universe: universe.full(),
            subpartitions,
            h_sums,
            b_values,
        })
    }

    pub fn len(&self) -> usize {
        self.subpartitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subpartitions.is_empty()
    }

    pub fn subpartitions(&self) -> &[Subpartition] {
        &self.subpartitions
    }

    /// `e(P)` for every cached subpartition.
    pub fn entering_counts(&self, graph: &MixedHypergraph) -> Vec<u64> {
        self.subpartitions
            .iter()
            .map(|p| graph.entering_count(p))
            .collect()
    }

    pub fn deficiency(&self, index: usize, entering: u64) -> Result<i64, OracleError> {
        Terms {
            h_sum: self.h_sums[index],
            b_value: self.b_values[index],
            entering,
        }
        .deficiency()
    }

    /// Same answer as [`check_condition`] for the graph whose entering
    /// counts are `entering`.
    pub fn check(&self, entering: &[u64]) -> Result<Outcome<ViolationCertificate>, OracleError> {
        let mut worst: Worst = None;
        for (i, &e) in entering.iter().enumerate() {
            let d = self.deficiency(i, e)?;
            if d > 0 {
                worst = better(worst, Some((d, rank(&self.subpartitions[i], i))));
            }
        }
        Ok(match worst {
            None => Outcome::Satisfied,
            Some((d, (_, _, i))) => Outcome::Violated(ViolationCertificate {
                subpartition: self.subpartitions[i].clone(),
                deficiency: d,
                h_sum: self.h_sums[i],
                b_value: self.b_values[i],
                entering: entering[i],
            }),
        })
    }

    /// Same answer as [`tight_subpartitions`].
    pub fn tight_family(&self, entering: &[u64], pivot: &Hyperedge) -> Result<TightFamily, OracleError> {
        let mut members = Vec::new();
        for (i, p) in self.subpartitions.iter().enumerate() {
            if hyperedge_enters(pivot, p.ground()) && self.deficiency(i, entering[i])? == 0 {
                members.push(p.clone());
            }
        }
        Ok(TightFamily::collect(self.universe, members))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Dyperedge;

    fn two_vertex(h: SetFunctionSpec) -> (MixedHypergraph, SetFunctionSpec, SetFunctionSpec) {
        let u = VertexUniverse::alphabetic(2).unwrap();
        let mut f = MixedHypergraph::new(u.clone());
        f.add_hyperedge(Hyperedge::new(u.full()).unwrap(), 1).unwrap();
        (f, h, SetFunctionSpec::zero())
    }

    fn h_only_b() -> SetFunctionSpec {
        SetFunctionSpec::table(vec![(VertexSet::singleton(1), 1)], 0).unwrap()
    }

    fn sp(sets: &[&[usize]]) -> Subpartition {
        Subpartition::new(sets.iter().map(|s| VertexSet::from_indices(s.iter().copied())).collect())
            .unwrap()
    }

    #[test]
    fn small_enumerations() {
        let one: Vec<_> = enumerate_subpartitions(&VertexUniverse::alphabetic(1).unwrap())
            .unwrap()
            .collect();
        assert_eq!(one, vec![Subpartition::empty(), sp(&[&[0]])]);

        // Enumerated by hand: ∅, {a}, {b}, {a}{b}, {ab}.
        let mut two: Vec<_> = enumerate_subpartitions(&VertexUniverse::alphabetic(2).unwrap())
            .unwrap()
            .collect();
        two.sort();
        let mut expected = vec![
            Subpartition::empty(),
            sp(&[&[0]]),
            sp(&[&[1]]),
            sp(&[&[0], &[1]]),
            sp(&[&[0, 1]]),
        ];
        expected.sort();
        assert_eq!(two, expected);

        assert_eq!(
            enumerate_subpartitions(&VertexUniverse::alphabetic(3).unwrap())
                .unwrap()
                .count(),
            15
        );
        assert!(enumerate_subpartitions(&VertexUniverse::alphabetic(13).unwrap()).is_err());
        assert_eq!(subpartitions_within(VertexSet::from_indices([1, 3])).unwrap().count(), 5);
    }

    #[test]
    fn bell_numbers() {
        let b: Vec<u64> = (0..8).map(bell).collect();
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn deficiency_examples() {
        let (f, _, b) = two_vertex(SetFunctionSpec::Constant(1));
        let h = SetFunctionSpec::Constant(1);
        assert_eq!(deficiency(&f, &h, &b, &Subpartition::empty()), Ok(0));
        assert_eq!(deficiency(&f, &h, &b, &sp(&[&[0], &[1]])), Ok(1));
        assert_eq!(deficiency(&f, &h, &b, &sp(&[&[1]])), Ok(0));
    }

    #[test]
    fn check_condition_examples() {
        let u = VertexUniverse::alphabetic(2).unwrap();
        let empty = MixedHypergraph::new(u);
        let zero = SetFunctionSpec::zero();
        assert!(check_condition(&empty, &zero, &zero).unwrap().is_satisfied());

        let (f, h, b) = two_vertex(SetFunctionSpec::Constant(1));
        let cert = check_condition(&f, &h, &b).unwrap().violation().unwrap();
        assert_eq!(cert.subpartition, sp(&[&[0], &[1]]));
        assert_eq!(cert.deficiency, 1);
        assert!(cert.reevaluate(&f, &h, &b).unwrap());

        let (f, h, b) = two_vertex(h_only_b());
        assert!(check_condition(&f, &h, &b).unwrap().is_satisfied());
    }

    #[test]
    fn negative_empty_budget_is_caught_by_the_empty_subpartition() {
        let (f, _, _) = two_vertex(SetFunctionSpec::zero());
        let cert = check_condition(&f, &SetFunctionSpec::zero(), &SetFunctionSpec::Constant(-1))
            .unwrap()
            .violation()
            .unwrap();
        assert!(cert.subpartition.is_empty());
        assert_eq!(cert.deficiency, 1);
    }

    #[test]
    fn parallel_scan_matches_serial() {
        let u = VertexUniverse::alphabetic(5).unwrap();
        let mut f = MixedHypergraph::new(u);
        f.add_hyperedge(Hyperedge::new(VertexSet::from_indices([0, 1, 2])).unwrap(), 1)
            .unwrap();
        f.add_dyperedge(Dyperedge::arc(3, 4).unwrap(), 2).unwrap();
        let h = SetFunctionSpec::Constant(1);
        let b = SetFunctionSpec::zero();
        let serial = check_condition(&f, &h, &b).unwrap();
        for w in [2, 3, 7] {
            assert_eq!(check_condition_parallel(&f, &h, &b, w).unwrap(), serial);
        }
    }

    #[test]
    fn tight_family_examples() {
        let (f, h, b) = two_vertex(h_only_b());
        let y = f.hyperedges()[0].0;
        let fam = tight_family(&f, &h, &b, &y).unwrap();
        assert_eq!(fam.members, vec![sp(&[&[1]])]);
        assert_eq!(fam.common_ground, VertexSet::singleton(1));
        assert_eq!(min_tight_ground(&fam, &y), Ok(VertexSet::singleton(1)));

        let (f, h, b) = two_vertex(SetFunctionSpec::zero());
        let fam = tight_family(&f, &h, &b, &y).unwrap();
        assert!(fam.is_empty());
        assert_eq!(fam.common_ground, VertexSet::full(2));
        assert_eq!(min_tight_ground(&fam, &y), Err(OracleError::EmptyFamily));
    }

    #[test]
    fn tight_family_on_the_path_instance() {
        // V = {a,b,c}, E = {ab, bc}, h ≡ 1, b ≡ 0. The instance itself is
        // infeasible ({a}{b}{c} has deficiency one), so only the raw scan applies.
        let u = VertexUniverse::alphabetic(3).unwrap();
        let mut f = MixedHypergraph::new(u);
        let ab = Hyperedge::new(VertexSet::from_indices([0, 1])).unwrap();
        f.add_hyperedge(ab, 1).unwrap();
        f.add_hyperedge(Hyperedge::new(VertexSet::from_indices([1, 2])).unwrap(), 1)
            .unwrap();
        let h = SetFunctionSpec::Constant(1);
        let b = SetFunctionSpec::zero();
        assert_eq!(deficiency(&f, &h, &b, &sp(&[&[2]])), Ok(0));
        let fam = tight_subpartitions(&f, &h, &b, &ab).unwrap();
        assert!(fam.members.contains(&sp(&[&[0]])));
        assert!(!fam.members.contains(&sp(&[&[2]])));
        if cfg!(debug_assertions) {
            assert!(matches!(
                tight_family(&f, &h, &b, &ab),
                Err(OracleError::Infeasible(_))
            ));
        }
    }

    #[test]
    fn closure_violation_is_reported() {
        let y = Hyperedge::new(VertexSet::from_indices([0, 2])).unwrap();
        let family = TightFamily::collect(
            VertexSet::full(3),
            vec![sp(&[&[0, 1]]), sp(&[&[1, 2]])],
        );
        assert_eq!(family.common_ground, VertexSet::singleton(1));
        assert!(matches!(
            min_tight_ground(&family, &y),
            Err(OracleError::ClosureViolation { .. })
        ));
        let single = TightFamily::collect(VertexSet::full(3), vec![sp(&[&[0], &[2]])]);
        assert_eq!(min_tight_ground(&single, &y), Ok(VertexSet::from_indices([0, 2])));
    }

    #[test]
    fn table_agrees_with_streaming() {
        let (f, h, b) = two_vertex(h_only_b());
        let table = ConditionTable::build(f.universe(), &h, &b).unwrap();
        let entering = table.entering_counts(&f);
        assert_eq!(table.check(&entering).unwrap(), check_condition(&f, &h, &b).unwrap());
        let y = f.hyperedges()[0].0;
        assert_eq!(
            table.tight_family(&entering, &y).unwrap(),
            tight_subpartitions(&f, &h, &b, &y).unwrap()
        );
    }
}
