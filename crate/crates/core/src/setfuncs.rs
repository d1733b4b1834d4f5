//! Integer set-function oracles for the demand `h` and the budget `b`, and
//! brute-force verifiers of intersecting supermodularity and submodularity.

use std::collections::HashMap;

use thiserror::Error;

use crate::matroids::{Matroid, MatroidError, RootPlacement};
use crate::model::{VertexSet, VertexUniverse};
use crate::Outcome;

/// Universe cap for the exhaustive pair verifiers.
pub const MAX_VERIFY_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetFuncError {
    #[error("this set function is only defined on nonempty sets")]
    EmptyDomain,
    #[error("integer overflow while evaluating a set function")]
    Overflow,
    #[error("universe of {got} vertices exceeds the cap of {cap}")]
    Capacity { got: usize, cap: usize },
    #[error("modular function has {got} weights for {expected} vertices")]
    WeightCount { got: usize, expected: usize },
    #[error("table lists the key {0} twice")]
    DuplicateKey(VertexSet),
    #[error("rank-derived function: {0}")]
    Matroid(#[from] MatroidError),
    #[error("roots have {roots} ground elements but the matroid has {matroid}")]
    GroundMismatch { roots: usize, matroid: usize },
}

/// Sparse lookup table with a default value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFn {
    entries: Vec<(VertexSet, i64)>,
    lookup: HashMap<VertexSet, i64>,
    default: i64,
}

impl TableFn {
    pub fn new(entries: Vec<(VertexSet, i64)>, default: i64) -> Result<Self, SetFuncError> {
        let mut lookup = HashMap::with_capacity(entries.len());
        for &(k, v) in &entries {
            if lookup.insert(k, v).is_some() {
                return Err(SetFuncError::DuplicateKey(k));
            }
        }
        Ok(TableFn {
            entries,
            lookup,
            default,
        })
    }

    pub fn entries(&self) -> &[(VertexSet, i64)] {
        &self.entries
    }

    pub fn default_value(&self) -> i64 {
        self.default
    }

    pub fn get(&self, x: VertexSet) -> i64 {
        self.lookup.get(&x).copied().unwrap_or(self.default)
    }
}

/// A matroid rank function pulled back to vertex sets through the root placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFn {
    roots: RootPlacement,
    matroid: Matroid,
}

impl RankFn {
    pub fn new(roots: RootPlacement, matroid: Matroid) -> Result<Self, SetFuncError> {
        if roots.len() != matroid.ground_size() {
            return Err(SetFuncError::GroundMismatch {
                roots: roots.len(),
                matroid: matroid.ground_size(),
            });
        }
        Ok(RankFn { roots, matroid })
    }

    pub fn roots(&self) -> &RootPlacement {
        &self.roots
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    /// `r_M(S_X)`.
    pub fn rank_of(&self, x: VertexSet) -> u32 {
        self.matroid.rank(self.roots.restrict_to(x))
    }
}

/// Declarative integer set function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetFunctionSpec {
    Constant(i64),
    /// `offset + Σ_{v∈X} weights[v]`.
    Modular { weights: Vec<i64>, offset: i64 },
    Table(TableFn),
    /// `r_M(S_X)`.
    Rank(RankFn),
    /// `k − r_M(S_X)`, defined on nonempty sets only.
    KMinusRank { k: i64, rank: RankFn },
}

impl SetFunctionSpec {
    pub fn zero() -> Self {
        SetFunctionSpec::Constant(0)
    }

    pub fn modular(weights: Vec<i64>, offset: i64) -> Self {
        SetFunctionSpec::Modular { weights, offset }
    }

    pub fn table(entries: Vec<(VertexSet, i64)>, default: i64) -> Result<Self, SetFuncError> {
        TableFn::new(entries, default).map(SetFunctionSpec::Table)
    }

    pub fn rank(roots: RootPlacement, matroid: Matroid) -> Result<Self, SetFuncError> {
        RankFn::new(roots, matroid).map(SetFunctionSpec::Rank)
    }

    pub fn k_minus_rank(k: i64, roots: RootPlacement, matroid: Matroid) -> Result<Self, SetFuncError> {
        RankFn::new(roots, matroid).map(|rank| SetFunctionSpec::KMinusRank { k, rank })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SetFunctionSpec::Constant(_) => "constant",
            SetFunctionSpec::Modular { .. } => "modular",
            SetFunctionSpec::Table(_) => "table",
            SetFunctionSpec::Rank(_) => "rank",
            SetFunctionSpec::KMinusRank { .. } => "k_minus_rank",
        }
    }

    /// Whether `∅` is in the domain.
    pub fn defined_on_empty(&self) -> bool {
        !matches!(self, SetFunctionSpec::KMinusRank { .. })
    }

    /// Checks that the function's parameters fit the universe.
    pub fn check_universe(&self, universe: &VertexUniverse) -> Result<(), SetFuncError> {
        match self {
            SetFunctionSpec::Modular { weights, .. } if weights.len() != universe.len() => {
                Err(SetFuncError::WeightCount {
                    got: weights.len(),
                    expected: universe.len(),
                })
            }
            SetFunctionSpec::Rank(r) | SetFunctionSpec::KMinusRank { rank: r, .. } => {
                Ok(r.roots.check_universe(universe)?)
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: VertexSet) -> Result<i64, SetFuncError> {
        match self {
            SetFunctionSpec::Constant(c) => Ok(*c),
            SetFunctionSpec::Modular { weights, offset } => x
                .iter()
                .map(|v| weights.get(v).copied().unwrap_or(0))
                .try_fold(*offset, |acc, w| acc.checked_add(w))
                .ok_or(SetFuncError::Overflow),
            SetFunctionSpec::Table(t) => Ok(t.get(x)),
            SetFunctionSpec::Rank(r) => Ok(i64::from(r.rank_of(x))),
            SetFunctionSpec::KMinusRank { k, rank } => {
                if x.is_empty() {
                    return Err(SetFuncError::EmptyDomain);
                }
                k.checked_sub(i64::from(rank.rank_of(x)))
                    .ok_or(SetFuncError::Overflow)
            }
        }
    }

    /// Dense table of values over every subset of an `n`-vertex universe.
    pub fn tabulate(&self, n: usize) -> Result<Tabulated, SetFuncError> {
        let values = (0..1u32 << n)
            .map(|bits| {
                let x = VertexSet::from_bits(bits);
                if x.is_empty() && !self.defined_on_empty() {
                    Ok(0)
                } else {
                    self.eval(x)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Tabulated {
            values,
            empty_defined: self.defined_on_empty(),
        })
    }
}

/// Precomputed values of a set function on every subset of a small universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulated {
    values: Vec<i64>,
    empty_defined: bool,
}

impl Tabulated {
    pub fn get(&self, x: VertexSet) -> i64 {
        debug_assert!(self.empty_defined || !x.is_empty());
        self.values[x.bits() as usize]
    }

    pub fn try_get(&self, x: VertexSet) -> Result<i64, SetFuncError> {
        if x.is_empty() && !self.empty_defined {
            return Err(SetFuncError::EmptyDomain);
        }
        Ok(self.values[x.bits() as usize])
    }

    /// Table entries for every nonempty set, usable as a `SetFunctionSpec::Table`.
    pub fn to_spec(&self) -> SetFunctionSpec {
        let entries = self
            .values
            .iter()
            .enumerate()
            .skip(usize::from(!self.empty_defined))
            .map(|(bits, &v)| (VertexSet::from_bits(bits as u32), v))
            .collect();
        SetFunctionSpec::table(entries, 0).expect("keys are distinct")
    }
}

/// Two sets violating the checked inequality, with both sides recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularityWitness {
    pub x: VertexSet,
    pub y: VertexSet,
    /// `f(X) + f(Y)`.
    pub lhs: i64,
    /// `f(X ∪ Y) + f(X ∩ Y)`.
    pub rhs: i64,
}

fn guard(universe: &VertexUniverse) -> Result<usize, SetFuncError> {
    let n = universe.len();
    if n > MAX_VERIFY_VERTICES {
        return Err(SetFuncError::Capacity {
            got: n,
            cap: MAX_VERIFY_VERTICES,
        });
    }
    Ok(n)
}

fn pair_sums(t: &Tabulated, x: VertexSet, y: VertexSet) -> Result<(i64, i64), SetFuncError> {
    let lhs = t.get(x).checked_add(t.get(y)).ok_or(SetFuncError::Overflow)?;
    let rhs = t
        .get(x | y)
        .checked_add(t.get(x & y))
        .ok_or(SetFuncError::Overflow)?;
    Ok((lhs, rhs))
}

/// `h(X) + h(Y) ≤ h(X ∪ Y) + h(X ∩ Y)` for every intersecting pair.
///
/// Pairs are scanned with `X < Y` in mask order; the first violation is
/// returned. Nested pairs satisfy the inequality with equality and are
/// skipped.
pub fn is_intersecting_supermodular(
    h: &SetFunctionSpec,
    universe: &VertexUniverse,
) -> Result<Outcome<ModularityWitness>, SetFuncError> {
    let n = guard(universe)?;
    let t = h.tabulate(n)?;
    let top = 1u32 << n;
    for xb in 1..top {
        for yb in xb + 1..top {
            let (x, y) = (VertexSet::from_bits(xb), VertexSet::from_bits(yb));
            if !x.crosses(y) {
                continue;
            }
            let (lhs, rhs) = pair_sums(&t, x, y)?;
            if lhs > rhs {
                return Ok(Outcome::Violated(ModularityWitness { x, y, lhs, rhs }));
            }
        }
    }
    Ok(Outcome::Satisfied)
}

/// `b(X) + b(Y) ≥ b(X ∪ Y) + b(X ∩ Y)` for every pair, disjoint ones included.
pub fn is_submodular(
    b: &SetFunctionSpec,
    universe: &VertexUniverse,
) -> Result<Outcome<ModularityWitness>, SetFuncError> {
    let n = guard(universe)?;
    let t = b.tabulate(n)?;
    let top = 1u32 << n;
    for xb in 0..top {
        for yb in xb + 1..top {
            let (x, y) = (VertexSet::from_bits(xb), VertexSet::from_bits(yb));
            if x.is_subset(y) {
                continue;
            }
            let (lhs, rhs) = pair_sums(&t, x, y)?;
            if lhs < rhs {
                return Ok(Outcome::Violated(ModularityWitness { x, y, lhs, rhs }));
            }
        }
    }
    Ok(Outcome::Satisfied)
}
