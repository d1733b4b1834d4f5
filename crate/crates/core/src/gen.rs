//! Seeded random instances for property campaigns. The same seed always
//! produces the same instance.
//!
//! Demand functions `h` are drawn from intersecting supermodular families and
//! budgets `b` from submodular ones; the table families are random
//! perturbations that are kept only when the verifier accepts them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::Instance;
use crate::matroids::{Matroid, MatroidKind, RootPlacement};
use crate::oracle::ConditionTable;
use crate::model::{Dyperedge, Hyperedge, MixedHypergraph, VertexSet, VertexUniverse};
use crate::packinglab::{PackingInstance, PackingMode};
use crate::setfuncs::{is_intersecting_supermodular, is_submodular, SetFunctionSpec};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HFamily {
    Constant,
    Modular,
    KMinusRank,
    Table,
    /// One of the above, chosen per instance.
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BFamily {
    Modular,
    Rank,
    Table,
    Any,
}

impl std::str::FromStr for HFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "constant" => HFamily::Constant,
            "modular" => HFamily::Modular,
            "k_minus_rank" => HFamily::KMinusRank,
            "table" => HFamily::Table,
            "any" => HFamily::Any,
            _ => return Err(format!("unknown h family `{s}`")),
        })
    }
}

impl std::str::FromStr for BFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "modular" => BFamily::Modular,
            "rank" => BFamily::Rank,
            "table" => BFamily::Table,
            "any" => BFamily::Any,
            _ => return Err(format!("unknown b family `{s}`")),
        })
    }
}

/// Shape of a generated orientation instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationShape {
    pub vertices: usize,
    pub hyperedges: usize,
    pub dyperedges: usize,
    pub h: HFamily,
    pub b: BFamily,
}

pub fn random_hyperedge<R: Rng>(rng: &mut R, n: usize) -> Hyperedge {
    assert!(n >= 2, "hyperedges need two vertices");
    loop {
        let bits = rng.gen_range(0..1u32 << n);
        let set = VertexSet::from_bits(bits);
        // Small edges are more interesting to orient than huge ones.
        if set.len() >= 2 && (set.len() <= 3 || rng.gen_bool(0.3)) {
            return Hyperedge::new(set).expect("size checked");
        }
    }
}

pub fn random_dyperedge<R: Rng>(rng: &mut R, n: usize) -> Dyperedge {
    assert!(n >= 2, "dyperedges need two vertices");
    let head = rng.gen_range(0..n);
    let others = VertexSet::full(n).without(head);
    loop {
        let tails = VertexSet::from_bits(rng.gen_range(1..1u32 << n)) & others;
        if !tails.is_empty() && (tails.len() <= 2 || rng.gen_bool(0.3)) {
            return Dyperedge::new(tails, head).expect("tails avoid the head");
        }
    }
}

fn random_graph<R: Rng>(rng: &mut R, n: usize, hyperedges: usize, dyperedges: usize) -> MixedHypergraph {
    let universe = VertexUniverse::alphabetic(n).expect("small universe");
    let mut graph = MixedHypergraph::new(universe);
    for _ in 0..hyperedges {
        graph.add_hyperedge(random_hyperedge(rng, n), 1).expect("in universe");
    }
    for _ in 0..dyperedges {
        graph.add_dyperedge(random_dyperedge(rng, n), 1).expect("in universe");
    }
    graph
}

/// Free, uniform, partition or graphic matroid on `m` elements.
pub fn random_matroid<R: Rng>(rng: &mut R, m: usize, graphic: bool) -> Matroid {
    let choices = if graphic { 4 } else { 3 };
    match rng.gen_range(0..choices) {
        0 => Matroid::free(m),
        1 => Matroid::uniform(rng.gen_range(0..=m as u32), m),
        2 => {
            let classes_n = rng.gen_range(1..=m.max(1));
            let mut classes = vec![Vec::new(); classes_n];
            for e in 0..m {
                classes[rng.gen_range(0..classes_n)].push(e);
            }
            classes.retain(|c| !c.is_empty());
            let capacities = classes.iter().map(|c| rng.gen_range(0..=c.len() as u32)).collect();
            Matroid::new(MatroidKind::Partition { classes, capacities }, m).expect("classes cover the ground")
        }
        _ => {
            let nodes = rng.gen_range(2..=4);
            let edges = (0..m).map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..nodes))).collect();
            Matroid::new(MatroidKind::Graphic { nodes, edges }, m).expect("nodes in range")
        }
    }
}

/// Root multiset with `m` copies over an `n`-vertex universe.
pub fn random_roots<R: Rng>(rng: &mut R, n: usize, m: usize) -> RootPlacement {
    let mut counts = vec![0u32; n];
    for _ in 0..m {
        counts[rng.gen_range(0..n)] += 1;
    }
    let roots = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect();
    RootPlacement::new(roots).expect("positive multiplicities")
}

fn random_rank_parts<R: Rng>(rng: &mut R, n: usize) -> (RootPlacement, Matroid) {
    let m = rng.gen_range(1..=n.min(4));
    (random_roots(rng, n, m), random_matroid(rng, m, true))
}

fn tabulate_nonempty(f: &SetFunctionSpec, n: usize) -> Vec<i64> {
    (0..1u32 << n)
        .map(|bits| {
            let x = VertexSet::from_bits(bits);
            if x.is_empty() && !f.defined_on_empty() {
                0
            } else {
                f.eval(x).expect("generated functions are total")
            }
        })
        .collect()
}

fn table_spec(values: &[i64], skip_empty: bool) -> SetFunctionSpec {
    let entries = values
        .iter()
        .enumerate()
        .skip(usize::from(skip_empty))
        .map(|(bits, &v)| (VertexSet::from_bits(bits as u32), v))
        .collect();
    SetFunctionSpec::table(entries, 0).expect("distinct keys")
}

/// A random intersecting supermodular function on nonempty sets.
pub fn random_h<R: Rng>(rng: &mut R, universe: &VertexUniverse, family: HFamily) -> SetFunctionSpec {
    let n = universe.len();
    let family = match family {
        HFamily::Any => *[HFamily::Constant, HFamily::Modular, HFamily::KMinusRank, HFamily::Table]
            .choose(rng)
            .expect("nonempty"),
        f => f,
    };
    match family {
        HFamily::Constant => SetFunctionSpec::Constant(rng.gen_range(0..=2)),
        HFamily::Modular => {
            let weights = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
            SetFunctionSpec::modular(weights, rng.gen_range(0..=2))
        }
        HFamily::KMinusRank => {
            let (roots, matroid) = random_rank_parts(rng, n);
            let k = i64::from(matroid.full_rank()) + rng.gen_range(0..=1);
            SetFunctionSpec::k_minus_rank(k, roots, matroid).expect("ground sizes match")
        }
        HFamily::Table | HFamily::Any => {
            let pieces = [
                random_h(rng, universe, HFamily::KMinusRank),
                random_h(rng, universe, HFamily::Modular),
            ];
            let mut values = vec![0i64; 1 << n];
            for piece in &pieces {
                for (acc, v) in values.iter_mut().zip(tabulate_nonempty(piece, n)) {
                    *acc += v;
                }
            }
            values[0] = 0;
            let base = values.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let bits = rng.gen_range(1..1usize << n);
                values[bits] += if rng.gen_bool(0.5) { 1 } else { -1 };
            }
            let perturbed = table_spec(&values, true);
            if is_intersecting_supermodular(&perturbed, universe)
                .expect("small universe")
                .is_satisfied()
            {
                perturbed
            } else {
                table_spec(&base, true)
            }
        }
    }
}

/// A random submodular function with `b(∅) ≥ 0`.
pub fn random_b<R: Rng>(rng: &mut R, universe: &VertexUniverse, family: BFamily) -> SetFunctionSpec {
    let n = universe.len();
    let family = match family {
        BFamily::Any => *[BFamily::Modular, BFamily::Rank, BFamily::Table]
            .choose(rng)
            .expect("nonempty"),
        f => f,
    };
    match family {
        BFamily::Modular => {
            let weights = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            SetFunctionSpec::modular(weights, rng.gen_range(0..=2))
        }
        BFamily::Rank => {
            let (roots, matroid) = random_rank_parts(rng, n);
            SetFunctionSpec::rank(roots, matroid).expect("ground sizes match")
        }
        BFamily::Table | BFamily::Any => {
            let rank = random_b(rng, universe, BFamily::Rank);
            let modular = random_b(rng, universe, BFamily::Modular);
            let mut values: Vec<i64> = tabulate_nonempty(&rank, n)
                .into_iter()
                .zip(tabulate_nonempty(&modular, n))
                .map(|(a, b)| a + b)
                .collect();
            let base = values.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let bits = rng.gen_range(1..1usize << n);
                values[bits] += if rng.gen_bool(0.5) { 1 } else { -1 };
            }
            let perturbed = table_spec(&values, false);
            if is_submodular(&perturbed, universe).expect("small universe").is_satisfied() {
                perturbed
            } else {
                table_spec(&base, false)
            }
        }
    }
}

pub fn orientation_instance<R: Rng>(rng: &mut R, shape: &OrientationShape) -> Instance {
    let graph = random_graph(rng, shape.vertices, shape.hyperedges, shape.dyperedges);
    let h = random_h(rng, graph.universe(), shape.h);
    let b = random_b(rng, graph.universe(), shape.b);
    Instance {
        graph,
        h,
        b,
        packing: None,
    }
}

fn without_dyperedge_copy(graph: &MixedHypergraph, entry: usize) -> MixedHypergraph {
    let mut out = MixedHypergraph::new(graph.universe().clone());
    for (edge, mult) in graph.hyperedges() {
        out.add_hyperedge(*edge, *mult).expect("same universe");
    }
    for (e, (edge, mult)) in graph.dyperedges().iter().enumerate() {
        let mult = mult - u32::from(e == entry);
        if mult > 0 {
            out.add_dyperedge(*edge, mult).expect("same universe");
        }
    }
    out
}

/// Smallest slack `b(∪P) + e(P) − Σ h(X)` over all subpartitions, or with
/// `per_member` the smallest slack per member over nonempty ones, as
/// `(slack, member count)`.
fn min_slack(instance: &Instance, per_member: bool) -> Option<(i64, usize)> {
    let graph = &instance.graph;
    let table = ConditionTable::build(graph.universe(), &instance.h, &instance.b).ok()?;
    let entering = table.entering_counts(graph);
    let mut best: Option<(i64, usize)> = None;
    for (i, &e) in entering.iter().enumerate() {
        let len = table.subpartitions()[i].len();
        if per_member && len == 0 {
            continue;
        }
        let slack = -table.deficiency(i, e).ok()?;
        let smaller = |(s, l): (i64, usize)| {
            if per_member {
                slack * (l as i64) < s * (len as i64)
            } else {
                slack < s
            }
        };
        if best.is_none_or(smaller) {
            best = Some((slack, len));
        }
    }
    best
}

/// Pushes a feasible instance towards many tight subpartitions while keeping
/// it feasible: drops dyperedges that are not needed, raises `h` by the
/// largest constant that still fits, then lowers `b` by the remaining
/// slack. `h` stays intersecting supermodular and `b` submodular with
/// `b(∅) ≥ 0`. Returns `None` for infeasible input.
pub fn tighten(instance: &Instance) -> Option<Instance> {
    let n = instance.graph.universe().len();
    if min_slack(instance, false)?.0 < 0 {
        return None;
    }
    let mut current = instance.clone();
    let mut entry = 0;
    while entry < current.graph.dyperedges().len() {
        let candidate = Instance {
            graph: without_dyperedge_copy(&current.graph, entry),
            ..current.clone()
        };
        if min_slack(&candidate, false)?.0 >= 0 {
            current = candidate;
        } else {
            entry += 1;
        }
    }
    // Per-member slack over nonempty subpartitions bounds the constant raise.
    if let Some((slack, len)) = min_slack(&current, true) {
        let raise = slack.div_euclid(len as i64).max(0);
        if raise > 0 {
            let values: Vec<i64> = tabulate_nonempty(&current.h, n)
                .into_iter()
                .map(|v| v + raise)
                .collect();
            let raised = Instance {
                h: table_spec(&values, true),
                ..current.clone()
            };
            if min_slack(&raised, false)?.0 >= 0 {
                current = raised;
            }
        }
    }
    let (slack, _) = min_slack(&current, false)?;
    let values: Vec<i64> = tabulate_nonempty(&current.b, n).into_iter().map(|v| v - slack).collect();
    current.b = table_spec(&values, false);
    Some(current)
}

/// Constant demand `k ≥ 1` with `b ≡ 0`. No edge enters `V`, so the
/// subpartition `{V}` has deficiency `k`.
pub fn infeasible_instance<R: Rng>(rng: &mut R, n: usize, hyperedges: usize, dyperedges: usize, k: i64) -> Instance {
    let graph = random_graph(rng, n, hyperedges, dyperedges);
    Instance {
        graph,
        h: SetFunctionSpec::Constant(k.max(1)),
        b: SetFunctionSpec::zero(),
        packing: None,
    }
}

/// Size limits for generated packing instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackingShape {
    pub max_vertices: usize,
    /// Upper bound on hyperedges plus dyperedges.
    pub max_edges: usize,
    pub max_k: u32,
    pub max_roots: usize,
}

impl PackingShape {
    pub fn dypergraph() -> Self {
        PackingShape {
            max_vertices: 5,
            max_edges: 6,
            max_k: 2,
            max_roots: 4,
        }
    }

    pub fn mixed() -> Self {
        PackingShape {
            max_vertices: 4,
            max_edges: 5,
            max_k: 2,
            max_roots: 4,
        }
    }
}

pub fn packing_instance<R: Rng>(rng: &mut R, mode: PackingMode, shape: &PackingShape) -> PackingInstance {
    let n = rng.gen_range(2..=shape.max_vertices);
    let edges = rng.gen_range(shape.max_edges / 2..=shape.max_edges);
    let hyperedges = if mode.is_mixed() { rng.gen_range(0..=edges) } else { 0 };
    let graph = random_graph(rng, n, hyperedges, edges - hyperedges);
    let k = if rng.gen_bool(0.15) { 0 } else { rng.gen_range(1..=shape.max_k.max(1)).min(shape.max_k) };
    let m = match mode {
        PackingMode::FgBounded => 0,
        PackingMode::Edmonds => rng.gen_range(0..=shape.max_roots.min(2)),
        _ => rng.gen_range(0..=shape.max_roots),
    };
    let roots = random_roots(rng, n, m);
    let matroid = match mode {
        PackingMode::Edmonds | PackingMode::KRegular | PackingMode::FgBounded => Matroid::free(m),
        PackingMode::MRootedFgkMixed => random_matroid(rng, m, false),
        _ => random_matroid(rng, m, true),
    };
    let mut f = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for _ in 0..n {
        let lo = if rng.gen_bool(0.7) { 0 } else { rng.gen_range(0..=k.max(1)) };
        let hi = if rng.gen_bool(0.1) {
            lo.saturating_sub(1)
        } else {
            rng.gen_range(lo..=k.max(lo) + 1)
        };
        f.push(lo);
        g.push(hi);
    }
    PackingInstance::new(graph, mode, k)
        .with_bounds(f, g)
        .with_roots(roots, matroid)
}
