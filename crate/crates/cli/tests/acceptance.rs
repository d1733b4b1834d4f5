//! Desk-scale acceptance campaigns. Prints one line per criterion and exits
//! nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;

use hyperorient::format::{Instance, InstanceFile};
use hyperorient::gen::{
    infeasible_instance, orientation_instance, packing_instance, random_matroid, random_roots, rng_from_seed, tighten,
    BFamily, HFamily, OrientationShape, PackingShape,
};
use hyperorient::matroids::RootPlacement;
use hyperorient::model::{orient_edge, Hyperedge, MixedHypergraph, Subpartition, VertexSet, VertexUniverse};
use hyperorient::oracle::{bell, check_condition, enumerate_subpartitions, min_tight_ground, tight_subpartitions};
use hyperorient::orienter::{orient_all_with, OrientOptions, OrientOutcome, OrientationStep};
use hyperorient::packinglab::{check, exhaustive_packing_search, validate_witness, PackingMode};
use hyperorient::setfuncs::{is_intersecting_supermodular, is_submodular, SetFunctionSpec};
use hyperorient::uncrossing::{check_invariants, check_uncross_inequalities, tightness_transfer, uncross_pair};
use hyperorient_cli::{Report, Verdict};

const ORIENT_INSTANCES: usize = 500;
const ORIENT_BUDGET: Duration = Duration::from_secs(60);
const NECESSITY_INSTANCES: usize = 100;
const UNCROSS_PAIRS: usize = 1000;
const CLOSURE_INSTANCES: usize = 200;
const DYPER_PER_MODE: usize = 200;
const PACKING_BUDGET: Duration = Duration::from_secs(600);
const MIXED_INSTANCES: usize = 100;
const MAX_MATROID_GROUND: usize = 6;
const BELL_COUNTS: [u64; 8] = [2, 5, 15, 52, 203, 877, 4140, 21147];

type Verdicts = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdicts + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hyperorient").chain(args.iter().copied());
    let code = hyperorient_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn cli_on(command: &str, path: &Path, extra: &[&str]) -> (i32, Option<Report>) {
    let mut args = vec![command, "--instance", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, out) = cli(&args);
    (code, Report::parse(&out).ok())
}

fn verified_functions(instance: &Instance) -> bool {
    let u = instance.graph.universe();
    is_intersecting_supermodular(&instance.h, u).unwrap().is_satisfied()
        && is_submodular(&instance.b, u).unwrap().is_satisfied()
}

/// The seeded instance stream shared by the orientation and loop-invariant
/// campaigns. Stops once `ORIENT_INSTANCES` of them are feasible.
fn orientation_campaign() -> Vec<Instance> {
    let mut rng = rng_from_seed(0x0a11);
    let mut all = Vec::new();
    let mut feasible = 0;
    while feasible < ORIENT_INSTANCES {
        let shape = OrientationShape {
            vertices: rng.gen_range(2..=6),
            hyperedges: rng.gen_range(1..=5),
            dyperedges: rng.gen_range(0..=5),
            h: HFamily::Any,
            b: BFamily::Any,
        };
        let instance = orientation_instance(&mut rng, &shape);
        if check_condition(&instance.graph, &instance.h, &instance.b).unwrap().is_satisfied() {
            feasible += 1;
        }
        all.push(instance);
    }
    all
}

fn write_instance(dir: &Path, i: usize, instance: &Instance) -> PathBuf {
    let path = dir.join(format!("i{i}.json"));
    std::fs::write(&path, InstanceFile::from_instance(instance).to_json()).unwrap();
    path
}

fn criterion_orientation(instances: &[Instance]) -> Verdicts {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let (mut feasible, mut infeasible) = (0, 0);
    for (i, instance) in instances.iter().enumerate() {
        ensure!(verified_functions(instance), "instance {i}: unverified h or b");
        let path = write_instance(dir.path(), i, instance);
        let (code, _) = cli_on("check", &path, &[]);
        match code {
            0 => {
                feasible += 1;
                let oriented = dir.path().join(format!("o{i}.json"));
                let (code, _) = cli_on("orient", &path, &["--out", oriented.to_str().unwrap()]);
                ensure!(code == 0, "instance {i}: orient exited {code}");
                let (code, report) = cli_on("verify", &oriented, &[]);
                ensure!(
                    code == 0 && report.map(|r| r.verdict) == Some(Verdict::Verified),
                    "instance {i}: oriented output fails verify"
                );
            }
            1 => {
                infeasible += 1;
                let (code, _) = cli_on("orient", &path, &[]);
                ensure!(code == 1, "instance {i}: check refuted but orient exited {code}");
            }
            other => return Err(format!("instance {i}: check exited {other}")),
        }
    }
    let elapsed = start.elapsed();
    ensure!(feasible >= ORIENT_INSTANCES, "only {feasible} feasible instances");
    ensure!(elapsed < ORIENT_BUDGET, "took {elapsed:?}");
    Ok(format!(
        "{feasible}/{feasible} feasible instances orient and verify ({infeasible} infeasible skipped), {elapsed:.2?}"
    ))
}

/// Every way of choosing a head in each hyperedge.
fn head_assignments(edges: &[Hyperedge]) -> Vec<Vec<usize>> {
    edges.iter().fold(vec![Vec::new()], |acc, e| {
        acc.into_iter()
            .flat_map(|prefix| {
                e.members().iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect()
    })
}

fn oriented_copy(graph: &MixedHypergraph, heads: &[usize]) -> MixedHypergraph {
    let mut out = MixedHypergraph::new(graph.universe().clone());
    for (d, m) in graph.dyperedges() {
        out.add_dyperedge(*d, *m).unwrap();
    }
    for (e, &head) in graph.hyperedge_list().iter().zip(heads) {
        out.add_dyperedge(orient_edge(e, head).unwrap(), 1).unwrap();
    }
    out
}

fn criterion_necessity() -> Verdicts {
    let mut rng = rng_from_seed(0x2ec);
    let (mut found, mut planted, mut assignments, mut pairs) = (0, 0, 0u64, 0u64);
    let mut attempts = 0;
    while found < NECESSITY_INSTANCES {
        attempts += 1;
        let n = rng.gen_range(2..=5);
        let hyper = rng.gen_range(1..=4);
        // Every third instance is infeasible by construction; the rest are
        // random instances the check refutes.
        let instance = if attempts % 3 == 0 {
            planted += 1;
            let (dyper, k) = (rng.gen_range(0..=3), rng.gen_range(1..=2));
            infeasible_instance(&mut rng, n, hyper, dyper, k)
        } else {
            let shape = OrientationShape {
                vertices: n,
                hyperedges: hyper,
                dyperedges: rng.gen_range(0..=3),
                h: HFamily::Any,
                b: BFamily::Any,
            };
            orientation_instance(&mut rng, &shape)
        };
        let graph = &instance.graph;
        if check_condition(graph, &instance.h, &instance.b).unwrap().is_satisfied() {
            continue;
        }
        found += 1;
        ensure!(verified_functions(&instance), "unverified h or b");
        let subpartitions: Vec<Subpartition> = enumerate_subpartitions(graph.universe()).unwrap().collect();
        for heads in head_assignments(&graph.hyperedge_list()) {
            assignments += 1;
            let oriented = oriented_copy(graph, &heads);
            ensure!(
                !check_condition(&oriented, &instance.h, &instance.b).unwrap().is_satisfied(),
                "infeasible instance #{found} has a valid orientation {heads:?}"
            );
            for p in &subpartitions {
                pairs += 1;
                ensure!(
                    graph.entering_count(p) >= oriented.entering_count(p),
                    "orientation increased e(P) for {p:?}"
                );
            }
        }
    }
    Ok(format!(
        "{found} infeasible instances ({planted} planted), {assignments} head assignments all refuted, {pairs} monotonicity pairs"
    ))
}

/// The graph after the first `j` steps: those hyperedges replaced by their
/// oriented copies, the rest still unoriented.
fn partial(graph: &MixedHypergraph, steps: &[OrientationStep], j: usize) -> MixedHypergraph {
    let mut out = MixedHypergraph::new(graph.universe().clone());
    let done: Vec<usize> = steps[..j].iter().map(|s| s.edge_index).collect();
    for (i, e) in graph.hyperedge_list().iter().enumerate() {
        if !done.contains(&i) {
            out.add_hyperedge(*e, 1).unwrap();
        }
    }
    for (d, m) in graph.dyperedges() {
        out.add_dyperedge(*d, *m).unwrap();
    }
    for s in &steps[..j] {
        out.add_dyperedge(orient_edge(&s.edge, s.chosen_head).unwrap(), 1).unwrap();
    }
    out
}

fn criterion_loop_invariant(instances: &[Instance]) -> Verdicts {
    let dir = tempfile::tempdir().unwrap();
    let options = OrientOptions {
        recheck_each_step: true,
        ..OrientOptions::default()
    };
    let (mut runs, mut steps) = (0, 0);
    for (i, instance) in instances.iter().enumerate() {
        let (graph, h, b) = (&instance.graph, &instance.h, &instance.b);
        if !check_condition(graph, h, b).unwrap().is_satisfied() {
            continue;
        }
        runs += 1;
        let path = write_instance(dir.path(), i, instance);
        let (code, report) = cli_on("orient", &path, &["--debug-recheck"]);
        ensure!(
            code == 0 && report.map(|r| r.verdict) == Some(Verdict::Feasible),
            "instance {i}: orient --debug-recheck exited {code}"
        );
        let result = match orient_all_with(graph, h, b, &options) {
            Ok(OrientOutcome::Oriented(r)) => r,
            other => return Err(format!("instance {i}: {other:?}")),
        };
        for j in 1..=result.steps.len() {
            steps += 1;
            let state = partial(graph, &result.steps, j);
            ensure!(
                check_condition(&state, h, b).unwrap().is_satisfied(),
                "instance {i}: condition fails after step {j}"
            );
        }
    }
    Ok(format!("{runs} rechecked runs, condition holds after all {steps} steps"))
}

fn random_subpartition<R: Rng>(rng: &mut R, n: usize) -> Subpartition {
    let mut groups = vec![VertexSet::EMPTY; n + 1];
    for v in 0..n {
        let g = rng.gen_range(0..=n);
        groups[g] = groups[g].with(v);
    }
    // Group 0 collects the vertices left out.
    Subpartition::new(groups.into_iter().skip(1).filter(|g| !g.is_empty()).collect()).unwrap()
}

fn criterion_uncrossing() -> Verdicts {
    let mut rng = rng_from_seed(0x0c2);
    let (mut pairs, mut steps, mut equal) = (0, 0, 0);
    while pairs < UNCROSS_PAIRS {
        let shape = OrientationShape {
            vertices: rng.gen_range(2..=6),
            hyperedges: rng.gen_range(0..=5),
            dyperedges: rng.gen_range(0..=5),
            h: HFamily::Any,
            b: BFamily::Any,
        };
        let instance = orientation_instance(&mut rng, &shape);
        ensure!(verified_functions(&instance), "unverified h or b");
        let n = shape.vertices;
        for _ in 0..10 {
            pairs += 1;
            let (p1, p2) = (random_subpartition(&mut rng, n), random_subpartition(&mut rng, n));
            let r = uncross_pair(&p1, &p2);
            let inv = check_invariants(&p1, &p2, &r);
            ensure!(inv.all(), "invariants {inv:?} fail for {p1:?}, {p2:?}");
            let report = check_uncross_inequalities(&p1, &p2, &r, &instance.graph, &instance.h, &instance.b)
                .map_err(|e| format!("{p1:?}, {p2:?}: {e}"))?;
            ensure!(report.containment_holds, "containment fails for {p1:?}, {p2:?}");
            steps += r.steps;
            equal += usize::from(report.containment_equal);
        }
    }
    Ok(format!("{pairs} pairs, {steps} uncrossing steps, {equal} with equal entering multisets"))
}

fn criterion_closure() -> Verdicts {
    let mut rng = rng_from_seed(0xc105);
    let (mut instances, mut families, mut tight_pairs) = (0, 0, 0u64);
    while instances < CLOSURE_INSTANCES {
        let shape = OrientationShape {
            vertices: rng.gen_range(3..=5),
            hyperedges: rng.gen_range(1..=4),
            dyperedges: rng.gen_range(0..=3),
            h: HFamily::Any,
            b: BFamily::Any,
        };
        let Some(instance) = tighten(&orientation_instance(&mut rng, &shape)) else {
            continue;
        };
        instances += 1;
        ensure!(verified_functions(&instance), "tightened instance has unverified h or b");
        let (h, b) = (&instance.h, &instance.b);
        let result = match orient_all_with(&instance.graph, h, b, &OrientOptions::default()) {
            Ok(OrientOutcome::Oriented(r)) => r,
            other => return Err(format!("tightened instance not oriented: {other:?}")),
        };
        // Every intermediate state, with the hyperedge oriented next as pivot.
        for (j, step) in result.steps.iter().enumerate() {
            let state = partial(&instance.graph, &result.steps, j);
            let pivot = step.edge;
            let family = tight_subpartitions(&state, h, b, &pivot).unwrap();
            if family.is_empty() {
                continue;
            }
            families += 1;
            min_tight_ground(&family, &pivot).map_err(|e| format!("min_tight_ground: {e}"))?;
            let members = &family.members;
            for (a, p1) in members.iter().enumerate() {
                for p2 in &members[a + 1..] {
                    if !p1.ground().intersects(p2.ground()) {
                        continue;
                    }
                    tight_pairs += 1;
                    let proof = tightness_transfer(p1, p2, &state, h, b, &pivot)
                        .map_err(|e| format!("transfer fails for {p1:?}, {p2:?}: {e}"))?;
                    ensure!(
                        members.contains(&proof.result.p3),
                        "P3 {:?} missing from the tight family",
                        proof.result.p3
                    );
                }
            }
        }
    }
    ensure!(tight_pairs > 0, "no tight pairs discovered");
    Ok(format!(
        "{instances} tightened instances, {families} nonempty families with realized common ground, {tight_pairs} tight pairs transfer"
    ))
}

fn agreement(mode: PackingMode, count: usize, seed: u64) -> Result<(usize, usize), String> {
    let shape = if mode.is_mixed() { PackingShape::mixed() } else { PackingShape::dypergraph() };
    let mut rng = rng_from_seed(seed);
    let mut feasible = 0;
    for i in 0..count {
        let inst = packing_instance(&mut rng, mode, &shape);
        let condition = check(&inst).map_err(|e| format!("{mode} #{i}: {e}"))?;
        let found = exhaustive_packing_search(&inst).map_err(|e| format!("{mode} #{i}: {e}"))?;
        if let Some(w) = &found {
            validate_witness(&inst, w).map_err(|e| format!("{mode} #{i}: bad witness: {e}"))?;
            feasible += 1;
        }
        ensure!(
            condition.is_satisfied() == found.is_some(),
            "{mode} #{i}: condition {:?} but search {}",
            condition.is_satisfied(),
            found.is_some()
        );
    }
    Ok((feasible, count))
}

fn criterion_dyper_packing() -> Verdicts {
    let start = Instant::now();
    let modes = [
        PackingMode::Edmonds,
        PackingMode::KRegular,
        PackingMode::FgBounded,
        PackingMode::MBased,
        PackingMode::MRootedFgkDyper,
    ];
    let mut parts = Vec::new();
    for (i, mode) in modes.into_iter().enumerate() {
        let (feasible, count) = agreement(mode, DYPER_PER_MODE, 0x6000 + i as u64)?;
        ensure!(0 < feasible && feasible < count, "{mode}: {feasible}/{count} feasible, campaign is one-sided");
        parts.push(format!("{mode} {feasible}/{count}"));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < PACKING_BUDGET, "took {elapsed:?}");
    Ok(format!("agreement on all ({}), {elapsed:.2?}", parts.join(", ")))
}

fn criterion_mixed_packing() -> Verdicts {
    let (feasible, count) = agreement(PackingMode::MRootedFgkMixed, MIXED_INSTANCES, 0x7000)?;
    ensure!(0 < feasible && feasible < count, "{feasible}/{count} feasible, campaign is one-sided");
    Ok(format!("agreement on {count} mixed instances ({feasible} packable)"))
}

fn criterion_set_functions() -> Verdicts {
    let mut rng = rng_from_seed(0x5e7);
    let mut matroids = 0;
    for m in 0..=MAX_MATROID_GROUND {
        for _ in 0..40 {
            matroids += 1;
            let matroid = random_matroid(&mut rng, m, true);
            // Rank axioms on the matroid itself.
            for x in 0..1u64 << m {
                let r = matroid.rank(x);
                ensure!(r <= x.count_ones(), "rank exceeds size");
                for e in 0..m {
                    let up = matroid.rank(x | 1 << e);
                    ensure!(r <= up && up <= r + 1, "rank not unit-increasing");
                }
            }
            let n = rng.gen_range(1..=5);
            let roots: RootPlacement = random_roots(&mut rng, n, m);
            let u = VertexUniverse::alphabetic(n).unwrap();
            let rank = SetFunctionSpec::rank(roots.clone(), matroid.clone()).unwrap();
            ensure!(is_submodular(&rank, &u).unwrap().is_satisfied(), "rank not submodular: {matroid:?}");
            let k = rng.gen_range(0..=3);
            let h = SetFunctionSpec::k_minus_rank(k, roots, matroid.clone()).unwrap();
            ensure!(
                is_intersecting_supermodular(&h, &u).unwrap().is_satisfied(),
                "k_minus_rank not intersecting supermodular: {matroid:?}"
            );
        }
    }

    let u = VertexUniverse::alphabetic(3).unwrap();
    let s = |labels: &[&str]| u.set_of(labels).unwrap();
    let b = SetFunctionSpec::table(vec![(s(&["a", "b"]), 2)], 0).unwrap();
    let witness = is_submodular(&b, &u).unwrap().violation().ok_or("planted b accepted")?;
    ensure!(
        (witness.x, witness.y, witness.lhs, witness.rhs) == (s(&["a"]), s(&["b"]), 0, 2),
        "wrong b witness {witness:?}"
    );
    let h = SetFunctionSpec::table(vec![(s(&["a"]), 1), (s(&["a", "b", "c"]), 0)], 1).unwrap();
    let witness = is_intersecting_supermodular(&h, &u)
        .unwrap()
        .violation()
        .ok_or("planted h accepted")?;
    ensure!(
        (witness.x, witness.y, witness.lhs, witness.rhs) == (s(&["a", "b"]), s(&["a", "c"]), 2, 1),
        "wrong h witness {witness:?}"
    );
    Ok(format!("{matroids} matroids (m <= {MAX_MATROID_GROUND}) pass, 2 planted violations found"))
}

fn criterion_bell() -> Verdicts {
    for (i, &expected) in BELL_COUNTS.iter().enumerate() {
        let n = i + 1;
        let u = VertexUniverse::alphabetic(n).unwrap();
        let got = enumerate_subpartitions(&u).unwrap().count() as u64;
        ensure!(got == expected && bell(n + 1) == expected, "n = {n}: {got} subpartitions");
    }
    Ok(format!("counts {BELL_COUNTS:?} for n = 1..8"))
}

fn main() {
    let instances = orientation_campaign();
    let criteria: Vec<Criterion> = vec![
        ("orientation", Box::new(|| criterion_orientation(&instances))),
        ("necessity", Box::new(criterion_necessity)),
        ("loop invariant", Box::new(|| criterion_loop_invariant(&instances))),
        ("uncrossing", Box::new(criterion_uncrossing)),
        ("tight closure", Box::new(criterion_closure)),
        ("dypergraph packing", Box::new(criterion_dyper_packing)),
        ("mixed packing", Box::new(criterion_mixed_packing)),
        ("set functions", Box::new(criterion_set_functions)),
        ("subpartition counts", Box::new(criterion_bell)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
