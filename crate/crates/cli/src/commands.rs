use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Deserialize;
use serde_json::{json, Value};

use hyperorient::format::{
    dyperedge_to_file, subpartition_from_labels, subpartition_labels, FormatError, Instance,
    InstanceFile, StepFile,
};
use hyperorient::gen::{self, BFamily, HFamily, OrientationShape, PackingShape};
use hyperorient::model::{Hyperedge, Subpartition, VertexSet, VertexUniverse};
use hyperorient::oracle::{bell, check_condition_parallel, ViolationCertificate};
use hyperorient::orienter::{orient_all_with, verify_oriented_graph, OrientOptions, OrientOutcome, OrienterError};
use hyperorient::packinglab::{self, PackingInstance, PackingMode, PackingWitness, Violation};
use hyperorient::setfuncs::{is_intersecting_supermodular, is_submodular, ModularityWitness};
use hyperorient::uncrossing::{
    check_invariants, check_uncross_inequalities, tightness_transfer, uncross_pair, UncrossError, UncrossReport,
};
use hyperorient::Outcome;

use crate::report::{Caps, Report, Verdict};
use crate::{Cli, Command, GenArgs, GlobalArgs};

/// Anything that ends a command with exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! from_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError(e.to_string())
            }
        }
    )*};
}

from_error!(
    FormatError,
    hyperorient::oracle::OracleError,
    hyperorient::orienter::OrienterError,
    hyperorient::setfuncs::SetFuncError,
    hyperorient::packinglab::PackingError,
    hyperorient::model::ModelError,
    UncrossError,
    serde_json::Error
);

fn fail<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError(msg.into()))
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let g = &cli.global;
    let (command, (verdict, detail)) = match &cli.command {
        Command::Gen(args) => return generate(g, args, stdout),
        Command::Check => ("check", check(g)?),
        Command::Orient => ("orient", orient(g)?),
        Command::Verify => ("verify", verify(g)?),
        Command::Funcs => ("funcs", funcs(g)?),
        Command::Uncross { pair } => ("uncross", uncross(g, pair)?),
        Command::PackCheck => ("pack-check", pack_check(g)?),
        Command::PackSearch => ("pack-search", pack_search(g)?),
    };
    let report = Report {
        command: command.to_string(),
        verdict,
        detail,
        seed: g.seed,
        caps: Caps {
            max_vertices: g.max_vertices,
            parallel: g.parallel.max(1),
            debug_recheck: g.debug_recheck,
        },
        elapsed_us: start.elapsed().as_micros() as u64,
    };
    let text = report.to_json();
    if let Some(out) = &g.out {
        if !matches!(cli.command, Command::Orient) {
            write_atomic(out, &text)?;
        }
    }
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError(format!("writing stdout: {e}")))?;
    Ok(verdict.exit_code())
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    std::fs::write(&tmp, text).map_err(|e| CliError(format!("writing {}: {e}", path.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError(format!("writing {}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("reading {}: {e}", path.display())))
}

fn load(g: &GlobalArgs) -> Result<(InstanceFile, Instance), CliError> {
    let Some(path) = &g.instance else {
        return fail("--instance is required");
    };
    let file = InstanceFile::parse(&read(path)?)?;
    let instance = file.to_instance()?;
    let n = instance.graph.universe().len();
    if n > g.max_vertices {
        return fail(format!("instance has {n} vertices, above --max-vertices {}", g.max_vertices));
    }
    Ok((file, instance))
}

fn labels(u: &VertexUniverse, set: VertexSet) -> Value {
    json!(u.labels_of(set))
}

fn certificate(u: &VertexUniverse, c: &ViolationCertificate) -> Value {
    json!({
        "subpartition": subpartition_labels(u, &c.subpartition),
        "deficiency": c.deficiency,
        "h_sum": c.h_sum,
        "b_value": c.b_value,
        "entering": c.entering,
    })
}

fn check(g: &GlobalArgs) -> Result<(Verdict, Value), CliError> {
    let (_, inst) = load(g)?;
    let u = inst.graph.universe();
    Ok(match check_condition_parallel(&inst.graph, &inst.h, &inst.b, g.parallel)? {
        Outcome::Satisfied => (Verdict::Feasible, json!({ "subpartitions": bell(u.len() + 1) })),
        Outcome::Violated(c) => (Verdict::Infeasible, json!({ "certificate": certificate(u, &c) })),
    })
}

fn orient(g: &GlobalArgs) -> Result<(Verdict, Value), CliError> {
    let (file, inst) = load(g)?;
    let u = inst.graph.universe();
    let options = OrientOptions {
        order: None,
        recheck_each_step: g.debug_recheck,
        workers: g.parallel,
    };
    let result = match orient_all_with(&inst.graph, &inst.h, &inst.b, &options) {
        Ok(OrientOutcome::Oriented(r)) => r,
        Ok(OrientOutcome::Infeasible(c)) => {
            return Ok((Verdict::Infeasible, json!({ "certificate": certificate(u, &c) })));
        }
        Err(OrienterError::InvariantBroken { step, certificate: c }) => {
            return Ok((
                Verdict::Refuted,
                json!({ "broken_at_step": step, "certificate": certificate(u, &c) }),
            ));
        }
        Err(e) => return Err(e.into()),
    };

    let mut oriented = file.clone();
    oriented.hyperedges.clear();
    let mut steps = Vec::with_capacity(result.steps.len());
    for s in &result.steps {
        let edge = u.labels_of(s.edge.members());
        let head = u.label(s.chosen_head).to_string();
        let dyper = hyperorient::model::orient_edge(&s.edge, s.chosen_head)?;
        oriented.dyperedges.push(dyperedge_to_file(u, &dyper));
        steps.push(StepFile {
            edge,
            head,
            rule: s.rule.as_str().to_string(),
            family_size: s.family_size,
            common_ground: s.common_ground.map(|c| u.labels_of(c)),
        });
    }
    oriented.steps = Some(steps.clone());
    if let Some(out) = &g.out {
        write_atomic(out, &oriented.to_json())?;
    }
    Ok((
        Verdict::Feasible,
        json!({ "steps": serde_json::to_value(&steps)?, "oriented": serde_json::to_value(&oriented)? }),
    ))
}

fn verify(g: &GlobalArgs) -> Result<(Verdict, Value), CliError> {
    let (_, inst) = load(g)?;
    if inst.graph.hyperedge_count() > 0 {
        return fail("verify needs an instance without hyperedges; run orient first");
    }
    let u = inst.graph.universe();
    Ok(match verify_oriented_graph(&inst.graph, &inst.h, &inst.b, g.parallel)? {
        Outcome::Satisfied => (Verdict::Verified, json!({ "subpartitions": bell(u.len() + 1) })),
        Outcome::Violated(c) => (Verdict::Refuted, json!({ "certificate": certificate(u, &c) })),
    })
}

fn modularity(u: &VertexUniverse, outcome: &Outcome<ModularityWitness>) -> Value {
    match outcome.as_violation() {
        None => Value::Null,
        Some(w) => json!({
            "x": labels(u, w.x),
            "y": labels(u, w.y),
            "lhs": w.lhs,
            "rhs": w.rhs,
        }),
    }
}

fn funcs(g: &GlobalArgs) -> Result<(Verdict, Value), CliError> {
    let (_, inst) = load(g)?;
    let u = inst.graph.universe();
    let h = is_intersecting_supermodular(&inst.h, u)?;
    let b = is_submodular(&inst.b, u)?;
    let verdict = if h.is_satisfied() && b.is_satisfied() {
        Verdict::Verified
    } else {
        Verdict::Refuted
    };
    Ok((
        verdict,
        json!({
            "h": {
                "kind": inst.h.kind_name(),
                "intersecting_supermodular": h.is_satisfied(),
                "witness": modularity(u, &h),
            },
            "b": {
                "kind": inst.b.kind_name(),
                "submodular": b.is_satisfied(),
                "witness": modularity(u, &b),
            },
        }),
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    p1: Vec<Vec<String>>,
    p2: Vec<Vec<String>>,
    #[serde(default)]
    pivot: Option<Vec<String>>,
}

fn uncross_report(r: &UncrossReport) -> Value {
    json!({
        "demand_before": r.demand_before,
        "demand_after": r.demand_after,
        "demand_slack": r.demand_slack,
        "entering_before": r.entering_before,
        "entering_after": r.entering_after,
        "containment_holds": r.containment_holds,
        "containment_equal": r.containment_equal,
    })
}

fn uncross(g: &GlobalArgs, pair: &Path) -> Result<(Verdict, Value), CliError> {
    let (_, inst) = load(g)?;
    let u = inst.graph.universe();
    let pair: PairFile = serde_json::from_str(&read(pair)?)?;
    let p1 = subpartition_from_labels(u, &pair.p1)?;
    let p2 = subpartition_from_labels(u, &pair.p2)?;
    let parts = |p: &Subpartition| subpartition_labels(u, p);

    let result = uncross_pair(&p1, &p2);
    let inv = check_invariants(&p1, &p2, &result);
    let (inequalities, demand_ok) = match check_uncross_inequalities(&p1, &p2, &result, &inst.graph, &inst.h, &inst.b) {
        Ok(r) => (uncross_report(&r), r.containment_holds),
        Err(UncrossError::HypothesisViolation(r)) => (uncross_report(&r), false),
        Err(e) => return Err(e.into()),
    };
    let mut ok = inv.all() && demand_ok;

    let transfer = match &pair.pivot {
        None => Value::Null,
        Some(pivot) => {
            let pivot = Hyperedge::new(u.set_of(pivot)?)?;
            match tightness_transfer(&p1, &p2, &inst.graph, &inst.h, &inst.b, &pivot) {
                Ok(proof) => json!({
                    "p3_tight": proof.p3_deficiency == 0,
                    "p3_deficiency": proof.p3_deficiency,
                    "pivot_enters_p3": hyperorient::model::hyperedge_enters(&pivot, proof.result.p3.ground()),
                }),
                Err(UncrossError::TransferFailure(why)) => {
                    ok = false;
                    json!({ "failure": why })
                }
                Err(e) => return Err(e.into()),
            }
        }
    };

    let verdict = if ok { Verdict::Verified } else { Verdict::Refuted };
    Ok((
        verdict,
        json!({
            "p3": parts(&result.p3),
            "p4": parts(&result.p4),
            "laminar": result.laminar.sets.iter().map(|&s| u.labels_of(s)).collect::<Vec<_>>(),
            "steps": result.steps,
            "invariants": {
                "multiplicity_conserved": inv.multiplicity_conserved,
                "laminar": inv.laminar,
                "p3_ground_is_intersection": inv.p3_ground_is_intersection,
                "p4_ground_is_union": inv.p4_ground_is_union,
                "within_step_bound": inv.within_step_bound,
            },
            "inequalities": inequalities,
            "transfer": transfer,
        }),
    ))
}

fn packing(g: &GlobalArgs, inst: &Instance) -> Result<PackingInstance, CliError> {
    let Some(mut p) = inst.packing.clone() else {
        return fail("instance has no packing block");
    };
    if let Some(mode) = &g.mode {
        p.mode = mode.parse()?;
    }
    p.validate()?;
    Ok(p)
}

fn violation(u: &VertexUniverse, v: &Violation) -> Value {
    json!({
        "condition": v.condition.as_str(),
        "vertex": v.vertex.map(|x| u.label(x).to_string()),
        "set": v.set.map(|s| u.labels_of(s)),
        "outer": v.outer.map(|s| u.labels_of(s)),
        "subpartition": v.subpartition.as_ref().map(|p| subpartition_labels(u, p)),
        "lhs": v.lhs,
        "rhs": v.rhs,
    })
}

fn pack_check(g: &GlobalArgs) -> Result<(Verdict, Value), CliError> {
    let (_, inst) = load(g)?;
    let p = packing(g, &inst)?;
    let u = p.graph.universe();
    Ok(match packinglab::check(&p)? {
        Outcome::Satisfied => (Verdict::Feasible, json!({ "mode": p.mode.as_str() })),
        Outcome::Violated(v) => (
            Verdict::Infeasible,
            json!({ "mode": p.mode.as_str(), "violation": violation(u, &v) }),
        ),
    })
}

fn witness(u: &VertexUniverse, w: &PackingWitness) -> Value {
    let members: Vec<Value> = w
        .arborescences
        .iter()
        .map(|a| {
            json!({
                "root": u.label(a.root),
                "root_element": a.root_element,
                "arcs": a.arcs.iter().map(|arc| json!({
                    "edge": arc.edge,
                    "tail": u.label(arc.tail),
                    "head": u.label(arc.head),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!(members)
}

fn pack_search(g: &GlobalArgs) -> Result<(Verdict, Value), CliError> {
    let (_, inst) = load(g)?;
    let p = packing(g, &inst)?;
    let u = p.graph.universe();
    let condition = packinglab::check(&p)?.is_satisfied();
    Ok(match packinglab::exhaustive_packing_search(&p)? {
        Some(w) => {
            packinglab::validate_witness(&p, &w).map_err(|e| CliError(format!("search produced a bad witness: {e}")))?;
            (
                Verdict::Feasible,
                json!({ "mode": p.mode.as_str(), "condition_holds": condition, "witness": witness(u, &w) }),
            )
        }
        None => (
            Verdict::Infeasible,
            json!({ "mode": p.mode.as_str(), "condition_holds": condition, "witness": null }),
        ),
    })
}

fn generate(g: &GlobalArgs, args: &GenArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let n = args.vertices;
    if n > g.max_vertices || n == 0 {
        return fail(format!("--vertices must be between 1 and --max-vertices ({})", g.max_vertices));
    }
    if n < 2 && args.hyperedges + args.dyperedges > 0 {
        return fail("edges need at least two vertices");
    }
    let mut rng = gen::rng_from_seed(g.seed.unwrap_or(0));
    let instance = if let Some(mode) = &g.mode {
        let mode: PackingMode = mode.parse()?;
        let mut shape = if mode.is_mixed() { PackingShape::mixed() } else { PackingShape::dypergraph() };
        shape.max_vertices = n.max(2);
        let p = gen::packing_instance(&mut rng, mode, &shape);
        Instance {
            graph: p.graph.clone(),
            h: hyperorient::setfuncs::SetFunctionSpec::zero(),
            b: hyperorient::setfuncs::SetFunctionSpec::zero(),
            packing: Some(p),
        }
    } else if args.infeasible {
        gen::infeasible_instance(&mut rng, n, args.hyperedges, args.dyperedges, 1)
    } else {
        let shape = OrientationShape {
            vertices: n,
            hyperedges: args.hyperedges,
            dyperedges: args.dyperedges,
            h: args.h_family.parse::<HFamily>().map_err(CliError)?,
            b: args.b_family.parse::<BFamily>().map_err(CliError)?,
        };
        let inst = gen::orientation_instance(&mut rng, &shape);
        if args.tighten {
            gen::tighten(&inst).unwrap_or(inst)
        } else {
            inst
        }
    };
    let text = InstanceFile::from_instance(&instance).to_json();
    match &g.out {
        Some(out) => write_atomic(out, &text)?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError(format!("writing stdout: {e}")))?,
    }
    Ok(0)
}
