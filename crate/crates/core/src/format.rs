//! JSON instance files. Files name vertices by label; everything in memory
//! uses indices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroids::{Matroid, MatroidError, MatroidKind, RootPlacement};
use crate::model::{Dyperedge, Hyperedge, MixedHypergraph, ModelError, Subpartition, VertexSet, VertexUniverse};
use crate::packinglab::{PackingError, PackingInstance, PackingMode};
use crate::setfuncs::{RankFn, SetFuncError, SetFunctionSpec, TableFn};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    SetFunction(#[from] SetFuncError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Packing(#[from] PackingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyperedgeFile {
    pub tails: Vec<String>,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntryFile {
    pub set: Vec<String>,
    pub value: i64,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootFile {
    pub vertex: String,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidFile {
    Free,
    Uniform { rank: u32 },
    Partition { classes: Vec<Vec<usize>>, capacities: Vec<u32> },
    Graphic { nodes: usize, edges: Vec<[usize; 2]> },
    Table { ranks: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetFunctionFile {
    Constant {
        value: i64,
    },
    Modular {
        weights: Vec<i64>,
        #[serde(default)]
        offset: i64,
    },
    Table {
        entries: Vec<TableEntryFile>,
        #[serde(default)]
        default: i64,
    },
    Rank {
        roots: Vec<RootFile>,
        matroid: MatroidFile,
    },
    KMinusRank {
        k: i64,
        roots: Vec<RootFile>,
        matroid: MatroidFile,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingFile {
    pub mode: String,
    #[serde(default)]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<u32>>,
    #[serde(default)]
    pub roots: Vec<RootFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matroid: Option<MatroidFile>,
}

/// One orientation step as recorded in an oriented instance file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFile {
    pub edge: Vec<String>,
    pub head: String,
    pub rule: String,
    pub family_size: usize,
    pub common_ground: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub hyperedges: Vec<Vec<String>>,
    #[serde(default)]
    pub dyperedges: Vec<DyperedgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<SetFunctionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<SetFunctionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packing: Option<PackingFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepFile>>,
}

/// A parsed instance. Missing `h` and `b` default to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: MixedHypergraph,
    pub h: SetFunctionSpec,
    pub b: SetFunctionSpec,
    pub packing: Option<PackingInstance>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }

    pub fn universe(&self) -> Result<VertexUniverse, FormatError> {
        Ok(VertexUniverse::new(self.vertices.iter())?)
    }

    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        let universe = self.universe()?;
        let mut graph = MixedHypergraph::new(universe.clone());
        for edge in &self.hyperedges {
            graph.add_hyperedge(Hyperedge::new(universe.set_of(edge)?)?, 1)?;
        }
        for d in &self.dyperedges {
            let edge = Dyperedge::new(universe.set_of(&d.tails)?, universe.index_of(&d.head)?)?;
            graph.add_dyperedge(edge, 1)?;
        }
        let function = |f: &Option<SetFunctionFile>| -> Result<SetFunctionSpec, FormatError> {
            let spec = match f {
                Some(f) => set_function_from_file(f, &universe)?,
                None => SetFunctionSpec::zero(),
            };
            spec.check_universe(&universe)?;
            Ok(spec)
        };
        let h = function(&self.h)?;
        let b = function(&self.b)?;
        let packing = match &self.packing {
            Some(p) => Some(packing_from_file(p, &graph)?),
            None => None,
        };
        Ok(Instance { graph, h, b, packing })
    }

    pub fn from_instance(instance: &Instance) -> Self {
        let graph = &instance.graph;
        let u = graph.universe();
        let hyperedges = graph
            .hyperedge_list()
            .iter()
            .map(|e| u.labels_of(e.members()))
            .collect();
        let dyperedges = graph.dyperedge_list().iter().map(|d| dyperedge_to_file(u, d)).collect();
        InstanceFile {
            vertices: u.labels().to_vec(),
            hyperedges,
            dyperedges,
            h: Some(set_function_to_file(&instance.h, u)),
            b: Some(set_function_to_file(&instance.b, u)),
            packing: instance.packing.as_ref().map(|p| packing_to_file(p, u)),
            steps: None,
        }
    }
}

/// Parses and validates an instance in one go.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    InstanceFile::parse(text)?.to_instance()
}

pub fn dyperedge_to_file(universe: &VertexUniverse, d: &Dyperedge) -> DyperedgeFile {
    DyperedgeFile {
        tails: universe.labels_of(d.tails()),
        head: universe.label(d.head()).to_string(),
    }
}

pub fn subpartition_labels(universe: &VertexUniverse, p: &Subpartition) -> Vec<Vec<String>> {
    p.members().iter().map(|&x| universe.labels_of(x)).collect()
}

pub fn subpartition_from_labels(
    universe: &VertexUniverse,
    members: &[Vec<String>],
) -> Result<Subpartition, FormatError> {
    let sets = members
        .iter()
        .map(|m| universe.set_of(m))
        .collect::<Result<Vec<VertexSet>, _>>()?;
    Ok(Subpartition::new(sets)?)
}

fn roots_from_file(roots: &[RootFile], universe: &VertexUniverse) -> Result<RootPlacement, FormatError> {
    let pairs = roots
        .iter()
        .map(|r| Ok((universe.index_of(&r.vertex)?, r.multiplicity)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(RootPlacement::new(pairs)?)
}

fn roots_to_file(roots: &RootPlacement, universe: &VertexUniverse) -> Vec<RootFile> {
    roots
        .roots()
        .iter()
        .map(|&(v, m)| RootFile {
            vertex: universe.label(v).to_string(),
            multiplicity: m,
        })
        .collect()
}

pub fn matroid_from_file(m: &MatroidFile, ground_size: usize) -> Result<Matroid, FormatError> {
    let kind = match m.clone() {
        MatroidFile::Free => MatroidKind::Free,
        MatroidFile::Uniform { rank } => MatroidKind::Uniform { rank },
        MatroidFile::Partition { classes, capacities } => MatroidKind::Partition { classes, capacities },
        MatroidFile::Graphic { nodes, edges } => MatroidKind::Graphic {
            nodes,
            edges: edges.into_iter().map(|[u, v]| (u, v)).collect(),
        },
        MatroidFile::Table { ranks } => MatroidKind::Table { ranks },
    };
    Ok(Matroid::new(kind, ground_size)?)
}

pub fn matroid_to_file(m: &Matroid) -> MatroidFile {
    match m.kind().clone() {
        MatroidKind::Free => MatroidFile::Free,
        MatroidKind::Uniform { rank } => MatroidFile::Uniform { rank },
        MatroidKind::Partition { classes, capacities } => MatroidFile::Partition { classes, capacities },
        MatroidKind::Graphic { nodes, edges } => MatroidFile::Graphic {
            nodes,
            edges: edges.into_iter().map(|(u, v)| [u, v]).collect(),
        },
        MatroidKind::Table { ranks } => MatroidFile::Table { ranks },
    }
}

fn rank_from_file(roots: &[RootFile], m: &MatroidFile, u: &VertexUniverse) -> Result<RankFn, FormatError> {
    let roots = roots_from_file(roots, u)?;
    let matroid = matroid_from_file(m, roots.len())?;
    Ok(RankFn::new(roots, matroid)?)
}

pub fn set_function_from_file(f: &SetFunctionFile, u: &VertexUniverse) -> Result<SetFunctionSpec, FormatError> {
    Ok(match f {
        SetFunctionFile::Constant { value } => SetFunctionSpec::Constant(*value),
        SetFunctionFile::Modular { weights, offset } => SetFunctionSpec::modular(weights.clone(), *offset),
        SetFunctionFile::Table { entries, default } => {
            let entries = entries
                .iter()
                .map(|e| Ok((u.set_of(&e.set)?, e.value)))
                .collect::<Result<Vec<_>, ModelError>>()?;
            SetFunctionSpec::Table(TableFn::new(entries, *default)?)
        }
        SetFunctionFile::Rank { roots, matroid } => SetFunctionSpec::Rank(rank_from_file(roots, matroid, u)?),
        SetFunctionFile::KMinusRank { k, roots, matroid } => SetFunctionSpec::KMinusRank {
            k: *k,
            rank: rank_from_file(roots, matroid, u)?,
        },
    })
}

pub fn set_function_to_file(f: &SetFunctionSpec, u: &VertexUniverse) -> SetFunctionFile {
    match f {
        SetFunctionSpec::Constant(value) => SetFunctionFile::Constant { value: *value },
        SetFunctionSpec::Modular { weights, offset } => SetFunctionFile::Modular {
            weights: weights.clone(),
            offset: *offset,
        },
        SetFunctionSpec::Table(t) => SetFunctionFile::Table {
            entries: t
                .entries()
                .iter()
                .map(|&(set, value)| TableEntryFile {
                    set: u.labels_of(set),
                    value,
                })
                .collect(),
            default: t.default_value(),
        },
        SetFunctionSpec::Rank(r) => SetFunctionFile::Rank {
            roots: roots_to_file(r.roots(), u),
            matroid: matroid_to_file(r.matroid()),
        },
        SetFunctionSpec::KMinusRank { k, rank } => SetFunctionFile::KMinusRank {
            k: *k,
            roots: roots_to_file(rank.roots(), u),
            matroid: matroid_to_file(rank.matroid()),
        },
    }
}

fn packing_from_file(p: &PackingFile, graph: &MixedHypergraph) -> Result<PackingInstance, FormatError> {
    let universe = graph.universe();
    let n = universe.len();
    let mode: PackingMode = p.mode.parse()?;
    let roots = roots_from_file(&p.roots, universe)?;
    let matroid = match &p.matroid {
        Some(m) => matroid_from_file(m, roots.len())?,
        None => Matroid::free(roots.len()),
    };
    let f = p.f.clone().unwrap_or_else(|| vec![0; n]);
    let g = p.g.clone().unwrap_or_else(|| vec![p.k; n]);
    let instance = PackingInstance::new(graph.clone(), mode, p.k)
        .with_bounds(f, g)
        .with_roots(roots, matroid);
    instance.validate()?;
    Ok(instance)
}

fn packing_to_file(p: &PackingInstance, u: &VertexUniverse) -> PackingFile {
    PackingFile {
        mode: p.mode.as_str().to_string(),
        k: p.k,
        f: Some(p.f.clone()),
        g: Some(p.g.clone()),
        roots: roots_to_file(&p.roots, u),
        matroid: Some(matroid_to_file(&p.matroid)),
    }
}
