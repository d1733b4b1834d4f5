//! Brute-force packing search.
//!
//! The search has two layers. The outer layer enumerates member shapes
//! `(root, root element, vertex set)` allowed by the mode. The inner layer
//! tries to realize a shape list edge-disjointly by picking, for every
//! non-root vertex of every member, a parent arc obtained by trimming a
//! dyperedge or orienting and trimming a hyperedge. Realizability depends
//! only on the multiset of `(root, vertex set)` pairs, so the inner layer is
//! memoized on it.

use std::collections::HashMap;

use crate::matroids::GroundSet;
use crate::model::VertexSet;

use super::witness::{EdgeKind, EdgeRef, PackingWitness, WitnessArborescence, WitnessArc};
use super::{PackingError, PackingInstance, PackingMode};

/// Desk-scale limits of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_vertices: usize,
    /// Edge copies, hyperedges and dyperedges together.
    pub max_edges: u64,
    pub max_k: u32,
    pub max_roots: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_vertices: 5,
            max_edges: 7,
            max_k: 2,
            max_roots: 4,
        }
    }
}

impl SearchCaps {
    fn check(&self, instance: &PackingInstance) -> Result<(), PackingError> {
        let graph = &instance.graph;
        let limits = [
            ("vertices", graph.universe().len(), self.max_vertices),
            (
                "edge copies",
                (graph.hyperedge_count() + graph.dyperedge_count()) as usize,
                self.max_edges as usize,
            ),
            ("k", instance.k as usize, self.max_k as usize),
            ("root copies", instance.roots.len(), self.max_roots),
        ];
        for (what, got, cap) in limits {
            if got > cap {
                return Err(PackingError::Capacity { what, got, cap });
            }
        }
        Ok(())
    }
}

/// Searches the whole space of packings allowed by the instance's mode and
/// returns one, or `None` when there is none. Errors beyond [`SearchCaps::default`].
pub fn exhaustive_packing_search(instance: &PackingInstance) -> Result<Option<PackingWitness>, PackingError> {
    instance.validate()?;
    SearchCaps::default().check(instance)?;
    let mut search = Search::new(instance);
    let found = match instance.mode {
        PackingMode::Edmonds => search.edmonds(),
        PackingMode::KRegular => search.k_regular(),
        PackingMode::FgBounded => search.fg_bounded(),
        PackingMode::MBased => search.m_based(),
        PackingMode::MRootedFgkDyper | PackingMode::MRootedFgkMixed => search.m_rooted(),
    };
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Member {
    root: usize,
    element: Option<usize>,
    span: VertexSet,
}

/// An edge entry usable as a parent arc into some vertex.
#[derive(Debug, Clone, Copy)]
struct ArcSource {
    slot: usize,
    tails: VertexSet,
}

/// Parent arc chosen for one `(member, vertex)` pair.
#[derive(Debug, Clone, Copy)]
struct Choice {
    member: usize,
    source: usize,
    tail: usize,
    head: usize,
}

type Realization = Option<Vec<Choice>>;

struct Search<'a> {
    instance: &'a PackingInstance,
    n: usize,
    /// Entry identity and multiplicity for every edge entry.
    sources: Vec<(EdgeKind, usize, u32)>,
    /// Per head vertex, which entries can supply a parent arc and from where.
    into: Vec<Vec<ArcSource>>,
    memo: HashMap<Vec<(usize, u32)>, Realization>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a PackingInstance) -> Self {
        let graph = &instance.graph;
        let n = graph.universe().len();
        let mut sources = Vec::new();
        let mut into = vec![Vec::new(); n];
        for (entry, (edge, mult)) in graph.dyperedges().iter().enumerate() {
            into[edge.head()].push(ArcSource {
                slot: sources.len(),
                tails: edge.tails(),
            });
            sources.push((EdgeKind::Dyperedge, entry, *mult));
        }
        if instance.mode.is_mixed() {
            for (entry, (edge, mult)) in graph.hyperedges().iter().enumerate() {
                let x = edge.members();
                for v in x.iter() {
                    into[v].push(ArcSource {
                        slot: sources.len(),
                        tails: x.without(v),
                    });
                }
                sources.push((EdgeKind::Hyperedge, entry, *mult));
            }
        }
        Search {
            instance,
            n,
            sources,
            into,
            memo: HashMap::new(),
        }
    }

    fn full(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn root_vertex(&self, e: usize) -> usize {
        self.instance.roots.vertex_of(e)
    }

    fn edmonds(&mut self) -> Option<PackingWitness> {
        let members: Vec<Member> = (0..self.instance.roots.len())
            .map(|e| Member {
                root: self.root_vertex(e),
                element: Some(e),
                span: self.full(),
            })
            .collect();
        self.realize(&members)
    }

    fn k_regular(&mut self) -> Option<PackingWitness> {
        let elements: Vec<usize> = (0..self.instance.roots.len()).collect();
        self.regular_spans(&elements)
    }

    fn fg_bounded(&mut self) -> Option<PackingWitness> {
        let k = self.instance.k as usize;
        let mut roots = Vec::with_capacity(k);
        self.fg_roots(k, 0, &mut roots)
    }

    fn fg_roots(&mut self, k: usize, from: usize, roots: &mut Vec<usize>) -> Option<PackingWitness> {
        if roots.len() == k {
            let inst = self.instance;
            let bounded = (0..self.n).all(|v| {
                let c = roots.iter().filter(|&&r| r == v).count() as u32;
                inst.f[v] <= c && c <= inst.g[v]
            });
            if !bounded {
                return None;
            }
            let members: Vec<Member> = roots
                .iter()
                .map(|&r| Member {
                    root: r,
                    element: None,
                    span: self.full(),
                })
                .collect();
            return self.realize(&members);
        }
        for r in from..self.n {
            roots.push(r);
            let found = self.fg_roots(k, r, roots);
            roots.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn m_based(&mut self) -> Option<PackingWitness> {
        let m = self.instance.roots.len();
        let mut spans = vec![VertexSet::EMPTY; m];
        self.m_based_spans(0, &mut spans)
    }

    fn m_based_spans(&mut self, e: usize, spans: &mut [VertexSet]) -> Option<PackingWitness> {
        let matroid = &self.instance.matroid;
        let local = |spans: &[VertexSet], v: usize| -> GroundSet {
            spans
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(v))
                .fold(0, |acc, (i, _)| acc | 1 << i)
        };
        if e == spans.len() {
            if !(0..self.n).all(|v| matroid.is_basis(local(spans, v))) {
                return None;
            }
            let members: Vec<Member> = spans
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_empty())
                .map(|(i, &span)| Member {
                    root: self.root_vertex(i),
                    element: Some(i),
                    span,
                })
                .collect();
            return self.realize(&members);
        }
        let root = self.root_vertex(e);
        let options = std::iter::once(VertexSet::EMPTY).chain(
            self.full()
                .without(root)
                .subsets()
                .map(|s| s.with(root)),
        );
        for span in options {
            spans[e] = span;
            if span.iter().all(|v| matroid.is_independent(local(&spans[..=e], v))) {
                if let Some(w) = self.m_based_spans(e + 1, spans) {
                    return Some(w);
                }
            }
        }
        spans[e] = VertexSet::EMPTY;
        None
    }

    fn m_rooted(&mut self) -> Option<PackingWitness> {
        let inst = self.instance;
        for basis in inst.matroid.bases() {
            let elements: Vec<usize> = (0..inst.roots.len()).filter(|&e| basis & 1 << e != 0).collect();
            let bounded = (0..self.n).all(|v| {
                let c = elements.iter().filter(|&&e| self.root_vertex(e) == v).count() as u32;
                inst.f[v] <= c && c <= inst.g[v]
            });
            if bounded {
                if let Some(w) = self.regular_spans(&elements) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// One member per listed element, each vertex in exactly `k` members.
    fn regular_spans(&mut self, elements: &[usize]) -> Option<PackingWitness> {
        let k = self.instance.k as usize;
        let mut load = vec![0usize; self.n];
        for &e in elements {
            load[self.root_vertex(e)] += 1;
        }
        if load.iter().any(|&l| l > k) {
            return None;
        }
        let mut members: Vec<Member> = elements
            .iter()
            .map(|&e| Member {
                root: self.root_vertex(e),
                element: Some(e),
                span: VertexSet::singleton(self.root_vertex(e)),
            })
            .collect();
        self.regular_rec(0, k, &mut load, &mut members)
    }

    fn regular_rec(
        &mut self,
        j: usize,
        k: usize,
        load: &mut [usize],
        members: &mut [Member],
    ) -> Option<PackingWitness> {
        if j == members.len() {
            if load.iter().all(|&l| l == k) {
                return self.realize(members);
            }
            return None;
        }
        // Members left to place must still be able to fill every vertex.
        let remaining = members.len() - j;
        if load.iter().any(|&l| l + remaining < k) {
            return None;
        }
        let root = members[j].root;
        // Members sharing a root are interchangeable: keep their extra sets
        // non-decreasing.
        let floor = match j.checked_sub(1) {
            Some(i) if members[i].root == root => members[i].span.without(root).bits(),
            _ => 0,
        };
        let free = VertexSet::from_indices((0..self.n).filter(|&v| v != root && load[v] < k));
        for extra in free.subsets() {
            if extra.bits() < floor {
                continue;
            }
            extra.iter().for_each(|v| load[v] += 1);
            members[j].span = extra.with(root);
            let found = self.regular_rec(j + 1, k, load, members);
            extra.iter().for_each(|v| load[v] -= 1);
            if found.is_some() {
                return found;
            }
        }
        members[j].span = VertexSet::singleton(root);
        None
    }

    fn realize(&mut self, members: &[Member]) -> Option<PackingWitness> {
        let mut key: Vec<(usize, u32)> = members.iter().map(|m| (m.root, m.span.bits())).collect();
        key.sort_unstable();
        // Solve on members sorted by key so the memoized choices line up.
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by_key(|&j| (members[j].root, members[j].span.bits()));
        let sorted: Vec<Member> = order.iter().map(|&j| members[j]).collect();
        let choices = match self.memo.get(&key) {
            Some(r) => r.clone(),
            None => {
                let r = self.pack(&sorted);
                self.memo.insert(key, r.clone());
                r
            }
        }?;
        Some(self.witness(&sorted, &choices))
    }

    fn witness(&self, members: &[Member], choices: &[Choice]) -> PackingWitness {
        let mut next_copy = vec![0u32; self.sources.len()];
        let mut arborescences: Vec<WitnessArborescence> = members
            .iter()
            .map(|m| WitnessArborescence {
                root: m.root,
                root_element: m.element,
                arcs: Vec::new(),
            })
            .collect();
        for c in choices {
            let (kind, entry, _) = self.sources[c.source];
            let copy = next_copy[c.source];
            next_copy[c.source] += 1;
            arborescences[c.member].arcs.push(WitnessArc {
                edge: EdgeRef { kind, entry, copy },
                tail: c.tail,
                head: c.head,
            });
        }
        PackingWitness { arborescences }
    }

    /// Edge-disjoint realization of the given shapes, if one exists.
    fn pack(&self, members: &[Member]) -> Realization {
        let mut slots: Vec<(usize, usize, Vec<ArcSource>)> = Vec::new();
        for (j, m) in members.iter().enumerate() {
            if !self.reachable(m) {
                return None;
            }
            for v in m.span.without(m.root).iter() {
                let opts: Vec<ArcSource> = self.into[v]
                    .iter()
                    .copied()
                    .filter(|s| s.tails.intersects(m.span))
                    .collect();
                slots.push((j, v, opts));
            }
        }
        let supply: u64 = self.sources.iter().map(|s| u64::from(s.2)).sum();
        if slots.len() as u64 > supply {
            return None;
        }
        for v in 0..self.n {
            let demand = slots.iter().filter(|s| s.1 == v).count() as u64;
            let cap: u64 = self.into[v].iter().map(|s| u64::from(self.sources[s.slot].2)).sum();
            if demand > cap {
                return None;
            }
        }
        slots.sort_by_key(|s| s.2.len());
        let mut state = PackState {
            left: self.sources.iter().map(|s| s.2).collect(),
            parent: vec![vec![None; self.n]; members.len()],
            chosen: Vec::with_capacity(slots.len()),
        };
        if state.fill(&slots, members) {
            Some(state.chosen)
        } else {
            None
        }
    }

    /// Whether the member's vertex set is reachable from its root using any
    /// arcs the graph could supply inside it.
    fn reachable(&self, m: &Member) -> bool {
        let mut reached = VertexSet::singleton(m.root);
        loop {
            let next = (m.span - reached)
                .iter()
                .filter(|&v| self.into[v].iter().any(|s| s.tails.intersects(reached)))
                .fold(reached, VertexSet::with);
            if next == reached {
                return reached == m.span;
            }
            reached = next;
        }
    }
}

struct PackState {
    left: Vec<u32>,
    parent: Vec<Vec<Option<usize>>>,
    chosen: Vec<Choice>,
}

impl PackState {
    fn fill(&mut self, slots: &[(usize, usize, Vec<ArcSource>)], members: &[Member]) -> bool {
        let Some(((j, v, opts), rest)) = slots.split_first() else {
            return true;
        };
        let (j, v) = (*j, *v);
        for s in opts {
            if self.left[s.slot] == 0 {
                continue;
            }
            for u in (s.tails & members[j].span).iter() {
                if self.closes_cycle(j, u, v) {
                    continue;
                }
                self.left[s.slot] -= 1;
                self.parent[j][v] = Some(u);
                self.chosen.push(Choice {
                    member: j,
                    source: s.slot,
                    tail: u,
                    head: v,
                });
                if self.fill(rest, members) {
                    return true;
                }
                self.chosen.pop();
                self.parent[j][v] = None;
                self.left[s.slot] += 1;
            }
        }
        false
    }

    /// Whether giving `v` the parent `u` in member `j` closes a cycle.
    fn closes_cycle(&self, j: usize, u: usize, v: usize) -> bool {
        let mut cur = Some(u);
        while let Some(x) = cur {
            if x == v {
                return true;
            }
            cur = self.parent[j][x];
        }
        false
    }
}
