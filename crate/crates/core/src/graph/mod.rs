//! Multigraphs with stable edge ids, the minor operations used by the
//! deletion-contraction recursion, and structural probes.
//!
//! Parallel edges are stored as a single multiedge with a multiplicity and
//! self-loops as a multiedge whose endpoints coincide, so there is at most one
//! record per unordered vertex pair.

mod components;
pub mod io;
pub mod planarity;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use components::Components;

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiEdge {
    pub id: EdgeId,
    /// Smaller endpoint.
    pub u: VertexId,
    /// Larger endpoint; equal to `u` for a loop.
    pub v: VertexId,
    pub mult: u64,
}

impl MultiEdge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    Loop,
    Coloop,
    Ordinary,
}

/// Structural flags computed once per recursion node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    pub is_looped_forest: bool,
    pub is_multicycle: bool,
    pub is_planar: bool,
    pub is_vertigan: bool,
    /// Number of multiedges whose multiplicity is not a multiple of `k`.
    pub nu: usize,
    pub rank: usize,
    pub kappa: usize,
}

/// An undirected multigraph. Immutable once built; minor operations return
/// new values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    vertices: BTreeSet<VertexId>,
    /// Sorted by id.
    edges: Vec<MultiEdge>,
}

impl Multigraph {
    /// Graph on vertices `0..n` with no edges.
    pub fn empty(n: usize) -> Self {
        Multigraph {
            vertices: (0..n as VertexId).collect(),
            edges: Vec::new(),
        }
    }

    /// Builds a graph on vertices `0..n`. Multiplicities of repeated pairs are
    /// summed, zero-multiplicity entries are dropped, and edge ids follow the
    /// order in which each pair first appears.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        let mut by_pair: BTreeMap<(VertexId, VertexId), (EdgeId, u64)> = BTreeMap::new();
        let mut next_id = 0;
        for &(a, b, m) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Input(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            let key = (a.min(b), a.max(b));
            let entry = by_pair.entry(key).or_insert_with(|| {
                next_id += 1;
                (next_id - 1, 0)
            });
            entry.1 += m;
        }
        let mut out: Vec<MultiEdge> = by_pair
            .into_iter()
            .filter(|(_, (_, m))| *m > 0)
            .map(|((u, v), (id, mult))| MultiEdge { id, u, v, mult })
            .collect();
        out.sort_by_key(|e| e.id);
        Ok(Multigraph {
            vertices: (0..n as VertexId).collect(),
            edges: out,
        })
    }

    /// Assembles a graph from parts that already satisfy the invariants.
    pub(crate) fn from_parts(vertices: BTreeSet<VertexId>, mut edges: Vec<MultiEdge>) -> Self {
        edges.sort_by_key(|e| e.id);
        debug_assert!(edges
            .iter()
            .all(|e| e.mult > 0 && e.u <= e.v && vertices.contains(&e.u) && vertices.contains(&e.v)));
        Multigraph { vertices, edges }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&MultiEdge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .map(|i| &self.edges[i])
            .map_err(|_| Error::Input(format!("unknown edge id {id}")))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_multiedges(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.mult).sum()
    }

    pub fn has_edges(&self) -> bool {
        !self.edges.is_empty()
    }

    /// One past the largest vertex id, for sizing dense lookup tables.
    pub(crate) fn id_bound(&self) -> usize {
        self.vertices.iter().next_back().map_or(0, |&v| v as usize + 1)
    }

    /// Removes the whole multiedge `id`; vertices are kept.
    pub fn delete(&self, id: EdgeId) -> Result<Multigraph> {
        self.edge(id)?;
        Ok(Multigraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().filter(|e| e.id != id).copied().collect(),
        })
    }

    /// Contracts the whole multiedge `id`, merging its endpoints into the
    /// smaller one. Parallel multiedges created by the merge are combined under
    /// the lower id; loops at either endpoint end up on the merged vertex.
    pub fn contract(&self, id: EdgeId) -> Result<Multigraph> {
        let e = *self.edge(id)?;
        if e.is_loop() {
            return Err(Error::Input(format!("cannot contract loop {id}")));
        }
        let (keep, gone) = (e.u, e.v);
        let relabel = |w: VertexId| if w == gone { keep } else { w };
        let mut merged: BTreeMap<(VertexId, VertexId), MultiEdge> = BTreeMap::new();
        for f in self.edges.iter().filter(|f| f.id != id) {
            let (a, b) = (relabel(f.u), relabel(f.v));
            let key = (a.min(b), a.max(b));
            merged
                .entry(key)
                .and_modify(|g| {
                    g.mult += f.mult;
                    g.id = g.id.min(f.id);
                })
                .or_insert(MultiEdge {
                    id: f.id,
                    u: key.0,
                    v: key.1,
                    mult: f.mult,
                });
        }
        let mut vertices = self.vertices.clone();
        vertices.remove(&gone);
        Ok(Multigraph::from_parts(vertices, merged.into_values().collect()))
    }

    /// Contracts a single parallel copy of multiedge `id`; the remaining
    /// copies become a loop on the merged vertex.
    pub fn contract_one(&self, id: EdgeId) -> Result<Multigraph> {
        let e = *self.edge(id)?;
        let mut c = self.contract(id)?;
        if e.mult > 1 {
            match c.edges.iter_mut().find(|f| f.u == e.u && f.v == e.u) {
                Some(l) => {
                    l.mult += e.mult - 1;
                    l.id = l.id.min(id);
                }
                None => c.edges.push(MultiEdge {
                    id,
                    u: e.u,
                    v: e.u,
                    mult: e.mult - 1,
                }),
            }
            c.edges.sort_by_key(|f| f.id);
        }
        Ok(c)
    }

    pub fn classify_edge(&self, id: EdgeId) -> Result<EdgeClass> {
        let e = self.edge(id)?;
        if e.is_loop() {
            return Ok(EdgeClass::Loop);
        }
        Ok(if self.bridges().contains(&id) {
            EdgeClass::Coloop
        } else {
            EdgeClass::Ordinary
        })
    }

    /// Drops vertices with no incident multiedge.
    pub fn remove_isolated(&self) -> Multigraph {
        let vertices = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        Multigraph {
            vertices,
            edges: self.edges.clone(),
        }
    }

    /// Applies `f` to every multiplicity, dropping multiedges mapped to zero.
    pub fn map_multiplicities(&self, f: impl Fn(u64) -> u64) -> Multigraph {
        Multigraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .filter_map(|e| {
                    let mult = f(e.mult);
                    (mult > 0).then_some(MultiEdge { mult, ..*e })
                })
                .collect(),
        }
    }

    /// The subgraph induced by a set of multiedges; its vertex set is the set
    /// of their endpoints.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Multigraph {
        let keep: BTreeSet<EdgeId> = ids.iter().copied().collect();
        let edges: Vec<MultiEdge> = self
            .edges
            .iter()
            .filter(|e| keep.contains(&e.id))
            .copied()
            .collect();
        let vertices = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        Multigraph { vertices, edges }
    }

    /// Degree of `v` in the underlying simple graph (loops not counted).
    pub fn underlying_degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| !e.is_loop() && (e.u == v || e.v == v))
            .count()
    }

    /// Underlying-graph degrees indexed by vertex id.
    pub(crate) fn degree_table(&self) -> Vec<usize> {
        let mut deg = vec![0; self.id_bound()];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        deg
    }

    /// Number of connected components of `(V, E)`, isolated vertices included.
    pub fn kappa(&self) -> usize {
        let mut dsu = Dsu::new(self.id_bound());
        let mut merges = 0;
        for e in &self.edges {
            if dsu.union(e.u as usize, e.v as usize) {
                merges += 1;
            }
        }
        self.vertices.len() - merges
    }

    /// Rank of the cycle matroid, `|V| - κ(E)`.
    pub fn rank(&self) -> usize {
        self.vertices.len() - self.kappa()
    }

    /// Ids of multiedges whose underlying edge is a bridge.
    pub fn bridges(&self) -> BTreeSet<EdgeId> {
        self.components()
            .biconnected
            .iter()
            .filter(|block| block.len() == 1)
            .map(|block| block[0])
            .filter(|&id| self.edge(id).map_or(false, |e| !e.is_loop()))
            .collect()
    }

    /// Number of multiedges whose multiplicity is not a multiple of `k`.
    pub fn non_vertigan_count(&self, k: u64) -> usize {
        self.edges.iter().filter(|e| e.mult % k != 0).count()
    }

    pub fn is_vertigan(&self, k: u64) -> bool {
        self.non_vertigan_count(k) == 0
    }

    /// Every underlying edge is a loop or a bridge.
    pub fn is_looped_forest(&self) -> bool {
        let non_loops = self.edges.iter().filter(|e| !e.is_loop()).count();
        let with_edges = self.remove_isolated();
        // A loop-free forest has |E| = |V| - κ; loops do not change κ.
        non_loops == with_edges.rank()
    }

    /// The underlying simple graph (ignoring loops and isolated vertices) is a
    /// single cycle of length at least three.
    pub fn is_multicycle(&self) -> bool {
        if self.edges.iter().any(|e| e.is_loop()) {
            return false;
        }
        let g = self.remove_isolated();
        let n = g.num_vertices();
        if n < 3 || g.num_multiedges() != n {
            return false;
        }
        let deg = g.degree_table();
        g.vertices().all(|v| deg[v as usize] == 2) && g.kappa() == 1
    }

    /// Planarity of the underlying simple graph.
    pub fn is_planar(&self) -> bool {
        planarity::is_planar(self)
    }

    pub fn probe(&self, k: u64) -> ProbeResult {
        let kappa = self.kappa();
        let nu = self.non_vertigan_count(k);
        ProbeResult {
            is_looped_forest: self.is_looped_forest(),
            is_multicycle: self.is_multicycle(),
            is_planar: self.is_planar(),
            is_vertigan: nu == 0,
            nu,
            rank: self.vertices.len() - kappa,
            kappa,
        }
    }

    /// Edge list with vertices relabelled `0..n` in increasing id order and
    /// sorted, for comparing graphs that differ only in labels.
    pub fn canonical_edges(&self) -> Vec<(u32, u32, u64)> {
        let pos: BTreeMap<VertexId, u32> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|e| (pos[&e.u], pos[&e.v], e.mult))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Union-find over dense indices.
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
