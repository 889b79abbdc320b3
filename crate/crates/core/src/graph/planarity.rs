//! Left-right planarity test with embedding extraction (Brandes' formulation
//! of the de Fraysseix–Rosenstiehl criterion). Runs on the underlying simple
//! graph in linear time.

use std::collections::HashMap;

use super::{Multigraph, VertexId};

/// A combinatorial planar embedding: for each vertex the clockwise cyclic
/// order of its neighbours. Vertices are local indices into `labels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub labels: Vec<VertexId>,
    pub rotation: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        faces_of(&self.rotation)
    }
}

/// Faces of a rotation system given in clockwise order. Each face is the
/// cyclic list of darts `(v, w)` met when walking it; the dart after `(v, w)`
/// is `(w, u)` with `u` the counter-clockwise neighbour of `v` around `w`.
pub fn faces_of(rotation: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let pos: Vec<HashMap<usize, usize>> = rotation
        .iter()
        .map(|r| r.iter().enumerate().map(|(i, &w)| (w, i)).collect())
        .collect();
    let mut seen: HashMap<(usize, usize), bool> = HashMap::new();
    let mut faces = Vec::new();
    for v in 0..rotation.len() {
        for &w in &rotation[v] {
            if seen.contains_key(&(v, w)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (v, w);
            while !seen.contains_key(&(a, b)) {
                seen.insert((a, b), true);
                face.push((a, b));
                let r = &rotation[b];
                let i = pos[b][&a];
                let next = r[(i + r.len() - 1) % r.len()];
                a = b;
                b = next;
            }
            faces.push(face);
        }
    }
    faces
}

pub fn is_planar(g: &Multigraph) -> bool {
    planar_embedding(g).is_some()
}

/// Planar embedding of the underlying simple graph of `g` (loops and
/// multiplicities ignored, isolated vertices kept), or `None` if it is not
/// planar.
pub fn planar_embedding(g: &Multigraph) -> Option<Embedding> {
    let labels: Vec<VertexId> = g.vertices().collect();
    let index: HashMap<VertexId, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| (index[&e.u], index[&e.v]))
        .collect();
    let rotation = lr_embedding(labels.len(), &edges)?;
    Some(Embedding { labels, rotation })
}

/// Clockwise rotation system of a planar embedding of the simple graph on
/// `0..n` with the given edges, or `None` if the graph is not planar.
pub fn lr_embedding(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if n > 2 && edges.len() > 3 * n - 6 {
        return None;
    }
    let mut adjs = vec![Vec::new(); n];
    for &(a, b) in edges {
        debug_assert!(a != b);
        adjs[a].push(b);
        adjs[b].push(a);
    }
    let mut lr = LrState::new(n, adjs);
    let mut roots = Vec::new();
    for v in 0..n {
        if lr.height[v].is_none() {
            lr.height[v] = Some(0);
            roots.push(v);
            lr.dfs_orientation(v);
        }
    }
    lr.sort_adjacency();
    for &r in &roots {
        if !lr.dfs_testing(r) {
            return None;
        }
    }
    for e in 0..lr.src.len() {
        let s = lr.sign(e) as i64;
        lr.nesting_depth[e] *= s;
    }
    lr.sort_adjacency();

    let mut emb = HalfEdges::new(n);
    for v in 0..n {
        let mut prev = None;
        for &e in &lr.ordered[v] {
            let w = lr.dst[e];
            emb.add_cw(v, w, prev);
            prev = Some(w);
        }
    }
    let mut left_ref = vec![None; n];
    let mut right_ref = vec![None; n];
    for &r in &roots {
        lr.dfs_embedding(r, &mut emb, &mut left_ref, &mut right_ref);
    }
    Some(emb.rotation())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

/// Oriented edges are numbered in discovery order; `src`/`dst` give their
/// endpoints and the remaining vectors are per-edge attributes.
struct LrState {
    adjs: Vec<Vec<usize>>,
    height: Vec<Option<usize>>,
    parent_edge: Vec<Option<usize>>,
    oriented: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    ordered: Vec<Vec<usize>>,
    src: Vec<usize>,
    dst: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<i64>,
    lowpt_edge: Vec<usize>,
    reference: Vec<Option<usize>>,
    side: Vec<i8>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

impl LrState {
    fn new(n: usize, adjs: Vec<Vec<usize>>) -> Self {
        LrState {
            adjs,
            height: vec![None; n],
            parent_edge: vec![None; n],
            oriented: HashMap::new(),
            out: vec![Vec::new(); n],
            ordered: vec![Vec::new(); n],
            src: Vec::new(),
            dst: Vec::new(),
            lowpt: Vec::new(),
            lowpt2: Vec::new(),
            nesting_depth: Vec::new(),
            lowpt_edge: Vec::new(),
            reference: Vec::new(),
            side: Vec::new(),
            stack_bottom: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn height(&self, v: usize) -> usize {
        self.height[v].expect("visited vertex")
    }

    fn new_edge(&mut self, v: usize, w: usize) -> usize {
        let id = self.src.len();
        self.oriented.insert((v, w), id);
        self.out[v].push(id);
        self.src.push(v);
        self.dst.push(w);
        let h = self.height(v);
        self.lowpt.push(h);
        self.lowpt2.push(h);
        self.nesting_depth.push(0);
        self.lowpt_edge.push(id);
        self.reference.push(None);
        self.side.push(1);
        self.stack_bottom.push(0);
        id
    }

    fn dfs_orientation(&mut self, v: usize) {
        let parent = self.parent_edge[v];
        for i in 0..self.adjs[v].len() {
            let w = self.adjs[v][i];
            if self.oriented.contains_key(&(v, w)) || self.oriented.contains_key(&(w, v)) {
                continue;
            }
            let vw = self.new_edge(v, w);
            match self.height[w] {
                None => {
                    self.parent_edge[w] = Some(vw);
                    self.height[w] = Some(self.height(v) + 1);
                    self.dfs_orientation(w);
                }
                Some(hw) => self.lowpt[vw] = hw,
            }
            self.nesting_depth[vw] = 2 * self.lowpt[vw] as i64;
            if self.lowpt2[vw] < self.height(v) {
                // chordal
                self.nesting_depth[vw] += 1;
            }
            if let Some(e) = parent {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn sort_adjacency(&mut self) {
        for v in 0..self.out.len() {
            let mut o = self.out[v].clone();
            o.sort_by_key(|&e| self.nesting_depth[e]);
            self.ordered[v] = o;
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && i.high.map_or(false, |h| self.lowpt[h] > self.lowpt[b])
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => usize::MAX,
        }
    }

    fn dfs_testing(&mut self, v: usize) -> bool {
        let parent = self.parent_edge[v];
        let ordered = self.ordered[v].clone();
        for &ei in &ordered {
            let w = self.dst[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.dfs_testing(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval {
                        low: Some(ei),
                        high: Some(ei),
                    },
                });
            }
            if self.lowpt[ei] < self.height(v) {
                let e = parent.expect("edge returning below a root");
                if ei == ordered[0] {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = parent {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let mut q = self.stack.pop().expect("constraint stack underflow");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let qlow = q.right.low.expect("non-empty right interval");
            if self.lowpt[qlow] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.reference[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.reference[qlow] = Some(self.lowpt_edge[e]);
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.reference[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.reference[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        let hu = self.height(u);
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high.filter(|&h| self.dst[h] == u) {
                p.left.high = self.reference[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.reference[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high.filter(|&h| self.dst[h] == u) {
                p.right.high = self.reference[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.reference[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            let top = self.stack.last().expect("return edge has a conflict pair");
            let (hl, hr) = (top.left.high, top.right.high);
            self.reference[e] = match (hl, hr) {
                (Some(l), None) => Some(l),
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                _ => hr,
            };
        }
    }

    fn sign(&mut self, e: usize) -> i8 {
        // Iterative path compression over the reference chain.
        let mut chain = vec![e];
        while let Some(r) = self.reference[*chain.last().unwrap()] {
            chain.push(r);
        }
        let mut acc = self.side[*chain.last().unwrap()];
        for &x in chain.iter().rev().skip(1) {
            self.side[x] *= acc;
            self.reference[x] = None;
            acc = self.side[x];
        }
        self.side[e]
    }

    fn dfs_embedding(
        &self,
        v: usize,
        emb: &mut HalfEdges,
        left_ref: &mut [Option<usize>],
        right_ref: &mut [Option<usize>],
    ) {
        for &ei in &self.ordered[v] {
            let w = self.dst[ei];
            if self.parent_edge[w] == Some(ei) {
                emb.add_first(w, v);
                left_ref[v] = Some(w);
                right_ref[v] = Some(w);
                self.dfs_embedding(w, emb, left_ref, right_ref);
            } else if self.side[ei] == 1 {
                emb.add_cw(w, v, right_ref[w]);
            } else {
                emb.add_ccw(w, v, left_ref[w]);
                left_ref[w] = Some(v);
            }
        }
    }
}

/// Doubly linked cyclic neighbour lists.
struct HalfEdges {
    cw: Vec<HashMap<usize, usize>>,
    ccw: Vec<HashMap<usize, usize>>,
    first: Vec<Option<usize>>,
}

impl HalfEdges {
    fn new(n: usize) -> Self {
        HalfEdges {
            cw: vec![HashMap::new(); n],
            ccw: vec![HashMap::new(); n],
            first: vec![None; n],
        }
    }

    /// Inserts `end` clockwise after `reference` around `start`.
    fn add_cw(&mut self, start: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => {
                debug_assert!(self.cw[start].is_empty());
                self.cw[start].insert(end, end);
                self.ccw[start].insert(end, end);
                self.first[start] = Some(end);
            }
            Some(r) => {
                let after = self.cw[start][&r];
                self.cw[start].insert(r, end);
                self.cw[start].insert(end, after);
                self.ccw[start].insert(after, end);
                self.ccw[start].insert(end, r);
            }
        }
    }

    /// Inserts `end` counter-clockwise before `reference` around `start`.
    fn add_ccw(&mut self, start: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => self.add_cw(start, end, None),
            Some(r) => {
                let before = self.ccw[start][&r];
                self.add_cw(start, end, Some(before));
                if self.first[start] == Some(r) {
                    self.first[start] = Some(end);
                }
            }
        }
    }

    fn add_first(&mut self, start: usize, end: usize) {
        let reference = self.first[start];
        self.add_ccw(start, end, reference);
        self.first[start] = Some(end);
    }

    fn rotation(&self) -> Vec<Vec<usize>> {
        (0..self.cw.len())
            .map(|v| {
                let mut out = Vec::new();
                if let Some(f) = self.first[v] {
                    let mut w = f;
                    loop {
                        out.push(w);
                        w = self.cw[v][&w];
                        if w == f {
                            break;
                        }
                    }
                }
                out
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    }

    fn components(n: usize, edges: &[(usize, usize)]) -> usize {
        let mut dsu = crate::graph::Dsu::new(n);
        n - edges.iter().filter(|&&(a, b)| dsu.union(a, b)).count()
    }

    /// Face walks of a genus-zero rotation system satisfy V - E + F = 2C,
    /// one sphere per component (isolated vertices excluded).
    fn assert_plane(n: usize, edges: &[(usize, usize)]) {
        let rot = lr_embedding(n, edges).expect("planar");
        for (v, r) in rot.iter().enumerate() {
            let mut a: Vec<_> = r.clone();
            a.sort_unstable();
            let mut b: Vec<_> = edges
                .iter()
                .filter_map(|&(x, y)| if x == v { Some(y) } else if y == v { Some(x) } else { None })
                .collect();
            b.sort_unstable();
            assert_eq!(a, b, "rotation at {v}");
        }
        let isolated = rot.iter().filter(|r| r.is_empty()).count();
        let f = faces_of(&rot).len();
        let c = components(n, edges) - isolated;
        assert_eq!(
            (n - isolated) as i64 - edges.len() as i64 + f as i64,
            2 * c as i64,
            "Euler characteristic for {edges:?}"
        );
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(lr_embedding(5, &complete(5)).is_none());
        let k33: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert!(lr_embedding(6, &k33).is_none());
        assert_plane(4, &complete(4));
        let mut k5e = complete(5);
        k5e.pop();
        assert_plane(5, &k5e);
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        assert!(lr_embedding(10, &e).is_none());
    }

    #[test]
    fn grids_wheels_and_forests() {
        let mut grid = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                let v = r * 4 + c;
                if c < 3 {
                    grid.push((v, v + 1));
                }
                if r < 3 {
                    grid.push((v, v + 4));
                }
            }
        }
        assert_plane(16, &grid);
        let wheel: Vec<_> = (1..8).flat_map(|i| [(0, i), (i, i % 7 + 1)]).collect();
        assert_plane(8, &wheel);
        assert_plane(6, &[(0, 1), (1, 2), (3, 4)]);
        assert_plane(3, &[]);
    }
}
