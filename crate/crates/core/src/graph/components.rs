use super::{Dsu, EdgeId, Multigraph};

/// Edge partitions of a multigraph. Each inner list is sorted by edge id and
/// the lists are ordered by their smallest id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Components {
    pub connected: Vec<Vec<EdgeId>>,
    /// Blocks of the underlying graph. Every loop forms its own block.
    pub biconnected: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    /// Connected and biconnected edge partitions. The block decomposition is
    /// the usual lowpoint depth-first search with an edge stack, run on the
    /// underlying simple graph; it is linear in the number of multiedges.
    pub fn components(&self) -> Components {
        let n = self.id_bound();

        let mut dsu = Dsu::new(n);
        for e in &self.edges {
            dsu.union(e.u as usize, e.v as usize);
        }
        let mut connected: Vec<Vec<EdgeId>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for e in &self.edges {
            let root = dsu.find(e.u as usize);
            if slot[root] == usize::MAX {
                slot[root] = connected.len();
                connected.push(Vec::new());
            }
            connected[slot[root]].push(e.id);
        }

        // adjacency: (neighbour, edge index)
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut blocks: Vec<Vec<EdgeId>> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                blocks.push(vec![e.id]);
            } else {
                adj[e.u as usize].push((e.v as usize, i));
                adj[e.v as usize].push((e.u as usize, i));
            }
        }

        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut edge_stack: Vec<usize> = Vec::new();
        // frame: (vertex, parent edge index, next adjacency position)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in self.vertices() {
            let root = root as usize;
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(&mut (v, pe, ref mut pos)) = stack.last_mut() {
                if *pos < adj[v].len() {
                    let (w, ei) = adj[v][*pos];
                    *pos += 1;
                    if ei == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(ei);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, ei, 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(ei);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] >= disc[parent] {
                            let mut block = Vec::new();
                            while let Some(ei) = edge_stack.pop() {
                                block.push(self.edges[ei].id);
                                if ei == pe {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);

        Components {
            connected,
            biconnected: blocks,
        }
    }

    /// The multigraphs spanned by each connected component.
    pub fn connected_parts(&self) -> Vec<Multigraph> {
        self.components()
            .connected
            .iter()
            .map(|ids| self.edge_subgraph(ids))
            .collect()
    }

    /// The multigraphs spanned by each block.
    pub fn biconnected_parts(&self) -> Vec<Multigraph> {
        self.components()
            .biconnected
            .iter()
            .map(|ids| self.edge_subgraph(ids))
            .collect()
    }
}
