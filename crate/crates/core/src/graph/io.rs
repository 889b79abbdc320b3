//! JSON graph files: `{"vertices": n, "edges": [[u, v, mult], ...]}`.

use serde::{Deserialize, Serialize};

use super::Multigraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<(u32, u32, u64)>,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Multigraph> {
        Multigraph::from_edges(self.vertices, &self.edges)
    }
}

impl From<&Multigraph> for GraphFile {
    /// Vertices are relabelled densely in increasing id order.
    fn from(g: &Multigraph) -> Self {
        GraphFile {
            vertices: g.num_vertices(),
            edges: g.canonical_edges(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| {
        Error::Input(format!("graph file line {}, column {}: {e}", e.line(), e.column()))
    })?;
    file.to_graph()
}

pub fn write_graph(g: &Multigraph) -> String {
    serde_json::to_string(&GraphFile::from(g)).expect("graph serialises")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let g = parse_graph(r#"{"vertices": 3, "edges": [[0,1,1],[1,0,2],[2,2,1]]}"#).unwrap();
        assert_eq!(g.canonical_edges(), vec![(0, 1, 3), (2, 2, 1)]);
    }

    #[test]
    fn bad_vertex_and_bad_json() {
        assert!(parse_graph(r#"{"vertices": 2, "edges": [[0,2,1]]}"#).is_err());
        let err = parse_graph("{\n\"vertices\": 2,\n \"edges\": [[0,1]] }").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn round_trip() {
        let g = parse_graph(r#"{"vertices": 4, "edges": [[0,1,2],[1,2,1],[3,3,4]]}"#).unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap().canonical_edges(), g.canonical_edges());
    }
}
