//! Planarity answers checked against a frozen set of random graphs whose
//! planarity was decided by an independent implementation.

use serde::Deserialize;
use tuttesim::graph::planarity::{faces_of, lr_embedding};
use tuttesim::graph::Multigraph;

#[derive(Deserialize)]
struct Case {
    n: usize,
    edges: Vec<(usize, usize)>,
    planar: bool,
}

#[test]
fn matches_frozen_planarity_answers() {
    let cases: Vec<Case> = serde_json::from_str(include_str!("data/planarity_cases.json")).unwrap();
    assert_eq!(cases.len(), 400);
    for (i, c) in cases.iter().enumerate() {
        let rot = lr_embedding(c.n, &c.edges);
        assert_eq!(rot.is_some(), c.planar, "case {i}: {:?}", c.edges);
        let g = Multigraph::from_edges(
            c.n,
            &c.edges.iter().map(|&(a, b)| (a as u32, b as u32, 1)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(g.is_planar(), c.planar);
        if let Some(rot) = rot {
            let g = g.remove_isolated();
            let comps = g.components().connected.len() as i64;
            let faces = faces_of(&rot).len() as i64;
            let v = g.num_vertices() as i64;
            assert_eq!(v - c.edges.len() as i64 + faces, 2 * comps, "case {i}");
        }
    }
}
