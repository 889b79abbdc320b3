use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiEdge, Multigraph};

/// Rule for picking the multiedge to branch on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    VertexOrder,
    MinDegree,
    MaxDegree,
    MinDegreeSum,
    MaxDegreeSum,
    NonVertigan,
}

impl Heuristic {
    pub const ALL: [Heuristic; 6] = [
        Heuristic::VertexOrder,
        Heuristic::MinDegree,
        Heuristic::MaxDegree,
        Heuristic::MinDegreeSum,
        Heuristic::MaxDegreeSum,
        Heuristic::NonVertigan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::VertexOrder => "vertex-order",
            Heuristic::MinDegree => "min-degree",
            Heuristic::MaxDegree => "max-degree",
            Heuristic::MinDegreeSum => "min-degree-sum",
            Heuristic::MaxDegreeSum => "max-degree-sum",
            Heuristic::NonVertigan => "non-vertigan",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Heuristic::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown heuristic '{s}'")))
    }
}

/// Picks a non-loop multiedge to branch on. The engine only calls this after
/// coloops are gone, so every candidate is ordinary there. Degrees are taken
/// in the underlying simple graph; ties go to the lowest edge id.
pub fn select_edge(g: &Multigraph, heuristic: Heuristic, k: u32) -> Result<EdgeId> {
    let candidates: Vec<&MultiEdge> = g.edges().iter().filter(|e| !e.is_loop()).collect();
    if candidates.is_empty() {
        return Err(Error::Contract("no edge to branch on".into()));
    }
    let deg = g.degree_table();
    let d = |e: &MultiEdge| (deg[e.u as usize], deg[e.v as usize]);
    // maximising rules negate their key so one tie-break serves all
    let lowest = |key: &dyn Fn(&MultiEdge) -> i64| {
        candidates
            .iter()
            .min_by_key(|e| (key(e), e.id))
            .map(|e| e.id)
            .expect("nonempty")
    };
    let id = match heuristic {
        Heuristic::VertexOrder => {
            // lowest vertex, then the lowest other endpoint; endpoints are stored u <= v
            candidates
                .iter()
                .min_by_key(|e| (e.u, e.v))
                .map(|e| e.id)
                .expect("nonempty")
        }
        Heuristic::MinDegree => lowest(&|e| {
            let (a, b) = d(e);
            a.min(b) as i64
        }),
        Heuristic::MaxDegree => lowest(&|e| {
            let (a, b) = d(e);
            -(a.max(b) as i64)
        }),
        Heuristic::MinDegreeSum => lowest(&|e| {
            let (a, b) = d(e);
            (a + b) as i64
        }),
        Heuristic::MaxDegreeSum => lowest(&|e| {
            let (a, b) = d(e);
            -((a + b) as i64)
        }),
        Heuristic::NonVertigan => candidates
            .iter()
            .find(|e| e.mult % k as u64 != 0)
            .or_else(|| candidates.first())
            .map(|e| e.id)
            .expect("nonempty"),
    };
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(u32, u32, u64)]) -> Multigraph {
        Multigraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn star_min_degree_picks_a_leaf_edge() {
        let star = g(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        let id = select_edge(&star, Heuristic::MinDegree, 1).unwrap();
        assert_eq!(id, 0);
    }

    #[test]
    fn path_max_degree_sum_picks_middle() {
        let path = g(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        assert_eq!(select_edge(&path, Heuristic::MaxDegreeSum, 1).unwrap(), 1);
        assert_eq!(select_edge(&path, Heuristic::MinDegreeSum, 1).unwrap(), 0);
        assert_eq!(select_edge(&path, Heuristic::MaxDegree, 1).unwrap(), 0);
    }

    #[test]
    fn non_vertigan_picks_the_odd_multiple() {
        let tri = g(3, &[(0, 1, 2), (1, 2, 4), (0, 2, 3)]);
        assert_eq!(select_edge(&tri, Heuristic::NonVertigan, 2).unwrap(), 2);
    }

    #[test]
    fn vertex_order_uses_lowest_endpoints() {
        let h = g(4, &[(2, 3, 1), (1, 3, 1), (1, 2, 1)]);
        assert_eq!(select_edge(&h, Heuristic::VertexOrder, 1).unwrap(), 2);
    }

    #[test]
    fn loops_only_is_a_contract_violation() {
        assert!(matches!(
            select_edge(&g(1, &[(0, 0, 2)]), Heuristic::MinDegree, 1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for h in Heuristic::ALL {
            assert_eq!(h.name().parse::<Heuristic>().unwrap(), h);
        }
    }
}
