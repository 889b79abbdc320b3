use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::scalar::{QuantumPoint, Scalar};

/// Closed form for a graph whose underlying graph is a cycle `e_1 ... e_n`:
///
/// `sum_{j=1}^{n-2} prod_{l>j} yx(e_l) prod_{l<j} y1(e_l) + yx(e_{n-1} + e_n) prod_{l<=n-2} y1(e_l)`
///
/// with `yx(m) = x + y + ... + y^{m-1}` and `y1(m) = 1 + y + ... + y^{m-1}`.
/// Deleting `e_1` leaves a path of coloops; contracting it leaves a shorter
/// cycle, until the last two multiedges merge.
pub fn multicycle_value<S: Scalar>(g: &Multigraph, point: &QuantumPoint<S>) -> Result<S> {
    if !g.is_multicycle() {
        return Err(Error::Contract("graph is not a multicycle".into()));
    }
    let mults = walk(g);
    let n = mults.len();
    let yx: Vec<S> = mults.iter().map(|&m| point.coloop_factor(m)).collect();
    let y1: Vec<S> = mults.iter().map(|&m| point.y_sum(m)).collect();

    // suffix[j] = prod_{l >= j} yx[l]
    let mut suffix = vec![S::one(point.k); n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1].clone() * &yx[j];
    }
    let mut total = S::zero(point.k);
    let mut prefix = S::one(point.k);
    for j in 0..n - 2 {
        total = total + &(suffix[j + 1].clone() * &prefix);
        prefix = prefix * &y1[j];
    }
    Ok(total + &(point.coloop_factor(mults[n - 2] + mults[n - 1]) * &prefix))
}

/// Multiplicities in cyclic order starting from the lowest vertex.
fn walk(g: &Multigraph) -> Vec<u64> {
    let edges = g.edges();
    let start = edges.iter().map(|e| e.u).min().expect("cycle has edges");
    let mut out = Vec::with_capacity(edges.len());
    let mut used = vec![false; edges.len()];
    let mut at = start;
    for _ in 0..edges.len() {
        let (i, e) = edges
            .iter()
            .enumerate()
            .find(|(i, e)| !used[*i] && (e.u == at || e.v == at))
            .expect("cycle continues");
        used[i] = true;
        out.push(e.mult);
        at = e.other(at);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{tutte_subset_expansion, OracleBudget};
    use crate::scalar::CycloScalar;

    fn g(n: usize, edges: &[(u32, u32, u64)]) -> Multigraph {
        Multigraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn small_cycles_match_the_expansion() {
        let cases = [
            g(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]),
            g(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)]),
            g(3, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)]),
            g(5, &[(0, 3, 2), (3, 1, 5), (1, 4, 1), (4, 2, 3), (2, 0, 7)]),
        ];
        for k in 1..=3 {
            let p = QuantumPoint::<CycloScalar>::new(k).unwrap();
            for c in &cases {
                let want = tutte_subset_expansion(c, &p.x, &p.y, &OracleBudget::default()).unwrap();
                assert_eq!(multicycle_value(c, &p).unwrap(), want);
            }
        }
    }

    #[test]
    fn triangle_closed_form() {
        let p = QuantumPoint::<CycloScalar>::new(2).unwrap();
        let tri = g(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let want = p.x.clone() * &p.x + &p.x + &p.y;
        assert_eq!(multicycle_value(&tri, &p).unwrap(), want);
    }

    #[test]
    fn rejects_non_cycles() {
        let p = QuantumPoint::<CycloScalar>::new(1).unwrap();
        assert!(multicycle_value(&g(3, &[(0, 1, 1), (1, 2, 1)]), &p).is_err());
    }
}
