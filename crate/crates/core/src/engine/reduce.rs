use crate::error::Result;
use crate::graph::Multigraph;
use crate::scalar::{QuantumPoint, Scalar};

/// Takes every multiplicity modulo `4k`. Dropping a multiedge whose
/// multiplicity is a multiple of `4k` may disconnect the graph; each extra
/// component costs a factor `((y - 1)/2)^{-1}`.
pub fn simplify_mod_4k<S: Scalar>(g: &Multigraph, point: &QuantumPoint<S>) -> Result<(Multigraph, S)> {
    let period = 4 * point.k as u64;
    if g.edges().iter().all(|e| e.mult < period) {
        return Ok((g.clone(), S::one(point.k)));
    }
    let h = g.map_multiplicities(|m| m % period);
    let shift = g.kappa() as i64 - h.kappa() as i64;
    let factor = point.mod_base.pow(shift)?;
    Ok((h, factor))
}

/// Removes loop multiedges (factor `y^m`) and contracts coloop multiedges
/// (factor `x + y + ... + y^{m-1}`). Neither step creates a new loop or
/// coloop, so one pass reaches the fixed point.
pub fn reduce_loops_coloops<S: Scalar>(g: &Multigraph, point: &QuantumPoint<S>) -> Result<(Multigraph, S)> {
    let mut factor = S::one(point.k);
    let mut h = g.clone();
    let loops: Vec<_> = g.edges().iter().filter(|e| e.is_loop()).copied().collect();
    for e in &loops {
        factor = factor * &point.y.pow(e.mult as i64)?;
        h = h.delete(e.id)?;
    }
    for id in g.bridges() {
        let m = h.edge(id)?.mult;
        factor = factor * &point.coloop_factor(m);
        h = h.contract(id)?;
    }
    Ok((h, factor))
}
