use std::collections::BTreeSet;

use super::{Circuit, Gate, WeightedGraph, XProgram};
use crate::engine::{evaluate_with, Backend, EngineScalar, EvalConfig, EvalReport, Stats, Value};
use crate::error::{Error, Result};
use crate::graph::{Dsu, Multigraph};
use crate::scalar::{CycloScalar, FloatScalar, QuantumPoint};

/// Output of [`compile_circuit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compiled {
    pub program: XProgram,
    /// Number of Hadamard gadgets; the amplitude carries `sqrt2^hadamards`.
    pub hadamards: usize,
    /// Columns postselected on 0 by a gadget (the qubit each H acted on).
    pub postselected: Vec<bool>,
}

/// Rewrites a circuit as an X-program on `n + #H` qubits with
/// `<0^n|C|0^n> = sqrt2^#H * psi(0^{n + #H})`.
///
/// An H on qubit `t` introduces a fresh ancilla `a` and the term
/// `e^{i pi/4 (I - X_t)(I - X_a)}`, postselecting `t` on 0; the logical
/// qubit continues on `a`. At `theta = pi/4k` the expansion is the rows
/// `{t}` and `{a}` with multiplier `3k` (angle `-pi/4` mod `2pi`), `{t,a}`
/// with multiplier `k`, and a global phase `zeta^k`.
pub fn compile_circuit(c: &Circuit) -> Result<Compiled> {
    let k = c.k as u64;
    let hadamards = c.hadamard_count();
    let cols = c.n + hadamards;
    let mut program = XProgram::new(c.k, cols)?;
    let mut postselected = vec![false; cols];
    let mut at: Vec<usize> = (0..c.n).collect();
    let mut next = c.n;
    for g in &c.gates {
        match *g {
            Gate::H(q) => {
                let (t, a) = (at[q], next);
                next += 1;
                program.push_support(&[t], 3 * k)?;
                program.push_support(&[a], 3 * k)?;
                program.push_support(&[t, a], k)?;
                program.phase = (program.phase + k) % (8 * k);
                postselected[t] = true;
                at[q] = a;
            }
            Gate::Rx(q, m) => program.push_support(&[at[q]], m)?,
            Gate::Rxx(p, q, m) => program.push_support(&[at[p], at[q]], m)?,
        }
    }
    Ok(Compiled {
        program,
        hadamards,
        postselected,
    })
}

/// Weight-2 rows become edge multipliers and weight-1 rows vertex
/// multipliers. The program's phase is not part of the graph.
pub fn xprogram_to_graph(xp: &XProgram) -> Result<WeightedGraph> {
    let mut wg = WeightedGraph::new(xp.cols);
    for row in &xp.rows {
        match row.support()[..] {
            [v] => wg.vertex_weights[v] += row.mult,
            [u, v] => wg.add_edge(u as u32, v as u32, row.mult),
            _ => {
                return Err(Error::Unsupported(format!(
                    "X-program row of weight {} (only weights 1 and 2 map to graphs)",
                    row.support().len()
                )))
            }
        }
    }
    Ok(wg)
}

/// The zero-field multigraph: one apex per connected component carrying
/// the vertex multipliers as edges to it. Components without any vertex
/// weight get no apex. Apexes are numbered after the original vertices.
pub fn augment_graph(wg: &WeightedGraph) -> Multigraph {
    let n = wg.n;
    let mut dsu = Dsu::new(n);
    let mut edges: Vec<(u32, u32, u64)> = Vec::new();
    for (&(u, v), &m) in &wg.edges {
        if m > 0 {
            dsu.union(u as usize, v as usize);
            edges.push((u, v, m));
        }
    }
    let roots: BTreeSet<usize> = (0..n)
        .filter(|&v| wg.vertex_weights[v] > 0)
        .map(|v| dsu.find(v))
        .collect();
    let apex_of = |root: usize| n + roots.range(..root).count();
    for v in 0..n {
        let m = wg.vertex_weights[v];
        if m > 0 {
            edges.push((v as u32, apex_of(dsu.find(v)) as u32, m));
        }
    }
    Multigraph::from_edges(n + roots.len(), &edges).expect("vertices in range")
}

/// `psi(0^n)` of an X-program through its augmented graph:
/// `zeta^phase * e^{i theta (r - |E'|)} (i sin theta)^r T(G'; x, y)`.
pub fn principal_amplitude<S: EngineScalar>(xp: &XProgram, cfg: &EvalConfig) -> Result<(S, Stats)> {
    let cfg = EvalConfig { k: xp.k, ..*cfg };
    let g = augment_graph(&xprogram_to_graph(xp)?);
    let (t, stats) = evaluate_with::<S>(&g, &cfg)?;
    let point = QuantumPoint::<S>::new(xp.k)?;
    let r = g.rank() as i64;
    let size = g.total_multiplicity() as i64;
    let phase = S::zeta(xp.k, xp.phase as i64 + r - size);
    Ok((phase * &point.i_sin.pow(r)? * &t, stats))
}

fn circuit_amplitude_with<S: EngineScalar>(c: &Circuit, cfg: &EvalConfig) -> Result<(S, Stats)> {
    let compiled = compile_circuit(c)?;
    let (psi, stats) = principal_amplitude::<S>(&compiled.program, cfg)?;
    Ok((psi * &S::sqrt2(c.k).pow(compiled.hadamards as i64)?, stats))
}

fn report<F, G>(cfg: &EvalConfig, exact: F, float: G) -> Result<EvalReport>
where
    F: FnOnce() -> Result<(CycloScalar, Stats)>,
    G: FnOnce() -> Result<(FloatScalar, Stats)>,
{
    let (value, stats) = match cfg.backend {
        Backend::Exact => {
            let (v, s) = exact()?;
            (Value::Exact(v), s)
        }
        Backend::Float => {
            let (v, s) = float()?;
            (Value::Float(v), s)
        }
    };
    Ok(EvalReport { value, stats })
}

/// `<0^n|C|0^n>`. The grid index comes from the circuit; `cfg.k` is ignored.
pub fn amplitude(c: &Circuit, cfg: &EvalConfig) -> Result<EvalReport> {
    report(
        cfg,
        || circuit_amplitude_with::<CycloScalar>(c, cfg),
        || circuit_amplitude_with::<FloatScalar>(c, cfg),
    )
}

/// `psi(x) = -i psi_{P + k' rows of x}(0)` for a program at `theta = pi/2k'`,
/// that is `k' = 2k`.
pub fn amplitude_for_outcome(
    xp: &XProgram,
    outcome: &[bool],
    k_prime: u32,
    cfg: &EvalConfig,
) -> Result<EvalReport> {
    if k_prime != 2 * xp.k {
        return Err(Error::Unsupported(format!(
            "outcome amplitudes need theta = pi/2k' with k' = {}, got k' = {k_prime}",
            2 * xp.k
        )));
    }
    if outcome.len() != xp.cols {
        return Err(Error::Input("outcome length differs from qubit count".into()));
    }
    let mut extended = xp.clone();
    extended.push(outcome.to_vec(), k_prime as u64)?;
    fn with<S: EngineScalar>(xp: &XProgram, cfg: &EvalConfig) -> Result<(S, Stats)> {
        let (v, s) = principal_amplitude::<S>(xp, cfg)?;
        Ok((-(S::i(xp.k) * &v), s))
    }
    report(
        cfg,
        || with::<CycloScalar>(&extended, cfg),
        || with::<FloatScalar>(&extended, cfg),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{circuit_amplitude, xprogram_amplitude, OracleBudget};
    use crate::scalar::Scalar;

    fn exact_cfg(k: u32) -> EvalConfig {
        EvalConfig::new(k, Backend::Exact)
    }

    #[test]
    fn rotation_only_circuit_has_no_ancillas() {
        let c = Circuit::new(2, 2, vec![Gate::Rx(0, 1), Gate::Rxx(0, 1, 3)]).unwrap();
        let out = compile_circuit(&c).unwrap();
        assert_eq!(out.hadamards, 0);
        assert_eq!(out.program.cols, 2);
        assert_eq!(out.program.rows.len(), 2);
    }

    #[test]
    fn single_hadamard_expansion() {
        let c = Circuit::new(2, 1, vec![Gate::H(0)]).unwrap();
        let out = compile_circuit(&c).unwrap();
        assert_eq!(out.program.cols, 2);
        let shape: Vec<(Vec<usize>, u64)> =
            out.program.rows.iter().map(|r| (r.support(), r.mult)).collect();
        assert_eq!(shape, vec![(vec![0], 6), (vec![1], 6), (vec![0, 1], 2)]);
        assert_eq!(out.postselected, vec![true, false]);
    }

    #[test]
    fn anchors() {
        for k in 1..=4 {
            let h = Circuit::new(k, 1, vec![Gate::H(0)]).unwrap();
            let v = amplitude(&h, &exact_cfg(k)).unwrap().value;
            assert_eq!(v.as_exact().unwrap(), &CycloScalar::sqrt2(k).inv().unwrap());
            let hh = Circuit::new(k, 1, vec![Gate::H(0), Gate::H(0)]).unwrap();
            let v = amplitude(&hh, &exact_cfg(k)).unwrap().value;
            assert_eq!(v.as_exact().unwrap(), &CycloScalar::one(k));
            let rx = Circuit::new(k, 1, vec![Gate::Rx(0, 1)]).unwrap();
            let v = amplitude(&rx, &exact_cfg(k)).unwrap().value;
            let cos = (CycloScalar::zeta(k, 1) + &CycloScalar::zeta(k, -1))
                * &CycloScalar::from_i64(k, 2).inv().unwrap();
            assert_eq!(v.as_exact().unwrap(), &cos);
        }
    }

    #[test]
    fn graph_conversion() {
        let mut xp = XProgram::new(1, 3).unwrap();
        xp.push_support(&[1, 2], 3).unwrap();
        xp.push_support(&[1], 2).unwrap();
        xp.push_support(&[1, 2], 1).unwrap();
        let wg = xprogram_to_graph(&xp).unwrap();
        assert_eq!(wg.edges.get(&(1, 2)), Some(&4));
        assert_eq!(wg.vertex_weights, vec![0, 2, 0]);
        xp.push_support(&[0, 1, 2], 1).unwrap();
        assert!(matches!(xprogram_to_graph(&xp), Err(Error::Unsupported(_))));
    }

    #[test]
    fn augmentation() {
        let mut single = WeightedGraph::new(1);
        single.vertex_weights[0] = 1;
        assert_eq!(augment_graph(&single).canonical_edges(), vec![(0, 1, 1)]);

        let mut tri = WeightedGraph::new(3);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            tri.add_edge(u, v, 1);
        }
        let g = augment_graph(&tri);
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_multiedges(), 3);

        let mut path = WeightedGraph::new(3);
        path.add_edge(0, 1, 1);
        path.add_edge(1, 2, 1);
        path.vertex_weights = vec![1, 0, 2];
        let g = augment_graph(&path);
        assert_eq!(
            g.canonical_edges(),
            vec![(0, 1, 1), (0, 3, 1), (1, 2, 1), (2, 3, 2)]
        );
    }

    #[test]
    fn outcome_amplitudes() {
        // P = [1] x 2 at k = 1 is e^{i pi/2 X}: psi(1) = i
        let mut xp = XProgram::new(1, 1).unwrap();
        xp.push(vec![true], 2).unwrap();
        let v = amplitude_for_outcome(&xp, &[true], 2, &exact_cfg(1)).unwrap().value;
        assert_eq!(v.as_exact().unwrap(), &CycloScalar::i(1));
        assert!(matches!(
            amplitude_for_outcome(&xp, &[true], 3, &exact_cfg(1)),
            Err(Error::Unsupported(_))
        ));

        let mut two = XProgram::new(2, 2).unwrap();
        two.push_support(&[0], 3).unwrap();
        two.push_support(&[0, 1], 5).unwrap();
        two.push_support(&[1], 1).unwrap();
        let mut total = 0.0;
        for x in 0..4usize {
            let out = [x & 1 == 1, x & 2 == 2];
            let got = amplitude_for_outcome(&two, &out, 4, &exact_cfg(2)).unwrap().value;
            let want: CycloScalar = xprogram_amplitude(&two, &out, &OracleBudget::default()).unwrap();
            assert_eq!(got.as_exact().unwrap(), &want);
            total += got.to_complex().norm_sqr();
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_circuit_matches_statevector() {
        let c = Circuit::new(
            2,
            3,
            vec![
                Gate::H(0),
                Gate::Rxx(0, 1, 3),
                Gate::H(1),
                Gate::Rx(2, 5),
                Gate::Rxx(1, 2, 1),
                Gate::H(0),
                Gate::H(2),
                Gate::Rx(0, 7),
            ],
        )
        .unwrap();
        let want: CycloScalar = circuit_amplitude(&c, &[false; 3], &OracleBudget::default()).unwrap();
        let got = amplitude(&c, &exact_cfg(2)).unwrap().value;
        assert_eq!(got.as_exact().unwrap(), &want);
        let f = amplitude(&c, &EvalConfig::new(2, Backend::Float)).unwrap().value.to_complex();
        assert!((f - want.to_complex()).norm() < 1e-9);
    }
}
