//! Randomised cross-checks between the partition-function, IQP and Tutte
//! oracles and the engine. Used by `selfcheck` and the test suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{augment_graph, principal_amplitude, WeightedGraph, XProgram};
use crate::engine::{Backend, EvalConfig};
use crate::error::Result;
use crate::graph::{Dsu, Multigraph};
use crate::oracle::{
    ising_partition, potts_partition, tutte_subset_expansion, xprogram_amplitude, OracleBudget,
};
use crate::scalar::{CycloScalar, FloatScalar, Scalar};

/// Relative tolerance for checks that go through `f64`.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `q^kappa Z_Potts(G; fields) = Z_Potts(G + apexes; no fields)`.
    FieldFolding,
    /// `Z_Potts(G; q, uniform w) = q^kappa (e^w - 1)^r T(G; x, y)` on the hyperbola.
    PottsTutte,
    /// `Z_Potts(G; 2, W, F) = e^{(sum W + sum F)/2} Z_Ising(G; W/2, F/2)`.
    PottsIsing,
    /// `psi_{X_G}(0) = 2^{-|V|} Z_Ising(G; i theta M, i theta m)`.
    IqpIsing,
    /// `psi_{X_G}(0) = psi_{X_{G'}}(0)` for the augmented graph `G'`.
    IqpAugmented,
    /// `psi_{X_G}(0)` from the engine equals the statevector amplitude, exactly.
    IqpTutte,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::FieldFolding,
        Identity::PottsTutte,
        Identity::PottsIsing,
        Identity::IqpIsing,
        Identity::IqpAugmented,
        Identity::IqpTutte,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::FieldFolding => "field-folding",
            Identity::PottsTutte => "potts-tutte",
            Identity::PottsIsing => "potts-ising",
            Identity::IqpIsing => "iqp-ising",
            Identity::IqpAugmented => "iqp-augmented",
            Identity::IqpTutte => "iqp-tutte",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub cases: usize,
    pub failures: usize,
    /// Largest relative error seen; 0 for exact checks that passed.
    pub max_error: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn rand_c(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random graph on `1..=max_n` vertices with integer multipliers in `0..8k`.
/// Loops are not generated.
pub fn random_weighted_graph(rng: &mut ChaCha8Rng, max_n: usize, k: u32) -> WeightedGraph {
    let n = rng.gen_range(1..=max_n);
    let mut wg = WeightedGraph::new(n);
    let top = 8 * k as u64;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(0.5) {
                wg.add_edge(u, v, rng.gen_range(1..top));
            }
        }
    }
    for w in wg.vertex_weights.iter_mut() {
        if rng.gen_bool(0.5) {
            *w = rng.gen_range(1..top);
        }
    }
    wg
}

fn components(wg: &WeightedGraph) -> (Dsu, usize) {
    let mut dsu = Dsu::new(wg.n);
    let mut merges = 0;
    for &(u, v) in wg.edges.keys() {
        if dsu.union(u as usize, v as usize) {
            merges += 1;
        }
    }
    (dsu, wg.n - merges)
}

fn program_of(wg: &WeightedGraph, k: u32) -> Result<XProgram> {
    let mut xp = XProgram::new(k, wg.n)?;
    for (&(u, v), &m) in &wg.edges {
        xp.push_support(&[u as usize, v as usize], m)?;
    }
    for (v, &m) in wg.vertex_weights.iter().enumerate() {
        xp.push_support(&[v], m)?;
    }
    Ok(xp)
}

/// Relative error of folding complex fields into edges to one apex per
/// component (every component gets an apex, weightless ones included).
pub fn field_folding_error(rng: &mut ChaCha8Rng, q: u32, budget: &OracleBudget) -> Result<f64> {
    let wg = random_weighted_graph(rng, 6, 1);
    let n = wg.n;
    let edges: Vec<(usize, usize, Complex64)> =
        wg.edges.keys().map(|&(u, v)| (u as usize, v as usize, rand_c(rng, 1.0))).collect();
    let fields: Vec<Complex64> = (0..n).map(|_| rand_c(rng, 1.0)).collect();
    let lhs = Complex64::from(q.pow(components(&wg).1 as u32) as f64)
        * potts_partition(n, &edges, q, &fields, budget)?;

    let (mut dsu, _) = components(&wg);
    let mut roots: Vec<usize> = (0..n).map(|v| dsu.find(v)).collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    for r in roots.iter_mut() {
        *r = n + distinct.binary_search(r).expect("root listed");
    }
    let mut folded = edges.clone();
    folded.extend((0..n).map(|v| (v, roots[v], fields[v])));
    let m = n + distinct.len();
    let rhs = potts_partition(m, &folded, q, &vec![Complex64::new(0.0, 0.0); m], budget)?;
    Ok(rel_err(lhs, rhs))
}

/// Relative error of the Potts/Tutte relation with a uniform complex
/// coupling per parallel edge.
pub fn potts_tutte_error(rng: &mut ChaCha8Rng, q: u32, budget: &OracleBudget) -> Result<f64> {
    let wg = random_weighted_graph(rng, 6, 1);
    let w = rand_c(rng, 1.0);
    let mut g_edges = Vec::new();
    let mut p_edges = Vec::new();
    for (&(u, v), &m) in &wg.edges {
        let m = m % 3 + 1;
        g_edges.push((u, v, m));
        p_edges.push((u as usize, v as usize, w * m as f64));
    }
    let g = Multigraph::from_edges(wg.n, &g_edges)?;
    let zero = vec![Complex64::new(0.0, 0.0); wg.n];
    let z = potts_partition(wg.n, &p_edges, q, &zero, budget)?;
    let v = w.exp() - 1.0;
    let x = FloatScalar::new(1, (v + q as f64) / v);
    let y = FloatScalar::new(1, w.exp());
    let t = tutte_subset_expansion(&g, &x, &y, budget)?;
    let rhs = Complex64::from(q as f64).powu(g.kappa() as u32) * v.powu(g.rank() as u32) * t.value;
    Ok(rel_err(z, rhs))
}

/// Relative error of the 2-state Potts/Ising change of variables.
pub fn potts_ising_error(rng: &mut ChaCha8Rng, budget: &OracleBudget) -> Result<f64> {
    let wg = random_weighted_graph(rng, 8, 1);
    let edges: Vec<(usize, usize, Complex64)> =
        wg.edges.keys().map(|&(u, v)| (u as usize, v as usize, rand_c(rng, 1.0))).collect();
    let fields: Vec<Complex64> = (0..wg.n).map(|_| rand_c(rng, 1.0)).collect();
    let potts = potts_partition(wg.n, &edges, 2, &fields, budget)?;
    let total: Complex64 = edges.iter().map(|e| e.2).sum::<Complex64>() + fields.iter().sum::<Complex64>();
    let half_edges: Vec<_> = edges.iter().map(|&(u, v, w)| (u, v, w / 2.0)).collect();
    let half_fields: Vec<_> = fields.iter().map(|f| f / 2.0).collect();
    let ising = ising_partition(wg.n, &half_edges, &half_fields, budget)?;
    Ok(rel_err(potts, (total / 2.0).exp() * ising))
}

/// Relative error of the IQP amplitude against the imaginary-coupling
/// Ising partition function.
pub fn iqp_ising_error(rng: &mut ChaCha8Rng, k: u32, budget: &OracleBudget) -> Result<f64> {
    let wg = random_weighted_graph(rng, 8, k);
    let xp = program_of(&wg, k)?;
    let psi: CycloScalar = xprogram_amplitude(&xp, &vec![false; wg.n], budget)?;
    let theta = PI / (4.0 * k as f64);
    let i = Complex64::new(0.0, 1.0);
    let edges: Vec<_> = wg
        .edges
        .iter()
        .map(|(&(u, v), &m)| (u as usize, v as usize, i * theta * m as f64))
        .collect();
    let fields: Vec<_> = wg.vertex_weights.iter().map(|&m| i * theta * m as f64).collect();
    let z = ising_partition(wg.n, &edges, &fields, budget)?;
    Ok(rel_err(psi.to_complex(), z / 2f64.powi(wg.n as i32)))
}

/// Whether the principal amplitude is unchanged by augmentation (exact).
pub fn iqp_augmented_holds(rng: &mut ChaCha8Rng, k: u32, budget: &OracleBudget) -> Result<bool> {
    let wg = random_weighted_graph(rng, 6, k);
    let xp = program_of(&wg, k)?;
    let g = augment_graph(&wg);
    let mut aug = XProgram::new(k, g.num_vertices())?;
    for (u, v, m) in g.canonical_edges() {
        aug.push_support(&[u as usize, v as usize], m)?;
    }
    let zeros = |n| vec![false; n];
    let a: CycloScalar = xprogram_amplitude(&xp, &zeros(xp.cols), budget)?;
    let b: CycloScalar = xprogram_amplitude(&aug, &zeros(aug.cols), budget)?;
    Ok(a == b)
}

/// Whether the engine's principal amplitude matches the statevector (exact).
pub fn iqp_tutte_holds(rng: &mut ChaCha8Rng, k: u32, budget: &OracleBudget) -> Result<bool> {
    let wg = random_weighted_graph(rng, 8, k);
    let xp = program_of(&wg, k)?;
    let want: CycloScalar = xprogram_amplitude(&xp, &vec![false; wg.n], budget)?;
    let (got, _) = principal_amplitude::<CycloScalar>(&xp, &EvalConfig::new(k, Backend::Exact))?;
    Ok(got == want)
}

/// Runs every identity on `cases` random instances drawn from `seed`.
/// Identity `j` uses ChaCha8 stream `j`. Grid indices cycle through 1..=3
/// and Potts checks alternate `q = 2, 3`.
pub fn run_identity_suite(cases: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    let budget = OracleBudget::default();
    let mut out = Vec::new();
    for (j, &id) in Identity::ALL.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let mut report = IdentityReport {
            identity: id,
            cases,
            failures: 0,
            max_error: 0.0,
        };
        for c in 0..cases {
            let k = 1 + (c % 3) as u32;
            let q = 2 + (c % 2) as u32;
            let err = match id {
                Identity::FieldFolding => field_folding_error(&mut rng, q, &budget)?,
                Identity::PottsTutte => potts_tutte_error(&mut rng, q, &budget)?,
                Identity::PottsIsing => potts_ising_error(&mut rng, &budget)?,
                Identity::IqpIsing => iqp_ising_error(&mut rng, k, &budget)?,
                Identity::IqpAugmented => f64::from(!iqp_augmented_holds(&mut rng, k, &budget)? as u8),
                Identity::IqpTutte => f64::from(!iqp_tutte_holds(&mut rng, k, &budget)? as u8),
            };
            report.max_error = report.max_error.max(err);
            if err > TOLERANCE {
                report.failures += 1;
            }
        }
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_a_few_cases() {
        for r in run_identity_suite(12, 5).unwrap() {
            assert!(r.passed(), "{:?}", r);
        }
    }
}
