//! Exponential-time reference computations. Each one refuses inputs beyond
//! an [`OracleBudget`].

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, XProgram};
use crate::clifford::BinaryCode;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Subset expansion: element count (parallel copies, or multiedges for
    /// the grouped expansion).
    pub max_edges: usize,
    pub max_spins: usize,
    pub max_qubits: usize,
    pub max_code_dim: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_edges: 24,
            max_spins: 16,
            max_qubits: 20,
            max_code_dim: 24,
        }
    }
}

fn over(what: &str, got: usize, max: usize) -> Result<()> {
    if got > max {
        return Err(Error::Budget(format!("{what} {got} exceeds oracle budget {max}")));
    }
    Ok(())
}

/// Union-find restricted to what the expansions need; kept separate from
/// the graph module so the oracle shares no code with the engine.
struct Components {
    parent: Vec<usize>,
    count: usize,
}

impl Components {
    fn new(n: usize) -> Self {
        Components {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn root(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.count -= 1;
        }
    }
}

/// Dense vertex labels and the edge list of `g` with parallel copies kept.
fn dense(g: &Multigraph) -> (usize, Vec<(usize, usize, u64)>) {
    let labels: Vec<u32> = g.vertices().collect();
    let idx = |v: u32| labels.binary_search(&v).expect("edge endpoint is a vertex");
    let edges = g
        .edges()
        .iter()
        .map(|e| (idx(e.u), idx(e.v), e.mult))
        .collect();
    (labels.len(), edges)
}

fn kappa(n: usize, edges: &[(usize, usize, u64)], mask: u64) -> usize {
    let mut c = Components::new(n);
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        if mask >> i & 1 == 1 {
            c.join(u, v);
        }
    }
    c.count
}

fn powi<S: Scalar>(s: &S, e: i64) -> S {
    s.pow(e).expect("nonnegative power")
}

/// `sum_{A subset E} (x-1)^{k(A)-k(E)} (y-1)^{k(A)+|A|-|V|}` with every
/// parallel copy a separate element.
pub fn tutte_subset_expansion_naive<S: Scalar>(
    g: &Multigraph,
    x: &S,
    y: &S,
    budget: &OracleBudget,
) -> Result<S> {
    let (n, grouped) = dense(g);
    let copies: Vec<(usize, usize, u64)> = grouped
        .iter()
        .flat_map(|&(u, v, m)| (0..m).map(move |_| (u, v, 1)))
        .collect();
    over("edge count", copies.len(), budget.max_edges)?;
    let k = x.grid();
    let (xm, ym) = (x.clone() - &S::one(k), y.clone() - &S::one(k));
    let full = (1u64 << copies.len()) - 1;
    let k_e = kappa(n, &copies, full) as i64;
    let mut acc = S::zero(k);
    for mask in 0..=full {
        let k_a = kappa(n, &copies, mask) as i64;
        let size = mask.count_ones() as i64;
        acc = acc + &(powi(&xm, k_a - k_e) * &powi(&ym, k_a + size - n as i64));
    }
    Ok(acc)
}

/// The same sum with the copies of each multiedge collected: choosing
/// `j >= 1` of `m` copies contributes `sum_j C(m,j)(y-1)^{j-1} = 1 + ... + y^{m-1}`
/// times the one-copy term. Budget counts multiedges.
pub fn tutte_subset_expansion<S: Scalar>(
    g: &Multigraph,
    x: &S,
    y: &S,
    budget: &OracleBudget,
) -> Result<S> {
    let (n, edges) = dense(g);
    over("multiedge count", edges.len(), budget.max_edges)?;
    let k = x.grid();
    let one = S::one(k);
    let (xm, ym) = (x.clone() - &one, y.clone() - &one);
    let weights: Vec<S> = edges
        .iter()
        .map(|&(_, _, m)| {
            let mut acc = S::zero(k);
            let mut p = one.clone();
            for _ in 0..m {
                acc = acc + &p;
                p = p * y;
            }
            acc
        })
        .collect();
    let full = if edges.is_empty() { 0 } else { (1u64 << edges.len()) - 1 };
    let k_e = kappa(n, &edges, full) as i64;
    let mut acc = S::zero(k);
    for mask in 0..=full {
        let k_a = kappa(n, &edges, mask) as i64;
        let size = mask.count_ones() as i64;
        let mut term = powi(&xm, k_a - k_e) * &powi(&ym, k_a + size - n as i64);
        for (i, w) in weights.iter().enumerate() {
            if mask >> i & 1 == 1 {
                term = term * w;
            }
        }
        acc = acc + &term;
    }
    Ok(acc)
}

/// `sum over sigma in Z_q^V of exp(sum_e w_e [sigma_u = sigma_v] + sum_v f_v [sigma_v = 0])`.
pub fn potts_partition(
    n: usize,
    edges: &[(usize, usize, Complex64)],
    q: u32,
    fields: &[Complex64],
    budget: &OracleBudget,
) -> Result<Complex64> {
    over("spin count", n, budget.max_spins)?;
    check_model(n, edges, fields)?;
    if q == 0 {
        return Err(Error::Input("q must be positive".into()));
    }
    let mut sigma = vec![0u32; n];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let mut h = Complex64::new(0.0, 0.0);
        for &(u, v, w) in edges {
            if sigma[u] == sigma[v] {
                h += w;
            }
        }
        for (v, &f) in fields.iter().enumerate() {
            if sigma[v] == 0 {
                h += f;
            }
        }
        total += h.exp();
        // odometer increment
        let mut i = 0;
        while i < n {
            sigma[i] += 1;
            if sigma[i] < q {
                break;
            }
            sigma[i] = 0;
            i += 1;
        }
        if i == n {
            return Ok(total);
        }
    }
}

/// `sum over sigma in {-1,1}^V of exp(sum_e w_e s_u s_v + sum_v f_v s_v)`.
pub fn ising_partition(
    n: usize,
    edges: &[(usize, usize, Complex64)],
    fields: &[Complex64],
    budget: &OracleBudget,
) -> Result<Complex64> {
    over("spin count", n, budget.max_spins)?;
    check_model(n, edges, fields)?;
    let spin = |s: u64, v: usize| if s >> v & 1 == 1 { -1.0 } else { 1.0 };
    let mut total = Complex64::new(0.0, 0.0);
    for s in 0..(1u64 << n) {
        let mut h = Complex64::new(0.0, 0.0);
        for &(u, v, w) in edges {
            h += w * spin(s, u) * spin(s, v);
        }
        for (v, &f) in fields.iter().enumerate() {
            h += f * spin(s, v);
        }
        total += h.exp();
    }
    Ok(total)
}

fn check_model(n: usize, edges: &[(usize, usize, Complex64)], fields: &[Complex64]) -> Result<()> {
    if fields.len() != n || edges.iter().any(|&(u, v, _)| u >= n || v >= n) {
        return Err(Error::Input("model indices out of range".into()));
    }
    Ok(())
}

/// `v <- (cos(theta m) + i sin(theta m) X^mask) v` with the coefficients
/// built exactly from powers of `zeta`.
fn apply_rotation<S: Scalar>(state: &mut [S], mask: usize, m: u64, k: u32) {
    let half = S::from_i64(k, 2).inv().expect("2 is invertible");
    let (zp, zn) = (S::zeta(k, m as i64), S::zeta(k, -(m as i64)));
    let c = (zp.clone() + &zn) * &half;
    let is = (zp - &zn) * &half;
    let old = state.to_vec();
    for (b, slot) in state.iter_mut().enumerate() {
        *slot = c.clone() * &old[b] + &(is.clone() * &old[b ^ mask]);
    }
}

fn apply_hadamard<S: Scalar>(state: &mut [S], q: usize, k: u32) {
    let r = S::sqrt2(k).inv().expect("sqrt2 is invertible");
    let bit = 1 << q;
    for b in 0..state.len() {
        if b & bit == 0 {
            let (a0, a1) = (state[b].clone(), state[b | bit].clone());
            state[b] = (a0.clone() + &a1) * &r;
            state[b | bit] = (a0 - &a1) * &r;
        }
    }
}

fn basis_index(outcome: &[bool]) -> usize {
    outcome
        .iter()
        .enumerate()
        .map(|(i, &b)| (b as usize) << i)
        .sum()
}

/// `<x| zeta^phase prod_rows e^{i theta m X^row} |0^n>` by dense simulation.
/// Qubit `i` is bit `i` of the basis index.
pub fn xprogram_amplitude<S: Scalar>(xp: &XProgram, outcome: &[bool], budget: &OracleBudget) -> Result<S> {
    over("qubit count", xp.cols, budget.max_qubits)?;
    if outcome.len() != xp.cols {
        return Err(Error::Input("outcome length differs from qubit count".into()));
    }
    let k = xp.k;
    let mut state = vec![S::zero(k); 1 << xp.cols];
    state[0] = S::one(k);
    for row in &xp.rows {
        apply_rotation(&mut state, basis_index(&row.bits), row.mult, k);
    }
    Ok(state[basis_index(outcome)].clone() * &S::zeta(k, xp.phase as i64))
}

/// `<x|C|0^n>` applying gates in order.
pub fn circuit_amplitude<S: Scalar>(c: &Circuit, outcome: &[bool], budget: &OracleBudget) -> Result<S> {
    over("qubit count", c.n, budget.max_qubits)?;
    if outcome.len() != c.n {
        return Err(Error::Input("outcome length differs from qubit count".into()));
    }
    let k = c.k;
    let mut state = vec![S::zero(k); 1 << c.n];
    state[0] = S::one(k);
    for g in &c.gates {
        match *g {
            Gate::H(q) => apply_hadamard(&mut state, q, k),
            Gate::Rx(q, m) => apply_rotation(&mut state, 1 << q, m, k),
            Gate::Rxx(a, b, m) => apply_rotation(&mut state, (1 << a) | (1 << b), m, k),
        }
    }
    Ok(state[basis_index(outcome)].clone())
}

/// `sum_{x in V} i^{|x|}`.
pub fn gauss_sum(c: &BinaryCode, budget: &OracleBudget) -> Result<Complex64> {
    let (re, im) = crate::clifford::gauss_sum(c, budget.max_code_dim)?;
    Ok(Complex64::new(re as f64, im as f64))
}
