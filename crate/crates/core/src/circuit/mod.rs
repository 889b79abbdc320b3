//! Circuits over `{H, e^{i theta m X}, e^{i theta m XX}}` with `theta = pi/4k`,
//! X-programs, graph-induced X-programs and the pipeline that turns them into
//! Tutte evaluations.

mod compile;
mod parse;

pub use compile::{
    amplitude, amplitude_for_outcome, augment_graph, compile_circuit, principal_amplitude,
    xprogram_to_graph, Compiled,
};
pub use parse::{parse_circuit, parse_circuit_with_k, parse_xprogram, parse_xprogram_with_k};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    /// `e^{i theta m X}`.
    Rx(usize, u64),
    /// `e^{i theta m X X}` on two distinct qubits.
    Rxx(usize, usize, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub k: u32,
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(k: u32, n: usize, gates: Vec<Gate>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("grid index k must be positive".into()));
        }
        for g in &gates {
            let ok = match *g {
                Gate::H(q) | Gate::Rx(q, _) => q < n,
                Gate::Rxx(a, b, _) => a < n && b < n && a != b,
            };
            if !ok {
                return Err(Error::Input(format!("gate {g:?} is invalid on {n} qubits")));
            }
        }
        Ok(Circuit { k, n, gates })
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::H(_))).count()
    }
}

/// One interaction term: the qubits it acts on and its multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XRow {
    pub bits: Vec<bool>,
    pub mult: u64,
}

impl XRow {
    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

/// `exp(i theta sum_rows mult * X^{row})` applied to `|0^n>`, times
/// `zeta^phase`. All-zero rows only shift the phase, so none are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XProgram {
    pub k: u32,
    pub cols: usize,
    pub rows: Vec<XRow>,
    /// Exponent of `zeta = e^{i theta}`.
    pub phase: u64,
}

impl XProgram {
    pub fn new(k: u32, cols: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("grid index k must be positive".into()));
        }
        Ok(XProgram {
            k,
            cols,
            rows: Vec::new(),
            phase: 0,
        })
    }

    pub fn push(&mut self, bits: Vec<bool>, mult: u64) -> Result<()> {
        if bits.len() != self.cols {
            return Err(Error::Input(format!(
                "row has {} columns, expected {}",
                bits.len(),
                self.cols
            )));
        }
        if mult == 0 {
            return Ok(());
        }
        if bits.iter().any(|&b| b) {
            self.rows.push(XRow { bits, mult });
        } else {
            self.phase = (self.phase + mult) % (8 * self.k as u64);
        }
        Ok(())
    }

    pub fn push_support(&mut self, support: &[usize], mult: u64) -> Result<()> {
        let mut bits = vec![false; self.cols];
        for &q in support {
            if q >= self.cols {
                return Err(Error::Input(format!("qubit {q} out of range")));
            }
            bits[q] ^= true;
        }
        self.push(bits, mult)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.rows.iter().map(|r| r.mult).sum()
    }
}

/// Integer multipliers of `theta` on edges and vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedGraph {
    pub n: usize,
    /// Keyed by `(u, v)` with `u < v`.
    pub edges: BTreeMap<(u32, u32), u64>,
    pub vertex_weights: Vec<u64>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: BTreeMap::new(),
            vertex_weights: vec![0; n],
        }
    }

    pub fn add_edge(&mut self, u: u32, v: u32, m: u64) {
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_default() += m;
    }
}
