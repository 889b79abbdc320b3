//! Deletion-contraction evaluation of `T(G; x, y)` at the quantum point of
//! grid index `k`, with structural pruning and leaf statistics.
//!
//! Each recursion node, in order: drops isolated vertices, reduces
//! multiplicities modulo `4k`, strips loops and coloops, then tries the
//! leaves (empty, Vertigan, multicycle, planar) and the component split
//! before branching on a multiedge chosen by the heuristic.

mod fkt;
mod multicycle;
mod reduce;
mod select;

use std::fmt;
use std::ops::AddAssign;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::vertigan_reduce;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::scalar::{CycloScalar, FloatScalar, QuantumPoint, Scalar};

pub use fkt::{kasteleyn_orientation, pfaffian, planar_matching_sum, planar_value};
pub use multicycle::multicycle_value;
pub use reduce::{reduce_loops_coloops, simplify_mod_4k};
pub use select::{select_edge, Heuristic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(Error::Input(format!("unknown backend '{s}'"))),
        }
    }
}

/// Switches for the optional reductions. Loop and coloop removal and the
/// empty leaf are always on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pruning {
    pub components: bool,
    pub bicomponents: bool,
    pub multicycle: bool,
    pub vertigan: bool,
    pub planar_fkt: bool,
    pub mod_simplify: bool,
}

impl Pruning {
    pub fn all() -> Self {
        Pruning {
            components: true,
            bicomponents: true,
            multicycle: true,
            vertigan: true,
            planar_fkt: true,
            mod_simplify: true,
        }
    }

    pub fn none() -> Self {
        Pruning {
            components: false,
            bicomponents: false,
            multicycle: false,
            vertigan: false,
            planar_fkt: false,
            mod_simplify: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub k: u32,
    pub heuristic: Heuristic,
    pub backend: Backend,
    pub pruning: Pruning,
    /// Evaluate sibling branches on the current rayon pool. Results do not
    /// depend on scheduling.
    pub parallel: bool,
}

impl EvalConfig {
    /// All pruning on; the planar leaf only for the float backend.
    pub fn new(k: u32, backend: Backend) -> Self {
        let mut pruning = Pruning::all();
        pruning.planar_fkt = backend == Backend::Float;
        EvalConfig {
            k,
            heuristic: Heuristic::MaxDegreeSum,
            backend,
            pruning,
            parallel: false,
        }
    }

    pub fn with_heuristic(mut self, h: Heuristic) -> Self {
        self.heuristic = h;
        self
    }

    pub fn with_pruning(mut self, p: Pruning) -> Self {
        self.pruning = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Input("grid index k must be positive".into()));
        }
        if self.pruning.planar_fkt && self.backend == Backend::Exact {
            return Err(Error::Input(
                "planar FKT pruning requires the float backend".into(),
            ));
        }
        Ok(())
    }
}

/// A value from either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(CycloScalar),
    Float(FloatScalar),
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(s) => s.to_complex(),
            Value::Float(s) => s.to_complex(),
        }
    }

    pub fn as_exact(&self) -> Option<&CycloScalar> {
        match self {
            Value::Exact(s) => Some(s),
            Value::Float(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(s) => write!(f, "{s}"),
            Value::Float(s) => write!(f, "{s}"),
        }
    }
}

/// Leaf and node counters of one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub leaves_empty: u64,
    pub leaves_vertigan: u64,
    pub leaves_multicycle: u64,
    pub leaves_planar: u64,
    pub recursion_nodes: u64,
}

impl Stats {
    pub fn total_leaves(&self) -> u64 {
        self.leaves_empty + self.leaves_vertigan + self.leaves_multicycle + self.leaves_planar
    }
}

impl AddAssign for Stats {
    fn add_assign(&mut self, o: Stats) {
        self.leaves_empty += o.leaves_empty;
        self.leaves_vertigan += o.leaves_vertigan;
        self.leaves_multicycle += o.leaves_multicycle;
        self.leaves_planar += o.leaves_planar;
        self.recursion_nodes += o.recursion_nodes;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub value: Value,
    pub stats: Stats,
}

impl EvalReport {
    pub fn total_leaves(&self) -> u64 {
        self.stats.total_leaves()
    }
}

/// Scalars the engine can run on. The planar leaf is only available where
/// a floating-point result can be converted back.
pub trait EngineScalar: Scalar {
    fn planar_leaf(g: &Multigraph, point: &QuantumPoint<Self>) -> Option<Result<Self>>;
}

impl EngineScalar for CycloScalar {
    fn planar_leaf(_: &Multigraph, _: &QuantumPoint<Self>) -> Option<Result<Self>> {
        None
    }
}

impl EngineScalar for FloatScalar {
    fn planar_leaf(g: &Multigraph, point: &QuantumPoint<Self>) -> Option<Result<Self>> {
        Some(planar_value(g, point.k).map(|z| FloatScalar::new(point.k, z)))
    }
}

/// `T(g; x(k), y(k))` under `cfg`.
pub fn evaluate(g: &Multigraph, cfg: &EvalConfig) -> Result<EvalReport> {
    cfg.validate()?;
    let (value, stats) = match cfg.backend {
        Backend::Exact => {
            let (v, s) = evaluate_with::<CycloScalar>(g, cfg)?;
            (Value::Exact(v), s)
        }
        Backend::Float => {
            let (v, s) = evaluate_with::<FloatScalar>(g, cfg)?;
            (Value::Float(v), s)
        }
    };
    Ok(EvalReport { value, stats })
}

/// Backend-generic entry point.
pub fn evaluate_with<S: EngineScalar>(g: &Multigraph, cfg: &EvalConfig) -> Result<(S, Stats)> {
    cfg.validate()?;
    let point = QuantumPoint::<S>::new(cfg.k)?;
    let ctx = Ctx { point: &point, cfg };
    ctx.node(g, 0)
}

/// Below this depth sibling branches may run on separate threads.
const PARALLEL_DEPTH: usize = 12;

struct Ctx<'a, S> {
    point: &'a QuantumPoint<S>,
    cfg: &'a EvalConfig,
}

impl<S: EngineScalar> Ctx<'_, S> {
    fn node(&self, g: &Multigraph, depth: usize) -> Result<(S, Stats)> {
        let k = self.cfg.k;
        let p = &self.cfg.pruning;
        let mut stats = Stats {
            recursion_nodes: 1,
            ..Stats::default()
        };
        let mut factor = S::one(k);
        let mut g = g.remove_isolated();

        if p.mod_simplify {
            let (h, f) = simplify_mod_4k(&g, self.point)?;
            factor = factor * &f;
            g = h.remove_isolated();
        }
        let (h, f) = reduce_loops_coloops(&g, self.point)?;
        factor = factor * &f;
        let g = h.remove_isolated();

        if !g.has_edges() {
            stats.leaves_empty += 1;
            return Ok((factor, stats));
        }
        if p.vertigan && g.is_vertigan(k as u64) {
            stats.leaves_vertigan += 1;
            return Ok((factor * &vertigan_reduce(&g, self.point)?, stats));
        }

        let parts = if p.bicomponents {
            g.biconnected_parts()
        } else if p.components {
            g.connected_parts()
        } else {
            Vec::new()
        };
        if parts.len() > 1 {
            // Vertigan parts are closed-form factors rather than leaves of
            // their own, so the leaf count stays within 2^nu.
            for part in parts {
                if p.vertigan && part.is_vertigan(k as u64) {
                    factor = factor * &vertigan_reduce(&part, self.point)?;
                } else {
                    let (v, s) = self.node(&part, depth + 1)?;
                    factor = factor * &v;
                    stats += s;
                }
            }
            return Ok((factor, stats));
        }

        if p.multicycle && g.is_multicycle() {
            stats.leaves_multicycle += 1;
            return Ok((factor * &multicycle_value(&g, self.point)?, stats));
        }
        if p.planar_fkt && g.is_planar() {
            if let Some(v) = S::planar_leaf(&g, self.point) {
                stats.leaves_planar += 1;
                return Ok((factor * &v?, stats));
            }
        }

        let id = select_edge(&g, self.cfg.heuristic, k)?;
        let m = g.edge(id)?.mult;
        let deleted = g.delete(id)?;
        let contracted = g.contract(id)?;
        let ((dv, ds), (cv, cs)) = if self.cfg.parallel && depth < PARALLEL_DEPTH {
            let (a, b) = rayon::join(
                || self.node(&deleted, depth + 1),
                || self.node(&contracted, depth + 1),
            );
            (a?, b?)
        } else {
            let a = self.node(&deleted, depth + 1)?;
            (a, self.node(&contracted, depth + 1)?)
        };
        stats += ds;
        stats += cs;
        let value = dv + &(self.point.y_sum(m) * &cv);
        Ok((factor * &value, stats))
    }
}
