//! Random dense/sparse instances and per-heuristic leaf statistics.
//!
//! Instances are drawn from ChaCha8 seeded with the suite seed; instance `i`
//! uses stream `i`, so each instance is reproducible on its own and across
//! platforms.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{augment_graph, WeightedGraph};
use crate::engine::{evaluate, EvalConfig, Heuristic, Stats, Value};
use crate::error::{Error, Result};

/// Grid index of both benchmark classes: weights are multiples of `pi/8`.
pub const BENCH_K: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceClass {
    Dense,
    Sparse,
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceClass::Dense => "dense",
            InstanceClass::Sparse => "sparse",
        })
    }
}

impl FromStr for InstanceClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(InstanceClass::Dense),
            "sparse" => Ok(InstanceClass::Sparse),
            _ => Err(Error::Input(format!("unknown instance class `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub class: InstanceClass,
    pub n: usize,
    pub seed: u64,
    /// Stream index within the seed.
    pub index: u64,
    /// Edge probability; ignored for the dense class.
    pub p: f64,
    /// Draw vertex multipliers too (off by default).
    pub vertex_weights: bool,
}

impl InstanceSpec {
    pub fn new(class: InstanceClass, n: usize, seed: u64, index: u64) -> Self {
        InstanceSpec {
            class,
            n,
            seed,
            index,
            p: 0.5,
            vertex_weights: false,
        }
    }

    /// `count` specs sharing a seed, on streams `0..count`.
    pub fn suite(class: InstanceClass, n: usize, seed: u64, count: u64) -> Vec<Self> {
        (0..count).map(|i| Self::new(class, n, seed, i)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Input("instances need at least 2 vertices".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Input(format!("edge probability {} outside [0, 1]", self.p)));
        }
        Ok(())
    }
}

/// Pairs `u < v` are visited in lexicographic order. A sparse pair draws
/// its inclusion first; every included pair then draws `m` in `0..8`.
/// Zero multipliers are kept and vanish on augmentation.
pub fn gen_instance(spec: &InstanceSpec) -> Result<WeightedGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(spec.index);
    let mut wg = WeightedGraph::new(spec.n);
    for u in 0..spec.n as u32 {
        for v in u + 1..spec.n as u32 {
            if spec.class == InstanceClass::Sparse && !rng.gen_bool(spec.p) {
                continue;
            }
            wg.add_edge(u, v, rng.gen_range(0..8));
        }
    }
    if spec.vertex_weights {
        for w in wg.vertex_weights.iter_mut() {
            *w = rng.gen_range(0..8);
        }
    }
    Ok(wg)
}

/// One row of the summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSummary {
    pub heuristic: Heuristic,
    pub sum: u64,
    pub mean: f64,
    /// Mean absolute deviation about the mean.
    pub mean_dev: f64,
    pub empty: u64,
    pub vertigan: u64,
    pub multicycle: u64,
    pub planar: u64,
}

/// One evaluation of one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub class: InstanceClass,
    pub n: usize,
    pub seed: u64,
    pub index: u64,
    pub heuristic: Heuristic,
    pub leaves: u64,
    pub stats: Stats,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteStats {
    pub summaries: Vec<HeuristicSummary>,
    pub instances: Vec<InstanceRecord>,
}

pub const CSV_HEADER: &str = "heuristic,sum,mean,mean_dev,empty,vertigan,multicycle,planar";

impl SuiteStats {
    pub fn summary(&self, h: Heuristic) -> Option<&HeuristicSummary> {
        self.summaries.iter().find(|s| s.heuristic == h)
    }

    /// Position of `h` when heuristics are ranked by leaf sum (0 = fewest).
    /// Ties share the better rank.
    pub fn rank(&self, h: Heuristic) -> Option<usize> {
        let sum = self.summary(h)?.sum;
        Some(self.summaries.iter().filter(|s| s.sum < sum).count())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for s in &self.summaries {
            out.push_str(&format!(
                "{},{},{:.3},{:.3},{},{},{},{}\n",
                s.heuristic, s.sum, s.mean, s.mean_dev, s.empty, s.vertigan, s.multicycle, s.planar
            ));
        }
        out
    }

    pub fn json_lines(&self) -> String {
        self.instances
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serialises") + "\n")
            .collect()
    }
}

fn same_value(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => x == y,
        _ => {
            let (x, y): (Complex64, Complex64) = (a.to_complex(), b.to_complex());
            (x - y).norm() <= 1e-9 * x.norm().max(y.norm()).max(1.0)
        }
    }
}

/// Evaluates every instance (its augmented graph) under every heuristic.
/// `cfg.heuristic` is overridden and `cfg.k` is forced to [`BENCH_K`].
/// Values that differ between heuristics are reported as a contract error.
pub fn run_suite(specs: &[InstanceSpec], heuristics: &[Heuristic], cfg: &EvalConfig) -> Result<SuiteStats> {
    let base = EvalConfig { k: BENCH_K, ..*cfg };
    base.validate()?;
    let per_instance: Vec<Vec<InstanceRecord>> = specs
        .par_iter()
        .map(|spec| {
            let g = augment_graph(&gen_instance(spec)?);
            let mut first: Option<Value> = None;
            let mut records = Vec::with_capacity(heuristics.len());
            for &h in heuristics {
                let report = evaluate(&g, &base.with_heuristic(h))?;
                match &first {
                    None => first = Some(report.value.clone()),
                    Some(v) if !same_value(v, &report.value) => {
                        return Err(Error::Contract(format!(
                            "instance {} (seed {}): heuristic {h} gives {} but {} gives {v}",
                            spec.index, spec.seed, report.value, heuristics[0]
                        )))
                    }
                    Some(_) => {}
                }
                records.push(InstanceRecord {
                    class: spec.class,
                    n: spec.n,
                    seed: spec.seed,
                    index: spec.index,
                    heuristic: h,
                    leaves: report.total_leaves(),
                    stats: report.stats,
                    value: report.value.to_string(),
                });
            }
            Ok(records)
        })
        .collect::<Result<_>>()?;

    let instances: Vec<InstanceRecord> = per_instance.into_iter().flatten().collect();
    let summaries = heuristics
        .iter()
        .map(|&h| summarise(h, instances.iter().filter(|r| r.heuristic == h)))
        .collect();
    Ok(SuiteStats { summaries, instances })
}

fn summarise<'a>(h: Heuristic, records: impl Iterator<Item = &'a InstanceRecord>) -> HeuristicSummary {
    let records: Vec<&InstanceRecord> = records.collect();
    let sum: u64 = records.iter().map(|r| r.leaves).sum();
    let count = records.len().max(1) as f64;
    let mean = sum as f64 / count;
    let mean_dev = records.iter().map(|r| (r.leaves as f64 - mean).abs()).sum::<f64>() / count;
    let mut total = Stats::default();
    for r in &records {
        total += r.stats;
    }
    HeuristicSummary {
        heuristic: h,
        sum,
        mean,
        mean_dev,
        empty: total.leaves_empty,
        vertigan: total.leaves_vertigan,
        multicycle: total.leaves_multicycle,
        planar: total.leaves_planar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Backend;

    #[test]
    fn deterministic_and_stream_separated() {
        let a = InstanceSpec::new(InstanceClass::Dense, 6, 42, 0);
        assert_eq!(gen_instance(&a).unwrap(), gen_instance(&a).unwrap());
        let b = InstanceSpec { index: 1, ..a };
        assert_ne!(gen_instance(&a).unwrap(), gen_instance(&b).unwrap());
    }

    #[test]
    fn dense_is_complete_and_sparse_p1_too() {
        let d = gen_instance(&InstanceSpec::new(InstanceClass::Dense, 5, 7, 3)).unwrap();
        assert_eq!(d.edges.len(), 10);
        assert!(d.edges.values().all(|&m| m < 8));
        assert!(d.vertex_weights.iter().all(|&w| w == 0));
        let s = InstanceSpec { p: 1.0, ..InstanceSpec::new(InstanceClass::Sparse, 4, 7, 0) };
        assert_eq!(gen_instance(&s).unwrap().edges.len(), 6);
        let e = InstanceSpec { p: 0.0, ..s };
        assert!(gen_instance(&e).unwrap().edges.is_empty());
    }

    #[test]
    fn invalid_specs() {
        assert!(gen_instance(&InstanceSpec::new(InstanceClass::Dense, 1, 0, 0)).is_err());
        let s = InstanceSpec { p: 1.5, ..InstanceSpec::new(InstanceClass::Sparse, 4, 0, 0) };
        assert!(gen_instance(&s).is_err());
    }

    #[test]
    fn suite_aggregates() {
        let specs = InstanceSpec::suite(InstanceClass::Dense, 5, 3, 4);
        let cfg = EvalConfig::new(BENCH_K, Backend::Exact);
        let stats = run_suite(&specs, &Heuristic::ALL, &cfg).unwrap();
        assert_eq!(stats.summaries.len(), 6);
        assert_eq!(stats.instances.len(), 24);
        for s in &stats.summaries {
            let rows: Vec<_> = stats.instances.iter().filter(|r| r.heuristic == s.heuristic).collect();
            assert_eq!(s.sum, rows.iter().map(|r| r.leaves).sum::<u64>());
            assert_eq!(s.sum, s.empty + s.vertigan + s.multicycle + s.planar);
            assert!((s.mean * 4.0 - s.sum as f64).abs() < 1e-9);
        }
        let csv = stats.to_csv();
        assert!(csv.starts_with(&format!("{CSV_HEADER}\n")));
        assert_eq!(csv.lines().count(), 7);
        assert_eq!(stats.json_lines().lines().count(), 24);
    }
}
