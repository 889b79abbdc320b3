use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tuttesim::bench::{run_suite, InstanceClass, InstanceSpec, SuiteStats, BENCH_K, CSV_HEADER};
use tuttesim::circuit::{
    amplitude, amplitude_for_outcome, parse_circuit_with_k, parse_xprogram_with_k, principal_amplitude,
    XProgram,
};
use tuttesim::engine::{evaluate, Backend, EvalConfig, EvalReport, Heuristic, Pruning, Stats, Value};
use tuttesim::error::Error;
use tuttesim::graph::io::parse_graph;
use tuttesim::identities::run_identity_suite;
use tuttesim::oracle::{circuit_amplitude, tutte_subset_expansion, xprogram_amplitude, OracleBudget};
use tuttesim::scalar::{CycloScalar, FloatScalar, QuantumPoint};

#[derive(Parser)]
#[command(name = "tuttesim", version, about = "Tutte polynomial evaluation and circuit amplitudes on the pi/4k grid")]
struct Cli {
    /// Worker threads for branch-parallel evaluation (1 = serial).
    #[arg(long, global = true, env = "TUTTESIM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate T(G; x, y) at the grid point for k.
    Eval(EvalArgs),
    /// Amplitude of a circuit or an X-program.
    Amplitude(AmplitudeArgs),
    /// Leaf statistics of every heuristic on random instances.
    Bench(BenchArgs),
    /// Run the randomised identity suite.
    Selfcheck(SelfcheckArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, default_value = "max-degree-sum")]
    heuristic: Heuristic,
    #[arg(long, default_value = "exact")]
    backend: Backend,
    #[arg(long)]
    no_components: bool,
    #[arg(long)]
    no_bicomponents: bool,
    #[arg(long)]
    no_multicycle: bool,
    #[arg(long)]
    no_vertigan: bool,
    /// Disable the planar leaf (only used by the float backend).
    #[arg(long)]
    no_planar: bool,
    #[arg(long)]
    no_mod_simplify: bool,
}

impl EngineArgs {
    fn config(&self, k: u32, threads: usize) -> EvalConfig {
        let pruning = Pruning {
            components: !self.no_components,
            bicomponents: !self.no_bicomponents,
            multicycle: !self.no_multicycle,
            vertigan: !self.no_vertigan,
            planar_fkt: !self.no_planar && self.backend == Backend::Float,
            mod_simplify: !self.no_mod_simplify,
        };
        let mut cfg = EvalConfig::new(k, self.backend)
            .with_heuristic(self.heuristic)
            .with_pruning(pruning);
        cfg.parallel = threads > 1;
        cfg
    }
}

#[derive(Args)]
struct EvalArgs {
    /// JSON graph file: {"vertices": n, "edges": [[u, v, mult], ...]}.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[command(flatten)]
    engine: EngineArgs,
    /// Also compute the subset-expansion oracle and compare.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
#[group(id = "input", required = true, multiple = false, args = ["circuit", "xprogram"])]
struct AmplitudeArgs {
    /// Circuit file (k, qubits, H, RX, RXX lines); gives <0|C|0>.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// X-program file (k, cols, bit-string rows with optional *mult).
    #[arg(long)]
    xprogram: Option<PathBuf>,
    /// Grid index; required when the file has no `k` header.
    #[arg(long)]
    k: Option<u32>,
    /// Outcome bit string (X-programs only, first character is qubit 0).
    #[arg(long, requires = "xprogram")]
    outcome: Option<String>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Also compute the amplitude by statevector simulation and compare.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_class)]
    class: InstanceClass,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 16)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability of the sparse class.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Draw vertex multipliers as well (default: zero fields).
    #[arg(long)]
    vertex_weights: bool,
    #[arg(long, default_value = "float")]
    backend: Backend,
    /// Comma-separated heuristics (default: all six).
    #[arg(long, value_delimiter = ',')]
    heuristics: Vec<Heuristic>,
    /// Disable the planar leaf.
    #[arg(long)]
    no_planar: bool,
    /// CSV summary destination; `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Per-instance JSON lines destination.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct SelfcheckArgs {
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_class(s: &str) -> Result<InstanceClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure classes mapped to exit codes 1 (input) and 2 (internal).
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_to(path: &Path, text: &str) -> Outcome {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn leaves_line(s: &Stats) -> String {
    format!(
        "leaves: {} (empty {}, vertigan {}, multicycle {}, planar {})\nrecursion nodes: {}",
        s.total_leaves(),
        s.leaves_empty,
        s.leaves_vertigan,
        s.leaves_multicycle,
        s.leaves_planar,
        s.recursion_nodes
    )
}

fn csv_row(h: Heuristic, s: &Stats) -> String {
    format!(
        "{CSV_HEADER}\n{h},{t},{t}.000,0.000,{},{},{},{}\n",
        s.leaves_empty,
        s.leaves_vertigan,
        s.leaves_multicycle,
        s.leaves_planar,
        t = s.total_leaves()
    )
}

fn agrees(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => x == y,
        _ => {
            let (x, y) = (a.to_complex(), b.to_complex());
            (x - y).norm() <= 1e-9 * x.norm().max(y.norm()).max(1.0)
        }
    }
}

fn report(
    label: &str,
    r: &EvalReport,
    cfg: &EvalConfig,
    oracle: Option<Value>,
    format: Format,
) -> Outcome {
    let agreed = oracle.as_ref().map(|o| agrees(o, &r.value));
    match format {
        Format::Text => {
            println!("{label}: {}", r.value);
            println!("{}", leaves_line(&r.stats));
            if let Some(o) = &oracle {
                println!("oracle: {o}");
                println!("oracle agrees: {}", if agreed == Some(true) { "yes" } else { "no" });
            }
        }
        Format::Json => {
            let mut obj = json!({
                label: r.value.to_string(),
                "k": cfg.k,
                "backend": cfg.backend,
                "heuristic": cfg.heuristic,
                "total_leaves": r.total_leaves(),
                "stats": r.stats,
            });
            if let Some(o) = &oracle {
                obj["oracle"] = json!(o.to_string());
                obj["oracle_agrees"] = json!(agreed);
            }
            println!("{obj}");
        }
        Format::Csv => print!("{}", csv_row(cfg.heuristic, &r.stats)),
    }
    match agreed {
        Some(false) => Err(Failure::Internal("engine and oracle disagree".into())),
        _ => Ok(()),
    }
}

fn run_eval(a: &EvalArgs, threads: usize) -> Outcome {
    let g = parse_graph(&read(&a.graph)?)?;
    let cfg = a.engine.config(a.k, threads);
    let r = evaluate(&g, &cfg)?;
    let oracle = if a.oracle {
        let budget = OracleBudget::default();
        Some(match cfg.backend {
            Backend::Exact => {
                let p = QuantumPoint::<CycloScalar>::new(cfg.k)?;
                Value::Exact(tutte_subset_expansion(&g, &p.x, &p.y, &budget)?)
            }
            Backend::Float => {
                let p = QuantumPoint::<FloatScalar>::new(cfg.k)?;
                Value::Float(tutte_subset_expansion(&g, &p.x, &p.y, &budget)?)
            }
        })
    } else {
        None
    };
    report("value", &r, &cfg, oracle, a.format)
}

fn parse_bits(s: &str) -> Result<Vec<bool>, Failure> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Failure::Input(format!("invalid outcome bit '{c}'"))),
        })
        .collect()
}

fn principal_report(xp: &XProgram, cfg: &EvalConfig) -> Result<EvalReport, Error> {
    Ok(match cfg.backend {
        Backend::Exact => {
            let (v, stats) = principal_amplitude::<CycloScalar>(xp, cfg)?;
            EvalReport { value: Value::Exact(v), stats }
        }
        Backend::Float => {
            let (v, stats) = principal_amplitude::<FloatScalar>(xp, cfg)?;
            EvalReport { value: Value::Float(v), stats }
        }
    })
}

fn run_amplitude(a: &AmplitudeArgs, threads: usize) -> Outcome {
    if a.format == Format::Csv {
        return Err(Failure::Input("amplitude supports text and json output".into()));
    }
    let budget = OracleBudget::default();
    let (r, cfg, oracle) = if let Some(path) = &a.circuit {
        let c = parse_circuit_with_k(&read(path)?, a.k)?;
        let cfg = a.engine.config(c.k, threads);
        let r = amplitude(&c, &cfg)?;
        let zeros = vec![false; c.n];
        let oracle = match (a.oracle, cfg.backend) {
            (false, _) => None,
            (true, Backend::Exact) => Some(Value::Exact(circuit_amplitude(&c, &zeros, &budget)?)),
            (true, Backend::Float) => Some(Value::Float(circuit_amplitude(&c, &zeros, &budget)?)),
        };
        (r, cfg, oracle)
    } else {
        let path = a.xprogram.as_ref().expect("clap enforces one input");
        let xp = parse_xprogram_with_k(&read(path)?, a.k)?;
        let cfg = a.engine.config(xp.k, threads);
        let outcome = match &a.outcome {
            Some(s) => parse_bits(s)?,
            None => vec![false; xp.cols],
        };
        if outcome.len() != xp.cols {
            return Err(Failure::Input("outcome length differs from qubit count".into()));
        }
        let r = if outcome.iter().any(|&b| b) {
            amplitude_for_outcome(&xp, &outcome, 2 * xp.k, &cfg)?
        } else {
            principal_report(&xp, &cfg)?
        };
        let oracle = match (a.oracle, cfg.backend) {
            (false, _) => None,
            (true, Backend::Exact) => Some(Value::Exact(xprogram_amplitude(&xp, &outcome, &budget)?)),
            (true, Backend::Float) => Some(Value::Float(xprogram_amplitude(&xp, &outcome, &budget)?)),
        };
        (r, cfg, oracle)
    };
    report("amplitude", &r, &cfg, oracle, a.format)
}

fn run_bench(a: &BenchArgs, threads: usize) -> Outcome {
    let heuristics = if a.heuristics.is_empty() {
        Heuristic::ALL.to_vec()
    } else {
        a.heuristics.clone()
    };
    let specs: Vec<InstanceSpec> = InstanceSpec::suite(a.class, a.n, a.seed, a.count)
        .into_iter()
        .map(|s| InstanceSpec {
            p: a.p,
            vertex_weights: a.vertex_weights,
            ..s
        })
        .collect();
    let mut cfg = EvalConfig::new(BENCH_K, a.backend);
    if a.no_planar {
        cfg.pruning.planar_fkt = false;
    }
    cfg.parallel = threads > 1;
    let stats: SuiteStats = run_suite(&specs, &heuristics, &cfg)?;
    write_to(&a.out, &stats.to_csv())?;
    if let Some(log) = &a.log {
        write_to(log, &stats.json_lines())?;
    }
    Ok(())
}

fn run_selfcheck(a: &SelfcheckArgs) -> Outcome {
    let reports = run_identity_suite(a.cases, a.seed)?;
    let mut ok = true;
    for r in &reports {
        ok &= r.passed();
        println!(
            "{} {} cases={} failures={} max_error={:.3e}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.identity.name(),
            r.cases,
            r.failures,
            r.max_error
        );
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Internal("identity suite failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = cli.threads.unwrap_or(1).max(1);
    if threads > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Eval(a) => run_eval(a, threads),
        Command::Amplitude(a) => run_amplitude(a, threads),
        Command::Bench(a) => run_bench(a, threads),
        Command::Selfcheck(a) => run_selfcheck(a),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
