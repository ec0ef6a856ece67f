use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use lowgirth_qaoa::classical::{
    classical_cut_fraction, optimal_thresholds, Algorithm, BmConfig, BmScheme, ThresholdConfig,
};
use lowgirth_qaoa::engine::{EngineOptions, IterativeEngine};
use lowgirth_qaoa::eval::{cut_fraction, EngineKind};
use lowgirth_qaoa::graphs::{build_lightcone, enumerate_edge_orbits, GraphSource};
use lowgirth_qaoa::optimizer::{optimize, OptimizerConfig};
use lowgirth_qaoa::oracle::{
    contraction_expectation, elimination_order, statevector_expectation, CircuitSpec, DEFAULT_ENTRY_BUDGET,
    DEFAULT_QUBIT_CAP,
};
use lowgirth_qaoa::params::{format_angles, Mode, ParamSet};
use lowgirth_qaoa::qmc::{qmc_edge_averaged, qmc_edge_expectation, QmcParams};
use lowgirth_qaoa::reproduce::{cells_to_csv, reproduce, ReproduceConfig, Status};
use lowgirth_qaoa::Error;

#[derive(Parser, Debug)]
#[command(
    name = "lowgirth",
    version,
    about = "QAOA MaxCut on additive product graphs and tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
enum Command {
    /// Cut fraction at given parameters.
    Eval(EvalArgs),
    /// Multi-start parameter optimization.
    Optimize(OptimizeArgs),
    /// Classical threshold or Barak-Marwaha estimate.
    Classical(ClassicalArgs),
    /// Recompute a published table and check every cell.
    Reproduce(ReproduceArgs),
    /// Largest difference between the iterative engine and the oracles.
    OracleCheck(OracleCheckArgs),
    /// Quantum MaxCut edge estimates under the four-driver ansatz.
    Qmc(QmcArgs),
    /// Rerun the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct GraphArgs {
    /// Built-in graph: fig-a, fig-b, fig-c, k34-tree, tiling-5-6, tiling-3-4-6.
    #[arg(long, conflicts_with = "spec")]
    graph: Option<String>,
    /// JSON spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<GraphSource, Error> {
        match (&self.graph, &self.spec) {
            (Some(name), None) => GraphSource::named(name),
            (None, Some(path)) => GraphSource::from_spec_path(path),
            _ => Err(Error::InvalidParams(
                "graph: pass exactly one of --graph or --spec".into(),
            )),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct EvalArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value = "qaoa")]
    mode: Mode,
    /// Defaults to iterative for product graphs and oracle for tilings.
    #[arg(long)]
    engine: Option<EngineKind>,
    /// JSON parameter file as written by `optimize`.
    #[arg(long, conflicts_with_all = ["gammas", "betas"])]
    params: Option<PathBuf>,
    /// Layer-major gammas, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gammas: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    betas: Vec<f64>,
    /// Write the G tables as JSON (iterative engine only).
    #[arg(long)]
    dump_tables: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct OptimizeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value = "qaoa")]
    mode: Mode,
    #[arg(long)]
    engine: Option<EngineKind>,
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 300)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Search gamma and beta over [0, 2 pi] instead of [0, pi/2].
    #[arg(long)]
    widen: bool,
    /// Parameter file for depth p - 1 to seed one extra start.
    #[arg(long)]
    warm_start: Option<PathBuf>,
    /// Writes `<out>` (best parameters), `<out>.log.jsonl` and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize)]
enum AlgorithmKind {
    Threshold,
    Bm,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ClassicalArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum)]
    algorithm: AlgorithmKind,
    /// Rounds for BM, steps for a threshold search.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Flip thresholds per step, comma separated (`inf` never flips). Without it the
    /// best vector in [1, d]^k is searched.
    #[arg(long, value_delimiter = ',')]
    tau: Vec<String>,
    #[arg(long, default_value = "para1")]
    scheme: BmScheme,
    /// Neighbor class for para3/para4; all classes when omitted.
    #[arg(long)]
    neighbor_class: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    table: u8,
    /// Include p = 3 and k = 3 cells.
    #[arg(long)]
    unlock_deep: bool,
    #[arg(long, default_value_t = 1_000_000)]
    threshold_samples: u64,
    #[arg(long, default_value_t = 100_000)]
    deep_threshold_samples: u64,
    #[arg(long, default_value_t = 10_000_000)]
    bm_samples: u64,
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct OracleCheckArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value = "ma")]
    mode: Mode,
    #[arg(long, default_value_t = 50)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct QmcArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    delta: Vec<f64>,
    /// Sample counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    samples: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything needed to rerun a command.
#[derive(Debug, Serialize, Deserialize)]
struct RunManifest {
    command: Command,
    graph: Option<String>,
    spec: Option<PathBuf>,
    depth: Option<usize>,
    mode: Option<String>,
    engine: Option<String>,
    optimizer: Option<OptimizerConfig>,
    seeds: Vec<u64>,
    output: PathBuf,
    version: String,
}

enum Failure {
    Usage(Error),
    Tolerance(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tolerance(n)) => {
            eprintln!("{n} cell(s) outside tolerance");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match &command {
        Command::Eval(a) => cmd_eval(a, &command),
        Command::Optimize(a) => cmd_optimize(a, &command),
        Command::Classical(a) => cmd_classical(a, &command),
        Command::Reproduce(a) => cmd_reproduce(a, &command),
        Command::OracleCheck(a) => cmd_oracle_check(a),
        Command::Qmc(a) => cmd_qmc(a, &command),
        Command::Replay { manifest } => {
            let text = std::fs::read_to_string(manifest).map_err(Error::from)?;
            let m: RunManifest = serde_json::from_str(&text).map_err(Error::from)?;
            if matches!(m.command, Command::Replay { .. }) {
                return Err(Error::InvalidParams("manifest: command cannot be replay".into()).into());
            }
            run(m.command)
        }
    }
}

fn default_engine(source: &GraphSource, engine: Option<EngineKind>) -> EngineKind {
    engine.unwrap_or(if source.spec().is_some() {
        EngineKind::Iterative
    } else {
        EngineKind::Oracle
    })
}

fn check_depth(p: usize) -> Result<(), Error> {
    if p == 0 {
        return Err(Error::InvalidParams("p: depth must be at least 1".into()));
    }
    Ok(())
}

fn write_output(path: &Path, contents: &str, manifest: RunManifest) -> Result<(), Error> {
    std::fs::write(path, contents)?;
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    std::fs::write(PathBuf::from(name), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

fn manifest(command: &Command, graph: Option<&GraphArgs>, output: &Path) -> RunManifest {
    RunManifest {
        command: command.clone(),
        graph: graph.and_then(|g| g.graph.clone()),
        spec: graph.and_then(|g| g.spec.clone()),
        depth: None,
        mode: None,
        engine: None,
        optimizer: None,
        seeds: Vec::new(),
        output: output.to_path_buf(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn load_params(a: &EvalArgs, source: &GraphSource) -> Result<ParamSet, Error> {
    let params = if let Some(path) = &a.params {
        let ps: ParamSet = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        ParamSet::new(ps.gammas, ps.betas, ps.sharing)?
    } else {
        if a.betas.len() != a.p {
            return Err(Error::InvalidParams(format!(
                "betas: expected {} values, got {}",
                a.p,
                a.betas.len()
            )));
        }
        match a.mode {
            Mode::Qaoa => {
                if a.gammas.len() != a.p {
                    return Err(Error::InvalidParams(format!(
                        "gammas: expected {} values, got {}",
                        a.p,
                        a.gammas.len()
                    )));
                }
                ParamSet::qaoa(&a.gammas, &a.betas, source.num_categories())?
            }
            Mode::Ma => {
                let want = a.p * source.num_classes();
                if a.gammas.len() != want {
                    return Err(Error::InvalidParams(format!(
                        "gammas: expected {want} values, got {}",
                        a.gammas.len()
                    )));
                }
                ParamSet::ma(&a.gammas, &a.betas, &source.sharing())?
            }
        }
    };
    params.check_for(source.num_categories(), a.p)?;
    Ok(params)
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    graph: &'a str,
    p: usize,
    engine: EngineKind,
    params: &'a ParamSet,
    cut_fraction: f64,
}

fn cmd_eval(a: &EvalArgs, command: &Command) -> CmdResult {
    check_depth(a.p)?;
    let source = a.graph.load()?;
    let params = load_params(a, &source)?;
    let engine = default_engine(&source, a.engine);
    let value = cut_fraction(&source, &params, engine)?;
    println!("{value:.5}");
    if let Some(path) = &a.dump_tables {
        let spec = source.require_spec()?;
        let mut eng = IterativeEngine::new(spec, &params, EngineOptions::default())?;
        eng.cut_fraction()?;
        std::fs::write(path, serde_json::to_string(&eng.dump_tables()).map_err(Error::from)?).map_err(Error::from)?;
    }
    if let Some(out) = &a.out {
        let json = serde_json::to_string(&EvalOutput {
            graph: source.name(),
            p: a.p,
            engine,
            params: &params,
            cut_fraction: value,
        })
        .map_err(Error::from)?;
        let mut m = manifest(command, Some(&a.graph), out);
        m.depth = Some(a.p);
        m.mode = Some(params.mode().to_string());
        m.engine = Some(engine.to_string());
        write_output(out, &(json + "\n"), m)?;
    }
    Ok(())
}

fn cmd_optimize(a: &OptimizeArgs, command: &Command) -> CmdResult {
    check_depth(a.p)?;
    let source = a.graph.load()?;
    let engine = default_engine(&source, a.engine);
    let mut config = OptimizerConfig {
        starts: a.starts,
        seed: a.seed,
        max_iter: a.max_iter,
        tol: a.tol,
        ..Default::default()
    };
    if a.widen {
        config = config.widened();
    }
    if let Some(path) = &a.warm_start {
        let ps: ParamSet =
            serde_json::from_str(&std::fs::read_to_string(path).map_err(Error::from)?).map_err(Error::from)?;
        config.warm_start = Some(ParamSet::new(ps.gammas, ps.betas, ps.sharing)?);
    }
    let r = optimize(&source, a.p, a.mode, engine, &config)?;
    println!("{:.5}", r.value);
    println!("{}", format_angles(&r.best.to_flat()));
    if let Some(out) = &a.out {
        let mut log = String::new();
        for entry in &r.log {
            log += &serde_json::to_string(entry).map_err(Error::from)?;
            log.push('\n');
        }
        let mut log_path = out.as_os_str().to_owned();
        log_path.push(".log.jsonl");
        std::fs::write(PathBuf::from(log_path), log).map_err(Error::from)?;
        let mut m = manifest(command, Some(&a.graph), out);
        m.depth = Some(a.p);
        m.mode = Some(a.mode.to_string());
        m.engine = Some(engine.to_string());
        m.seeds = vec![a.seed];
        m.optimizer = Some(config);
        write_output(out, &(r.best.to_json() + "\n"), m)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassicalRow {
    graph: String,
    algorithm: String,
    scheme: String,
    k: usize,
    params: String,
    estimate: f64,
    stderr: f64,
    samples: u64,
    seed: u64,
}

fn parse_taus(raw: &[String]) -> Result<Vec<usize>, Error> {
    raw.iter()
        .map(|t| match t.trim() {
            "inf" => Ok(usize::MAX),
            s => s
                .parse::<usize>()
                .map_err(|_| Error::InvalidParams(format!("tau: cannot parse {s:?}"))),
        })
        .collect()
}

fn show_taus(taus: &[usize]) -> String {
    let parts: Vec<String> = taus
        .iter()
        .map(|&t| if t == usize::MAX { "inf".into() } else { t.to_string() })
        .collect();
    parts.join(";")
}

fn cmd_classical(a: &ClassicalArgs, command: &Command) -> CmdResult {
    let source = a.graph.load()?;
    let mut rows = Vec::new();
    let row = |algorithm: &str, scheme: String, k: usize, params: String, e: lowgirth_qaoa::classical::Estimate| {
        ClassicalRow {
            graph: source.name().to_string(),
            algorithm: algorithm.into(),
            scheme,
            k,
            params,
            estimate: e.value,
            stderr: e.stderr,
            samples: e.samples,
            seed: a.seed,
        }
    };
    match a.algorithm {
        AlgorithmKind::Threshold => {
            if a.tau.is_empty() {
                let s = optimal_thresholds(&source, a.k, a.samples, a.seed)?;
                rows.push(row("threshold", "search".into(), a.k, show_taus(&s.best), s.value));
            } else {
                let thresholds = parse_taus(&a.tau)?;
                let k = thresholds.len();
                let cfg = ThresholdConfig {
                    thresholds: thresholds.clone(),
                    samples: a.samples,
                    seed: a.seed,
                };
                let e = classical_cut_fraction(&source, &Algorithm::Threshold(cfg))?;
                rows.push(row("threshold", "fixed".into(), k, show_taus(&thresholds), e));
            }
        }
        AlgorithmKind::Bm => {
            let classes: Vec<usize> = match (a.neighbor_class, a.scheme) {
                (Some(c), _) => vec![c],
                (None, BmScheme::Para3 | BmScheme::Para4) => (0..source.num_classes()).collect(),
                (None, _) => vec![0],
            };
            for class in classes {
                let mut cfg = BmConfig::new(a.k, a.scheme, a.samples, a.seed);
                cfg.neighbor_class = class;
                let e = classical_cut_fraction(&source, &Algorithm::Bm(cfg))?;
                rows.push(row(
                    "bm",
                    a.scheme.to_string(),
                    a.k,
                    format!("neighbor_class={class}"),
                    e,
                ));
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let text = String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?,
    )
    .expect("csv output is utf-8");
    print!("{text}");
    if let Some(out) = &a.out {
        let mut m = manifest(command, Some(&a.graph), out);
        m.depth = Some(a.k);
        m.seeds = vec![a.seed];
        write_output(out, &text, m)?;
    }
    Ok(())
}

fn cmd_reproduce(a: &ReproduceArgs, command: &Command) -> CmdResult {
    let cfg = ReproduceConfig {
        unlock_deep: a.unlock_deep,
        threshold_samples: a.threshold_samples,
        deep_threshold_samples: a.deep_threshold_samples,
        bm_samples: a.bm_samples,
        seed: a.seed,
        optimizer: OptimizerConfig {
            starts: a.starts,
            ..Default::default()
        },
    };
    let cells = reproduce(a.table, &cfg)?;
    let text = cells_to_csv(&cells)?;
    print!("{text}");
    std::io::stdout().flush().ok();
    if let Some(out) = &a.out {
        let mut m = manifest(command, None, out);
        m.seeds = vec![a.seed];
        m.optimizer = Some(cfg.optimizer.clone());
        write_output(out, &text, m)?;
    }
    let failed = cells.iter().filter(|c| c.status == Status::Fail).count();
    if failed > 0 {
        return Err(Failure::Tolerance(failed));
    }
    Ok(())
}

fn cmd_oracle_check(a: &OracleCheckArgs) -> CmdResult {
    check_depth(a.p)?;
    let source = a.graph.load()?;
    let spec = source.require_spec()?;
    let sharing = match a.mode {
        Mode::Qaoa => vec![0; spec.num_categories()],
        Mode::Ma => spec.sharing().to_vec(),
    };
    let classes = sharing.iter().max().map_or(0, |&m| m + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let orbits = enumerate_edge_orbits(spec);
    let cones: Vec<_> = orbits.iter().map(|o| build_lightcone(spec, o, a.p).trimmed()).collect();
    let orders: Vec<_> = cones.iter().map(elimination_order).collect();
    let (mut sv_diff, mut tn_diff) = (0.0f64, 0.0f64);
    let mut sv_used = false;
    for _ in 0..a.draws {
        let x: Vec<f64> = (0..a.p * (classes + 1))
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let params = ParamSet::from_flat(&x, a.p, &sharing)?;
        let mut eng = IterativeEngine::new(spec, &params, EngineOptions::default())?;
        for ((o, g), order) in orbits.iter().zip(&cones).zip(&orders) {
            let iterative = -eng.edge_expectation(o)?;
            let tn = contraction_expectation(CircuitSpec::new(g, &params)?, order, DEFAULT_ENTRY_BUDGET)?;
            tn_diff = tn_diff.max((iterative - tn).abs());
            if g.num_vertices() <= DEFAULT_QUBIT_CAP {
                let sv = statevector_expectation(CircuitSpec::new(g, &params)?, DEFAULT_QUBIT_CAP)?;
                sv_diff = sv_diff.max((iterative - sv).abs());
                sv_used = true;
            }
        }
    }
    println!("contraction {tn_diff:.3e}");
    if sv_used {
        println!("statevector {sv_diff:.3e}");
    } else {
        println!("statevector skipped (lightcone above {DEFAULT_QUBIT_CAP} qubits)");
    }
    Ok(())
}

#[derive(Serialize)]
struct QmcRow {
    graph: String,
    category: usize,
    edge: String,
    weight: f64,
    p: usize,
    samples: u64,
    estimate: f64,
    stderr: f64,
    averaged: f64,
    seed: u64,
}

fn cmd_qmc(a: &QmcArgs, command: &Command) -> CmdResult {
    let source = a.graph.load()?;
    let spec = source.require_spec()?;
    let theta = QmcParams::new(a.alpha.clone(), a.beta.clone(), a.gamma.clone(), a.delta.clone())?;
    check_depth(theta.p())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for orbit in enumerate_edge_orbits(spec) {
        let averaged = qmc_edge_averaged(spec, &orbit, &theta)?;
        for &n in &a.samples {
            let e = qmc_edge_expectation(spec, &orbit, &theta, n, a.seed)?;
            let row = QmcRow {
                graph: source.name().to_string(),
                category: orbit.category,
                edge: format!("{}-{}", orbit.edge.0, orbit.edge.1),
                weight: orbit.weight_f64(),
                p: theta.p(),
                samples: n,
                estimate: e.value,
                stderr: e.stderr,
                averaged,
                seed: a.seed,
            };
            w.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
    }
    let text = String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?,
    )
    .expect("csv output is utf-8");
    print!("{text}");
    if let Some(out) = &a.out {
        let mut m = manifest(command, Some(&a.graph), out);
        m.depth = Some(theta.p());
        m.seeds = vec![a.seed];
        write_output(out, &text, m)?;
    }
    Ok(())
}
