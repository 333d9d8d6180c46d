mod exit;
mod manifest;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cycleforge::decompose::{
    decompose, decomposition_stats, verify_cycles, verify_decomposition, DecompositionParams, Strategy, STATS_HEADER,
};
use cycleforge::format::{parse_decomposition, resolve, write_decomposition};
use cycleforge::generators::FamilySpec;
use cycleforge::graph::io::{parse_edge_list, to_edge_list};
use cycleforge::oracle::{enumerate_cycles, heaviest_cycle_exact, mc_tail_check, min_decomposition_exact, OracleBudget, TailProcess};
use cycleforge::potential::{heavy_cycle_any, trace_csv};
use cycleforge::random_walk::estimate_whp_weight;
use cycleforge::weighting::apply_inverse_out_degree;
use cycleforge::{Cycle, Digraph, Error};

use exit::Failure;
use manifest::{graph_digest, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "cycleforge", version, about = "Cycle decompositions and heavy cycles in digraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph from a named family as an edge list.
    Gen(GenArgs),
    /// Decompose a balanced digraph into edge-disjoint cycles.
    Decompose(DecomposeArgs),
    /// Find a cycle meeting the heavy-cycle bound.
    Heavy(HeavyArgs),
    /// Check that a decomposition file partitions a graph's arcs.
    Verify(VerifyArgs),
    /// Exhaustive searches for small graphs.
    Oracle(OracleArgs),
    /// Monte-Carlo check of the exponential tail bound.
    McTail(McTailArgs),
    /// Random-walk cycle weights against the w.h.p. threshold.
    Whp(WhpArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    K4Chain,
    BsTree,
    BackwardPath,
    Perm,
    KSymmetric,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of K4 blocks (k4-chain).
    #[arg(long = "M", alias = "m")]
    big_m: Option<usize>,
    /// Branching parameter (bs-tree).
    #[arg(long)]
    l: Option<usize>,
    /// Depth, default l + 1 (bs-tree).
    #[arg(long)]
    k: Option<usize>,
    /// Vertex count (backward-path, perm).
    #[arg(long)]
    n: Option<usize>,
    /// Number of permutations (perm).
    #[arg(long)]
    d: Option<usize>,
    /// Clique order minus one (k-symmetric).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, env = "CYCLEFORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Potential,
    Random,
    Greedy,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Potential => Strategy::Potential,
            StrategyArg::Random => Strategy::Random,
            StrategyArg::Greedy => Strategy::GreedyAny,
        }
    }
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "potential")]
    strategy: StrategyArg,
    #[arg(long, env = "CYCLEFORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Fixed degree threshold instead of 50 ln Δ per round.
    #[arg(long)]
    mu: Option<f64>,
    /// Heavy-cycle weight floor, default 1/(50e).
    #[arg(long)]
    xi: Option<f64>,
    /// Decomposition file to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reweight {
    InverseDegree,
}

#[derive(Args, Debug)]
struct HeavyArgs {
    input: PathBuf,
    /// Walk parameter, clamped to [1, ln ln Δ].
    #[arg(long)]
    lambda: Option<f64>,
    /// Also report the exact heaviest cycle.
    #[arg(long)]
    oracle: bool,
    /// Write the walk's step trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Replace the weights before searching.
    #[arg(long, value_enum)]
    reweight: Option<Reweight>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    graph: PathBuf,
    decomposition: PathBuf,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long, default_value_t = OracleBudget::default().max_edges)]
    max_edges: usize,
    #[arg(long, default_value_t = OracleBudget::default().max_cycles)]
    max_cycles: usize,
}

impl BudgetArgs {
    fn budget(&self) -> OracleBudget {
        OracleBudget { max_edges: self.max_edges, max_cycles: self.max_cycles }
    }
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(subcommand)]
    op: OracleOp,
}

#[derive(Subcommand, Debug)]
enum OracleOp {
    /// List every elementary cycle.
    Cycles {
        input: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Heaviest elementary cycle.
    Heaviest {
        input: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Fewest cycles in a decomposition.
    MinDecomp {
        input: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProcessArg {
    Constant,
    Adaptive,
    Zero,
}

#[derive(Args, Debug)]
struct McTailArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, env = "CYCLEFORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "constant")]
    process: ProcessArg,
    /// Sequence length.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Success probability (base probability for adaptive).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Probability right after a success (adaptive).
    #[arg(long, default_value_t = 0.5)]
    after_hit: f64,
}

#[derive(Args, Debug)]
struct WhpArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "CYCLEFORGE_SEED", default_value_t = 0)]
    seed: u64,
}

type Outcome = Result<(), Failure>;

fn read_graph(path: &Path) -> Result<Digraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::read(path, e))?;
    parse_edge_list(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::write(path, e))
}

fn print_stdout(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn cycle_line(c: &Cycle) -> String {
    let vs: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
    vs.join(" ")
}

fn cmd_gen(a: &GenArgs, m: &mut RunManifest) -> Outcome {
    let family = a.family.to_possible_value().expect("no skipped variants");
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--family {} needs --{flag}", family.get_name())))
    };
    let spec = match a.family {
        Family::K4Chain => FamilySpec::K4Chain { m: need(a.big_m, "M")? },
        Family::BsTree => FamilySpec::BsTree { l: need(a.l, "l")?, k: a.k },
        Family::BackwardPath => FamilySpec::BackwardPath { n: need(a.n, "n")? },
        Family::Perm => FamilySpec::PermSuperposition { n: need(a.n, "n")?, d: need(a.d, "d")?, seed: a.seed },
        Family::KSymmetric => FamilySpec::KSymmetric { r: need(a.r, "r")? },
    };
    m.flag("family", spec.name());
    for (name, v) in [("M", a.big_m), ("l", a.l), ("k", a.k), ("n", a.n), ("d", a.d), ("r", a.r)] {
        if let Some(v) = v {
            m.flag(name, v);
        }
    }
    if matches!(a.family, Family::Perm) {
        m.seed = Some(a.seed);
    }
    let g = spec.generate().map_err(|e| match e {
        Error::InvalidParameter(msg) => Failure::Usage(msg),
        other => other.into(),
    })?;
    m.digest = Some(graph_digest(&g));
    let text = format!("{}{}", m.header(false), to_edge_list(&g));
    match &a.out {
        Some(p) => write_file(p, &text),
        None => print_stdout(&text),
    }
}

fn cmd_decompose(a: &DecomposeArgs, m: &mut RunManifest) -> Outcome {
    let g = read_graph(&a.input)?;
    let mut params = DecompositionParams { strategy: a.strategy.into(), seed: a.seed, mu: a.mu, ..Default::default() };
    if let Some(xi) = a.xi {
        params.xi = xi;
    }
    m.flag("strategy", params.strategy.as_str());
    if let Some(mu) = a.mu {
        m.flag("mu", mu);
    }
    m.flag("xi", params.xi);
    m.seed = Some(a.seed);
    m.digest = Some(graph_digest(&g));
    let d = decompose(&g, &params)?;
    verify_decomposition(&d, &g).map_err(|v| Failure::Check(format!("decomposition invalid: {}", v.0)))?;
    let stats = decomposition_stats(&d, &g, &params)?;
    if let Some(p) = &a.out {
        write_file(p, &format!("{}{}", m.header(false), write_decomposition(&d)))?;
    }
    print_stdout(&format!("{STATS_HEADER}\n{}\n", stats.csv_row()))?;
    if d.heavy_shortfalls > 0 {
        return Err(Failure::Check(format!(
            "{} heavy cycles fell below xi = {}",
            d.heavy_shortfalls, params.xi
        )));
    }
    Ok(())
}

fn cmd_heavy(a: &HeavyArgs, m: &mut RunManifest) -> Outcome {
    let mut g = read_graph(&a.input)?;
    if let Some(Reweight::InverseDegree) = a.reweight {
        m.flag("reweight", "inverse-degree");
        apply_inverse_out_degree(&mut g)?;
    }
    if let Some(l) = a.lambda {
        m.flag("lambda", l);
    }
    m.digest = Some(graph_digest(&g));
    let h = heavy_cycle_any(&g, a.lambda)?;
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", h.case.as_str());
    if let Some(l) = h.lambda {
        let _ = writeln!(out, "lambda: {l}");
    }
    let _ = writeln!(out, "cycle: {}", cycle_line(&h.cycle));
    let _ = writeln!(out, "length: {}", h.cycle.len());
    let _ = writeln!(out, "weight: {}", h.weight);
    let _ = writeln!(out, "bound: {}", h.bound);
    if a.oracle {
        m.flag("oracle", "");
        let (best, w) = heaviest_cycle_exact(&h.normalized, OracleBudget::default())?;
        let _ = writeln!(out, "oracle: {w}");
        let _ = writeln!(out, "oracle_cycle: {}", cycle_line(&best));
    }
    if let Some(p) = &a.trace {
        let body = match &h.ledger {
            Some(ledger) => trace_csv(ledger),
            None => "t,chosen,rd,rw,A,B\n".to_string(),
        };
        write_file(p, &format!("{}{body}", m.header(false)))?;
    }
    print_stdout(&out)?;
    if !h.meets_bound() {
        return Err(Failure::Check(format!("weight {} below bound {}", h.weight, h.bound)));
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, m: &mut RunManifest) -> Outcome {
    let g = read_graph(&a.graph)?;
    m.digest = Some(graph_digest(&g));
    let text = fs::read_to_string(&a.decomposition).map_err(|e| Failure::read(&a.decomposition, e))?;
    let parsed =
        parse_decomposition(&text).map_err(|e| Failure::Io(format!("{}: {e}", a.decomposition.display())))?;
    let cycles = resolve(&parsed, &g).map_err(|e| Failure::Check(e.to_string()))?;
    verify_cycles(&cycles, &g).map_err(|v| Failure::Check(v.0))?;
    print_stdout(&format!("ok: {} cycles cover {} arcs\n", cycles.len(), g.edge_count()))
}

fn cmd_oracle(a: &OracleArgs, m: &mut RunManifest) -> Outcome {
    let (input, budget) = match &a.op {
        OracleOp::Cycles { input, budget } | OracleOp::Heaviest { input, budget } | OracleOp::MinDecomp { input, budget } => {
            (input, budget.budget())
        }
    };
    m.flag("max-edges", budget.max_edges).flag("max-cycles", budget.max_cycles);
    let g = read_graph(input)?;
    m.digest = Some(graph_digest(&g));
    let mut out = String::new();
    match &a.op {
        OracleOp::Cycles { .. } => {
            let cycles = enumerate_cycles(&g, budget)?;
            let _ = writeln!(out, "cycles: {}", cycles.len());
            for c in &cycles {
                let _ = writeln!(out, "{} : {}", c.weight(&g), cycle_line(c));
            }
        }
        OracleOp::Heaviest { .. } => {
            let (c, w) = heaviest_cycle_exact(&g, budget)?;
            let _ = writeln!(out, "weight: {w}");
            let _ = writeln!(out, "cycle: {}", cycle_line(&c));
        }
        OracleOp::MinDecomp { .. } => {
            let k = min_decomposition_exact(&g, budget)?;
            let _ = writeln!(out, "min_cycles: {k}");
        }
    }
    print_stdout(&out)
}

fn cmd_mc_tail(a: &McTailArgs, m: &mut RunManifest) -> Outcome {
    let process = match a.process {
        ProcessArg::Constant => TailProcess::Constant(a.p),
        ProcessArg::Adaptive => TailProcess::Adaptive { base: a.p, after_hit: a.after_hit },
        ProcessArg::Zero => TailProcess::Zero,
    };
    m.flag("lambda", a.lambda).flag("c", a.c).flag("trials", a.trials).flag("n", a.n);
    m.flag("process", format!("{process:?}"));
    m.seed = Some(a.seed);
    let t = mc_tail_check(process, a.n, a.lambda, a.c, a.trials, a.seed)?;
    print_stdout(&format!(
        "trials,violations,rate,bound,within_slack\n{},{},{},{},{}\n",
        t.trials,
        t.violations,
        t.rate,
        t.bound,
        t.within_slack()
    ))?;
    if !t.within_slack() {
        return Err(Failure::Check(format!("violation rate {} exceeds e^-c = {}", t.rate, t.bound)));
    }
    Ok(())
}

fn cmd_whp(a: &WhpArgs, m: &mut RunManifest) -> Outcome {
    let g = read_graph(&a.input)?;
    m.flag("trials", a.trials);
    m.seed = Some(a.seed);
    m.digest = Some(graph_digest(&g));
    let e = estimate_whp_weight(&g, a.trials, a.seed)?;
    print_stdout(&format!(
        "trials,threshold,fraction_meeting,mean,min,max\n{},{},{},{},{},{}\n",
        e.trials, e.threshold, e.fraction_meeting, e.mean, e.min, e.max
    ))
}

fn run(cli: &Cli, m: &mut RunManifest) -> Outcome {
    match &cli.cmd {
        Command::Gen(a) => cmd_gen(a, m),
        Command::Decompose(a) => cmd_decompose(a, m),
        Command::Heavy(a) => cmd_heavy(a, m),
        Command::Verify(a) => cmd_verify(a, m),
        Command::Oracle(a) => cmd_oracle(a, m),
        Command::McTail(a) => cmd_mc_tail(a, m),
        Command::Whp(a) => cmd_whp(a, m),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Decompose(_) => "decompose",
        Command::Heavy(_) => "heavy",
        Command::Verify(_) => "verify",
        Command::Oracle(o) => match o.op {
            OracleOp::Cycles { .. } => "oracle cycles",
            OracleOp::Heaviest { .. } => "oracle heaviest",
            OracleOp::MinDecomp { .. } => "oracle min-decomp",
        },
        Command::McTail(_) => "mc-tail",
        Command::Whp(_) => "whp",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut manifest = RunManifest::new(command_name(&cli.cmd));
    let result = run(&cli, &mut manifest);
    manifest.duration = Some(started.elapsed());
    eprint!("{}", manifest.header(true));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
