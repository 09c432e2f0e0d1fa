use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kcut::contraction::{solve_min_kcut, staged_survival_experiment, EdgeSampler, SolveOptions, StagedConfig};
use kcut::harness::acceptance::{run_all, run_criterion};
use kcut::harness::experiments::{clock_experiment, envelope, resolve_lambda, to_csv};
use kcut::harness::{generate, parse_graph, write_graph, Generator};
use kcut::oracle::{brute_min_kcut, enumerate_cuts_below, KCUT_ORACLE_LIMIT};
use kcut::rng::seeded;
use kcut::setfamily::{check_small_cut_structure, SearchBudget};
use kcut::sparsifier::{ni_forest_decomposition, verify_cut_preservation, PRESERVATION_LIMIT};
use kcut::{KcutError, LamBar, Ratio, WeightedGraph};

#[derive(Parser)]
#[command(name = "kcut", version, about = "Minimum k-cut experiments")]
struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, env = "KCUT_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit CSV rows instead of JSON where the subcommand has a table.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Graph file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cycle,
    Clique,
    Random,
    TwoCliquesBridge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sampler {
    PrefixScan,
    Fenwick,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated graph in the text format.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        weight: u64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long)]
        left: Option<usize>,
        #[arg(long)]
        right: Option<usize>,
        #[arg(long, default_value_t = 1)]
        bridge: u64,
    },
    /// Repeated recursive contraction.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.01)]
        fail: f64,
        #[arg(long, default_value_t = 3.0)]
        repetition_constant: f64,
        #[arg(long, value_enum, default_value_t = Sampler::PrefixScan)]
        sampler: Sampler,
    },
    /// Exact minimum k-cut and the number of minimizers.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// List bipartitions below a weight as `side_mask_hex weight` lines.
    Cuts {
        #[command(flatten)]
        input: Input,
        /// Threshold, a decimal such as `2.5`.
        #[arg(long)]
        below: f64,
        /// Include cuts of weight equal to the threshold.
        #[arg(long)]
        inclusive: bool,
    },
    /// Forest-peeling sparsifier for cuts up to `lambda`.
    Sparsify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        lambda: u64,
        /// Also check every cut of weight at most `lambda` (n <= 20).
        #[arg(long)]
        verify: bool,
    },
    /// Clock-process trajectories against their bounds.
    Clock {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.5)]
        gamma: f64,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.25)]
        t_step: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Staged survival of a minimum k-cut.
    Survival {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        stages: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 3.0)]
        m_const: f64,
    },
    /// Small-cut structure report.
    Extremal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.9)]
        gamma: f64,
        #[arg(long, default_value_t = 5_000_000)]
        max_nodes: u64,
    },
    /// Run a named suite and print a pass/fail table.
    Corpus {
        #[arg(long, value_parser = ["acceptance"])]
        suite: String,
        /// Run one criterion only.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Checks,
}

impl From<KcutError> for Failure {
    fn from(e: KcutError) -> Self {
        match e {
            KcutError::TooLarge { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_graph(input: &Input) -> Result<WeightedGraph, Failure> {
    let text = match &input.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            s
        }
    };
    let parsed = parse_graph(&text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.graph)
}

fn ratio(x: f64, what: &str) -> Result<Ratio, Failure> {
    Ratio::from_decimal(x).ok_or_else(|| Failure::Usage(format!("{what} must be a nonnegative decimal, got {x}")))
}

/// Writes to stdout, ignoring a closed pipe (e.g. output piped into `head`).
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(name: &str, seed: Option<u64>, params: Value, results: Value, start: Instant) {
    let doc = envelope(name, seed, params, results, start.elapsed());
    out(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("json values serialize")));
}

fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let seed = cli.seed;
    match cli.command {
        Command::Gen { kind, n, weight, p, max_weight, left, right, bridge } => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")));
            let spec = match kind {
                Kind::Cycle => Generator::Cycle { n: need(n, "n")?, weight },
                Kind::Clique => Generator::Clique { n: need(n, "n")?, weight },
                Kind::Random => Generator::Random { n: need(n, "n")?, p, max_weight, seed },
                Kind::TwoCliquesBridge => Generator::TwoCliquesBridge {
                    left: need(left, "left")?,
                    right: need(right, "right")?,
                    bridge,
                },
            };
            out(&write_graph(&generate(&spec)?));
        }
        Command::Solve { input, k, fail, repetition_constant, sampler } => {
            let g = read_graph(&input)?;
            let opts = SolveOptions {
                repetition_constant,
                sampler: match sampler {
                    Sampler::PrefixScan => EdgeSampler::PrefixScan,
                    Sampler::Fenwick => EdgeSampler::Fenwick,
                },
            };
            let report = solve_min_kcut(&g, k, fail, opts, &mut seeded(seed))?;
            emit(
                "solve",
                Some(seed),
                json!({"n": g.n(), "m": g.m(), "k": k, "failure_prob": fail, "options": opts}),
                json!({
                    "weight": report.partition.weight(),
                    "blocks": report.partition.blocks(),
                    "repetitions": report.repetitions,
                    "first_hit": report.first_hit,
                }),
                start,
            );
        }
        Command::Oracle { input, k } => {
            let g = read_graph(&input)?;
            let r = brute_min_kcut(&g, k)?;
            emit(
                "oracle",
                None,
                json!({"n": g.n(), "m": g.m(), "k": k}),
                json!({"lambda": r.lambda_k, "count": r.count, "witness": r.witness.blocks()}),
                start,
            );
        }
        Command::Cuts { input, below, inclusive } => {
            let g = read_graph(&input)?;
            let family = enumerate_cuts_below(&g, ratio(below, "--below")?, inclusive)?;
            out(&family.to_hex_lines());
        }
        Command::Sparsify { input, lambda, verify } => {
            let g = read_graph(&input)?;
            if verify && g.n() > PRESERVATION_LIMIT {
                return Err(Failure::Resource(format!(
                    "--verify enumerates cuts; n = {} exceeds {PRESERVATION_LIMIT}",
                    g.n()
                )));
            }
            let h = ni_forest_decomposition(&g, lambda);
            let check = if verify { Some(verify_cut_preservation(&g, &h, lambda)?) } else { None };
            emit(
                "sparsify",
                None,
                json!({"n": g.n(), "m": g.m(), "lambda": lambda}),
                json!({
                    "m_sparse": h.m(),
                    "weight_sparse": h.total_weight(),
                    "weight_bound": lambda * (g.n() as u64 - 1),
                    "preservation": check,
                    "graph": write_graph(&h),
                }),
                start,
            );
        }
        Command::Clock { input, k, gamma, t_max, t_step, trials } => {
            let g = read_graph(&input)?;
            if !(t_step > 0.0 && t_max >= 0.0) {
                return Err(Failure::Usage("need --t-step > 0 and --t-max >= 0".into()));
            }
            let steps = (t_max / t_step + 1e-9).floor() as usize;
            let grid: Vec<f64> = (0..=steps).map(|i| i as f64 * t_step).collect();
            let lambda = resolve_lambda(&g, k, &mut seeded(seed))?;
            let exp = clock_experiment(&g, lambda, ratio(gamma, "--gamma")?, grid, trials, seed)?;
            if cli.csv {
                out(&to_csv(&exp.points)?);
            } else {
                emit(
                    "clock",
                    Some(seed),
                    json!({"n": g.n(), "k": k, "gamma": gamma, "t_max": t_max, "t_step": t_step, "trials": trials}),
                    serde_json::to_value(&exp).expect("serializable"),
                    start,
                );
            }
        }
        Command::Survival { input, k, stages, trials, m_const } => {
            let g = read_graph(&input)?;
            let cut = if g.n() <= KCUT_ORACLE_LIMIT {
                brute_min_kcut(&g, k)?.witness
            } else {
                solve_min_kcut(&g, k, 1e-3, SolveOptions::default(), &mut seeded(seed))?.partition
            };
            let cfg = StagedConfig {
                lam_bar: LamBar::new(cut.weight(), k)?,
                stages,
                trials,
                m_const,
                seed,
            };
            let report = staged_survival_experiment(&g, k, &cut, &cfg)?;
            if cli.csv {
                out(&to_csv(&report.stages)?);
            } else {
                emit(
                    "survival",
                    Some(seed),
                    json!({"n": g.n(), "k": k, "stages": stages, "trials": trials, "m_const": m_const}),
                    json!({"cut": cut.blocks(), "report": report}),
                    start,
                );
            }
        }
        Command::Extremal { input, k, gamma, max_nodes } => {
            let g = read_graph(&input)?;
            let report = check_small_cut_structure(&g, k, ratio(gamma, "--gamma")?, SearchBudget { max_nodes })?;
            emit(
                "extremal",
                None,
                json!({"n": g.n(), "k": k, "gamma": gamma, "max_nodes": max_nodes}),
                json!({"holds": report.holds(), "report": report}),
                start,
            );
        }
        Command::Corpus { suite: _, criterion } => {
            let outcomes = match criterion {
                Some(id) if (1..=12).contains(&id) => vec![run_criterion(id, seed)],
                Some(id) => return Err(Failure::Usage(format!("no criterion {id}; expected 1..=12"))),
                None => run_all(seed),
            };
            for o in &outcomes {
                out(&format!("{}\n", o.line()));
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            out(&format!("{passed}/{} criteria passed\n", outcomes.len()));
            if passed != outcomes.len() {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}
