use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcm::report::{ConfigEcho, OracleComparison, Report};
use gcm::{corpus, dist, Backend, Model, RunConfig, SearchOptions, Strategy, Verdict};

const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "gcm",
    version,
    about = "Explicit-state reachability checker for guarded-command models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Explore a model and report error reachability and deadlocks.
    Check(CheckArgs),
    /// List the bundled models, or write them out as .gcm files.
    Models {
        /// Directory to write `<name>.gcm` files into.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Print the source of one bundled model.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Dfs,
    Bfs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Sim,
    Threaded,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Model file, or the name of a bundled model such as `mux2` or `ind10.gcm`.
    model: String,
    #[arg(long, value_enum, default_value = "dfs")]
    strategy: StrategyArg,
    /// Partial-order reduction.
    #[arg(long)]
    por: bool,
    /// Symmetry reduction over families declared `symmetric`.
    #[arg(long)]
    symmetry: bool,
    /// Number of workers; more than one selects the distributed runtime.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Distributed backend; giving it forces the distributed runtime even for one worker.
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Scheduler seed for the sim backend.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// State budget (per worker when distributed).
    #[arg(long, default_value_t = 5_000_000)]
    max_states: usize,
    #[arg(long)]
    json: bool,
    /// Also run the unreduced oracle and compare verdicts and state counts.
    #[arg(long)]
    compare_oracle: bool,
    /// Disable the cycle proviso. Unsound; for demonstrating the ignoring problem.
    #[arg(long, hide = true)]
    unsafe_no_c2: bool,
}

fn load(spec: &str) -> Result<(String, String), String> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{spec}: {e}"))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string());
        return Ok((name, text));
    }
    match corpus::bundled_model(spec) {
        Some(text) => Ok((spec.trim_end_matches(".gcm").to_string(), text)),
        None => Err(format!("{spec}: no such file or bundled model")),
    }
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Clean => 0,
        Verdict::ErrorFound => 1,
        Verdict::DeadlockFound => 2,
        Verdict::BudgetExceeded => 4,
    }
}

fn check(args: &CheckArgs) -> Result<ExitCode, String> {
    let (name, text) = load(&args.model)?;
    let m: Model = gcm::parse_model(&text).map_err(|e| format!("{}: {e}", args.model))?;
    let strategy = match args.strategy {
        StrategyArg::Dfs => Strategy::Dfs,
        StrategyArg::Bfs => Strategy::Bfs,
    };
    let workers = args.workers as usize;
    let backend = match (args.backend, workers) {
        (Some(BackendArg::Sim), _) => Some(Backend::Sim),
        (Some(BackendArg::Threaded), _) => Some(Backend::Threaded),
        (None, 1) => None,
        (None, _) => Some(Backend::Sim),
    };
    let start = Instant::now();
    let (result, termination) = match backend {
        None => {
            let mut opts = SearchOptions::new(strategy)
                .por(args.por)
                .symmetry(args.symmetry)
                .max_states(args.max_states);
            opts.unsafe_no_c2 = args.unsafe_no_c2;
            (gcm::explore(&m, &opts).map_err(|e| e.to_string())?, None)
        }
        Some(b) => {
            let mut cfg = RunConfig::new(workers, strategy)
                .por(args.por)
                .symmetry(args.symmetry)
                .backend(b)
                .seed(args.seed)
                .max_states_per_worker(args.max_states);
            cfg.unsafe_no_c2 = args.unsafe_no_c2;
            let run = dist::run_distributed_detailed(&m, &cfg).map_err(|e| e.to_string())?;
            (run.result, Some(run.termination))
        }
    };
    let wall = start.elapsed().as_millis() as u64;
    let config = ConfigEcho {
        model: name,
        strategy,
        por: args.por,
        symmetry: args.symmetry,
        workers,
        backend,
        seed: args.seed,
        max_states: args.max_states,
        unsafe_no_c2: args.unsafe_no_c2,
    };
    let mut report = Report::new(&m, &result, config, wall);
    report.termination = termination;
    if args.compare_oracle {
        let reachable =
            gcm::oracle_reachable(&m, args.max_states).map_err(|e| format!("oracle: {e}"))?;
        let v = gcm::oracle_verdict(&m, &reachable);
        report.oracle = Some(OracleComparison::new(&result, reachable.len() as u64, v));
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(ExitCode::from(exit_code(result.verdict)))
}

fn models(dump: Option<&Path>, show: Option<&str>) -> Result<ExitCode, String> {
    if let Some(name) = show {
        let text =
            corpus::bundled_model(name).ok_or_else(|| format!("{name}: no such bundled model"))?;
        print!("{text}");
        return Ok(ExitCode::SUCCESS);
    }
    for (name, text) in corpus::bundled_models() {
        match dump {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                let path = dir.join(format!("{name}.gcm"));
                std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
                println!("{}", path.display());
            }
            None => println!("{name}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CHECK_LOG", "off"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Check(args) => check(args),
        Command::Models { dump, show } => models(dump.as_deref(), show.as_deref()),
    };
    outcome.unwrap_or_else(|msg| {
        eprintln!("gcm: {msg}");
        ExitCode::from(EXIT_USAGE)
    })
}
