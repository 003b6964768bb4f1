//! Experiment CLI: train one (dataset, algorithm, transfer function)
//! cell or sweep the full grid, emitting result tables.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use evonet::backprop::BpConfig;
use evonet::data::{load_csv, Dataset, DatasetName};
use evonet::experiment::{
    run_experiment, run_grid, Algo, ExperimentConfig, GridPlan, write_trace,
};
use evonet::metaheuristics::{DeVariant, OptimizerConfig};
use evonet::transfer::TransferKind;

#[derive(Parser)]
#[command(
    name = "evonet",
    about = "Trains feed-forward networks with adaptive transfer functions by metaheuristics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one cross-validated experiment cell.
    Train(Box<TrainArgs>),
    /// Run a grid of cells and emit per-dataset result tables.
    Grid(GridArgs),
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset: iris | wdbc | wine
    #[arg(long, value_parser = DatasetName::from_str)]
    dataset: DatasetName,

    /// Training algorithm: bp | abc | pso | de
    #[arg(long, value_parser = Algo::from_str)]
    algo: Algo,

    /// Transfer function: sigfix | sigadp | tanhfix | tanhadp | gaussian | beta
    #[arg(long, value_parser = TransferKind::from_str)]
    tf: TransferKind,

    #[command(flatten)]
    run: RunArgs,

    /// Write per-fold best-cost traces to the trace directory.
    #[arg(long)]
    trace: bool,

    /// Directory for --trace output.
    #[arg(long, default_value = "traces")]
    trace_dir: PathBuf,

    /// Save the best fold's trained model to this path.
    #[arg(long)]
    save_model: Option<PathBuf>,
}

/// Settings shared by `train` and `grid` (grid paths read them from the
/// config file; flags override).
#[derive(Args)]
struct RunArgs {
    /// Hidden-layer size.
    #[arg(long, default_value_t = 5)]
    hidden: usize,

    /// Population size (metaheuristics).
    #[arg(long, default_value_t = 10)]
    pop: usize,

    /// Iteration budget (metaheuristics) and epoch budget (bp).
    #[arg(long, default_value_t = 1000)]
    iters: usize,

    /// Master seed; folds derive their own sub-seeds.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Number of cross-validation folds.
    #[arg(long, default_value_t = 10)]
    folds: usize,

    /// ABC stagnation limit before scout replacement.
    #[arg(long, default_value_t = 100)]
    trial_limit: usize,

    /// PSO cognitive acceleration.
    #[arg(long, default_value_t = 2.0)]
    c1: f64,

    /// PSO social acceleration.
    #[arg(long, default_value_t = 2.0)]
    c2: f64,

    /// PSO inertia at the first iteration.
    #[arg(long, default_value_t = 1.0)]
    c0_max: f64,

    /// PSO inertia at the last iteration.
    #[arg(long, default_value_t = 0.0)]
    c0_min: f64,

    /// DE crossover rate.
    #[arg(long, default_value_t = 0.9)]
    cr: f64,

    /// DE differential weight.
    #[arg(long, default_value_t = 0.7)]
    f: f64,

    /// DE mutant construction: randtobest1 | rand1
    #[arg(long, value_parser = DeVariant::from_str, default_value = "randtobest1")]
    de_variant: DeVariant,

    /// BP learning rate.
    #[arg(long, default_value_t = 0.5)]
    eta: f64,

    /// BP momentum.
    #[arg(long, default_value_t = 0.1)]
    momentum: f64,

    /// BP random restarts per fold (best held-out accuracy is reported).
    #[arg(long, default_value_t = 10)]
    bp_restarts: usize,

    /// Directory holding iris.data, wdbc.data, wine.data.
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,

    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct GridArgs {
    /// Flat key=value config file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Datasets to sweep (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = DatasetName::from_str)]
    datasets: Option<Vec<DatasetName>>,

    /// Algorithms to sweep (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = Algo::from_str)]
    algos: Option<Vec<Algo>>,

    /// Transfer functions to sweep (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = TransferKind::from_str)]
    tfs: Option<Vec<TransferKind>>,

    /// Output directory for the result tables.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,

    #[command(flatten)]
    run: RunArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Train(args) => train(*args),
        Command::Grid(args) => grid(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn set_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // Ignore the error if a pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn experiment_config(args: &RunArgs, dataset: DatasetName, algo: Algo, tf: TransferKind) -> ExperimentConfig {
    let mut config = ExperimentConfig::new(dataset, algo, tf);
    config.hidden = args.hidden;
    config.folds = args.folds;
    config.seed = args.seed;
    config.optimizer = OptimizerConfig {
        population: args.pop,
        iterations: args.iters,
        ..OptimizerConfig::default()
    };
    config.optimizer.abc.trial_limit = args.trial_limit;
    config.optimizer.pso.c1 = args.c1;
    config.optimizer.pso.c2 = args.c2;
    config.optimizer.pso.c0_max = args.c0_max;
    config.optimizer.pso.c0_min = args.c0_min;
    config.optimizer.de.crossover = args.cr;
    config.optimizer.de.weight = args.f;
    config.optimizer.de.variant = args.de_variant;
    config.bp = BpConfig {
        learning_rate: args.eta,
        momentum: args.momentum,
        epochs: args.iters,
    };
    config.bp_restarts = args.bp_restarts;
    config
}

fn load_dataset(data_dir: &PathBuf, name: DatasetName) -> evonet::Result<Dataset<f64>> {
    load_csv(data_dir.join(name.file_name()), name)
}

fn train(args: TrainArgs) -> evonet::Result<()> {
    set_jobs(args.run.jobs);
    let mut config = experiment_config(&args.run, args.dataset, args.algo, args.tf);
    config.collect_traces = args.trace;
    config.keep_models = args.save_model.is_some();
    let dataset = load_dataset(&args.run.data_dir, args.dataset)?;

    let result = run_experiment(&config, &dataset)?;

    println!(
        "{} / {} / {} (hidden {}, seed {}, {} folds)",
        args.dataset, args.algo, args.tf, config.hidden, config.seed, config.folds
    );
    for (fold, acc) in result.fold_accuracies.iter().enumerate() {
        println!("fold {fold}: accuracy {acc:.4}");
    }
    println!("mean {:.4}  variance {:.6}", result.mean, result.variance);

    if args.trace {
        std::fs::create_dir_all(&args.trace_dir)?;
        let stem = format!("{}-{}-{}-s{}", args.dataset, args.algo, args.tf, config.seed);
        for (fold, trace) in result.traces.iter().enumerate() {
            let path = args.trace_dir.join(format!("{stem}-fold{fold}.csv"));
            write_trace(&path, trace)?;
            println!("trace written to {}", path.display());
        }
    }

    if let Some(path) = args.save_model {
        // Keep the model from the best-scoring fold (lowest index wins ties).
        let best_fold = result
            .fold_accuracies
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.partial_cmp(b).unwrap().then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        std::fs::write(&path, result.models[best_fold].to_text())?;
        println!("model from fold {best_fold} written to {}", path.display());
    }
    Ok(())
}

fn grid(args: GridArgs) -> evonet::Result<()> {
    let file = match &args.config {
        Some(path) => config::GridFile::load(path)?,
        None => config::GridFile::default(),
    };
    let merged = config::merge(file, &args)?;
    set_jobs(merged.jobs);

    let plan = GridPlan {
        datasets: merged.datasets.clone(),
        algos: merged.algos.clone(),
        kinds: merged.kinds.clone(),
        base: merged.base.clone(),
    };
    let data_dir = merged.data_dir.clone();
    let results = run_grid(&plan, |name| load_dataset(&data_dir, name))?;
    let written = results.write_to(&merged.out_dir)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
