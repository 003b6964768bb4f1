//! Cross-validated experiment runner: one (dataset, algorithm, transfer
//! function) cell trains on nine folds and scores accuracy on the held
//! out one, for every fold in turn.
//!
//! Runs are deterministic: the fold plan and each per-fold training run
//! derive their own seed from the master seed, so folds are independent
//! and individually re-runnable. Folds of one experiment execute in
//! parallel and results are merged in fold order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::backprop::{self, BpConfig};
use crate::data::{stratified_folds, Dataset, DatasetName, FoldPlan, Samples, Scaler};
use crate::error::{Error, Result};
use crate::genotype::{GeneBounds, Genotype, GenotypeLayout};
use crate::metaheuristics::{optimize, Engine, OptimizerConfig};
use crate::network::{Network, NetworkTopology};
use crate::rng::{derive_seed, Rng};
use crate::scalar::Scalar;
use crate::transfer::TransferKind;

/// Search-space bound for initial populations and weight init.
pub const SEARCH_SPACE: (f64, f64) = (-1.5, 1.5);

const TAG_FOLD_PLAN: u64 = 0x01;
const TAG_FOLD_RUN: u64 = 0x02;
const TAG_RESTART: u64 = 0x03;

/// Training algorithm for one experiment cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Bp,
    Abc,
    Pso,
    De,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Bp, Algo::Abc, Algo::Pso, Algo::De];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Bp => "bp",
            Algo::Abc => "abc",
            Algo::Pso => "pso",
            Algo::De => "de",
        }
    }

    /// The metaheuristic engine, unless this is the gradient baseline.
    pub fn engine(self) -> Option<Engine> {
        match self {
            Algo::Bp => None,
            Algo::Abc => Some(Engine::Abc),
            Algo::Pso => Some(Engine::Pso),
            Algo::De => Some(Engine::De),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Everything one experiment cell needs.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dataset: DatasetName,
    pub algo: Algo,
    pub kind: TransferKind,
    pub hidden: usize,
    pub folds: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig<f64>,
    pub bp: BpConfig<f64>,
    pub bp_restarts: usize,
    /// Record the per-fold best-cost traces (metaheuristics only).
    pub collect_traces: bool,
    /// Keep the trained per-fold networks.
    pub keep_models: bool,
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetName, algo: Algo, kind: TransferKind) -> Self {
        ExperimentConfig {
            dataset,
            algo,
            kind,
            hidden: 5,
            folds: 10,
            seed: 42,
            optimizer: OptimizerConfig::default(),
            bp: BpConfig::default(),
            bp_restarts: 10,
            collect_traces: false,
            keep_models: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algo == Algo::Bp && !self.kind.is_fixed() {
            return Err(Error::Config(format!(
                "bp only supports the fixed transfer functions, not `{}`",
                self.kind
            )));
        }
        if self.hidden == 0 {
            return Err(Error::Config("hidden layer size must be at least 1".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config("need at least 2 folds".into()));
        }
        if self.algo == Algo::Bp {
            if self.bp_restarts == 0 {
                return Err(Error::Config("bp needs at least 1 restart".into()));
            }
            self.bp.validate()?;
        } else {
            self.optimizer.validate()?;
        }
        Ok(())
    }
}

/// Per-fold accuracies plus their mean and population variance.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    /// One best-cost trace per fold when requested, empty otherwise.
    pub traces: Vec<Vec<f64>>,
    /// One trained network per fold when requested, empty otherwise.
    pub models: Vec<Network<f64>>,
}

/// Mean squared error of the network outputs against one-hot targets,
/// averaged over samples and output nodes. This is the cost the
/// metaheuristics minimize.
pub fn mse_cost<F: Scalar>(net: &Network<F>, data: &Samples<F>) -> F {
    let mut acc = F::zero();
    for (input, target) in data.inputs.iter().zip(&data.targets) {
        let y = net.forward(input).expect("samples match the topology");
        for (yk, tk) in y.iter().zip(target) {
            let d = *yk - *tk;
            acc += d * d;
        }
    }
    acc / F::from_f64((data.len() * data.class_count) as f64)
}

/// Fraction of samples whose strongest output matches the label.
pub fn accuracy<F: Scalar>(net: &Network<F>, data: &Samples<F>) -> f64 {
    let correct = data
        .inputs
        .iter()
        .zip(&data.labels)
        .filter(|(input, &label)| {
            net.predict_class(input).expect("samples match the topology") == label
        })
        .count();
    correct as f64 / data.len() as f64
}

struct FoldOutcome {
    accuracy: f64,
    trace: Option<Vec<f64>>,
    model: Option<Network<f64>>,
}

/// Runs one experiment cell: `folds`-fold cross-validation of the
/// configured algorithm on the dataset.
pub fn run_experiment(config: &ExperimentConfig, dataset: &Dataset<f64>) -> Result<ExperimentResult> {
    config.validate()?;
    let plan = stratified_folds(dataset, config.folds, derive_seed(config.seed, &[TAG_FOLD_PLAN]))?;

    let outcomes: Vec<FoldOutcome> = (0..config.folds)
        .into_par_iter()
        .map(|fold| run_fold(config, dataset, &plan, fold))
        .collect::<Result<_>>()?;

    let fold_accuracies: Vec<f64> = outcomes.iter().map(|o| o.accuracy).collect();
    let mean = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
    let variance = fold_accuracies
        .iter()
        .map(|a| (a - mean) * (a - mean))
        .sum::<f64>()
        / fold_accuracies.len() as f64;
    Ok(ExperimentResult {
        fold_accuracies,
        mean,
        variance,
        traces: outcomes.iter().filter_map(|o| o.trace.clone()).collect(),
        models: outcomes.into_iter().filter_map(|o| o.model).collect(),
    })
}

fn run_fold(
    config: &ExperimentConfig,
    dataset: &Dataset<f64>,
    plan: &FoldPlan,
    fold: usize,
) -> Result<FoldOutcome> {
    let train_idx = plan.train_indices(fold);
    let test_idx = plan.test_indices(fold);
    let scaler = Scaler::fit(dataset, &train_idx);
    let train = Samples::gather(dataset, &train_idx, &scaler);
    let test = Samples::gather(dataset, &test_idx, &scaler);

    let topology = NetworkTopology::new(dataset.n_features(), config.hidden, dataset.class_count)?;
    let layout = GenotypeLayout::new(topology, config.kind);
    let bounds = GeneBounds::uniform(layout.total(), SEARCH_SPACE.0, SEARCH_SPACE.1)?;
    let fold_seed = derive_seed(config.seed, &[TAG_FOLD_RUN, fold as u64]);

    match config.algo.engine() {
        Some(engine) => {
            let cost = |genes: &[f64]| mse_cost(&layout.decode(genes), &train);
            let run = optimize(engine, &config.optimizer, &bounds, cost, fold_seed)?;
            let net = layout.decode(&run.best_genes);
            Ok(FoldOutcome {
                accuracy: accuracy(&net, &test),
                trace: config.collect_traces.then_some(run.trace),
                model: config.keep_models.then_some(net),
            })
        }
        None => {
            // Gradient baseline: the restart budget plays the role of the
            // population; each restart re-initializes inside the search
            // space and the best held-out accuracy is reported.
            let mut best: Option<(f64, Network<f64>)> = None;
            for restart in 0..config.bp_restarts {
                let restart_seed =
                    derive_seed(config.seed, &[TAG_FOLD_RUN, fold as u64, TAG_RESTART, restart as u64]);
                let mut rng = Rng::from_seed(restart_seed);
                let init = Genotype::random(layout, &bounds, &mut rng).decode();
                let net = backprop::train(init, &train, &config.bp, &mut rng)?;
                let acc = accuracy(&net, &test);
                if best.as_ref().is_none_or(|(b, _)| acc > *b) {
                    best = Some((acc, net));
                }
            }
            let (acc, net) = best.expect("at least one restart");
            Ok(FoldOutcome {
                accuracy: acc,
                trace: None,
                model: config.keep_models.then_some(net),
            })
        }
    }
}

/// Mean/variance pair for one grid cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub variance: f64,
}

impl From<&ExperimentResult> for Summary {
    fn from(r: &ExperimentResult) -> Self {
        Summary {
            mean: r.mean,
            variance: r.variance,
        }
    }
}

/// Which cells a grid run covers, plus the shared run settings.
#[derive(Clone, Debug)]
pub struct GridPlan {
    pub datasets: Vec<DatasetName>,
    pub algos: Vec<Algo>,
    pub kinds: Vec<TransferKind>,
    /// Template for per-cell settings; dataset/algo/kind are overwritten.
    pub base: ExperimentConfig,
}

impl Default for GridPlan {
    fn default() -> Self {
        GridPlan {
            datasets: DatasetName::ALL.to_vec(),
            algos: Algo::ALL.to_vec(),
            kinds: TransferKind::ALL.to_vec(),
            base: ExperimentConfig::new(DatasetName::Iris, Algo::Abc, TransferKind::SigFix),
        }
    }
}

/// One dataset's metaheuristic table: rows are transfer functions,
/// column pairs are algorithms.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetTable {
    pub dataset: DatasetName,
    pub algos: Vec<Algo>,
    pub rows: Vec<(TransferKind, Vec<Summary>)>,
}

/// The gradient-baseline table: rows are the fixed transfer functions,
/// column pairs are datasets.
#[derive(Clone, Debug, PartialEq)]
pub struct BpTable {
    pub datasets: Vec<DatasetName>,
    pub rows: Vec<(TransferKind, Vec<Summary>)>,
}

/// All tables produced by a grid run.
#[derive(Clone, Debug, PartialEq)]
pub struct GridResults {
    pub tables: Vec<DatasetTable>,
    pub bp: Option<BpTable>,
}

/// Runs every requested (dataset, transfer function, algorithm) cell.
///
/// `load` maps a dataset name to its loaded samples, so callers control
/// where files come from.
pub fn run_grid(
    plan: &GridPlan,
    load: impl Fn(DatasetName) -> Result<Dataset<f64>>,
) -> Result<GridResults> {
    let meta_algos: Vec<Algo> = plan.algos.iter().copied().filter(|a| *a != Algo::Bp).collect();
    let bp_kinds: Vec<TransferKind> = if plan.algos.contains(&Algo::Bp) {
        plan.kinds.iter().copied().filter(|k| k.is_fixed()).collect()
    } else {
        Vec::new()
    };

    let mut tables = Vec::new();
    let mut bp_rows: Vec<(TransferKind, Vec<Summary>)> =
        bp_kinds.iter().map(|k| (*k, Vec::new())).collect();

    for &dataset_name in &plan.datasets {
        let dataset = load(dataset_name)?;
        if !meta_algos.is_empty() {
            let mut rows = Vec::with_capacity(plan.kinds.len());
            for &kind in &plan.kinds {
                let mut cells = Vec::with_capacity(meta_algos.len());
                for &algo in &meta_algos {
                    let result = run_experiment(&cell_config(plan, dataset_name, algo, kind), &dataset)
                        .map_err(|e| {
                            Error::Config(format!("cell {dataset_name}/{kind}/{algo}: {e}"))
                        })?;
                    cells.push(Summary::from(&result));
                }
                rows.push((kind, cells));
            }
            tables.push(DatasetTable {
                dataset: dataset_name,
                algos: meta_algos.clone(),
                rows,
            });
        }
        for (kind, cells) in bp_rows.iter_mut() {
            let result = run_experiment(&cell_config(plan, dataset_name, Algo::Bp, *kind), &dataset)
                .map_err(|e| Error::Config(format!("cell {dataset_name}/{kind}/bp: {e}")))?;
            cells.push(Summary::from(&result));
        }
    }

    let bp = (!bp_rows.is_empty()).then_some(BpTable {
        datasets: plan.datasets.clone(),
        rows: bp_rows,
    });
    Ok(GridResults { tables, bp })
}

fn cell_config(
    plan: &GridPlan,
    dataset: DatasetName,
    algo: Algo,
    kind: TransferKind,
) -> ExperimentConfig {
    let mut config = plan.base.clone();
    config.dataset = dataset;
    config.algo = algo;
    config.kind = kind;
    config.collect_traces = false;
    config.keep_models = false;
    config
}

impl DatasetTable {
    /// Full-precision CSV; values round-trip through parsing exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("function");
        for algo in &self.algos {
            out.push_str(&format!(",{algo}_mean,{algo}_var"));
        }
        out.push('\n');
        for (kind, cells) in &self.rows {
            out.push_str(kind.name());
            for cell in cells {
                out.push_str(&format!(",{},{}", cell.mean, cell.variance));
            }
            out.push('\n');
        }
        out
    }

    /// Three-decimal markdown for human eyes.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {} (10-fold cross-validation accuracy)\n\n", self.dataset);
        out.push_str("| Function |");
        for algo in &self.algos {
            out.push_str(&format!(" {} mean | {} var |", algo, algo));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in &self.algos {
            out.push_str("---|---|");
        }
        out.push('\n');
        for (kind, cells) in &self.rows {
            out.push_str(&format!("| {} |", kind.name()));
            for cell in cells {
                out.push_str(&format!(" {:.3} | {:.3} |", cell.mean, cell.variance));
            }
            out.push('\n');
        }
        out
    }
}

impl BpTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("function");
        for ds in &self.datasets {
            out.push_str(&format!(",{ds}_mean,{ds}_var"));
        }
        out.push('\n');
        for (kind, cells) in &self.rows {
            out.push_str(kind.name());
            for cell in cells {
                out.push_str(&format!(",{},{}", cell.mean, cell.variance));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Backpropagation baseline (10-fold cross-validation accuracy)\n\n");
        out.push_str("| Function |");
        for ds in &self.datasets {
            out.push_str(&format!(" {} mean | {} var |", ds, ds));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in &self.datasets {
            out.push_str("---|---|");
        }
        out.push('\n');
        for (kind, cells) in &self.rows {
            out.push_str(&format!("| {} |", kind.name()));
            for cell in cells {
                out.push_str(&format!(" {:.3} | {:.3} |", cell.mean, cell.variance));
            }
            out.push('\n');
        }
        out
    }
}

impl GridResults {
    /// Writes `<dataset>.csv`/`<dataset>.md` per dataset plus
    /// `bp.csv`/`bp.md`, returning the paths written.
    pub fn write_to(&self, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let out_dir = out_dir.as_ref();
        std::fs::create_dir_all(out_dir)?;
        let mut written = Vec::new();
        let mut emit = |name: String, contents: String| -> Result<()> {
            let path = out_dir.join(name);
            std::fs::write(&path, contents)?;
            written.push(path);
            Ok(())
        };
        for table in &self.tables {
            emit(format!("{}.csv", table.dataset), table.to_csv())?;
            emit(format!("{}.md", table.dataset), table.to_markdown())?;
        }
        if let Some(bp) = &self.bp {
            emit("bp.csv".into(), bp.to_csv())?;
            emit("bp.md".into(), bp.to_markdown())?;
        }
        Ok(written)
    }
}

/// Writes one best-cost trace as `iteration,best_cost` CSV.
pub fn write_trace(path: impl AsRef<Path>, trace: &[f64]) -> Result<()> {
    let mut out = String::from("iteration,best_cost\n");
    for (i, cost) in trace.iter().enumerate() {
        out.push_str(&format!("{i},{cost}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;

    fn tiny_dataset() -> Dataset<f64> {
        // Two well-separated classes in 2D, 12 samples each.
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..12 {
            let t = i as f64 * 0.02;
            features.push(vec![0.1 + t, 0.15 + t]);
            labels.push(0);
            features.push(vec![0.8 + t, 0.85 + t]);
            labels.push(1);
        }
        Dataset {
            name: "toy".into(),
            features,
            labels,
            class_count: 2,
        }
    }

    fn smoke_config(algo: Algo, kind: TransferKind) -> ExperimentConfig {
        let mut config = ExperimentConfig::new(DatasetName::Iris, algo, kind);
        config.folds = 3;
        config.hidden = 3;
        config.optimizer.population = 6;
        config.optimizer.iterations = 30;
        config.bp.epochs = 30;
        config.bp_restarts = 2;
        config
    }

    #[test]
    fn bp_rejects_adaptive_transfer_functions() {
        let config = smoke_config(Algo::Bp, TransferKind::Gaussian);
        let e = run_experiment(&config, &tiny_dataset()).unwrap_err();
        assert!(e.to_string().contains("fixed transfer functions"), "{e}");
    }

    #[test]
    fn experiments_are_seed_deterministic() {
        let config = smoke_config(Algo::Abc, TransferKind::TanhAdp);
        let ds = tiny_dataset();
        let a = run_experiment(&config, &ds).unwrap();
        let b = run_experiment(&config, &ds).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_and_variance_aggregate_the_folds() {
        let config = smoke_config(Algo::De, TransferKind::SigFix);
        let r = run_experiment(&config, &tiny_dataset()).unwrap();
        assert_eq!(r.fold_accuracies.len(), 3);
        let mean = r.fold_accuracies.iter().sum::<f64>() / 3.0;
        assert!((r.mean - mean).abs() < 1e-15);
        assert!(r.variance >= 0.0);
        assert!(r.fold_accuracies.iter().all(|a| (0.0..=1.0).contains(a)));
    }

    #[test]
    fn traces_and_models_are_collected_on_request() {
        let mut config = smoke_config(Algo::Pso, TransferKind::SigAdp);
        config.collect_traces = true;
        config.keep_models = true;
        let r = run_experiment(&config, &tiny_dataset()).unwrap();
        assert_eq!(r.traces.len(), 3);
        assert_eq!(r.models.len(), 3);
        assert!(r.traces.iter().all(|t| t.len() == 31));
    }

    #[test]
    fn a_trained_cell_beats_chance_on_the_toy_problem() {
        let config = smoke_config(Algo::Abc, TransferKind::SigFix);
        let r = run_experiment(&config, &tiny_dataset()).unwrap();
        assert!(r.mean > 0.6, "mean accuracy {}", r.mean);
    }

    #[test]
    fn mse_cost_is_zero_for_perfect_outputs() {
        let ds = tiny_dataset();
        let all: Vec<usize> = (0..ds.n_samples()).collect();
        let scaler = Scaler::fit(&ds, &all);
        let samples = Samples::gather(&ds, &all, &scaler);
        let mut net = Network::<f64>::zeroed(
            NetworkTopology::new(2, 2, 2).unwrap(),
            TransferKind::SigFix,
        );
        // Outputs are 0.5 everywhere: MSE = mean((0.5)^2) = 0.25.
        let cost = mse_cost(&net, &samples);
        assert!((cost - 0.25).abs() < 1e-12);
        net.output_biases = vec![30.0, -30.0];
        // Now outputs saturate to (0, 1): every sample of class 1 is
        // predicted perfectly, class 0 maximally wrong.
        let acc = accuracy(&net, &samples);
        assert!((acc - 0.5).abs() < 1e-12);
    }

    #[test]
    fn grid_emits_one_table_per_dataset_plus_bp() {
        let plan = GridPlan {
            datasets: vec![DatasetName::Iris],
            algos: vec![Algo::Abc, Algo::Bp],
            kinds: vec![TransferKind::SigFix, TransferKind::Beta],
            base: smoke_config(Algo::Abc, TransferKind::SigFix),
        };
        let results = run_grid(&plan, |_| Ok(tiny_dataset())).unwrap();
        assert_eq!(results.tables.len(), 1);
        let table = &results.tables[0];
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.algos, vec![Algo::Abc]);
        let bp = results.bp.as_ref().unwrap();
        // Only the fixed kind is eligible for bp.
        assert_eq!(bp.rows.len(), 1);
        assert_eq!(bp.rows[0].0, TransferKind::SigFix);
    }

    #[test]
    fn csv_round_trips_exactly() {
        let plan = GridPlan {
            datasets: vec![DatasetName::Iris],
            algos: vec![Algo::De],
            kinds: vec![TransferKind::TanhFix],
            base: smoke_config(Algo::De, TransferKind::TanhFix),
        };
        let results = run_grid(&plan, |_| Ok(tiny_dataset())).unwrap();
        let table = &results.tables[0];
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "function,de_mean,de_var");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "tanhfix");
        assert_eq!(row[1].parse::<f64>().unwrap(), table.rows[0].1[0].mean);
        assert_eq!(row[2].parse::<f64>().unwrap(), table.rows[0].1[0].variance);
    }

    #[test]
    fn singleton_grid_produces_one_row() {
        let plan = GridPlan {
            datasets: vec![DatasetName::Iris],
            algos: vec![Algo::Pso],
            kinds: vec![TransferKind::Gaussian],
            base: smoke_config(Algo::Pso, TransferKind::Gaussian),
        };
        let results = run_grid(&plan, |_| Ok(tiny_dataset())).unwrap();
        assert_eq!(results.tables[0].rows.len(), 1);
        assert!(results.bp.is_none());
    }

    #[test]
    fn grid_aborts_with_cell_context_on_failure() {
        let plan = GridPlan {
            datasets: vec![DatasetName::Wine],
            algos: vec![Algo::Abc],
            kinds: vec![TransferKind::Beta],
            base: smoke_config(Algo::Abc, TransferKind::Beta),
        };
        let e = run_grid(&plan, |_| {
            Err(Error::Config("missing file".into()))
        })
        .unwrap_err();
        assert!(e.to_string().contains("missing file"), "{e}");
    }
}
