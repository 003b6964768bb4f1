//! Flat key=value config files for `grid`, mirroring the CLI flags.
//!
//! Lines look like `seed = 42`; `#` starts a comment. Keys use the long
//! flag names. Flags given on the command line override file values.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use evonet::data::DatasetName;
use evonet::experiment::{Algo, ExperimentConfig};
use evonet::transfer::TransferKind;
use evonet::{Error, Result};

use crate::GridArgs;

/// Raw key/value pairs from a config file.
#[derive(Default)]
pub struct GridFile {
    entries: Vec<(String, String)>,
}

impl GridFile {
    pub fn load(path: &Path) -> Result<GridFile> {
        let text = std::fs::read_to_string(path)?;
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(GridFile { entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| Error::Config(format!("config key `{key}`: {e}"))),
        }
    }

    fn parse_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| Error::Config(format!("config key `{key}`: {e}")))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

/// Fully resolved grid settings after file/flag merging.
pub struct ResolvedGrid {
    pub datasets: Vec<DatasetName>,
    pub algos: Vec<Algo>,
    pub kinds: Vec<TransferKind>,
    pub base: ExperimentConfig,
    pub data_dir: PathBuf,
    pub out_dir: PathBuf,
    pub jobs: Option<usize>,
}

/// Applies precedence: CLI flag if present, else file value, else the
/// flag default.
pub fn merge(file: GridFile, args: &GridArgs) -> Result<ResolvedGrid> {
    // Scalars: a flag that differs from its default was set explicitly.
    // clap has no cheap "was provided" probe for flattened args, so the
    // file only fills keys the command line left at their defaults.
    let run = &args.run;
    let defaults = crate::RunArgs::defaults();

    macro_rules! pick {
        ($field:ident, $key:literal) => {
            if run.$field != defaults.$field {
                run.$field.clone()
            } else {
                file.parse($key)?.unwrap_or_else(|| defaults.$field.clone())
            }
        };
    }

    let datasets = match &args.datasets {
        Some(list) => list.clone(),
        None => file
            .parse_list("datasets")?
            .unwrap_or_else(|| DatasetName::ALL.to_vec()),
    };
    let algos = match &args.algos {
        Some(list) => list.clone(),
        None => file.parse_list("algos")?.unwrap_or_else(|| Algo::ALL.to_vec()),
    };
    let kinds = match &args.tfs {
        Some(list) => list.clone(),
        None => file
            .parse_list("tfs")?
            .unwrap_or_else(|| TransferKind::ALL.to_vec()),
    };

    let resolved_run = crate::RunArgs {
        hidden: pick!(hidden, "hidden"),
        pop: pick!(pop, "pop"),
        iters: pick!(iters, "iters"),
        seed: pick!(seed, "seed"),
        folds: pick!(folds, "folds"),
        trial_limit: pick!(trial_limit, "trial-limit"),
        c1: pick!(c1, "c1"),
        c2: pick!(c2, "c2"),
        c0_max: pick!(c0_max, "c0-max"),
        c0_min: pick!(c0_min, "c0-min"),
        cr: pick!(cr, "cr"),
        f: pick!(f, "f"),
        de_variant: pick!(de_variant, "de-variant"),
        eta: pick!(eta, "eta"),
        momentum: pick!(momentum, "momentum"),
        bp_restarts: pick!(bp_restarts, "bp-restarts"),
        data_dir: pick!(data_dir, "data-dir"),
        jobs: match run.jobs {
            Some(n) => Some(n),
            None => file.parse("jobs")?,
        },
    };

    let out_dir = if args.out_dir != PathBuf::from("results") {
        args.out_dir.clone()
    } else {
        file.parse("out-dir")?.unwrap_or_else(|| args.out_dir.clone())
    };

    let base = crate::experiment_config(
        &resolved_run,
        datasets.first().copied().unwrap_or(DatasetName::Iris),
        Algo::Abc,
        TransferKind::SigFix,
    );

    Ok(ResolvedGrid {
        datasets,
        algos,
        kinds,
        base,
        data_dir: resolved_run.data_dir.clone(),
        out_dir,
        jobs: resolved_run.jobs,
    })
}

impl crate::RunArgs {
    /// The flag defaults, used to detect explicitly set flags.
    pub fn defaults() -> Self {
        crate::RunArgs {
            hidden: 5,
            pop: 10,
            iters: 1000,
            seed: 42,
            folds: 10,
            trial_limit: 100,
            c1: 2.0,
            c2: 2.0,
            c0_max: 1.0,
            c0_min: 0.0,
            cr: 0.9,
            f: 0.7,
            de_variant: evonet::metaheuristics::DeVariant::RandToBest1,
            eta: 0.5,
            momentum: 0.1,
            bp_restarts: 10,
            data_dir: PathBuf::from("data"),
            jobs: None,
        }
    }
}
