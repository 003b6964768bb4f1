//! Dataset ingestion, min-max scaling, and stratified k-fold planning.
//!
//! Three UCI column layouts are supported (see the repo README for the
//! exact formats):
//!
//! * `iris`: four numeric features, then the species label
//! * `wdbc`: record id (ignored), `M`/`B` label, thirty numeric features
//! * `wine`: leading class column `1`/`2`/`3`, thirteen numeric features

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;

/// The three benchmark classification problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetName {
    Iris,
    Wdbc,
    Wine,
}

impl DatasetName {
    pub const ALL: [DatasetName; 3] = [DatasetName::Iris, DatasetName::Wdbc, DatasetName::Wine];

    pub fn name(self) -> &'static str {
        match self {
            DatasetName::Iris => "iris",
            DatasetName::Wdbc => "wdbc",
            DatasetName::Wine => "wine",
        }
    }

    /// Conventional file name inside a data directory.
    pub fn file_name(self) -> &'static str {
        match self {
            DatasetName::Iris => "iris.data",
            DatasetName::Wdbc => "wdbc.data",
            DatasetName::Wine => "wine.data",
        }
    }

    pub fn n_features(self) -> usize {
        match self {
            DatasetName::Iris => 4,
            DatasetName::Wdbc => 30,
            DatasetName::Wine => 13,
        }
    }

    pub fn class_count(self) -> usize {
        match self {
            DatasetName::Iris | DatasetName::Wine => 3,
            DatasetName::Wdbc => 2,
        }
    }
}

impl std::fmt::Display for DatasetName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DatasetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DatasetName::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown dataset `{s}`")))
    }
}

/// Labeled samples: one feature row and one class index per sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<F> {
    pub name: String,
    pub features: Vec<Vec<F>>,
    pub labels: Vec<usize>,
    pub class_count: usize,
}

impl<F: Scalar> Dataset<F> {
    pub fn n_samples(&self) -> usize {
        self.features.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }
}

/// Loads one of the three UCI layouts from disk.
pub fn load_csv<F: Scalar>(path: impl AsRef<Path>, schema: DatasetName) -> Result<Dataset<F>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, schema, &path.display().to_string())
}

fn parse_csv<F: Scalar>(text: &str, schema: DatasetName, path: &str) -> Result<Dataset<F>> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_string(),
        line,
        message,
    };
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let expected = match schema {
            DatasetName::Iris => 5,
            DatasetName::Wdbc => 32,
            DatasetName::Wine => 14,
        };
        if fields.len() != expected {
            return Err(err(
                line_no,
                format!("expected {expected} columns, got {}", fields.len()),
            ));
        }
        let (label, value_fields) = match schema {
            DatasetName::Iris => {
                let label = match fields[4] {
                    "Iris-setosa" => 0,
                    "Iris-versicolor" => 1,
                    "Iris-virginica" => 2,
                    other => return Err(err(line_no, format!("unknown label `{other}`"))),
                };
                (label, &fields[0..4])
            }
            DatasetName::Wdbc => {
                let label = match fields[1] {
                    "B" => 0,
                    "M" => 1,
                    other => return Err(err(line_no, format!("unknown label `{other}`"))),
                };
                (label, &fields[2..32])
            }
            DatasetName::Wine => {
                let label = match fields[0] {
                    "1" => 0,
                    "2" => 1,
                    "3" => 2,
                    other => return Err(err(line_no, format!("unknown label `{other}`"))),
                };
                (label, &fields[1..14])
            }
        };
        let mut row = Vec::with_capacity(value_fields.len());
        for field in value_fields {
            let v: f64 = field
                .parse()
                .map_err(|_| err(line_no, format!("bad number `{field}`")))?;
            if !v.is_finite() {
                return Err(err(line_no, format!("non-finite value `{field}`")));
            }
            row.push(F::from_f64(v));
        }
        features.push(row);
        labels.push(label);
    }
    if features.is_empty() {
        return Err(err(0, "no samples found".into()));
    }
    Ok(Dataset {
        name: schema.name().to_string(),
        features,
        labels,
        class_count: schema.class_count(),
    })
}

/// Per-feature min-max ranges fitted on a subset of samples.
///
/// Transformed features land in [0, 1] on the fitting subset; constant
/// features map to 0 by convention.
#[derive(Clone, Debug)]
pub struct Scaler<F> {
    mins: Vec<F>,
    ranges: Vec<F>,
}

impl<F: Scalar> Scaler<F> {
    /// Fits on the given sample indices (typically the training folds).
    pub fn fit(dataset: &Dataset<F>, indices: &[usize]) -> Scaler<F> {
        assert!(!indices.is_empty(), "cannot fit a scaler on zero samples");
        let d = dataset.n_features();
        let mut mins = vec![F::infinity(); d];
        let mut maxs = vec![F::neg_infinity(); d];
        for &i in indices {
            for (j, v) in dataset.features[i].iter().enumerate() {
                mins[j] = mins[j].min(*v);
                maxs[j] = maxs[j].max(*v);
            }
        }
        let ranges = mins.iter().zip(&maxs).map(|(lo, hi)| *hi - *lo).collect();
        Scaler { mins, ranges }
    }

    pub fn transform_row(&self, row: &[F]) -> Vec<F> {
        row.iter()
            .enumerate()
            .map(|(j, v)| {
                if self.ranges[j] == F::zero() {
                    F::zero()
                } else {
                    (*v - self.mins[j]) / self.ranges[j]
                }
            })
            .collect()
    }
}

/// Min-max scales every feature to [0, 1] using statistics from the
/// whole dataset. Per-fold runs fit a [`Scaler`] on the training folds
/// instead, so no test-fold statistics leak into training.
pub fn normalize<F: Scalar>(dataset: &Dataset<F>) -> Dataset<F> {
    let all: Vec<usize> = (0..dataset.n_samples()).collect();
    let scaler = Scaler::fit(dataset, &all);
    Dataset {
        name: dataset.name.clone(),
        features: dataset
            .features
            .iter()
            .map(|row| scaler.transform_row(row))
            .collect(),
        labels: dataset.labels.clone(),
        class_count: dataset.class_count,
    }
}

/// A k-fold partition: `assignments[i]` is the fold holding sample `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }
}

/// Stratified fold assignment: within each class the (seeded-shuffled)
/// samples are dealt round-robin, so per-class fold sizes differ by at
/// most one.
pub fn stratified_folds<F: Scalar>(
    dataset: &Dataset<F>,
    k: usize,
    seed: u64,
) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Config("need at least 2 folds".into()));
    }
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); dataset.class_count];
    for (i, &label) in dataset.labels.iter().enumerate() {
        per_class[label].push(i);
    }
    for (class, members) in per_class.iter().enumerate() {
        if members.len() < k {
            return Err(Error::Config(format!(
                "class {class} has {} samples, fewer than {k} folds",
                members.len()
            )));
        }
    }
    let mut rng = Rng::from_seed(seed);
    let mut assignments = vec![0usize; dataset.n_samples()];
    for members in &mut per_class {
        rng.shuffle(members);
        for (position, &sample) in members.iter().enumerate() {
            assignments[sample] = position % k;
        }
    }
    Ok(FoldPlan { k, assignments })
}

/// Feature rows paired with one-hot targets, ready for training.
#[derive(Clone, Debug)]
pub struct Samples<F> {
    pub inputs: Vec<Vec<F>>,
    pub targets: Vec<Vec<F>>,
    pub labels: Vec<usize>,
    pub class_count: usize,
}

impl<F: Scalar> Samples<F> {
    /// Gathers and scales the given samples, one-hot encoding labels.
    pub fn gather(dataset: &Dataset<F>, indices: &[usize], scaler: &Scaler<F>) -> Samples<F> {
        let mut inputs = Vec::with_capacity(indices.len());
        let mut targets = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            inputs.push(scaler.transform_row(&dataset.features[i]));
            let mut one_hot = vec![F::zero(); dataset.class_count];
            one_hot[dataset.labels[i]] = F::one();
            targets.push(one_hot);
            labels.push(dataset.labels[i]);
        }
        Samples {
            inputs,
            targets,
            labels,
            class_count: dataset.class_count,
        }
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}
