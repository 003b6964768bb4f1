//! Feed-forward neural networks whose connection weights and per-node
//! transfer-function parameters are optimized *together* by population
//! metaheuristics — artificial bee colony, particle swarm, and
//! differential evolution — with an online backpropagation baseline for
//! comparison.
//!
//! A network is encoded as a flat genotype (weights, biases, transfer
//! parameters), any engine minimizes the training-fold mean squared
//! error over those genes, and the experiment harness scores 10-fold
//! cross-validated classification accuracy on the Iris, WDBC, and Wine
//! datasets.
//!
//! The numeric core is generic over the scalar type ([`Scalar`], either
//! `f32` or `f64`); concrete aliases live at the crate root. Runs are
//! deterministic: a seeded MT19937 stream drives every random draw.
//!
//! ```
//! use evonet::genotype::GeneBounds;
//! use evonet::metaheuristics::{optimize, Engine, OptimizerConfig};
//!
//! let mut config = OptimizerConfig::<f64>::default();
//! config.iterations = 200;
//! let bounds = GeneBounds::uniform(5, -1.5, 1.5).unwrap();
//! let sphere = |genes: &[f64]| genes.iter().map(|g| g * g).sum();
//! let run = optimize(Engine::Abc, &config, &bounds, sphere, 42).unwrap();
//! assert!(run.best_cost < 0.1);
//! ```

pub mod backprop;
pub mod data;
mod error;
pub mod experiment;
pub mod genotype;
pub mod metaheuristics;
pub mod network;
pub mod rng;
pub mod scalar;
pub mod transfer;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use genotype::{GeneBounds, Genotype, GenotypeLayout};
pub use metaheuristics::{Engine, OptimizerConfig, RunResult};
pub use network::{Network, NetworkTopology};
pub use transfer::{TransferKind, TransferSpec};

/// Single-precision aliases.
pub type Network32 = Network<f32>;
pub type Genotype32 = Genotype<f32>;
pub type TransferSpec32 = TransferSpec<f32>;
pub type GeneBounds32 = GeneBounds<f32>;
pub type OptimizerConfig32 = OptimizerConfig<f32>;
pub type RunResult32 = RunResult<f32>;

/// Double-precision aliases; the experiment harness runs at this
/// precision.
pub type Network64 = Network<f64>;
pub type Genotype64 = Genotype<f64>;
pub type TransferSpec64 = TransferSpec<f64>;
pub type GeneBounds64 = GeneBounds<f64>;
pub type OptimizerConfig64 = OptimizerConfig<f64>;
pub type RunResult64 = RunResult<f64>;
