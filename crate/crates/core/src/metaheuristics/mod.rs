//! Population metaheuristics over flat gene vectors: artificial bee
//! colony, particle swarm, and differential evolution behind one
//! elitist optimization loop.
//!
//! Cost is minimized. A run is fully determined by (engine, config,
//! bounds, cost function, seed): one MT19937 stream drives every draw,
//! and the best solution ever evaluated is tracked across iterations.

mod abc;
mod de;
mod pso;

pub use abc::abc_step;
pub use de::{de_mutant, de_step};
pub use pso::{inertia_weight, pso_step, velocity_update};

use crate::error::{Error, Result};
use crate::genotype::GeneBounds;
use crate::rng::Rng;
use crate::scalar::Scalar;

/// Selects the population engine for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Abc,
    Pso,
    De,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Abc => "abc",
            Engine::Pso => "pso",
            Engine::De => "de",
        }
    }
}

/// Artificial-bee-colony settings.
#[derive(Clone, Copy, Debug)]
pub struct AbcConfig {
    /// Stagnation count after which a food source is abandoned and
    /// redrawn uniformly inside the bounds.
    pub trial_limit: usize,
}

impl Default for AbcConfig {
    fn default() -> Self {
        AbcConfig { trial_limit: 100 }
    }
}

/// Particle-swarm settings: acceleration constants and the linearly
/// decaying inertia range.
#[derive(Clone, Copy, Debug)]
pub struct PsoConfig<F> {
    pub c1: F,
    pub c2: F,
    pub c0_max: F,
    pub c0_min: F,
}

impl<F: Scalar> Default for PsoConfig<F> {
    fn default() -> Self {
        PsoConfig {
            c1: F::from_f64(2.0),
            c2: F::from_f64(2.0),
            c0_max: F::one(),
            c0_min: F::zero(),
        }
    }
}

/// Which differential-evolution mutant to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DeVariant {
    /// `a + F (best - a) + F (b - c)`
    #[default]
    RandToBest1,
    /// `a + F (b - c)`
    Rand1,
}

impl DeVariant {
    pub fn name(self) -> &'static str {
        match self {
            DeVariant::RandToBest1 => "randtobest1",
            DeVariant::Rand1 => "rand1",
        }
    }
}

impl std::str::FromStr for DeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "randtobest1" => Ok(DeVariant::RandToBest1),
            "rand1" => Ok(DeVariant::Rand1),
            other => Err(Error::Config(format!("unknown DE variant `{other}`"))),
        }
    }
}

/// Differential-evolution settings.
#[derive(Clone, Copy, Debug)]
pub struct DeConfig<F> {
    /// Crossover rate CR in [0, 1].
    pub crossover: F,
    /// Differential weight F > 0.
    pub weight: F,
    pub variant: DeVariant,
}

impl<F: Scalar> Default for DeConfig<F> {
    fn default() -> Self {
        DeConfig {
            crossover: F::from_f64(0.9),
            weight: F::from_f64(0.7),
            variant: DeVariant::RandToBest1,
        }
    }
}

/// Shared run settings plus per-engine parameters. Defaults follow the
/// reference experiment setup: population 10, 1000 iterations,
/// trial limit 100, c1 = c2 = 2.0, c0 in [0, 1], CR = 0.9, F = 0.7.
#[derive(Clone, Copy, Debug)]
pub struct OptimizerConfig<F> {
    pub population: usize,
    pub iterations: usize,
    pub abc: AbcConfig,
    pub pso: PsoConfig<F>,
    pub de: DeConfig<F>,
}

impl<F: Scalar> Default for OptimizerConfig<F> {
    fn default() -> Self {
        OptimizerConfig {
            population: 10,
            iterations: 1000,
            abc: AbcConfig::default(),
            pso: PsoConfig::default(),
            de: DeConfig::default(),
        }
    }
}

impl<F: Scalar> OptimizerConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::Config(
                "population must be at least 4 (DE needs a target and 3 partners)".into(),
            ));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.abc.trial_limit == 0 {
            return Err(Error::Config("trial limit must be at least 1".into()));
        }
        let cr = self.de.crossover;
        if cr < F::zero() || cr > F::one() {
            return Err(Error::Config("CR must lie in [0, 1]".into()));
        }
        if self.de.weight <= F::zero() {
            return Err(Error::Config("F must be positive".into()));
        }
        Ok(())
    }
}

/// One population member with the engine state tacked on: the ABC
/// stagnation counter and the PSO velocity and personal best.
#[derive(Clone, Debug)]
pub struct Candidate<F> {
    pub genes: Vec<F>,
    pub cost: F,
    pub trials: usize,
    pub velocity: Vec<F>,
    pub best_genes: Vec<F>,
    pub best_cost: F,
}

impl<F: Scalar> Candidate<F> {
    pub fn new(genes: Vec<F>, cost: F) -> Self {
        let dim = genes.len();
        Candidate {
            best_genes: genes.clone(),
            genes,
            cost,
            trials: 0,
            velocity: vec![F::zero(); dim],
            best_cost: cost,
        }
    }
}

/// Index of the lowest-cost candidate; ties go to the lowest index.
pub fn fittest<F: Scalar>(population: &[Candidate<F>]) -> Result<usize> {
    if population.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut best = 0;
    for (i, c) in population.iter().enumerate().skip(1) {
        if c.cost < population[best].cost {
            best = i;
        }
    }
    Ok(best)
}

/// Outcome of one optimization run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult<F> {
    pub best_genes: Vec<F>,
    pub best_cost: F,
    /// Best-so-far cost after initialization and after each iteration;
    /// non-increasing by construction.
    pub trace: Vec<F>,
    pub seed: u64,
}

/// Wraps the cost function to track the best solution ever evaluated.
struct Tracker<'a, F> {
    cost: &'a mut dyn FnMut(&[F]) -> F,
    best_genes: Vec<F>,
    best_cost: F,
    evaluations: usize,
}

impl<F: Scalar> Tracker<'_, F> {
    fn eval(&mut self, genes: &[F]) -> F {
        let c = (self.cost)(genes);
        self.evaluations += 1;
        if c < self.best_cost {
            self.best_cost = c;
            self.best_genes.clear();
            self.best_genes.extend_from_slice(genes);
        }
        c
    }
}

/// Runs `engine` for the configured iteration budget and returns the
/// best-ever candidate.
pub fn optimize<F, C>(
    engine: Engine,
    config: &OptimizerConfig<F>,
    bounds: &GeneBounds<F>,
    cost: C,
    seed: u64,
) -> Result<RunResult<F>>
where
    F: Scalar,
    C: FnMut(&[F]) -> F,
{
    optimize_observed(engine, config, bounds, cost, seed, |_, _| {})
}

/// [`optimize`] with a hook called after initialization (iteration 0)
/// and after every engine iteration, for tracing and invariant checks.
pub fn optimize_observed<F, C, O>(
    engine: Engine,
    config: &OptimizerConfig<F>,
    bounds: &GeneBounds<F>,
    mut cost: C,
    seed: u64,
    mut observer: O,
) -> Result<RunResult<F>>
where
    F: Scalar,
    C: FnMut(&[F]) -> F,
    O: FnMut(usize, &[Candidate<F>]),
{
    config.validate()?;
    if bounds.is_empty() {
        return Err(Error::Config("at least one gene is required".into()));
    }
    let mut rng = Rng::from_seed(seed);
    let mut tracker = Tracker {
        cost: &mut cost,
        best_genes: Vec::new(),
        best_cost: F::infinity(),
        evaluations: 0,
    };

    let mut population: Vec<Candidate<F>> = (0..config.population)
        .map(|_| {
            let genes = bounds.sample(&mut rng);
            let c = tracker.eval(&genes);
            Candidate::new(genes, c)
        })
        .collect();

    let best = fittest(&population)?;
    let mut swarm_best = (population[best].genes.clone(), population[best].cost);

    let mut trace = Vec::with_capacity(config.iterations + 1);
    trace.push(tracker.best_cost);
    observer(0, &population);

    for iteration in 0..config.iterations {
        match engine {
            Engine::Abc => {
                let mut eval = |g: &[F]| tracker.eval(g);
                abc_step(
                    &mut population,
                    bounds,
                    config.abc.trial_limit,
                    &mut rng,
                    &mut eval,
                );
            }
            Engine::Pso => {
                let mut eval = |g: &[F]| tracker.eval(g);
                pso_step(
                    &mut population,
                    &mut swarm_best,
                    iteration,
                    config.iterations,
                    &config.pso,
                    &mut rng,
                    &mut eval,
                );
            }
            Engine::De => {
                let mut eval = |g: &[F]| tracker.eval(g);
                de_step(&mut population, &config.de, &mut rng, &mut eval)?;
            }
        }
        trace.push(tracker.best_cost);
        observer(iteration + 1, &population);
    }

    Ok(RunResult {
        best_genes: tracker.best_genes,
        best_cost: tracker.best_cost,
        trace,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(genes: &[f64]) -> f64 {
        genes.iter().map(|g| g * g).sum()
    }

    fn bounds10() -> GeneBounds<f64> {
        GeneBounds::uniform(10, -1.5, 1.5).unwrap()
    }

    fn table_config() -> OptimizerConfig<f64> {
        OptimizerConfig::default()
    }

    #[test]
    fn fittest_picks_minimum_and_breaks_ties_low() {
        let mk = |costs: &[f64]| -> Vec<Candidate<f64>> {
            costs.iter().map(|&c| Candidate::new(vec![0.0], c)).collect()
        };
        assert_eq!(fittest(&mk(&[3.0, 1.0, 2.0])).unwrap(), 1);
        assert_eq!(fittest(&mk(&[1.0, 1.0])).unwrap(), 0);
        assert_eq!(fittest(&mk(&[5.0])).unwrap(), 0);
        assert!(fittest::<f64>(&[]).is_err());
    }

    #[test]
    fn config_validation_catches_bad_settings() {
        let mut cfg = table_config();
        cfg.population = 3;
        assert!(cfg.validate().is_err());
        let mut cfg = table_config();
        cfg.iterations = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = table_config();
        cfg.de.crossover = 1.2;
        assert!(cfg.validate().is_err());
        let mut cfg = table_config();
        cfg.de.weight = 0.0;
        assert!(cfg.validate().is_err());
        assert!(table_config().validate().is_ok());
    }

    // Thresholds below were validated by preliminary runs; the sphere
    // optimum is 0 by construction.
    #[test]
    fn abc_converges_on_sphere() {
        let run = optimize(Engine::Abc, &table_config(), &bounds10(), sphere, 1).unwrap();
        assert!(run.best_cost < 1e-3, "cost = {}", run.best_cost);
    }

    #[test]
    fn pso_converges_on_sphere() {
        let run = optimize(Engine::Pso, &table_config(), &bounds10(), sphere, 1).unwrap();
        assert!(run.best_cost < 1e-2, "cost = {}", run.best_cost);
    }

    #[test]
    fn de_converges_on_sphere() {
        let run = optimize(Engine::De, &table_config(), &bounds10(), sphere, 1).unwrap();
        assert!(run.best_cost < 1e-2, "cost = {}", run.best_cost);
    }

    #[test]
    fn runs_are_bit_reproducible() {
        for engine in [Engine::Abc, Engine::Pso, Engine::De] {
            let mut cfg = table_config();
            cfg.iterations = 50;
            let a = optimize(engine, &cfg, &bounds10(), sphere, 77).unwrap();
            let b = optimize(engine, &cfg, &bounds10(), sphere, 77).unwrap();
            assert_eq!(a, b, "{engine:?}");
        }
    }

    #[test]
    fn trace_is_nonincreasing_and_matches_result() {
        for engine in [Engine::Abc, Engine::Pso, Engine::De] {
            let mut cfg = table_config();
            cfg.iterations = 100;
            let run = optimize(engine, &cfg, &bounds10(), sphere, 5).unwrap();
            assert_eq!(run.trace.len(), cfg.iterations + 1);
            for w in run.trace.windows(2) {
                assert!(w[1] <= w[0], "{engine:?}: trace increased");
            }
            assert_eq!(*run.trace.last().unwrap(), run.best_cost);
        }
    }

    #[test]
    fn best_ever_is_no_worse_than_any_evaluated_candidate() {
        for engine in [Engine::Abc, Engine::Pso, Engine::De] {
            let mut cfg = table_config();
            cfg.iterations = 40;
            let mut min_seen = f64::INFINITY;
            let run = optimize(
                engine,
                &cfg,
                &bounds10(),
                |g| {
                    let c = sphere(g);
                    if c < min_seen {
                        min_seen = c;
                    }
                    c
                },
                9,
            )
            .unwrap();
            assert_eq!(run.best_cost, min_seen, "{engine:?}");
        }
    }

    #[test]
    fn evaluation_budget_is_exact_per_engine() {
        // With an unreachable trial limit ABC performs no scout redraws:
        // population * (1 + 2 * iterations) evaluations. PSO and DE
        // evaluate population * (1 + iterations).
        let mut cfg = table_config();
        cfg.iterations = 25;
        cfg.abc.trial_limit = usize::MAX;
        for (engine, expected) in [
            (Engine::Abc, 10 * (1 + 2 * 25)),
            (Engine::Pso, 10 * (1 + 25)),
            (Engine::De, 10 * (1 + 25)),
        ] {
            let mut evals = 0usize;
            optimize(
                engine,
                &cfg,
                &bounds10(),
                |g| {
                    evals += 1;
                    sphere(g)
                },
                3,
            )
            .unwrap();
            assert_eq!(evals, expected, "{engine:?}");
        }
    }

    #[test]
    fn abc_scout_evaluations_stay_within_the_budget_bound() {
        let mut cfg = table_config();
        cfg.iterations = 50;
        cfg.abc.trial_limit = 2;
        let mut evals = 0usize;
        // A constant cost never improves, so trial counters climb and
        // scouts fire continually.
        optimize(Engine::Abc, &cfg, &bounds10(), |_| {
            evals += 1;
            1.0
        }, 3)
        .unwrap();
        let base = 10 * (1 + 2 * cfg.iterations);
        assert!(evals > base, "expected scout redraws, evals = {evals}");
        assert!(evals <= base + 10 * cfg.iterations, "evals = {evals}");
    }

    #[test]
    fn population_best_is_monotone_for_abc_and_de() {
        for engine in [Engine::Abc, Engine::De] {
            let mut cfg = table_config();
            cfg.iterations = 120;
            cfg.abc.trial_limit = 3; // force scouts into the picture
            let mut last = f64::INFINITY;
            optimize_observed(
                engine,
                &cfg,
                &bounds10(),
                sphere,
                21,
                |_, pop| {
                    let best = pop.iter().map(|c| c.cost).fold(f64::INFINITY, f64::min);
                    assert!(best <= last, "{engine:?}: population best got worse");
                    last = best;
                },
            )
            .unwrap();
        }
    }

    #[test]
    fn pso_swarm_and_personal_bests_are_monotone() {
        let mut cfg = table_config();
        cfg.iterations = 80;
        let mut last_personal: Vec<f64> = vec![f64::INFINITY; cfg.population];
        let mut last_swarm = f64::INFINITY;
        optimize_observed(
            Engine::Pso,
            &cfg,
            &bounds10(),
            sphere,
            8,
            |_, pop| {
                let swarm = pop.iter().map(|c| c.best_cost).fold(f64::INFINITY, f64::min);
                assert!(swarm <= last_swarm);
                last_swarm = swarm;
                for (c, last) in pop.iter().zip(last_personal.iter_mut()) {
                    assert!(c.best_cost <= *last, "personal best got worse");
                    *last = c.best_cost;
                }
            },
        )
        .unwrap();
    }

    #[test]
    fn rejects_empty_bounds() {
        let bounds = GeneBounds::<f64>::uniform(0, -1.0, 1.0).unwrap();
        assert!(optimize(Engine::Abc, &table_config(), &bounds, sphere, 1).is_err());
    }
}
