//! Differential evolution with binomial crossover.

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;

use super::{fittest, Candidate, DeConfig, DeVariant};

/// One mutant gene.
///
/// * rand-to-best/1: `a + F (best - a) + F (b - c)`
/// * rand/1: `a + F (b - c)`
#[inline]
pub fn de_mutant<F: Scalar>(variant: DeVariant, a: F, b: F, c: F, best: F, weight: F) -> F {
    match variant {
        DeVariant::RandToBest1 => a + weight * (best - a) + weight * (b - c),
        DeVariant::Rand1 => a + weight * (b - c),
    }
}

/// One generation: every target is challenged by a trial built from
/// three distinct partners via binomial crossover (mutant gene where
/// `r < CR` or at the forced index, target gene otherwise), with greedy
/// replacement. Targets and partners are read from the population as it
/// stood at the start of the generation.
pub fn de_step<F: Scalar>(
    population: &mut [Candidate<F>],
    config: &DeConfig<F>,
    rng: &mut Rng,
    cost: &mut dyn FnMut(&[F]) -> F,
) -> Result<()> {
    let size = population.len();
    if size < 4 {
        return Err(Error::Config(
            "differential evolution needs a population of at least 4".into(),
        ));
    }
    let dim = population[0].genes.len();
    let best = population[fittest(population)?].genes.clone();
    let generation: Vec<Vec<F>> = population.iter().map(|c| c.genes.clone()).collect();

    for target in 0..size {
        let a = rng.index_excluding(size, target);
        let b = loop {
            let i = rng.index_excluding(size, target);
            if i != a {
                break i;
            }
        };
        let c = loop {
            let i = rng.index_excluding(size, target);
            if i != a && i != b {
                break i;
            }
        };
        let forced = rng.index(dim);
        let mut trial = generation[target].clone();
        for d in 0..dim {
            let r = F::from_f64(rng.next_f64());
            if r < config.crossover || d == forced {
                trial[d] = de_mutant(
                    config.variant,
                    generation[a][d],
                    generation[b][d],
                    generation[c][d],
                    best[d],
                    config.weight,
                );
            }
        }
        let trial_cost = cost(&trial);
        let incumbent = &mut population[target];
        if trial_cost <= incumbent.cost {
            incumbent.genes = trial;
            incumbent.cost = trial_cost;
        }
    }
    Ok(())
}
