//! Artificial bee colony: employed, onlooker, and scout phases.

use crate::genotype::GeneBounds;
use crate::rng::Rng;
use crate::scalar::Scalar;

use super::{fittest, Candidate};

/// One neighbor move: `x_ij + phi (x_ij - x_kj)` with `phi` drawn
/// uniformly from (-1, 1).
#[inline]
pub(crate) fn neighbor_move<F: Scalar>(x_ij: F, x_kj: F, phi: F) -> F {
    x_ij + phi * (x_ij - x_kj)
}

/// One full colony iteration.
///
/// Employed phase: every food source proposes a one-dimension neighbor
/// move against a random partner and keeps it only if strictly better
/// (greedy selection; failures bump the stagnation counter). Onlooker
/// phase: the same move, with sources drawn in proportion to
/// `1 / (1 + cost)`. Scout phase: sources whose counter exceeds
/// `trial_limit` are redrawn uniformly inside the bounds; the current
/// population best is never abandoned, so the population best cost is
/// monotone.
pub fn abc_step<F: Scalar>(
    population: &mut [Candidate<F>],
    bounds: &GeneBounds<F>,
    trial_limit: usize,
    rng: &mut Rng,
    cost: &mut dyn FnMut(&[F]) -> F,
) {
    let size = population.len();
    if size < 2 {
        return;
    }

    // Employed bees: one trial per food source.
    for i in 0..size {
        try_neighbor_move(population, i, rng, cost);
    }

    // Onlooker bees: one trial each, roulette-selected by quality.
    let weights: Vec<F> = population.iter().map(|c| selection_weight(c.cost)).collect();
    let total: F = weights.iter().copied().sum();
    for _ in 0..size {
        let i = roulette(&weights, total, rng);
        try_neighbor_move(population, i, rng, cost);
    }

    // Scouts: abandon exhausted sources (but never the incumbent best).
    let best = fittest(population).expect("population is non-empty");
    for (i, candidate) in population.iter_mut().enumerate() {
        if i != best && candidate.trials > trial_limit {
            candidate.genes = bounds.sample(rng);
            candidate.cost = cost(&candidate.genes);
            candidate.trials = 0;
        }
    }
}

fn try_neighbor_move<F: Scalar>(
    population: &mut [Candidate<F>],
    i: usize,
    rng: &mut Rng,
    cost: &mut dyn FnMut(&[F]) -> F,
) {
    let size = population.len();
    let dim = population[i].genes.len();
    let k = rng.index_excluding(size, i);
    let j = rng.index(dim);
    let phi = rng.uniform(-F::one(), F::one());
    let mut trial = population[i].genes.clone();
    trial[j] = neighbor_move(population[i].genes[j], population[k].genes[j], phi);
    let trial_cost = cost(&trial);
    let incumbent = &mut population[i];
    if trial_cost < incumbent.cost {
        incumbent.genes = trial;
        incumbent.cost = trial_cost;
        incumbent.trials = 0;
    } else {
        incumbent.trials += 1;
    }
}

/// Onlooker selection weight for a cost value: `1 / (1 + cost)` for
/// non-negative costs, `1 + |cost|` otherwise.
fn selection_weight<F: Scalar>(cost: F) -> F {
    if cost >= F::zero() {
        F::one() / (F::one() + cost)
    } else {
        F::one() + cost.abs()
    }
}

fn roulette<F: Scalar>(weights: &[F], total: F, rng: &mut Rng) -> usize {
    let mut ticket = F::from_f64(rng.next_f64()) * total;
    for (i, w) in weights.iter().enumerate() {
        ticket = ticket - *w;
        if ticket < F::zero() {
            return i;
        }
    }
    weights.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotype::GeneBounds;

    #[test]
    fn neighbor_move_matches_hand_computation() {
        // 0.4 + 0.5 (0.4 - (-0.2)) = 0.7
        assert!((neighbor_move(0.4_f64, -0.2, 0.5) - 0.7).abs() < 1e-15);
        // phi = 0 leaves the gene untouched
        assert_eq!(neighbor_move(1.23, -9.0, 0.0), 1.23);
    }

    #[test]
    fn selection_weight_is_the_inverse_cost_transform() {
        assert_eq!(selection_weight(0.0), 1.0);
        assert_eq!(selection_weight(1.0), 0.5);
        assert_eq!(selection_weight(-2.0), 3.0);
    }

    #[test]
    fn exhausted_sources_are_redrawn_inside_the_bounds() {
        let bounds = GeneBounds::uniform(3, -1.5, 1.5).unwrap();
        let mut rng = Rng::from_seed(17);
        // Start the whole population far outside the search space with
        // counters past the limit; a constant cost blocks greedy moves.
        let mut population: Vec<Candidate<f64>> = (0..4)
            .map(|i| {
                let mut c = Candidate::new(vec![40.0 + i as f64; 3], 1.0);
                c.trials = 101;
                c
            })
            .collect();
        let mut constant = |_: &[f64]| 1.0;
        abc_step(&mut population, &bounds, 100, &mut rng, &mut constant);
        // Index 0 is the tie-broken best and is protected; the rest of
        // the population was rebuilt inside the search space.
        assert_eq!(population[0].genes, vec![40.0; 3]);
        for candidate in &population[1..] {
            assert!(bounds.contains(&candidate.genes), "{:?}", candidate.genes);
            assert_eq!(candidate.trials, 0);
        }
    }

    #[test]
    fn greedy_selection_never_accepts_worse_trials() {
        let bounds = GeneBounds::uniform(2, -1.5, 1.5).unwrap();
        let mut rng = Rng::from_seed(5);
        let sphere = |g: &[f64]| g.iter().map(|x| x * x).sum::<f64>();
        let mut population: Vec<Candidate<f64>> = (0..6)
            .map(|_| {
                let genes = bounds.sample(&mut rng);
                let c = sphere(&genes);
                Candidate::new(genes, c)
            })
            .collect();
        let mut costs: Vec<f64> = population.iter().map(|c| c.cost).collect();
        let mut eval = |g: &[f64]| sphere(g);
        for _ in 0..50 {
            abc_step(&mut population, &bounds, 100, &mut rng, &mut eval);
            for (c, prev) in population.iter().zip(costs.iter_mut()) {
                assert!(c.cost <= *prev + 1e-15);
                *prev = c.cost;
            }
        }
    }
}
