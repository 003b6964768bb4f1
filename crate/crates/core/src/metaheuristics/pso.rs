//! Particle swarm with linearly decaying inertia.

use crate::rng::Rng;
use crate::scalar::Scalar;

use super::{Candidate, PsoConfig};

/// Linearly decayed inertia factor: `c0_max` at the first iteration,
/// `c0_min` at the last (0-based `iteration` in `[0, max_iterations)`).
pub fn inertia_weight<F: Scalar>(
    iteration: usize,
    max_iterations: usize,
    c0_max: F,
    c0_min: F,
) -> F {
    if max_iterations <= 1 {
        return c0_max;
    }
    let progress = F::from_f64(iteration as f64 / (max_iterations - 1) as f64);
    c0_max - (c0_max - c0_min) * progress
}

/// One velocity component:
/// `c0 v + c1 r1 (personal_best - x) + c2 r2 (swarm_best - x)`.
#[inline]
pub(crate) fn velocity_component<F: Scalar>(
    v: F,
    x: F,
    personal_best: F,
    swarm_best: F,
    c0: F,
    c1: F,
    c2: F,
    r1: F,
    r2: F,
) -> F {
    c0 * v + c1 * r1 * (personal_best - x) + c2 * r2 * (swarm_best - x)
}

/// Full velocity update with fresh per-dimension random vectors.
pub fn velocity_update<F: Scalar>(
    particle: &mut Candidate<F>,
    swarm_best: &[F],
    c0: F,
    c1: F,
    c2: F,
    rng: &mut Rng,
) {
    for d in 0..particle.genes.len() {
        let r1 = F::from_f64(rng.next_f64());
        let r2 = F::from_f64(rng.next_f64());
        particle.velocity[d] = velocity_component(
            particle.velocity[d],
            particle.genes[d],
            particle.best_genes[d],
            swarm_best[d],
            c0,
            c1,
            c2,
            r1,
            r2,
        );
    }
}

/// One swarm iteration: update velocities and positions, evaluate, and
/// refresh personal and swarm bests. Velocities and positions are not
/// clamped.
#[allow(clippy::too_many_arguments)]
pub fn pso_step<F: Scalar>(
    population: &mut [Candidate<F>],
    swarm_best: &mut (Vec<F>, F),
    iteration: usize,
    max_iterations: usize,
    config: &PsoConfig<F>,
    rng: &mut Rng,
    cost: &mut dyn FnMut(&[F]) -> F,
) {
    let c0 = inertia_weight(iteration, max_iterations, config.c0_max, config.c0_min);
    for particle in population.iter_mut() {
        velocity_update(particle, &swarm_best.0, c0, config.c1, config.c2, rng);
        for (x, v) in particle.genes.iter_mut().zip(&particle.velocity) {
            *x += *v;
        }
        particle.cost = cost(&particle.genes);
        if particle.cost < particle.best_cost {
            particle.best_cost = particle.cost;
            particle.best_genes.clone_from(&particle.genes);
        }
        if particle.cost < swarm_best.1 {
            swarm_best.1 = particle.cost;
            swarm_best.0.clone_from(&particle.genes);
        }
    }
}
