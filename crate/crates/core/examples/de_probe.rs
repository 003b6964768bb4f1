use evonet::rng::Rng;

fn sphere(g: &[f64]) -> f64 {
    g.iter().map(|x| x * x).sum()
}

// Standalone DE skeleton to compare mutant bases and update schemes.
fn run(variant: u8, generational: bool, seed: u64) -> f64 {
    let (pop_size, dim, iters, cr, fw) = (10usize, 10usize, 1000usize, 0.9, 0.7);
    let mut rng = Rng::from_seed(seed);
    let mut pop: Vec<Vec<f64>> = (0..pop_size)
        .map(|_| (0..dim).map(|_| rng.uniform(-1.5, 1.5)).collect())
        .collect();
    let mut costs: Vec<f64> = pop.iter().map(|g| sphere(g)).collect();
    let mut best_ever = f64::INFINITY;
    for _ in 0..iters {
        let best_idx = (0..pop_size).min_by(|&i, &j| costs[i].partial_cmp(&costs[j]).unwrap()).unwrap();
        let best = pop[best_idx].clone();
        let snapshot = if generational { Some(pop.clone()) } else { None };
        for t in 0..pop_size {
            let view = snapshot.as_ref().unwrap_or(&pop);
            let a = rng.index_excluding(pop_size, t);
            let b = loop { let i = rng.index_excluding(pop_size, t); if i != a { break i; } };
            let c = loop { let i = rng.index_excluding(pop_size, t); if i != a && i != b { break i; } };
            let forced = rng.index(dim);
            let mut trial = view[t].clone();
            for d in 0..dim {
                let r = rng.next_f64();
                if r < cr || d == forced {
                    trial[d] = match variant {
                        0 => view[a][d] + fw * (best[d] - view[a][d]) + fw * (view[b][d] - view[c][d]),
                        1 => view[t][d] + fw * (best[d] - view[t][d]) + fw * (view[b][d] - view[c][d]),
                        _ => view[a][d] + fw * (view[b][d] - view[c][d]),
                    };
                }
            }
            let tc = sphere(&trial);
            if tc < best_ever { best_ever = tc; }
            if tc <= costs[t] {
                pop[t] = trial;
                costs[t] = tc;
            }
        }
    }
    best_ever
}

fn main() {
    for (name, variant, generational) in [
        ("rand-base inplace   ", 0u8, false),
        ("target-base inplace ", 1u8, false),
        ("rand-base generational", 0u8, true),
        ("target-base generational", 1u8, true),
        ("rand/1 inplace      ", 2u8, false),
    ] {
        let costs: Vec<f64> = (1..=5).map(|s| run(variant, generational, s)).collect();
        let best = costs.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("{name} best-of-5 {best:.3e}   all: {:?}", costs.iter().map(|c| format!("{c:.1e}")).collect::<Vec<_>>());
    }
}
