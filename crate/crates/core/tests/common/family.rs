//! Small random instances with more free vertices than the longest corridor.

use cgamapf_core::cga::longest_corridor;
use cgamapf_core::instance::{generate_instance, largest_component, random_map};
use cgamapf_core::svs::compute_svs;
use cgamapf_core::{GridGraph, Instance, SeparatingVertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[allow(dead_code)]
#[derive(Debug, Clone)]
pub struct Sample {
    pub seed: u64,
    pub density: f64,
    pub instance: Instance,
    pub svs: SeparatingVertexSet,
    pub longest_corridor: usize,
}

/// Draws one candidate per seed (8×8, density in [0, 0.2], 1..=10 agents)
/// and keeps those with `free vertices > longest corridor`. `keep` filters
/// further. Stops after `count` samples.
pub fn family(base_seed: u64, count: usize, keep: impl Fn(&Sample) -> bool) -> Vec<Sample> {
    let mut out = Vec::with_capacity(count);
    let mut seed = base_seed;
    while out.len() < count {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let density = rng.random_range(0.0..=0.2);
        let n = rng.random_range(1..=10);
        let map = random_map(8, 8, density, seed);
        let graph = GridGraph::new(map.clone());
        let pool = largest_component(&graph).len();
        let svs = compute_svs(&graph);
        let longest = longest_corridor(&graph, &svs);
        if pool < n || pool - n <= longest {
            continue;
        }
        let Ok(instance) = generate_instance(&map, n, seed) else {
            continue;
        };
        let sample = Sample {
            seed,
            density,
            instance,
            svs,
            longest_corridor: longest,
        };
        if keep(&sample) {
            out.push(sample);
        }
    }
    out
}
