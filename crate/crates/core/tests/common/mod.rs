//! Deterministic instance corpus shared by the integration tests.

#![allow(dead_code)]

use congest_cover::instances::{
    gen_random_general, gen_random_rs, gen_set_cover, gen_vertex_cover_lp, NormalizedInstance,
};
use congest_cover::normalize::normalize;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_EPSILONS: [f64; 4] = [1.0, 0.5, 0.25, 0.1];

pub struct Case {
    pub label: String,
    pub instance: NormalizedInstance,
    pub epsilon: f64,
}

pub fn random_graph(rng: &mut ChaCha8Rng, vertices: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    edges
}

/// Every element joins between 1 and 3 random sets.
pub fn random_set_system(rng: &mut ChaCha8Rng, elements: usize, sets: usize) -> Vec<Vec<usize>> {
    let mut members = vec![Vec::new(); sets];
    for e in 0..elements {
        let count = rng.gen_range(1..=3.min(sets));
        for s in sample(rng, sets, count).into_vec() {
            members[s].push(e);
        }
    }
    members
}

/// Mixed corpus of `count` cases (random row-sparse, vertex cover, set cover
/// and normalized general instances), epsilons cycling through
/// [`CORPUS_EPSILONS`]. Sizes stay small enough for the simulator.
///
/// Normalized general instances have widths in the hundreds (entries are
/// divided by the smallest scaled entry) and would need millions of phases
/// at small eps, so that slot only uses eps 1 and 0.5.
pub fn corpus(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let mut epsilon = CORPUS_EPSILONS[i % CORPUS_EPSILONS.len()];
        let s = rng.gen::<u64>();
        let (label, instance) = match i % 10 {
            0..=5 => {
                let (n, m) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
                let k = rng.gen_range(1..=5.min(m));
                let a_max = [1.0, 2.0, 4.0, 8.0][rng.gen_range(0..4)];
                (format!("random-rs:{n},{m},{k},{a_max} seed {s}"), gen_random_rs(n, m, k, a_max, s).unwrap())
            }
            6 | 7 => {
                let v = rng.gen_range(2..=20);
                let p = rng.gen_range(0.1..0.6);
                let edges = random_graph(&mut rng, v, p);
                (format!("vc: {v} vertices, {} edges", edges.len()), gen_vertex_cover_lp(&edges).unwrap())
            }
            8 => {
                let (elements, sets) = (rng.gen_range(1..=30), rng.gen_range(1..=15));
                let system = random_set_system(&mut rng, elements, sets);
                (format!("setcover: {elements} elements, {sets} sets"), gen_set_cover(elements, &system).unwrap())
            }
            _ => {
                let (n, m) = (rng.gen_range(1..=30), rng.gen_range(1..=30));
                let k = rng.gen_range(1..=4.min(m));
                let g = gen_random_general(n, m, k, s).unwrap();
                epsilon = if i % 20 == 9 { 1.0 } else { 0.5 };
                (format!("general:{n},{m},{k} seed {s}"), normalize(&g).unwrap().0)
            }
        };
        cases.push(Case { label, instance, epsilon });
    }
    cases
}

pub fn bits_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(u, v)| u.to_bits() == v.to_bits())
}
