//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use divgraph::{Divisor, WeightedMultigraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for [`random_graph`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_weight: i64,
    /// Percent chance that an extra edge is a loop.
    pub loop_percent: u32,
}

impl Shape {
    /// At most 6 vertices, 10 edges, weights up to 2.
    pub const SUITE: Shape = Shape {
        max_vertices: 6,
        max_edges: 10,
        max_weight: 2,
        loop_percent: 15,
    };
}

/// A connected graph: a random spanning tree plus extra edges and loops.
pub fn random_graph(rng: &mut TestRng, shape: Shape) -> WeightedMultigraph {
    let n = rng.gen_range(1..=shape.max_vertices);
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let weights = (0..n).map(|_| rng.gen_range(0..=shape.max_weight)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect();
    let extra = rng.gen_range(0..=shape.max_edges - edges.len());
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = if rng.gen_range(0..100) < shape.loop_percent || n == 1 {
            a
        } else {
            rng.gen_range(0..n)
        };
        edges.push((a, b));
    }
    WeightedMultigraph::from_parts(names, weights, edges).expect("random graph is connected")
}

/// Entries in `[-5, 5]`, nudged one chip at a time until the degree lies in
/// `[min_degree, max_degree]`. Entries leave `[-5, 5]` only when that range
/// cannot reach the requested degrees.
pub fn random_divisor(rng: &mut TestRng, n: usize, min_degree: i64, max_degree: i64) -> Divisor {
    assert!(min_degree <= max_degree);
    let mut values: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    let reach = 5 * n as i64;
    let bound = if min_degree <= reach && max_degree >= -reach { 5 } else { i64::MAX };
    loop {
        let degree: i64 = values.iter().sum();
        let step = if degree > max_degree {
            -1
        } else if degree < min_degree {
            1
        } else {
            break;
        };
        let v = rng.gen_range(0..n);
        if (values[v] + step).abs() <= bound {
            values[v] += step;
        }
    }
    Divisor::new(values)
}

/// One instance of the randomized suite: degree clipped to `[-3, 2g + 2]`.
pub fn suite_instance(rng: &mut TestRng) -> (WeightedMultigraph, Divisor) {
    let g = random_graph(rng, Shape::SUITE);
    let d = random_divisor(rng, g.vertex_count(), -3, 2 * g.genus() + 2);
    (g, d)
}

/// A random sum of set-firings, returned as a principal divisor.
pub fn random_principal(rng: &mut TestRng, g: &WeightedMultigraph, moves: usize) -> Divisor {
    let n = g.vertex_count();
    let mut total = Divisor::zero(n);
    for _ in 0..moves {
        let set = divgraph::VertexSet::from_vertices(n, (0..n).filter(|_| rng.gen_bool(0.5))).unwrap();
        let times = rng.gen_range(-3..=3);
        total = total.add_scaled(&divgraph::divisor::t_set(g, &set), times).unwrap();
    }
    total
}
