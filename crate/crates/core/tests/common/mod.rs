#![allow(dead_code)]

use fewcopy::states::{build_graph_state, GraphState};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a shuffled random spanning tree plus each
/// remaining edge with probability `extra`.
pub fn random_connected_graph<R: Rng>(n: usize, extra: f64, rng: &mut R) -> GraphState {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent.min(order[i]), parent.max(order[i])));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.random_bool(extra) {
                edges.push((a, b));
            }
        }
    }
    build_graph_state(&edges, n).expect("valid random graph")
}

pub fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
