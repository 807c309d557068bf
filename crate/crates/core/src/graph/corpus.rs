//! Seeded random digraphs with integer edge lengths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::digraph::DirectedGraph;

/// `count` digraphs with at most `max_v` vertices and `max_e` edges (loops
/// and parallel edges allowed), each paired with lengths in `1..=max_len`.
pub fn random_corpus(seed: u64, count: usize, max_v: usize, max_e: usize, max_len: u64) -> Vec<(DirectedGraph, Vec<u64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_v);
            let m = rng.gen_range(1..=max_e);
            let pairs: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let lens: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max_len)).collect();
            (DirectedGraph::from_pairs(n, &pairs), lens)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let a = random_corpus(7, 30, 5, 10, 4);
        let b = random_corpus(7, 30, 5, 10, 4);
        assert_eq!(a.len(), 30);
        for ((g, l), (h, k)) in a.iter().zip(&b) {
            assert_eq!(g.adjacency(), h.adjacency());
            assert_eq!(l, k);
            assert!(g.vertex_count() <= 5 && g.edge_count() <= 10);
            assert!(l.iter().all(|&x| (1..=4).contains(&x)));
        }
    }
}
