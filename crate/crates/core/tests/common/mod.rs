#![allow(dead_code)]

use ccs_core::graph::{Dist, Graph, UNREACHABLE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Reference all-pairs distances, independent of the BFS code path.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Dist>> {
    let n = g.vertex_count();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in g.edges() {
        d[e.0 as usize][e.1 as usize] = 1;
        d[e.1 as usize][e.0 as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| if x >= inf { UNREACHABLE } else { x as Dist })
                .collect()
        })
        .collect()
}

/// The seeded family of random connected graphs used for oracle comparisons:
/// `count` graphs with 5..=12 vertices.
pub fn seeded_graphs(seed: u64, count: usize) -> Vec<Graph> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(5..=12);
            let p = rng.random_range(0.05..0.5);
            Graph::random_connected(n, p, &mut rng)
        })
        .collect()
}
