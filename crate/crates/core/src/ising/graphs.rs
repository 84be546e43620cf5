use rand::seq::SliceRandom;
use rand::RngCore;

use super::CouplingMatrix;
use crate::error::{Error, Result};

/// Möbius ladder on `n` vertices: the `n`-cycle plus the `n/2` diameters,
/// every edge with coupling -1.
pub fn mobius_ladder(n: usize) -> Result<CouplingMatrix> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("Möbius ladder needs an even n >= 4, got {n}")));
    }
    let mut edges = Vec::with_capacity(3 * n / 2);
    for i in 0..n {
        edges.push((i, (i + 1) % n, -1.0));
    }
    for i in 0..n / 2 {
        edges.push((i, i + n / 2, -1.0));
    }
    CouplingMatrix::from_edges(n, &edges)
}

/// Uniformly paired 3-regular graph with -1 couplings.
///
/// Configuration model: `3n` stubs are matched by a random shuffle, and the whole
/// matching is redrawn whenever it contains a self-loop or a repeated edge.
pub fn random_cubic_graph<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<CouplingMatrix> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("a cubic graph needs an even n >= 4, got {n}")));
    }
    let mut stubs: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
    'retry: loop {
        stubs.shuffle(rng);
        let mut adj = vec![false; n * n];
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || adj[a * n + b] {
                continue 'retry;
            }
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        let j = adj.iter().map(|&e| if e { -1.0 } else { 0.0 }).collect();
        return CouplingMatrix::from_dense(n, j);
    }
}
