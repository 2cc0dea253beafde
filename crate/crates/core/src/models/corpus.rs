//! Random connected networks for property suites and examples.

use rand::seq::index::sample;
use rand::Rng;

use crate::network::Network;

/// Conductances are drawn log-uniformly from this interval.
pub const CONDUCTANCE_RANGE: (f64, f64) = (0.1, 10.0);

fn conductance<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let (lo, hi) = CONDUCTANCE_RANGE;
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

/// Random recursive tree on `n ≥ 2` vertices `"0".."n-1"`, base `"0"`.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Network {
    random_connected(rng, n, 0)
}

/// A random recursive spanning tree plus up to `extra` further distinct edges.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> Network {
    assert!(n >= 2, "a random network needs at least two vertices");
    let mut present = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        let u = rng.random_range(0..v);
        present.insert((u, v));
        edges.push((u, v, conductance(rng)));
    }
    let room = n * (n - 1) / 2 - (n - 1);
    let wanted = extra.min(room);
    while edges.len() < n - 1 + wanted {
        let pick = sample(rng, n, 2);
        let (a, b) = (
            pick.index(0).min(pick.index(1)),
            pick.index(0).max(pick.index(1)),
        );
        if present.insert((a, b)) {
            edges.push((a, b, conductance(rng)));
        }
    }
    Network::from_indexed(n, 0, &edges).expect("generated network is valid")
}

/// `count` random networks with 3 to `max_vertices` vertices; even positions
/// are trees, odd positions carry between 1 and `n` extra edges.
pub fn random_corpus<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    max_vertices: usize,
) -> Vec<Network> {
    let max_vertices = max_vertices.max(3);
    (0..count)
        .map(|i| {
            let n = rng.random_range(3..=max_vertices);
            if i % 2 == 0 {
                random_tree(rng, n)
            } else {
                let extra = rng.random_range(1..=n);
                random_connected(rng, n, extra)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let corpus = random_corpus(&mut rng, 20, 50);
        for (i, net) in corpus.iter().enumerate() {
            assert!(net.vertex_count() <= 50);
            assert_eq!(net.is_tree(), i % 2 == 0);
            for e in net.edges() {
                assert!(e.c >= 0.1 - 1e-12 && e.c <= 10.0 + 1e-12);
            }
        }
        let again = random_corpus(&mut ChaCha8Rng::seed_from_u64(42), 20, 50);
        assert_eq!(corpus[7].to_document(), again[7].to_document());
    }
}
