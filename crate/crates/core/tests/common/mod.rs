//! Oracles and fixtures shared by the integration tests. Everything here is
//! written without the library's counting code so it can check it.

#![allow(dead_code)]

use std::collections::BTreeMap;

use indseq::{Graph, Seed};
use num_bigint::BigUint;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Independence sequence by scanning every vertex subset. `n <= 20`.
pub fn brute_sequence(g: &Graph) -> Vec<BigUint> {
    let n = g.n();
    assert!(n <= 20, "subset scan limited to 20 vertices");
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let mut counts = vec![0u64; n + 1];
    for s in 0u32..1 << n {
        if (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0) {
            counts[s.count_ones() as usize] += 1;
        }
    }
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    counts.into_iter().map(BigUint::from).collect()
}

pub fn big(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

/// `C(n, k)` in u128.
pub fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// G(n, p) drawn edge by edge from `rng`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random labelled tree from a random Prüfer-like attachment: vertex `v`
/// joins a uniform earlier vertex. Not uniform over trees; used only where
/// any tree will do.
pub fn random_recursive_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Line graph of `h`: one vertex per edge, adjacent when the edges share an
/// endpoint. Line graphs are claw-free.
pub fn line_graph(h: &Graph) -> Graph {
    let e = h.edges();
    let mut edges = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let (a, b) = e[i];
            let (c, d) = e[j];
            if a == c || a == d || b == c || b == d {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(e.len(), edges).unwrap()
}

/// Pearson statistic of `observed` against equal cell probabilities over
/// `cells` categories, and its upper-tail p-value.
pub fn chi_square_uniform<K: Ord>(observed: &BTreeMap<K, u64>, cells: usize) -> (f64, f64) {
    assert!(observed.len() <= cells, "more categories observed than exist");
    let total: u64 = observed.values().sum();
    let expected = total as f64 / cells as f64;
    let missing = (cells - observed.len()) as f64 * expected;
    let stat = observed.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum::<f64>() + missing;
    let dist = ChiSquared::new((cells - 1) as f64).unwrap();
    (stat, 1.0 - dist.cdf(stat))
}

pub fn seed(master: u64) -> Seed {
    Seed::new(master, 0)
}
