//! Seeded samplers for random trees, G(n, p) and random regular graphs, and
//! for their planted versions, in which a uniformly random `k`-subset is
//! conditioned to be independent.
//!
//! Every sampler comes in two forms: one taking a [`Seed`] and one drawing
//! from a caller-supplied generator. The seeded forms are pure functions of
//! their arguments.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Tree, VertexSet};
use crate::rng::Seed;

/// Uniform labelled trees are uniform spanning trees of `K_n`, drawn with the
/// Aldous–Broder random walk.
pub const TREE_METHOD: &str = "aldous-broder";
/// Regular graphs: configuration-model pairing, rejecting non-simple outcomes.
pub const REGULAR_METHOD: &str = "configuration-model-rejection";
/// Attempt cap for every rejection loop unless overridden.
pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;

/// Edge parameter of G(n, p): the probability itself or the expected degree
/// `d`, with `p = d / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GnpParam {
    P(f64),
    D(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelSpec {
    Tree {
        n: usize,
    },
    Gnp {
        n: usize,
        #[serde(flatten)]
        param: GnpParam,
    },
    Regular {
        n: usize,
        d: usize,
    },
}

impl ModelSpec {
    pub fn tree(n: usize) -> Self {
        ModelSpec::Tree { n }
    }

    pub fn gnp_p(n: usize, p: f64) -> Self {
        ModelSpec::Gnp { n, param: GnpParam::P(p) }
    }

    pub fn gnp_d(n: usize, d: f64) -> Self {
        ModelSpec::Gnp { n, param: GnpParam::D(d) }
    }

    pub fn regular(n: usize, d: usize) -> Self {
        ModelSpec::Regular { n, d }
    }

    pub fn n(&self) -> usize {
        match *self {
            ModelSpec::Tree { n } | ModelSpec::Gnp { n, .. } | ModelSpec::Regular { n, .. } => n,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::Tree { .. } => "tree",
            ModelSpec::Gnp { .. } => "gnp",
            ModelSpec::Regular { .. } => "regular",
        }
    }

    /// Edge probability of a G(n, p) model.
    pub fn p(&self) -> Option<f64> {
        match *self {
            ModelSpec::Gnp { param: GnpParam::P(p), .. } => Some(p),
            ModelSpec::Gnp { n, param: GnpParam::D(d) } => Some(d / n as f64),
            _ => None,
        }
    }

    /// Degree parameter: expected degree `p·n` for G(n, p) (or the given `d`),
    /// the exact degree for regular graphs, none for trees.
    pub fn degree(&self) -> Option<f64> {
        match *self {
            ModelSpec::Gnp { n, param: GnpParam::P(p) } => Some(p * n as f64),
            ModelSpec::Gnp { param: GnpParam::D(d), .. } => Some(d),
            ModelSpec::Regular { d, .. } => Some(d as f64),
            ModelSpec::Tree { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Tree { n } if n < 2 => Err(Error::param(format!("tree needs n >= 2, got {n}"))),
            ModelSpec::Gnp { .. } => {
                let p = self.p().expect("gnp");
                if p > 0.0 && p < 1.0 {
                    Ok(())
                } else {
                    Err(Error::param(format!("gnp needs 0 < p < 1, got {p}")))
                }
            }
            ModelSpec::Regular { n, d } => check_regular(n, d),
            _ => Ok(()),
        }
    }
}

fn check_regular(n: usize, d: usize) -> Result<()> {
    if d == 0 || d >= n {
        return Err(Error::param(format!("regular graph needs 1 <= d < n, got n = {n}, d = {d}")));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::param(format!("n·d must be even, got n = {n}, d = {d}")));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("need 0 < p < 1, got {p}")))
    }
}

pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    sample_gnp_with(n, p, &mut seed.rng())
}

pub fn sample_gnp_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_p(p)?;
    gnp_avoiding(n, p, &[], rng)
}

/// G(n, p) with all pairs inside `forbidden` (sorted) removed from play.
fn gnp_avoiding<R: Rng + ?Sized>(n: usize, p: f64, forbidden: &[usize], rng: &mut R) -> Result<Graph> {
    let mut inside = vec![false; n];
    for &v in forbidden {
        inside[v] = true;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if inside[u] && inside[v] {
                continue;
            }
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn sample_uniform_tree(n: usize, seed: Seed) -> Result<Tree> {
    sample_uniform_tree_with(n, &mut seed.rng())
}

pub fn sample_uniform_tree_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tree> {
    if n < 2 {
        return Err(Error::param(format!("tree needs n >= 2, got {n}")));
    }
    let graph = walk_spanning_tree(n, &[], rng);
    Ok(Tree::new(graph).expect("random walk yields a spanning tree"))
}

/// Aldous–Broder on `K_n` with the clique on `sigma` (sorted) deleted. The
/// host graph is connected whenever `sigma` misses at least one vertex.
fn walk_spanning_tree<R: Rng + ?Sized>(n: usize, sigma: &[usize], rng: &mut R) -> Graph {
    let mut inside = vec![false; n];
    for &v in sigma {
        inside[v] = true;
    }
    let outside: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
    let mut visited = vec![false; n];
    let mut current = rng.gen_range(0..n);
    visited[current] = true;
    let mut remaining = n - 1;
    let mut edges = Vec::with_capacity(n - 1);
    while remaining > 0 {
        let next = if inside[current] {
            outside[rng.gen_range(0..outside.len())]
        } else {
            // uniform over the other n - 1 vertices
            let x = rng.gen_range(0..n - 1);
            if x >= current {
                x + 1
            } else {
                x
            }
        };
        if !visited[next] {
            visited[next] = true;
            edges.push((current, next));
            remaining -= 1;
        }
        current = next;
    }
    Graph::from_edges(n, edges).expect("walk edges are valid")
}

pub fn sample_regular(n: usize, d: usize, seed: Seed) -> Result<Graph> {
    sample_regular_with(n, d, DEFAULT_REJECTION_CAP, &mut seed.rng()).map(|(g, _)| g)
}

/// Returns the graph and the number of pairings drawn.
pub fn sample_regular_with<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    cap: u64,
    rng: &mut R,
) -> Result<(Graph, u64)> {
    check_regular(n, d)?;
    let mut points: Vec<usize> = (0..n * d).map(|i| i / d).collect();
    for attempt in 1..=cap {
        if let Some(g) = try_pairing(n, &mut points, rng) {
            return Ok((g, attempt));
        }
    }
    Err(Error::RejectionCapExceeded(cap))
}

fn try_pairing<R: Rng + ?Sized>(n: usize, points: &mut [usize], rng: &mut R) -> Option<Graph> {
    points.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(points.len() / 2);
    for pair in points.chunks_exact(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u == v {
            return None;
        }
        edges.push((u, v));
    }
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(Graph::from_edges(n, edges).expect("simple pairing"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedSample {
    pub graph: Graph,
    pub sigma: VertexSet,
    /// Graph draws used; 1 for the exact samplers.
    pub attempts: u64,
}

pub fn sample_planted(model: &ModelSpec, k: usize, seed: Seed) -> Result<PlantedSample> {
    sample_planted_with(model, k, DEFAULT_REJECTION_CAP, &mut seed.rng())
}

/// Draws `sigma` uniformly among `k`-subsets, then the graph conditioned on
/// `sigma` being independent. `cap` bounds the rejection loop of the regular
/// family and is ignored otherwise.
pub fn sample_planted_with<R: Rng + ?Sized>(
    model: &ModelSpec,
    k: usize,
    cap: u64,
    rng: &mut R,
) -> Result<PlantedSample> {
    model.validate()?;
    let n = model.n();
    if k > n {
        return Err(Error::param(format!("planted size {k} exceeds n = {n}")));
    }
    if let ModelSpec::Tree { .. } = model {
        if k + 1 > n {
            return Err(Error::param(format!(
                "no tree on {n} vertices has an independent set of size {k}"
            )));
        }
    }
    let mut ids = index::sample(rng, n, k).into_vec();
    ids.sort_unstable();
    let sigma = VertexSet::new(n, ids)?;
    let (graph, attempts) = match *model {
        ModelSpec::Tree { .. } => (walk_spanning_tree(n, sigma.as_slice(), rng), 1),
        ModelSpec::Gnp { .. } => {
            let p = model.p().expect("gnp");
            (gnp_avoiding(n, p, sigma.as_slice(), rng)?, 1)
        }
        ModelSpec::Regular { d, .. } => {
            let mut points: Vec<usize> = (0..n * d).map(|i| i / d).collect();
            let mut found = None;
            for attempt in 1..=cap {
                if let Some(g) = try_pairing(n, &mut points, rng) {
                    if g.is_independent(&sigma) {
                        found = Some((g, attempt));
                        break;
                    }
                }
            }
            found.ok_or(Error::RejectionCapExceeded(cap))?
        }
    };
    Ok(PlantedSample { graph, sigma, attempts })
}

/// Unplanted sample of any family.
pub fn sample_model<R: Rng + ?Sized>(model: &ModelSpec, rng: &mut R) -> Result<Graph> {
    model.validate()?;
    match *model {
        ModelSpec::Tree { n } => sample_uniform_tree_with(n, rng).map(Tree::into_graph),
        ModelSpec::Gnp { n, .. } => sample_gnp_with(n, model.p().expect("gnp"), rng),
        ModelSpec::Regular { n, d } => sample_regular_with(n, d, DEFAULT_REJECTION_CAP, rng).map(|(g, _)| g),
    }
}
