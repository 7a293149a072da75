//! Exact independence sequences and related enumeration oracles.

pub mod branching;
pub mod mask;
pub mod matching;
pub mod sampler;
pub mod tree_dp;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Tree, VertexSet};
use crate::rng::Seed;

pub use branching::{BranchingCounter, DEFAULT_GENERAL_CAP};
pub use matching::{matching_polynomial, MatchingPolynomial};
pub use sampler::UniformSampler;

/// Coefficients `x_0, ..., x_alpha` of the independence polynomial.
/// Trailing zeros are trimmed, so `alpha = coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndepSequence {
    pub n: usize,
    pub coeffs: Vec<BigUint>,
}

impl IndepSequence {
    pub fn alpha(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Total number of independent sets, `I(G, 1)`.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Coefficients padded with zeros to length `n + 1`.
    pub fn padded(&self) -> Vec<BigUint> {
        let mut out = self.coeffs.clone();
        out.resize(self.n + 1, BigUint::zero());
        out
    }

    pub fn to_json(&self) -> SequenceJson {
        SequenceJson {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.to_str_radix(10)).collect(),
            alpha: self.alpha(),
        }
    }
}

/// Wire form of a sequence: coefficients as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SequenceJson {
    pub n: usize,
    pub coeffs: Vec<String>,
    pub alpha: usize,
}

impl SequenceJson {
    pub fn to_sequence(&self) -> Result<IndepSequence> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Ok(IndepSequence { n: self.n, coeffs })
    }
}

/// Independence sequence of any graph. Forests go through the linear-depth
/// dynamic program; everything else through branching, subject to `cap`.
pub fn independence_sequence_capped(g: &Graph, cap: usize) -> Result<IndepSequence> {
    let coeffs = if g.is_forest() {
        tree_dp::forest_sequence(g)
    } else {
        BranchingCounter::new(g, cap)?.sequence()
    };
    Ok(IndepSequence { n: g.n(), coeffs })
}

pub fn independence_sequence(g: &Graph) -> Result<IndepSequence> {
    independence_sequence_capped(g, DEFAULT_GENERAL_CAP)
}

/// Independence sequence of a tree; never fails.
pub fn tree_sequence(t: &Tree) -> IndepSequence {
    IndepSequence { n: t.n(), coeffs: tree_dp::forest_sequence(t.graph()) }
}

/// Default vertex limit for the general independence-number path.
pub const DEFAULT_MIS_CAP: usize = 4096;

pub fn max_independent_set_size_capped(g: &Graph, cap: usize) -> Result<usize> {
    if g.is_forest() {
        Ok(tree_dp::forest_max_independent(g))
    } else {
        branching::max_independent_general(g, cap)
    }
}

pub fn max_independent_set_size(g: &Graph) -> Result<usize> {
    max_independent_set_size_capped(g, DEFAULT_MIS_CAP)
}

/// One exactly uniform independent set of size `k`.
pub fn sample_uniform_independent_set(g: &Graph, k: usize, seed: Seed) -> Result<VertexSet> {
    let mut sampler = UniformSampler::new(g, DEFAULT_GENERAL_CAP)?;
    sampler.sample(k, &mut seed.rng())
}

/// Largest `n` accepted by [`for_each_independent_set`].
pub const INDEPENDENT_SET_ENUMERATION_LIMIT: usize = 24;

/// Calls `f` on every independent set of `g` (sorted, the empty set
/// included) in lexicographic order.
pub fn for_each_independent_set(g: &Graph, mut f: impl FnMut(&[usize])) -> Result<()> {
    if g.n() > INDEPENDENT_SET_ENUMERATION_LIMIT {
        return Err(Error::SizeGuard {
            what: "independent set enumeration input",
            size: g.n(),
            limit: INDEPENDENT_SET_ENUMERATION_LIMIT,
        });
    }
    let mut current = Vec::new();
    let mut blocked = vec![0u32; g.n()];
    extend_independent(g, 0, &mut current, &mut blocked, &mut f);
    Ok(())
}

fn extend_independent(
    g: &Graph,
    from: usize,
    current: &mut Vec<usize>,
    blocked: &mut [u32],
    f: &mut impl FnMut(&[usize]),
) {
    f(current);
    for v in from..g.n() {
        if blocked[v] > 0 {
            continue;
        }
        current.push(v);
        for &w in g.neighbors(v) {
            blocked[w] += 1;
        }
        extend_independent(g, v + 1, current, blocked, f);
        for &w in g.neighbors(v) {
            blocked[w] -= 1;
        }
        current.pop();
    }
}

/// Largest `n` accepted by [`enumerate_labelled_trees`].
pub const TREE_ENUMERATION_LIMIT: usize = 9;

/// Every labelled tree on `n` vertices exactly once, in Prüfer-code order.
pub fn enumerate_labelled_trees(n: usize) -> Result<impl Iterator<Item = Tree>> {
    if !(2..=TREE_ENUMERATION_LIMIT).contains(&n) {
        return Err(Error::param(format!(
            "tree enumeration needs 2 <= n <= {TREE_ENUMERATION_LIMIT}, got {n}"
        )));
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    Ok((0..total).map(move |idx| {
        let mut code = Vec::with_capacity(len);
        let mut x = idx;
        for _ in 0..len {
            code.push(x % n);
            x /= n;
        }
        Tree::prufer_decode(n, &code).expect("codes in range decode")
    }))
}

/// Labelled trees on `n` vertices in which `{0, ..., k-1}` is independent:
/// `(n - k)^(k - 1) · n^(n - k - 1)`.
pub fn count_trees_with_independent_prefix(n: usize, k: usize) -> Result<BigUint> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    let a = BigUint::from(n - k).pow((k - 1) as u32);
    let b = BigUint::from(n).pow((n - k - 1) as u32);
    Ok(a * b)
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
