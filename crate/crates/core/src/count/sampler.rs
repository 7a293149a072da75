//! Exact uniform sampling of size-k independent sets.

use num_bigint::RandBigInt;
use num_traits::Zero;
use rand::Rng;

use super::branching::BranchingCounter;
use super::mask::Mask;
use super::tree_dp::ForestSampler;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Uniform sampler over independent sets of a fixed graph.
///
/// Forests are sampled by tracing the forest tables; general graphs by a
/// vertex-by-vertex walk whose branch probabilities are exact ratios of
/// memoised branching counts. The forest variant is `Sync`; the general one
/// holds a mutable memo and should be created once per worker.
pub enum UniformSampler<'g> {
    Forest(ForestSampler),
    General(BranchingCounter<'g>),
}

impl<'g> UniformSampler<'g> {
    pub fn new(graph: &'g Graph, cap: usize) -> Result<Self> {
        if graph.is_forest() {
            Ok(UniformSampler::Forest(ForestSampler::new(graph)))
        } else {
            Ok(UniformSampler::General(BranchingCounter::new(graph, cap)?))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Result<VertexSet> {
        match self {
            UniformSampler::Forest(f) => f.sample(k, rng).ok_or(Error::NoIndependentSet(k)),
            UniformSampler::General(c) => sample_general(c, k, rng),
        }
    }
}

fn sample_general<R: Rng + ?Sized>(
    counter: &mut BranchingCounter<'_>,
    k: usize,
    rng: &mut R,
) -> Result<VertexSet> {
    let n = counter.graph().n();
    let mut mask = Mask::full(n);
    if counter.coefficient(&mask, k).is_zero() {
        return Err(Error::NoIndependentSet(k));
    }
    let mut chosen = Vec::with_capacity(k);
    let mut budget = k;
    while budget > 0 {
        let v = mask.first().expect("positive count implies vertices remain");
        let with = mask.and_not(&counter.mask_graph().closed[v]);
        let mut without = mask.clone();
        without.remove(v);
        let w_in = counter.coefficient(&with, budget - 1);
        let w_out = counter.coefficient(&without, budget);
        let total = &w_in + &w_out;
        if rng.gen_biguint_below(&total) < w_in {
            chosen.push(v);
            budget -= 1;
            mask = with;
        } else {
            mask = without;
        }
    }
    chosen.sort_unstable();
    Ok(VertexSet::from_sorted_unchecked(n, chosen))
}
