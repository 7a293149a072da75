//! Exponential-time exact counting on general graphs.
//!
//! `X(G) = X(G - v) + t·X(G - N[v])` on a highest-degree vertex `v`, after
//! splitting into connected components. Acyclic components are handed to the
//! forest dynamic program. Results are memoised by vertex mask when the graph
//! has at most 64 vertices.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::mask::{Mask, MaskGraph};
use super::tree_dp;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::{self, NatPoly};

/// Vertex-count limit of the general counting path unless overridden.
pub const DEFAULT_GENERAL_CAP: usize = 64;
/// Masks are only memoised up to this many vertices.
pub const MEMO_LIMIT: usize = 64;

pub struct BranchingCounter<'g> {
    graph: &'g Graph,
    masks: MaskGraph,
    memo: Option<HashMap<Mask, NatPoly>>,
    forest_shortcut: bool,
}

impl<'g> BranchingCounter<'g> {
    pub fn new(graph: &'g Graph, cap: usize) -> Result<Self> {
        if graph.n() > cap {
            return Err(Error::SizeGuard {
                what: "general counting input",
                size: graph.n(),
                limit: cap,
            });
        }
        Ok(BranchingCounter {
            graph,
            masks: MaskGraph::new(graph),
            memo: (graph.n() <= MEMO_LIMIT).then(HashMap::new),
            forest_shortcut: true,
        })
    }

    /// Pure branching, never delegating to the forest program. Used as an
    /// independent check of the forest path.
    pub fn pure(graph: &'g Graph, cap: usize) -> Result<Self> {
        let mut c = Self::new(graph, cap)?;
        c.forest_shortcut = false;
        Ok(c)
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn mask_graph(&self) -> &MaskGraph {
        &self.masks
    }

    /// Independence polynomial of the whole graph.
    pub fn sequence(&mut self) -> NatPoly {
        self.count(&Mask::full(self.graph.n()))
    }

    /// Independence polynomial of the subgraph induced by `mask`, trimmed.
    pub fn count(&mut self, mask: &Mask) -> NatPoly {
        if mask.is_empty() {
            return poly::one();
        }
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(mask)) {
            return hit.clone();
        }
        let result = self.count_uncached(mask);
        if let Some(m) = self.memo.as_mut() {
            m.insert(mask.clone(), result.clone());
        }
        result
    }

    fn count_uncached(&mut self, mask: &Mask) -> NatPoly {
        let comps = self.masks.components(mask);
        if comps.len() > 1 {
            let mut acc = poly::one();
            for c in &comps {
                acc = poly::mul(&acc, &self.count(c));
            }
            return acc;
        }
        let size = mask.count();
        let edges = self.masks.edge_count_in(mask);
        if edges == 0 {
            return poly::binomial_row(size);
        }
        if self.forest_shortcut && edges + 1 == size {
            let (sub, _) = self.masks.induced_graph(self.graph, mask);
            return tree_dp::forest_sequence(&sub);
        }
        let (v, _) = self.masks.pivot(mask).expect("nonempty mask");
        let mut without = mask.clone();
        without.remove(v);
        let with = mask.and_not(&self.masks.closed[v]);
        let a = self.count(&without);
        let b = poly::shift(self.count(&with));
        poly::trim(poly::add(&a, &b))
    }

    /// `x_k` of the subgraph induced by `mask`.
    pub fn coefficient(&mut self, mask: &Mask, k: usize) -> BigUint {
        if k == 0 {
            return BigUint::one();
        }
        let p = self.count(mask);
        p.get(k).cloned().unwrap_or_else(BigUint::zero)
    }
}

/// Independence number by branching with degree-0/degree-1 reductions,
/// component splitting and forest shortcuts. No memoisation.
pub fn max_independent_general(graph: &Graph, cap: usize) -> Result<usize> {
    if graph.n() > cap {
        return Err(Error::SizeGuard {
            what: "general independence-number input",
            size: graph.n(),
            limit: cap,
        });
    }
    let mg = MaskGraph::new(graph);
    Ok(mis(graph, &mg, Mask::full(graph.n())))
}

fn mis(graph: &Graph, mg: &MaskGraph, mut mask: Mask) -> usize {
    let mut forced = 0;
    // Vertices of degree <= 1 always belong to some maximum independent set.
    loop {
        let low = mask.iter().find(|&v| mg.degree_in(v, &mask) <= 1);
        match low {
            Some(v) => {
                forced += 1;
                mask = mask.and_not(&mg.closed[v]);
            }
            None => break,
        }
    }
    if mask.is_empty() {
        return forced;
    }
    let comps = mg.components(&mask);
    if comps.len() > 1 {
        return forced + comps.into_iter().map(|c| mis(graph, mg, c)).sum::<usize>();
    }
    let size = mask.count();
    if mg.edge_count_in(&mask) + 1 == size {
        let (sub, _) = mg.induced_graph(graph, &mask);
        return forced + tree_dp::forest_max_independent(&sub);
    }
    let (v, _) = mg.pivot(&mask).expect("nonempty");
    let mut without = mask.clone();
    without.remove(v);
    let with = mask.and_not(&mg.closed[v]);
    let take = 1 + mis(graph, mg, with);
    let skip = mis(graph, mg, without);
    forced + take.max(skip)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: &[u64]) -> NatPoly {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn small_graphs() {
        let k4 = Graph::complete(4);
        assert_eq!(BranchingCounter::new(&k4, 64).unwrap().sequence(), nat(&[1, 4]));
        let c5 = Graph::cycle(5);
        assert_eq!(BranchingCounter::new(&c5, 64).unwrap().sequence(), nat(&[1, 5, 5]));
        assert_eq!(max_independent_general(&c5, 64).unwrap(), 2);
        assert_eq!(max_independent_general(&Graph::cycle(6), 64).unwrap(), 3);
        assert_eq!(max_independent_general(&k4, 64).unwrap(), 1);
    }

    #[test]
    fn guard() {
        let g = Graph::empty(10);
        assert!(matches!(
            BranchingCounter::new(&g, 5),
            Err(Error::SizeGuard { .. })
        ));
    }
}
