//! Dynamic programs on forests.
//!
//! Each component is rooted at its smallest vertex. For every vertex `v` two
//! generating polynomials are kept: `inc[v]` counts independent sets of the
//! subtree that contain `v`, `exc[v]` those that do not. Children are merged
//! by convolution, so the whole sequence costs O(n²) coefficient operations.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use crate::graph::{Graph, VertexSet};
use crate::poly::{self, NatPoly};

/// Rooted traversal of a forest.
struct Rooted {
    roots: Vec<usize>,
    /// Parents come before children.
    order: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl Rooted {
    fn new(g: &Graph) -> Rooted {
        debug_assert!(g.is_forest());
        let n = g.n();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for r in 0..n {
            if seen[r] {
                continue;
            }
            roots.push(r);
            seen[r] = true;
            let start = order.len();
            order.push(r);
            let mut i = start;
            while i < order.len() {
                let v = order[i];
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        children[v].push(w);
                        order.push(w);
                    }
                }
                i += 1;
            }
        }
        Rooted { roots, order, children }
    }
}

/// Independence polynomial of a forest, trimmed.
pub fn forest_sequence(g: &Graph) -> NatPoly {
    let rooted = Rooted::new(g);
    let n = g.n();
    let mut inc: Vec<NatPoly> = vec![Vec::new(); n];
    let mut tot: Vec<NatPoly> = vec![Vec::new(); n];
    for &v in rooted.order.iter().rev() {
        let mut i = vec![BigUint::zero(), BigUint::from(1u8)];
        let mut e = poly::one();
        for &c in &rooted.children[v] {
            let exc_c = exc_of(&inc[c], &tot[c]);
            i = poly::mul(&i, &exc_c);
            e = poly::mul(&e, &tot[c]);
            inc[c] = Vec::new();
            tot[c] = Vec::new();
        }
        tot[v] = poly::add(&i, &e);
        inc[v] = i;
    }
    let mut out = poly::one();
    for &r in &rooted.roots {
        out = poly::mul(&out, &tot[r]);
    }
    poly::trim(out)
}

fn exc_of(inc: &[BigUint], tot: &[BigUint]) -> NatPoly {
    tot.iter()
        .enumerate()
        .map(|(k, t)| t - inc.get(k).cloned().unwrap_or_default())
        .collect()
}

/// Independence number of a forest by the linear two-state program.
pub fn forest_max_independent(g: &Graph) -> usize {
    let rooted = Rooted::new(g);
    let n = g.n();
    let mut take = vec![1usize; n];
    let mut skip = vec![0usize; n];
    for &v in rooted.order.iter().rev() {
        for &c in &rooted.children[v] {
            take[v] += skip[c];
            skip[v] += take[c].max(skip[c]);
        }
    }
    rooted.roots.iter().map(|&r| take[r].max(skip[r])).sum()
}

/// Maximum matching size of a forest (greedy leaf matching is optimal).
pub fn forest_max_matching(g: &Graph) -> usize {
    let rooted = Rooted::new(g);
    let mut matched = vec![false; g.n()];
    let mut parent = vec![usize::MAX; g.n()];
    for &v in &rooted.order {
        for &c in &rooted.children[v] {
            parent[c] = v;
        }
    }
    let mut size = 0;
    for &v in rooted.order.iter().rev() {
        let p = parent[v];
        if p != usize::MAX && !matched[v] && !matched[p] {
            matched[v] = true;
            matched[p] = true;
            size += 1;
        }
    }
    size
}

/// Exact uniform sampler of size-k independent sets of a forest, by tracing
/// back through the counting tables.
pub struct ForestSampler {
    n: usize,
    rooted: Rooted,
    inc: Vec<NatPoly>,
    exc: Vec<NatPoly>,
    tot: Vec<NatPoly>,
    /// Per vertex: prefix products of the children's polynomials, for the
    /// "v included" (children excluded) and "v excluded" (children free) cases.
    prefix: Vec<[OnceLock<Vec<NatPoly>>; 2]>,
    roots_prefix: OnceLock<Vec<NatPoly>>,
    total: NatPoly,
}

#[derive(Clone, Copy)]
enum Slot {
    Included = 0,
    Excluded = 1,
}

impl ForestSampler {
    pub fn new(g: &Graph) -> ForestSampler {
        let rooted = Rooted::new(g);
        let n = g.n();
        let mut inc: Vec<NatPoly> = vec![Vec::new(); n];
        let mut exc: Vec<NatPoly> = vec![Vec::new(); n];
        let mut tot: Vec<NatPoly> = vec![Vec::new(); n];
        for &v in rooted.order.iter().rev() {
            let mut i = vec![BigUint::zero(), BigUint::from(1u8)];
            let mut e = poly::one();
            for &c in &rooted.children[v] {
                i = poly::mul(&i, &exc[c]);
                e = poly::mul(&e, &tot[c]);
            }
            tot[v] = poly::add(&i, &e);
            inc[v] = i;
            exc[v] = e;
        }
        let mut total = poly::one();
        for &r in &rooted.roots {
            total = poly::mul(&total, &tot[r]);
        }
        let prefix = (0..n).map(|_| [OnceLock::new(), OnceLock::new()]).collect();
        ForestSampler {
            n,
            rooted,
            inc,
            exc,
            tot,
            prefix,
            roots_prefix: OnceLock::new(),
            total: poly::trim(total),
        }
    }

    /// The independence polynomial of the forest.
    pub fn sequence(&self) -> &[BigUint] {
        &self.total
    }

    fn prefix_products<'a>(&self, factors: impl Iterator<Item = &'a NatPoly>) -> Vec<NatPoly> {
        let mut out = vec![poly::one()];
        for f in factors {
            let next = poly::mul(out.last().expect("nonempty"), f);
            out.push(next);
        }
        out
    }

    fn children_prefix(&self, v: usize, slot: Slot) -> &[NatPoly] {
        self.prefix[v][slot as usize].get_or_init(|| {
            let kids = &self.rooted.children[v];
            match slot {
                Slot::Included => self.prefix_products(kids.iter().map(|&c| &self.exc[c])),
                Slot::Excluded => self.prefix_products(kids.iter().map(|&c| &self.tot[c])),
            }
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Option<VertexSet> {
        if poly::coeff(&self.total, k).is_zero() {
            return None;
        }
        let roots_prefix = self
            .roots_prefix
            .get_or_init(|| self.prefix_products(self.rooted.roots.iter().map(|&r| &self.tot[r])));
        let mut chosen = Vec::with_capacity(k);
        // (vertex, budget, free-to-include)
        let mut stack: Vec<(usize, usize, bool)> = Vec::new();
        let roots = &self.rooted.roots;
        for (i, budget) in split_budget(roots_prefix, roots.iter().map(|&r| &self.tot[r]), k, rng)
            .into_iter()
            .enumerate()
        {
            stack.push((roots[i], budget, true));
        }
        while let Some((v, budget, free)) = stack.pop() {
            let include = if !free || budget == 0 {
                false
            } else {
                let a = poly::coeff(&self.inc[v], budget);
                let t = poly::coeff(&self.tot[v], budget);
                rng.gen_biguint_below(&t) < a
            };
            let kids = &self.rooted.children[v];
            let (slot, child_budget) = if include {
                chosen.push(v);
                (Slot::Included, budget - 1)
            } else {
                (Slot::Excluded, budget)
            };
            if child_budget == 0 {
                continue;
            }
            let prefix = self.children_prefix(v, slot);
            let shares = match slot {
                Slot::Included => split_budget(prefix, kids.iter().map(|&c| &self.exc[c]), child_budget, rng),
                Slot::Excluded => split_budget(prefix, kids.iter().map(|&c| &self.tot[c]), child_budget, rng),
            };
            for (i, b) in shares.into_iter().enumerate() {
                stack.push((kids[i], b, !include));
            }
        }
        chosen.sort_unstable();
        Some(VertexSet::from_sorted_unchecked(self.n, chosen))
    }
}

/// Splits `budget` among factors with probability proportional to the number
/// of ways, given prefix products `prefix[i] = f_0 ⋯ f_{i-1}`.
fn split_budget<'a, R: Rng + ?Sized>(
    prefix: &[NatPoly],
    factors: impl DoubleEndedIterator<Item = &'a NatPoly> + ExactSizeIterator,
    budget: usize,
    rng: &mut R,
) -> Vec<usize> {
    let m = factors.len();
    let mut shares = vec![0; m];
    let mut remaining = budget;
    for (i, f) in factors.enumerate().rev() {
        if remaining == 0 {
            break;
        }
        let total = poly::coeff(&prefix[i + 1], remaining);
        debug_assert!(!total.is_zero());
        let mut u = rng.gen_biguint_below(&total);
        let mut pick = None;
        for j in 0..=remaining.min(f.len().saturating_sub(1)) {
            let w = poly::coeff(&prefix[i], remaining - j) * &f[j];
            if u < w {
                pick = Some(j);
                break;
            }
            u -= w;
        }
        let j = pick.expect("weights sum to the prefix coefficient");
        shares[i] = j;
        remaining -= j;
    }
    debug_assert_eq!(remaining, 0);
    shares
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    fn nat(v: &[u64]) -> NatPoly {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn claw_and_paths() {
        assert_eq!(forest_sequence(&Graph::star(3)), nat(&[1, 4, 3, 1]));
        assert_eq!(forest_sequence(&Graph::path(3)), nat(&[1, 3, 1]));
        assert_eq!(forest_sequence(&Graph::empty(5)), nat(&[1, 5, 10, 10, 5, 1]));
        assert_eq!(forest_max_independent(&Graph::path(4)), 2);
        assert_eq!(forest_max_independent(&Graph::star(3)), 3);
        assert_eq!(forest_max_matching(&Graph::path(5)), 2);
    }

    #[test]
    fn sampler_outputs_independent_sets_of_right_size() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (1, 3), (3, 4), (5, 6)]).unwrap();
        let s = ForestSampler::new(&g);
        assert_eq!(s.sequence(), forest_sequence(&g).as_slice());
        let mut rng = Seed::new(1, 0).rng();
        for k in 0..s.sequence().len() {
            for _ in 0..50 {
                let set = s.sample(k, &mut rng).unwrap();
                assert_eq!(set.len(), k);
                assert!(g.is_independent(&set));
            }
        }
        assert!(s.sample(s.sequence().len(), &mut rng).is_none());
    }
}
