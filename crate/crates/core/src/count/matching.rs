//! Matching counts by number of edges.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::mask::{Mask, MaskGraph};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::{self, NatPoly};

/// Matching numbers `m_0, m_1, ...`, where `m_i` counts matchings with `i`
/// edges. The matching polynomial is `Σ (-1)^i m_i t^(n-2i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPolynomial {
    pub n: usize,
    pub counts: Vec<BigUint>,
}

impl MatchingPolynomial {
    /// Signed coefficients of `μ_G(t)`, lowest degree first (length `n + 1`).
    pub fn signed_coefficients(&self) -> Vec<num_bigint::BigInt> {
        let mut out = vec![num_bigint::BigInt::zero(); self.n + 1];
        for (i, m) in self.counts.iter().enumerate() {
            let c = num_bigint::BigInt::from(m.clone());
            out[self.n - 2 * i] = if i % 2 == 0 { c } else { -c };
        }
        out
    }

    /// Coefficients of `Q` with `μ_G(t) = t^(n mod 2) · Q(t²)`, lowest first.
    pub fn even_part(&self) -> Vec<num_bigint::BigInt> {
        let top = self.n / 2;
        let mut out = vec![num_bigint::BigInt::zero(); top + 1];
        for (i, m) in self.counts.iter().enumerate() {
            let c = num_bigint::BigInt::from(m.clone());
            out[top - i] = if i % 2 == 0 { c } else { -c };
        }
        out
    }
}

pub fn matching_polynomial(g: &Graph, cap: usize) -> Result<MatchingPolynomial> {
    if g.n() > cap {
        return Err(Error::SizeGuard {
            what: "matching polynomial input",
            size: g.n(),
            limit: cap,
        });
    }
    let mg = MaskGraph::new(g);
    let mut memo = HashMap::new();
    let counts = poly::trim(count(&mg, Mask::full(g.n()), &mut memo));
    Ok(MatchingPolynomial { n: g.n(), counts })
}

fn count(mg: &MaskGraph, mask: Mask, memo: &mut HashMap<Mask, NatPoly>) -> NatPoly {
    let Some(v) = mask.first() else {
        return poly::one();
    };
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let mut rest = mask.clone();
    rest.remove(v);
    let mut acc = count(mg, rest.clone(), memo);
    for u in mg.open[v].and(&rest).iter() {
        let mut sub = rest.clone();
        sub.remove(u);
        let shifted = poly::shift(count(mg, sub, memo));
        poly::add_assign(&mut acc, &shifted);
    }
    memo.insert(mask, acc.clone());
    acc
}
