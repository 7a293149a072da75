//! Shape of coefficient sequences and exact real-rootedness.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::count::binomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeVerdict {
    /// `a_0 <= ... <= a_j >= ... >= a_last` for some `j` (weak inequalities).
    pub unimodal: bool,
    /// First and last index attaining the maximum value.
    pub mode_interval: (usize, usize),
    /// Largest `m` with `a_0 < a_1 < ... < a_m`.
    pub increasing_prefix: usize,
    /// Smallest `j` with `a_j >= a_{j+1} >= ... >= a_last`.
    pub decreasing_suffix_start: usize,
}

/// Panics on an empty sequence.
pub fn analyze_shape(seq: &[BigUint]) -> ShapeVerdict {
    assert!(!seq.is_empty(), "shape of an empty sequence");
    let last = seq.len() - 1;
    let max = seq.iter().max().expect("nonempty");
    let low = seq.iter().position(|x| x == max).expect("max present");
    let high = seq.iter().rposition(|x| x == max).expect("max present");

    let mut increasing_prefix = 0;
    while increasing_prefix < last && seq[increasing_prefix] < seq[increasing_prefix + 1] {
        increasing_prefix += 1;
    }
    let mut decreasing_suffix_start = last;
    while decreasing_suffix_start > 0
        && seq[decreasing_suffix_start - 1] >= seq[decreasing_suffix_start]
    {
        decreasing_suffix_start -= 1;
    }
    // Weakly rising to the first maximum, weakly falling after it.
    let rising = seq[..=low].windows(2).all(|w| w[0] <= w[1]);
    let falling = seq[low..].windows(2).all(|w| w[0] >= w[1]);
    ShapeVerdict {
        unimodal: rising && falling,
        mode_interval: (low, high),
        increasing_prefix,
        decreasing_suffix_start,
    }
}

/// `a_k² >= a_{k-1} a_{k+1}` at every interior index, in exact arithmetic.
pub fn is_log_concave(seq: &[BigUint]) -> bool {
    seq.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

pub fn is_log_concave_rational(seq: &[BigRational]) -> bool {
    seq.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

/// `a_k / C(n, k)` for every stored `k`.
pub fn newton_normalize(seq: &[BigUint], n: usize) -> Vec<BigRational> {
    seq.iter()
        .enumerate()
        .map(|(k, a)| {
            let c = binomial(n, k);
            if c.is_zero() {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(a.clone()), BigInt::from(c))
            }
        })
        .collect()
}

/// `a_start >= a_{start+1} >= ... >= a_last`.
pub fn is_nonincreasing_from(seq: &[BigUint], start: usize) -> bool {
    start >= seq.len() || seq[start..].windows(2).all(|w| w[0] >= w[1])
}

/// `a_0 < a_1 < ... < a_m`. False if the sequence is shorter than `m + 1`.
pub fn is_strictly_increasing_through(seq: &[BigUint], m: usize) -> bool {
    m < seq.len() && seq[..=m].windows(2).all(|w| w[0] < w[1])
}

/// One polynomial in the repeated-gcd tower and its Sturm sign counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmLevel {
    pub degree: usize,
    pub chain_length: usize,
    pub variations_at_neg_inf: usize,
    pub variations_at_pos_inf: usize,
    pub distinct_real_roots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCertificate {
    pub all_real: bool,
    /// Real roots counted with multiplicity.
    pub real_root_count: usize,
    pub degree: usize,
    pub method: String,
    /// Level `i` is `g_i`, with `g_0 = p` and `g_{i+1} = gcd(g_i, g_i')`.
    /// A root of multiplicity `m` is a distinct root of `g_0, ..., g_{m-1}`.
    pub levels: Vec<SturmLevel>,
}

/// Decides whether an integer polynomial (lowest degree first) has only real
/// roots, by Sturm sequences over the rationals.
pub fn certify_real_rooted(coeffs: &[BigInt]) -> Result<RootCertificate> {
    let p = QPoly::from_ints(coeffs);
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = p.degree();
    let mut levels = Vec::new();
    let mut total = 0;
    let mut g = p;
    while g.degree() > 0 {
        let (chain, next) = square_free_chain(&g);
        let neg = variations(chain.iter().map(|q| q.sign_at_neg_inf()));
        let pos = variations(chain.iter().map(|q| q.sign_at_pos_inf()));
        let distinct = neg - pos;
        total += distinct;
        levels.push(SturmLevel {
            degree: g.degree(),
            chain_length: chain.len(),
            variations_at_neg_inf: neg,
            variations_at_pos_inf: pos,
            distinct_real_roots: distinct,
        });
        g = next;
    }
    Ok(RootCertificate {
        all_real: total == degree,
        real_root_count: total,
        degree,
        method: "sturm-rational/repeated-gcd".into(),
        levels,
    })
}

/// Real roots (with multiplicity) strictly greater than `bound`.
pub fn count_real_roots_above(coeffs: &[BigInt], bound: &BigRational) -> Result<usize> {
    let p = QPoly::from_ints(coeffs);
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut total = 0;
    let mut g = p;
    while g.degree() > 0 {
        let (chain, next) = square_free_chain(&g);
        // The chain starts at a square-free polynomial, so a root at `bound`
        // is simple and only the first member vanishes there; skipping it
        // gives the sign just above `bound`.
        let at = variations(chain.iter().map(|q| q.sign_at(bound)));
        let pos = variations(chain.iter().map(|q| q.sign_at_pos_inf()));
        total += at - pos;
        g = next;
    }
    Ok(total)
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut prev = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Sturm chain of the square-free part of `g`, and `gcd(g, g')`.
fn square_free_chain(g: &QPoly) -> (Vec<QPoly>, QPoly) {
    let h = g.gcd(&g.derivative());
    let q = g.divrem(&h).0;
    (sturm_chain(&q), h)
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

/// Dense polynomial over the rationals, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn from_ints(coeffs: &[BigInt]) -> QPoly {
        QPoly::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    fn new(mut c: Vec<BigRational>) -> QPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        if self.degree() < dd || self.is_zero() {
            return (QPoly(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); self.degree() - dd + 1];
        let lead = d.lead().clone();
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] / &lead;
            if !coef.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &coef * dc;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    fn monic(&self) -> QPoly {
        let lead = self.lead().clone();
        QPoly(self.0.iter().map(|c| c / &lead).collect())
    }

    fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn sign_at_pos_inf(&self) -> i8 {
        sign(self.lead())
    }

    fn sign_at_neg_inf(&self) -> i8 {
        let s = sign(self.lead());
        if self.degree() % 2 == 0 {
            s
        } else {
            -s
        }
    }

    fn sign_at(&self, x: &BigRational) -> i8 {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        sign(&acc)
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Integer polynomial with the given integer roots, lowest degree first.
pub fn poly_from_integer_roots(roots: &[i64]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for &r in roots {
        let mut next = vec![BigInt::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(r);
        }
        out = next;
    }
    out
}

/// Lifts natural coefficients to signed integers.
pub fn to_signed(seq: &[BigUint]) -> Vec<BigInt> {
    seq.iter().map(|c| BigInt::from_biguint(Sign::Plus, c.clone())).collect()
}
