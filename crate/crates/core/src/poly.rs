//! Coefficient-vector arithmetic for generating polynomials with natural
//! coefficients, lowest degree first.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub type NatPoly = Vec<BigUint>;

pub fn one() -> NatPoly {
    vec![BigUint::one()]
}

/// `1 + t`.
pub fn one_plus_t() -> NatPoly {
    vec![BigUint::one(), BigUint::one()]
}

/// Binomial row `(1 + t)^m`.
pub fn binomial_row(m: usize) -> NatPoly {
    let mut row = Vec::with_capacity(m + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..m {
        c = c * BigUint::from(m - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}

pub fn add(a: &[BigUint], b: &[BigUint]) -> NatPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

pub fn add_assign(a: &mut NatPoly, b: &[BigUint]) {
    if a.len() < b.len() {
        a.resize(b.len(), BigUint::zero());
    }
    for (o, s) in a.iter_mut().zip(b) {
        *o += s;
    }
}

pub fn mul(a: &[BigUint], b: &[BigUint]) -> NatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Multiplies by `t`.
pub fn shift(mut a: NatPoly) -> NatPoly {
    a.insert(0, BigUint::zero());
    a
}

/// Drops trailing zero coefficients.
pub fn trim(mut a: NatPoly) -> NatPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn coeff(a: &[BigUint], k: usize) -> BigUint {
    a.get(k).cloned().unwrap_or_default()
}
