//! Closed-form expectations, exponential rates and threshold constants.
//!
//! Every root is located by bracketed bisection on a coarse grid scan and
//! refined to 1e-12. Rates follow one sign convention: a rate `r` means
//! `X >= e^{n r} · E X` for the count in question.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::count::binomial;
use crate::error::{Error, Result};
use crate::generators::ModelSpec;

/// Identifies the expression a reported value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    GnpExpectedCount,
    TreeExpectedCountExact,
    TreeExpectedCountAsymptotic,
    RegularExpectedCountRate,
    GnpPlantedUnconnected,
    TreePlantedUnconnected,
    RegularPlantedUnconnected,
    GnpLowerBoundRate,
    TreeLowerBoundRate,
    RegularLowerBoundRate,
    HighDegreeGnpExponent,
    DenseDegreeBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub value: f64,
    pub inputs: BTreeMap<String, f64>,
    pub tag: FormulaTag,
}

impl RateReport {
    fn new(value: f64, tag: FormulaTag, inputs: &[(&str, f64)]) -> Self {
        RateReport {
            value,
            inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            tag,
        }
    }
}

/// `x ln x`, continuous at 0.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Bisection on a bracket with a sign change, to width 1e-12.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First sign change of `f` on an even grid over `[lo, hi]`, refined.
fn first_crossing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> Option<f64> {
    let h = (hi - lo) / steps as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=steps {
        let x1 = lo + h * i as f64;
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && (f0 > 0.0) != (f1 > 0.0) {
            return Some(bisect(&f, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    None
}

/// Last sign change of `f` on an even grid over `[lo, hi]`, refined.
fn last_crossing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> Option<f64> {
    let h = (hi - lo) / steps as f64;
    let mut x1 = hi;
    let mut f1 = f(x1);
    for i in (0..steps).rev() {
        let x0 = lo + h * i as f64;
        let f0 = f(x0);
        if f0.is_finite() && f1.is_finite() && (f0 > 0.0) != (f1 > 0.0) {
            return Some(bisect(&f, x0, x1));
        }
        x1 = x0;
        f1 = f0;
    }
    None
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PittelConstants {
    /// Solution of `ρ e^ρ = 1`.
    pub rho: f64,
    /// `ρ²(ρ + 2) / (2(ρ + 1)³)`, the additive correction to `ρ n`.
    pub mean_correction: f64,
    /// `ρ(1 − ρ − ρ²)/(1 + ρ)`.
    pub variance_rate: f64,
    /// Square of `variance_rate`.
    pub variance_rate_squared: f64,
}

pub fn solve_rho() -> PittelConstants {
    let f = |x: f64| x * x.exp() - 1.0;
    let mut rho = bisect(f, 0.0, 1.0);
    for _ in 0..3 {
        let fp = (rho + 1.0) * rho.exp();
        rho -= f(rho) / fp;
    }
    let mean_correction = rho * rho * (rho + 2.0) / (2.0 * (rho + 1.0).powi(3));
    let variance_rate = rho * (1.0 - rho - rho * rho) / (1.0 + rho);
    PittelConstants {
        rho,
        mean_correction,
        variance_rate,
        variance_rate_squared: variance_rate * variance_rate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KarpConstants {
    pub d: f64,
    /// Smallest solution of `x = d e^{-d e^{-x}}`.
    pub a: f64,
    /// `d e^{-a}`.
    pub b: f64,
    pub matching_fraction: f64,
    pub independent_fraction: f64,
}

/// Largest independent set density of sparse G(n, d/n) for `0 < d <= e`.
pub fn karp_constants(d: f64) -> Result<KarpConstants> {
    if !(d > 0.0 && d <= std::f64::consts::E) {
        return Err(Error::param(format!("need 0 < d <= e, got {d}")));
    }
    // Every fixed point of x = d e^{-x} solves the composite equation; it is
    // a simple root of x - d e^{-x}, while for d = e it is a double root of
    // the composite one. Below it the composite equation can only have
    // roots when d > e, but scan anyway.
    let fixed = bisect(|x| x - d * (-x).exp(), 0.0, d);
    let h = |x: f64| x - d * (-d * (-x).exp()).exp();
    let a = first_crossing(h, 0.0, fixed * (1.0 - 1e-6), 4000).unwrap_or(fixed);
    let b = d * (-a).exp();
    let independent_fraction = (a + b + a * b) / (2.0 * d);
    Ok(KarpConstants {
        d,
        a,
        b,
        matching_fraction: 1.0 - independent_fraction,
        independent_fraction,
    })
}

/// `(2/d)(ln d − ln ln d − ln 2 + 1)` for `d > e`.
pub fn frieze_beta(d: f64) -> Result<f64> {
    if !(d > std::f64::consts::E) || !d.is_finite() {
        return Err(Error::param(format!("need d > e, got {d}")));
    }
    Ok((2.0 / d) * (d.ln() - d.ln().ln() - std::f64::consts::LN_2 + 1.0))
}

/// `ln C(n, k)` in floating point.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCount {
    /// Natural log of `E X_k`; for regular graphs, the exponential rate
    /// `n · rate` without polynomial prefactor.
    pub ln_value: f64,
    /// Exact value where the expression is exact and small enough to expand.
    #[serde(with = "opt_ratio")]
    pub exact: Option<BigRational>,
    pub tag: FormulaTag,
}

/// Largest `C(k, 2)` for which the G(n, p) expectation is expanded exactly.
const EXACT_GNP_EXPONENT_LIMIT: usize = 20_000;

fn exact_p(model: &ModelSpec) -> BigRational {
    BigRational::from_float(model.p().expect("gnp")).expect("finite p")
}

fn check_k(model: &ModelSpec, k: usize) -> Result<()> {
    model.validate()?;
    if k > model.n() {
        return Err(Error::param(format!("k = {k} exceeds n = {}", model.n())));
    }
    Ok(())
}

/// `E X_k` under the model: exact for G(n, p) and trees, a rate for regular
/// graphs.
pub fn expected_count(model: &ModelSpec, k: usize) -> Result<ExpectedCount> {
    check_k(model, k)?;
    let n = model.n();
    match *model {
        ModelSpec::Gnp { .. } => {
            let p = model.p().expect("gnp");
            let pairs = k * k.saturating_sub(1) / 2;
            let ln_value = ln_binomial(n, k) + pairs as f64 * (-p).ln_1p();
            let exact = (pairs <= EXACT_GNP_EXPONENT_LIMIT).then(|| {
                let q = BigRational::one() - exact_p(model);
                BigRational::from_integer(binomial(n, k).into()) * q.pow(pairs as i32)
            });
            Ok(ExpectedCount { ln_value, exact, tag: FormulaTag::GnpExpectedCount })
        }
        ModelSpec::Tree { .. } => {
            // C(n, k) (n − k)^{k−1} / n^{k−1}; for k = 0 this is 1.
            let exact = tree_expected_exact(n, k);
            let ln_value = if k == n {
                f64::NEG_INFINITY
            } else {
                ln_binomial(n, k) + (k as f64 - 1.0) * ((n - k) as f64 / n as f64).ln()
            };
            Ok(ExpectedCount { ln_value, exact: Some(exact), tag: FormulaTag::TreeExpectedCountExact })
        }
        ModelSpec::Regular { d, .. } => {
            let alpha = k as f64 / n as f64;
            let rate = regular_expected_rate(d as f64, alpha)?;
            Ok(ExpectedCount {
                ln_value: n as f64 * rate,
                exact: None,
                tag: FormulaTag::RegularExpectedCountRate,
            })
        }
    }
}

fn tree_expected_exact(n: usize, k: usize) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    if k == n {
        return BigRational::zero();
    }
    let num = BigInt::from(binomial(n, k)) * BigInt::from(n - k).pow((k - 1) as u32);
    let den = BigInt::from(n).pow((k - 1) as u32);
    BigRational::new(num, den)
}

/// Asymptotic tree expectation `C(n, k)(1 − α)^{αn}`, as a natural log.
pub fn tree_expected_count_asymptotic(n: usize, k: usize) -> Result<ExpectedCount> {
    if k >= n {
        return Err(Error::param(format!("need k < n, got n = {n}, k = {k}")));
    }
    let alpha = k as f64 / n as f64;
    Ok(ExpectedCount {
        ln_value: ln_binomial(n, k) + k as f64 * (1.0 - alpha).ln(),
        exact: None,
        tag: FormulaTag::TreeExpectedCountAsymptotic,
    })
}

/// `(d−1)(1−α)ln(1−α) − α ln α − (d/2)(1−2α)ln(1−2α)`.
pub fn regular_expected_rate(d: f64, alpha: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::param(format!("regular rate needs 0 <= α < 1/2, got {alpha}")));
    }
    Ok((d - 1.0) * xlnx(1.0 - alpha) - xlnx(alpha) - (d / 2.0) * xlnx(1.0 - 2.0 * alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedMean {
    /// `E N_σ` under the planted model.
    pub value: f64,
    #[serde(with = "opt_ratio")]
    pub exact: Option<BigRational>,
    /// Leading-order form `n · f(α)`, where defined.
    pub asymptotic: Option<f64>,
    pub tag: FormulaTag,
}

/// Expected number of vertices outside σ with no neighbour in σ, for the
/// planted model with `|σ| = k`.
pub fn planted_expected_unconnected(model: &ModelSpec, k: usize) -> Result<PlantedMean> {
    check_k(model, k)?;
    let n = model.n();
    let alpha = k as f64 / n as f64;
    match *model {
        ModelSpec::Gnp { .. } => {
            // Each outside vertex independently misses all k planted vertices.
            let q = BigRational::one() - exact_p(model);
            let exact = BigRational::from_integer((n - k).into()) * q.pow(k as i32);
            let d = model.degree().expect("gnp");
            Ok(PlantedMean {
                value: ratio_to_f64(&exact),
                exact: Some(exact),
                asymptotic: Some(n as f64 * (1.0 - alpha) * (-d * alpha).exp()),
                tag: FormulaTag::GnpPlantedUnconnected,
            })
        }
        ModelSpec::Tree { .. } => {
            if k + 1 > n {
                return Err(Error::param(format!("no tree on {n} vertices has {k} independent vertices")));
            }
            let exact = tree_planted_exact(n, k);
            Ok(PlantedMean {
                value: ratio_to_f64(&exact),
                exact: Some(exact),
                asymptotic: Some(n as f64 * tree_planted_density(alpha)),
                tag: FormulaTag::TreePlantedUnconnected,
            })
        }
        ModelSpec::Regular { d, .. } => {
            if 2 * k > n {
                return Err(Error::param(format!("regular planting needs 2k <= n, got n = {n}, k = {k}")));
            }
            let mut exact = BigRational::from_integer((n - k).into());
            for i in 0..d {
                let num = BigInt::from(d * (n - 2 * k)) - BigInt::from(i);
                let den = BigInt::from(d * (n - k)) - BigInt::from(i);
                exact *= BigRational::new(num, den);
            }
            let asymptotic = (2.0 * alpha < 1.0).then(|| {
                n as f64 * (1.0 - alpha) * ((1.0 - 2.0 * alpha) / (1.0 - alpha)).powi(d as i32)
            });
            Ok(PlantedMean {
                value: ratio_to_f64(&exact),
                exact: Some(exact),
                asymptotic,
                tag: FormulaTag::RegularPlantedUnconnected,
            })
        }
    }
}

/// `(n−k)(n−k−1)^k / ((n−k)^{k−1} n)`: the number of pairs (tree, outside
/// vertex) with σ ∪ {v} independent, over the number of trees with σ
/// independent.
fn tree_planted_exact(n: usize, k: usize) -> BigRational {
    let m = BigInt::from(n - k);
    let num = &m * BigInt::from(n - k - 1).pow(k as u32) * &m;
    let den = m.pow(k as u32) * BigInt::from(n);
    BigRational::new(num, den)
}

/// `(1 − α)² e^{−α/(1−α)}`.
pub fn tree_planted_density(alpha: f64) -> f64 {
    (1.0 - alpha).powi(2) * (-alpha / (1.0 - alpha)).exp()
}

/// Per-vertex rate by which `X_k` may fall below `E X_k`.
///
/// G(n, p) and regular graphs need `0 < α < β < 1`, with `β` the largest
/// independent set density; trees need `0 <= α < 1/2` and ignore `β`.
pub fn lower_bound_exponent(model: &ModelSpec, alpha: f64, beta: f64) -> Result<RateReport> {
    match *model {
        ModelSpec::Tree { .. } => {
            if !(0.0..0.5).contains(&alpha) {
                return Err(Error::param(format!("tree rate needs 0 <= α < 1/2, got {alpha}")));
            }
            let value = (2.0 - 3.0 * alpha) * (1.0 - alpha).ln() - xlnx(1.0 - 2.0 * alpha);
            Ok(RateReport::new(value, FormulaTag::TreeLowerBoundRate, &[("alpha", alpha), ("beta", beta)]))
        }
        ModelSpec::Gnp { .. } => {
            check_alpha_beta(alpha, beta)?;
            let d = model.degree().expect("gnp");
            let inner = xlnx(beta - alpha) - xlnx(beta) - xlnx(1.0 - alpha) - d * alpha * alpha / 2.0;
            Ok(RateReport::new(
                -inner,
                FormulaTag::GnpLowerBoundRate,
                &[("alpha", alpha), ("beta", beta), ("d", d)],
            ))
        }
        ModelSpec::Regular { d, .. } => {
            check_alpha_beta(alpha, beta)?;
            if 2.0 * alpha >= 1.0 {
                return Err(Error::param(format!("regular rate needs α < 1/2, got {alpha}")));
            }
            let d = d as f64;
            let inner = xlnx(beta - alpha) - xlnx(beta) + (d - 1.0) * xlnx(1.0 - alpha)
                - (d / 2.0) * xlnx(1.0 - 2.0 * alpha);
            Ok(RateReport::new(
                -inner,
                FormulaTag::RegularLowerBoundRate,
                &[("alpha", alpha), ("beta", beta), ("d", d)],
            ))
        }
    }
}

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    if 0.0 < alpha && alpha < beta && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("need 0 < α < β < 1, got α = {alpha}, β = {beta}")))
    }
}

/// Exponent `−20 n d^{−3/2} (ln d)^{−3/2}` of the high-degree G(n, d/n) bound.
pub fn high_degree_exponent(n: usize, d: f64) -> Result<RateReport> {
    if !(d > 1.0) {
        return Err(Error::param(format!("need d > 1, got {d}")));
    }
    let value = -20.0 * n as f64 * d.powf(-1.5) * d.ln().powf(-1.5);
    Ok(RateReport::new(value, FormulaTag::HighDegreeGnpExponent, &[("n", n as f64), ("d", d)]))
}

/// The bound is stated for `α` below this value.
pub const DENSE_DEGREE_VALIDITY: f64 = 1e-9;

/// `2(ln(1/α) + 1)/α − 2/√α`, the degree beyond which a G(n, d/n) graph
/// has no independent set of density `α`.
pub fn dani_degree_bound(alpha: f64) -> Result<RateReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!("need 0 < α < 1, got {alpha}")));
    }
    let value = 2.0 * ((1.0 / alpha).ln() + 1.0) / alpha - 2.0 / alpha.sqrt();
    Ok(RateReport::new(
        value,
        FormulaTag::DenseDegreeBound,
        &[("alpha", alpha), ("validity_upper", DENSE_DEGREE_VALIDITY)],
    ))
}

/// Relative deviation for trees:
/// `√(2(−(2−3α)ln(1−α) + (1−2α)ln(1−2α)) / ((1−α)² e^{−α/(1−α)}))`.
pub fn tree_s(alpha: f64) -> f64 {
    let num = -(2.0 - 3.0 * alpha) * (1.0 - alpha).ln() + xlnx(1.0 - 2.0 * alpha);
    (2.0 * num / tree_planted_density(alpha)).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeThresholds {
    /// Below this density the lower ratio bound exceeds 1.
    pub alpha_increasing: f64,
    /// Above this density the upper ratio bound is below 1.
    pub alpha_decreasing: f64,
}

/// Crossings of `(1−α)² e^{−α/(1−α)} (1 ∓ s(α)) / α` with 1.
pub fn tree_unimodality_thresholds() -> TreeThresholds {
    let side = |sign: f64| move |a: f64| tree_planted_density(a) * (1.0 + sign * tree_s(a)) / a - 1.0;
    TreeThresholds {
        alpha_increasing: first_crossing(side(-1.0), 0.01, 0.49, 4800).expect("bracketed"),
        alpha_decreasing: first_crossing(side(1.0), 0.01, 0.49, 4800).expect("bracketed"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErThresholds {
    pub d: f64,
    /// Largest independent set density used as `β`.
    pub beta: f64,
    /// The lower ratio bound exceeds 1 for every density below this.
    pub alpha_left: Option<f64>,
    /// The upper ratio bound is below 1 for every density above this, up to `β`.
    pub alpha_right: Option<f64>,
}

/// Relative deviation for sparse G(n, d/n):
/// `s = √(3.03 R / ((1−α) e^{−dα}))` with
/// `R = −β ln β − (1−α)ln(1−α) + (β−α)ln(β−α) − dα²/2`; when the radicand
/// exceeds 1 the square root is dropped.
pub fn er_s(d: f64, beta: f64, alpha: f64) -> f64 {
    let r = -xlnx(beta) - xlnx(1.0 - alpha) + xlnx(beta - alpha) - d * alpha * alpha / 2.0;
    let x = (3.03 * r / ((1.0 - alpha) * (-d * alpha).exp())).max(0.0);
    if x > 1.0 {
        x
    } else {
        x.sqrt()
    }
}

pub fn er_low_degree_thresholds(d: f64) -> Result<ErThresholds> {
    let beta = karp_constants(d)?.independent_fraction;
    let side = |sign: f64| {
        move |a: f64| (1.0 + sign * er_s(d, beta, a)) * (1.0 - a) * (-d * a).exp() / a - 1.0
    };
    let lo = 1e-4;
    let hi = beta * (1.0 - 1e-9);
    let left = side(-1.0);
    let alpha_left = if left(lo) > 0.0 { first_crossing(left, lo, hi, 20_000) } else { None };
    let right = side(1.0);
    let alpha_right = if right(hi) < 0.0 { last_crossing(right, lo, hi, 20_000) } else { None };
    Ok(ErThresholds { d, beta, alpha_left, alpha_right })
}

/// `2 e^{−n min(t, t²)(1−α)e^{−dα}/3}`: two-sided planted tail bound for
/// G(n, d/n) and d-regular graphs.
pub fn planted_two_sided_bound(n: usize, alpha: f64, d: f64, t: f64) -> f64 {
    2.0 * (-(n as f64) * t.min(t * t) * (1.0 - alpha) * (-d * alpha).exp() / 3.0).exp()
}

/// `e^{−s² n (1−α)² e^{−α/(1−α)}/2}` bounding `P(N < (1−s) E N − 1)`, `0 < s < 1`.
pub fn tree_lower_tail_bound(n: usize, alpha: f64, s: f64) -> f64 {
    (-s * s * n as f64 * tree_planted_density(alpha) / 2.0).exp()
}

/// `e^{−s² n (1−α)² e^{−α/(1−α)}/(2+s)}` bounding `P(N > (1+s) E N + 1)`, `s >= 0`.
pub fn tree_upper_tail_bound(n: usize, alpha: f64, s: f64) -> f64 {
    (-s * s * n as f64 * tree_planted_density(alpha) / (2.0 + s)).exp()
}

/// Exact rationals as `"num/den"` strings on the wire.
pub(crate) mod opt_ratio {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|r| r.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|s| s.parse::<BigRational>().map_err(serde::de::Error::custom)).transpose()
    }
}

/// Exact rational `num / den` from machine integers.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact rational from a natural.
pub fn nat_ratio(x: &BigUint) -> BigRational {
    if x.is_zero() {
        BigRational::zero()
    } else {
        BigRational::from_integer(BigInt::from(x.clone()))
    }
}
