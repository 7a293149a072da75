//! Monte Carlo estimation of consecutive coefficient ratios, planted
//! concentration experiments, and exact checks of the measure-comparison
//! identities on enumerable families.
//!
//! Trials run in parallel, trial `i` drawing from `seed.with_trial(i)`.
//! Results are collected in trial order and reduced sequentially, so every
//! aggregate is independent of scheduling.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{
    self, nat_ratio, planted_expected_unconnected, planted_two_sided_bound, ratio_to_f64,
    tree_lower_tail_bound, tree_upper_tail_bound,
};
use crate::count::{
    binomial, enumerate_labelled_trees, for_each_independent_set, independence_sequence,
    independence_sequence_capped, tree_dp, UniformSampler, DEFAULT_GENERAL_CAP,
};
use crate::error::{Error, Result};
use crate::generators::{sample_planted_with, ModelSpec, DEFAULT_REJECTION_CAP};
use crate::graph::{Graph, VertexSet};
use crate::rng::Seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithError {
    pub estimate: f64,
    /// Sample standard deviation over `√trials`.
    pub std_error: f64,
    pub trials: usize,
    pub seed: Seed,
}

/// Mean and standard error of an ordered sample.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (mean, (var / m as f64).sqrt())
}

/// Estimates `x_{k+1} / x_k` as the mean of `N_σ / (k + 1)` over uniform
/// size-`k` independent sets `σ`.
pub fn ratio_estimate(g: &Graph, k: usize, trials: usize, seed: Seed) -> Result<EstimateWithError> {
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    // Fail early and uniformly when x_k = 0.
    UniformSampler::new(g, DEFAULT_GENERAL_CAP)?.sample(k, &mut seed.rng())?;
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map_init(
            || UniformSampler::new(g, DEFAULT_GENERAL_CAP).expect("checked above"),
            |sampler, i| {
                let mut rng = seed.with_trial(i as u64).rng();
                let s = sampler.sample(k, &mut rng).expect("x_k > 0");
                g.unconnected_count_unchecked(s.as_slice()) as f64 / (k + 1) as f64
            },
        )
        .collect();
    let (estimate, std_error) = mean_and_std_error(&values);
    Ok(EstimateWithError { estimate, std_error, trials, seed })
}

/// Exact mean of `N_S / (k + 1)` over every size-`k` independent set.
pub fn enumerated_ratio(g: &Graph, k: usize) -> Result<BigRational> {
    let mut total = 0u64;
    let mut count = 0u64;
    for_each_independent_set(g, |s| {
        if s.len() == k {
            total += g.unconnected_count_unchecked(s) as u64;
            count += 1;
        }
    })?;
    if count == 0 {
        return Err(Error::NoIndependentSet(k));
    }
    Ok(BigRational::new(total.into(), (count * (k as u64 + 1)).into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceEstimate {
    /// `x̂_0 = 1, ..., x̂_{k_max}`.
    pub estimates: Vec<f64>,
    /// Propagated standard errors, from relative errors added in quadrature.
    pub std_errors: Vec<f64>,
    pub ratios: Vec<EstimateWithError>,
}

/// Telescoping product of ratio estimates. Ratio `j` uses `seed.derive(j)`.
pub fn sequence_estimate(g: &Graph, k_max: usize, trials: usize, seed: Seed) -> Result<SequenceEstimate> {
    let mut estimates = vec![1.0];
    let mut std_errors = vec![0.0];
    let mut ratios = Vec::with_capacity(k_max);
    let mut rel_sq = 0.0;
    for j in 0..k_max {
        let r = ratio_estimate(g, j, trials, seed.derive(j as u64))?;
        if r.estimate == 0.0 {
            return Err(Error::NoIndependentSet(j + 1));
        }
        rel_sq += (r.std_error / r.estimate).powi(2);
        let x = estimates[j] * r.estimate;
        estimates.push(x);
        std_errors.push(x * rel_sq.sqrt());
        ratios.push(r);
    }
    Ok(SequenceEstimate { estimates, std_errors, ratios })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    /// Relative deviation (`t` for the two-sided bound, `s` for the tree tails).
    pub t: f64,
    /// `two-sided`, `lower` or `upper`.
    pub side: String,
    pub empirical_frequency: f64,
    pub bound: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub model: ModelSpec,
    pub k: usize,
    pub trials: usize,
    pub seed: Seed,
    pub empirical_mean: f64,
    pub empirical_sd: f64,
    pub std_error: f64,
    /// Exact planted mean of `N_σ`.
    pub theoretical_mean: f64,
    /// `(level, quantile)` of `(N_σ − E N_σ) / E N_σ`.
    pub deviation_quantiles: Vec<(f64, f64)>,
    pub rows: Vec<TailRow>,
    pub violations: usize,
    /// Largest number of graph draws any trial needed.
    pub max_attempts: u64,
}

pub const DEFAULT_T_GRID: [f64; 10] = [0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1.0];
const QUANTILE_LEVELS: [f64; 7] = [0.001, 0.01, 0.05, 0.5, 0.95, 0.99, 0.999];

/// Samples the planted model `trials` times and compares the tails of
/// `N_σ` with the matching concentration bounds on `t_grid`.
pub fn planted_concentration_experiment(
    model: &ModelSpec,
    k: usize,
    trials: usize,
    seed: Seed,
    t_grid: &[f64],
) -> Result<ConcentrationReport> {
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let mean = planted_expected_unconnected(model, k)?.value;
    let samples: Vec<(f64, u64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.with_trial(i as u64).rng();
            let s = sample_planted_with(model, k, DEFAULT_REJECTION_CAP, &mut rng)?;
            Ok((s.graph.unconnected_count_unchecked(s.sigma.as_slice()) as f64, s.attempts))
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = samples.iter().map(|&(v, _)| v).collect();
    let max_attempts = samples.iter().map(|&(_, a)| a).max().unwrap_or(0);
    let (empirical_mean, std_error) = mean_and_std_error(&values);
    let empirical_sd = std_error * (trials as f64).sqrt();

    let mut deviations: Vec<f64> = values.iter().map(|v| (v - mean) / mean).collect();
    deviations.sort_by(f64::total_cmp);
    let deviation_quantiles = QUANTILE_LEVELS
        .iter()
        .map(|&q| {
            let idx = ((q * trials as f64).ceil() as usize).clamp(1, trials) - 1;
            (q, deviations[idx])
        })
        .collect();

    let n = model.n();
    let alpha = k as f64 / n as f64;
    let freq = |pred: &dyn Fn(f64) -> bool| values.iter().filter(|&&v| pred(v)).count() as f64 / trials as f64;
    let mut rows = Vec::new();
    for &t in t_grid {
        match model {
            ModelSpec::Tree { .. } => {
                if t > 0.0 && t < 1.0 {
                    let f = freq(&|v| v < (1.0 - t) * mean - 1.0);
                    let b = tree_lower_tail_bound(n, alpha, t);
                    rows.push(TailRow { t, side: "lower".into(), empirical_frequency: f, bound: b, violated: f > b });
                }
                let f = freq(&|v| v > (1.0 + t) * mean + 1.0);
                let b = tree_upper_tail_bound(n, alpha, t);
                rows.push(TailRow { t, side: "upper".into(), empirical_frequency: f, bound: b, violated: f > b });
            }
            _ => {
                let d = model.degree().expect("degree parameter");
                let f = freq(&|v| (v - mean).abs() >= t * mean);
                let b = planted_two_sided_bound(n, alpha, d, t);
                rows.push(TailRow {
                    t,
                    side: "two-sided".into(),
                    empirical_frequency: f,
                    bound: b,
                    violated: f > b,
                });
            }
        }
    }
    let violations = rows.iter().filter(|r| r.violated).count();
    Ok(ConcentrationReport {
        model: *model,
        k,
        trials,
        seed,
        empirical_mean,
        empirical_sd,
        std_error,
        theoretical_mean: mean,
        deviation_quantiles,
        rows,
        violations,
        max_attempts,
    })
}

/// Largest `n` for which each family is enumerated exhaustively.
pub const ENUMERATION_LIMIT_GNP: usize = 5;
pub const ENUMERATION_LIMIT_TREE: usize = 6;
pub const ENUMERATION_LIMIT_REGULAR: usize = 6;

/// Every graph of the family with its exact probability.
pub fn enumerate_family(model: &ModelSpec) -> Result<Vec<(Graph, BigRational)>> {
    model.validate()?;
    let n = model.n();
    let guard = |limit: usize| {
        if n > limit {
            Err(Error::SizeGuard { what: "enumerated family", size: n, limit })
        } else {
            Ok(())
        }
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let all_graphs = || {
        (0u64..1 << pairs.len()).map(|bits| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e);
            Graph::from_edges(n, edges).expect("valid pairs")
        })
    };
    match *model {
        ModelSpec::Gnp { .. } => {
            guard(ENUMERATION_LIMIT_GNP)?;
            let p = BigRational::from_float(model.p().expect("gnp")).expect("finite");
            let q = BigRational::one() - &p;
            let total = pairs.len() as i32;
            Ok(all_graphs()
                .map(|g| {
                    let m = g.edge_count() as i32;
                    let w = p.clone().pow(m) * q.clone().pow(total - m);
                    (g, w)
                })
                .collect())
        }
        ModelSpec::Tree { .. } => {
            guard(ENUMERATION_LIMIT_TREE)?;
            let w = BigRational::new(1.into(), BigUint::from(n).pow((n - 2) as u32).into());
            Ok(enumerate_labelled_trees(n)?.map(|t| (t.into_graph(), w.clone())).collect())
        }
        ModelSpec::Regular { d, .. } => {
            guard(ENUMERATION_LIMIT_REGULAR)?;
            let graphs: Vec<Graph> = all_graphs().filter(|g| (0..n).all(|v| g.degree(v) == d)).collect();
            let w = BigRational::new(1.into(), (graphs.len() as u64).into());
            Ok(graphs.into_iter().map(|g| (g, w.clone())).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeOfMeasureReport {
    pub model: ModelSpec,
    pub k: usize,
    /// Number of pairs `(G, σ)` with `σ` independent of size `k` in `G`.
    pub support_size: usize,
    /// `E X_k` as `"num/den"`.
    pub expected_count: String,
    pub planted_mass_total: String,
    pub uniform_mass_total: String,
    /// Planted law computed from its definition equals `P(G) / E X_k` everywhere.
    pub planted_identity_holds: bool,
    /// Uniform law computed from its definition equals `P(G) / X_k(G)` everywhere.
    pub uniform_identity_holds: bool,
    pub probes: usize,
    /// Probes where `P_U(A) > (1/c) P_P(A ∩ C) + P_U(Cᶜ)`.
    pub inequality_violations: usize,
    pub empty_event_holds: bool,
}

struct Pair {
    graph_index: usize,
    planted: BigRational,
    uniform: BigRational,
}

/// Exact check of the planted and uniform laws on `Λ_k(n)` and of the
/// measure-comparison inequality on `probes` random events.
pub fn change_of_measure_check(model: &ModelSpec, k: usize, probes: usize, seed: Seed) -> Result<ChangeOfMeasureReport> {
    let family = enumerate_family(model)?;
    let n = model.n();
    if k > n {
        return Err(Error::param(format!("k = {k} exceeds n = {n}")));
    }
    let subsets: Vec<Vec<usize>> = k_subsets(n, k);
    let xk: Vec<BigUint> = family
        .iter()
        .map(|(g, _)| independence_sequence_capped(g, DEFAULT_GENERAL_CAP).map(|s| s.get(k)))
        .collect::<Result<_>>()?;
    let expected: BigRational = family.iter().zip(&xk).map(|((_, w), x)| w * nat_ratio(x)).sum();
    if expected.is_zero() {
        return Err(Error::NoIndependentSet(k));
    }
    let subset_count = BigRational::from_integer(binomial(n, k).into());

    let mut pairs = Vec::new();
    let mut planted_ok = true;
    let mut uniform_ok = true;
    for sigma in &subsets {
        let set = VertexSet::new(n, sigma.clone())?;
        // P(σ independent), summed directly over the family.
        let p_indep: BigRational = family
            .iter()
            .filter(|(g, _)| g.is_independent(&set))
            .map(|(_, w)| w.clone())
            .sum();
        for (gi, (g, w)) in family.iter().enumerate() {
            if !g.is_independent(&set) {
                continue;
            }
            // σ uniform over k-subsets, then G conditioned on σ independent.
            let planted = w / (&subset_count * &p_indep);
            planted_ok &= planted == w / &expected;
            // G from the family, then σ uniform over its independent k-sets,
            // counted here by enumeration.
            let mut count = 0u64;
            for_each_independent_set(g, |s| count += (s.len() == k) as u64)?;
            let uniform = w / BigRational::from_integer(count.into());
            uniform_ok &= uniform == w / nat_ratio(&xk[gi]);
            pairs.push(Pair { graph_index: gi, planted, uniform });
        }
    }
    let planted_total: BigRational = pairs.iter().map(|p| p.planted.clone()).sum();
    let uniform_total: BigRational = pairs.iter().map(|p| p.uniform.clone()).sum();

    let cs = [constants::rational(1, 10), constants::rational(1, 2), constants::rational(1, 1), constants::rational(2, 1)];
    let mut rng = seed.rng();
    let check = |in_a: &[bool], c: &BigRational| -> bool {
        let threshold = c * &expected;
        let mut lhs = BigRational::zero();
        let mut planted_ac = BigRational::zero();
        let mut uniform_cc = BigRational::zero();
        for (p, &a) in pairs.iter().zip(in_a) {
            let in_c = nat_ratio(&xk[p.graph_index]) >= threshold;
            if a {
                lhs += &p.uniform;
                if in_c {
                    planted_ac += &p.planted;
                }
            }
            if !in_c {
                uniform_cc += &p.uniform;
            }
        }
        lhs <= planted_ac / c + uniform_cc
    };
    let mut violations = 0;
    for _ in 0..probes {
        let density: f64 = rng.gen();
        let in_a: Vec<bool> = (0..pairs.len()).map(|_| rng.gen_bool(density)).collect();
        let c = cs.choose(&mut rng).expect("nonempty");
        if !check(&in_a, c) {
            violations += 1;
        }
    }
    let empty = vec![false; pairs.len()];
    let empty_event_holds = cs.iter().all(|c| check(&empty, c));

    Ok(ChangeOfMeasureReport {
        model: *model,
        k,
        support_size: pairs.len(),
        expected_count: expected.to_string(),
        planted_mass_total: planted_total.to_string(),
        uniform_mass_total: uniform_total.to_string(),
        planted_identity_holds: planted_ok,
        uniform_identity_holds: uniform_ok,
        probes,
        inequality_violations: violations,
        empty_event_holds,
    })
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest general graph checked by enumerating its independent sets.
pub const COUNTING_LEMMA_GENERAL_LIMIT: usize = 20;
/// Largest forest checked through vertex-deleted subforests.
pub const COUNTING_LEMMA_FOREST_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingLemmaReport {
    pub n: usize,
    pub holds: bool,
    /// `Σ_{|S| = k} N_S` for every `k`, as decimal strings.
    pub pair_sums: Vec<String>,
    /// `(k + 1) x_{k+1}` for every `k`, as decimal strings.
    pub rhs: Vec<String>,
    /// `enumeration` or `vertex-deletion`.
    pub method: String,
}

/// Checks `Σ_{|S| = k independent} N_S = (k + 1) x_{k+1}` for every `k`.
///
/// Graphs up to 20 vertices are checked by enumerating independent sets.
/// Larger forests use `Σ_S N_S = Σ_v x_k(G − N[v])`, evaluated with the
/// forest program on each vertex-deleted subforest.
pub fn counting_lemma_check(g: &Graph) -> Result<CountingLemmaReport> {
    let n = g.n();
    let seq = independence_sequence_capped(g, COUNTING_LEMMA_GENERAL_LIMIT.max(DEFAULT_GENERAL_CAP))?;
    let (sums, method) = if n <= COUNTING_LEMMA_GENERAL_LIMIT {
        let mut sums = vec![BigUint::zero(); n + 1];
        for_each_independent_set(g, |s| sums[s.len()] += g.unconnected_count_unchecked(s))?;
        (sums, "enumeration")
    } else if g.is_forest() && n <= COUNTING_LEMMA_FOREST_LIMIT {
        let mut sums = vec![BigUint::zero(); n + 1];
        for v in 0..n {
            let keep: Vec<usize> = (0..n).filter(|&w| w != v && !g.has_edge(v, w)).collect();
            let sub = g.induced(&keep);
            for (k, x) in tree_dp::forest_sequence(&sub).into_iter().enumerate() {
                sums[k] += x;
            }
        }
        (sums, "vertex-deletion")
    } else {
        let limit = if g.is_forest() { COUNTING_LEMMA_FOREST_LIMIT } else { COUNTING_LEMMA_GENERAL_LIMIT };
        return Err(Error::SizeGuard { what: "counting identity input", size: n, limit });
    };
    let rhs: Vec<BigUint> = (0..=n).map(|k| BigUint::from(k + 1) * seq.get(k + 1)).collect();
    Ok(CountingLemmaReport {
        n,
        holds: sums == rhs,
        pair_sums: sums.iter().map(|x| x.to_string()).collect(),
        rhs: rhs.iter().map(|x| x.to_string()).collect(),
        method: method.into(),
    })
}

/// Exact `x_{k+1} / x_k` from the counting oracle.
pub fn exact_ratio(g: &Graph, k: usize) -> Result<f64> {
    let seq = independence_sequence(g)?;
    let xk = seq.get(k);
    if xk.is_zero() {
        return Err(Error::NoIndependentSet(k));
    }
    Ok(ratio_to_f64(&(nat_ratio(&seq.get(k + 1)) / nat_ratio(&xk))))
}
