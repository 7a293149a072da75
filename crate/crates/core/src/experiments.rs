//! Reproducible experiment harness.
//!
//! A run is fully described by an [`ExperimentConfig`]. Trials are
//! independent, trial `i` drawing from `Seed::new(config.seed, i)`, and rows
//! are kept in trial order, so every field of the report except
//! `wall_clock_seconds` is a function of the config alone.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{analyze_shape, is_nonincreasing_from, is_strictly_increasing_through};
use crate::constants::{
    er_s, karp_constants, nat_ratio, planted_expected_unconnected, ratio_to_f64, solve_rho,
};
use crate::count::{
    independence_sequence_capped, max_independent_set_size_capped, tree_dp, tree_sequence,
};
use crate::error::{Error, Result};
use crate::estimators::{mean_and_std_error, planted_concentration_experiment, DEFAULT_T_GRID};
use crate::generators::{sample_model, sample_uniform_tree_with, ModelSpec, TREE_METHOD};
use crate::rng::{Seed, STREAM_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    /// Shape of exact sequences of uniform random trees.
    TreeUnimodality,
    /// Strict increase through `⌊prefix_fraction · n⌋`.
    TreePrefix,
    /// Non-increasing tail from `⌈(2α − 1)/3⌉`.
    TreeLastthird,
    /// Mean and variance of the independence number of random trees.
    Pittel,
    /// Exact consecutive ratios of sparse G(n, d/n) against the planted sandwich.
    ErRatio,
    /// Independence number density of sparse G(n, d/n).
    KarpMaxind,
    /// Tail frequencies of `N_σ` under the planted model.
    Concentration,
    /// Location of the mode of random tree sequences; no verdict.
    Mode,
}

impl ExperimentName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::TreeUnimodality => "tree-unimodality",
            ExperimentName::TreePrefix => "tree-prefix",
            ExperimentName::TreeLastthird => "tree-lastthird",
            ExperimentName::Pittel => "pittel",
            ExperimentName::ErRatio => "er-ratio",
            ExperimentName::KarpMaxind => "karp-maxind",
            ExperimentName::Concentration => "concentration",
            ExperimentName::Mode => "mode",
        }
    }
}

/// Every threshold a verdict compares against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Fraction of trials that must satisfy a per-trial property.
    pub pass_fraction: f64,
    /// Strict increase is required through `⌊prefix_fraction · n⌋`.
    pub prefix_fraction: f64,
    /// Allowed `|mean(α(T))/n − ρ|`.
    pub pittel_mean_tolerance: f64,
    /// Accepted range of `Var(α(T))/n`.
    pub variance_band: [f64; 2],
    /// Largest relative gap at which `Var(α(T))/n` is reported as matching
    /// one of the candidate variance expressions.
    pub variance_match_relative: f64,
    /// Allowed `|mean(α(G))/n − independent_fraction|`.
    pub karp_tolerance: f64,
    /// Fraction of (instance, k) cells whose ratio must fall in the sandwich.
    pub sandwich_fraction: f64,
    /// Allowed number of tail-bound violations.
    pub max_violations: usize,
    /// Relative deviations at which tail bounds are compared.
    pub t_grid: Vec<f64>,
    /// Allowed distance of the empirical planted mean, in standard errors.
    pub mean_sigma: f64,
    /// Histogram bin width for mode locations.
    pub mode_bin_width: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pass_fraction: 1.0,
            prefix_fraction: 0.26543,
            pittel_mean_tolerance: 0.01,
            variance_band: [0.03, 0.05],
            variance_match_relative: 0.25,
            karp_tolerance: 0.01,
            sandwich_fraction: 0.9,
            max_violations: 0,
            t_grid: DEFAULT_T_GRID.to_vec(),
            mean_sigma: 3.0,
            mode_bin_width: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    pub model: ModelSpec,
    /// Inclusive `[k_min, k_max]`; used by `er-ratio` (all) and
    /// `concentration` (`k_min`).
    #[serde(default)]
    pub k_range: Option<[usize; 2]>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentName, model: ModelSpec, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            model,
            k_range: None,
            trials,
            seed,
            output: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-trial rows with a fixed column order: `trial`, `seed`, then `columns`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialTable {
    pub columns: Vec<String>,
    pub rows: Vec<(u64, u64, Vec<f64>)>,
}

impl TrialTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (trial, seed, values) in &self.rows {
            out.push_str(&format!("{trial},{seed}"));
            for v in values {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub library_version: String,
    pub stream_version: String,
    pub metadata: BTreeMap<String, String>,
    pub aggregates: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub wall_clock_seconds: f64,
    #[serde(skip)]
    pub table: TrialTable,
}

impl ExperimentReport {
    /// True iff every verdict passed (vacuously true without verdicts).
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Writes `<name>-report.json` and `<name>-trials.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let name = self.config.experiment.as_str();
        let json_path = dir.join(format!("{name}-report.json"));
        let csv_path = dir.join(format!("{name}-trials.csv"));
        std::fs::write(&json_path, serde_json::to_string_pretty(self)?)?;
        std::fs::write(&csv_path, self.table.to_csv())?;
        Ok((json_path, csv_path))
    }
}

struct Outcome {
    aggregates: BTreeMap<String, Value>,
    verdicts: Vec<Verdict>,
    table: TrialTable,
}

fn verdict(criterion: &str, passed: bool, detail: String) -> Verdict {
    Verdict { criterion: criterion.into(), passed, detail }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    config.model.validate()?;
    let start = Instant::now();
    let mut metadata = BTreeMap::new();
    let outcome = match config.experiment {
        ExperimentName::TreeUnimodality
        | ExperimentName::TreePrefix
        | ExperimentName::TreeLastthird
        | ExperimentName::Mode => {
            metadata.insert("tree_method".into(), TREE_METHOD.into());
            tree_shapes(config)?
        }
        ExperimentName::Pittel => {
            metadata.insert("tree_method".into(), TREE_METHOD.into());
            pittel(config)?
        }
        ExperimentName::ErRatio => er_ratio(config)?,
        ExperimentName::KarpMaxind => karp_maxind(config)?,
        ExperimentName::Concentration => concentration(config)?,
    };
    Ok(ExperimentReport {
        config: config.clone(),
        library_version: env!("CARGO_PKG_VERSION").into(),
        stream_version: STREAM_VERSION.into(),
        metadata,
        aggregates: outcome.aggregates,
        verdicts: outcome.verdicts,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        table: outcome.table,
    })
}

fn tree_n(config: &ExperimentConfig) -> Result<usize> {
    match config.model {
        ModelSpec::Tree { n } => Ok(n),
        _ => Err(Error::param(format!(
            "experiment {} needs the tree family",
            config.experiment.as_str()
        ))),
    }
}

/// Runs `f` once per trial in parallel, keeping trial order.
fn per_trial<T: Send>(config: &ExperimentConfig, f: impl Fn(Seed) -> Result<T> + Sync) -> Result<Vec<T>> {
    (0..config.trials as u64)
        .into_par_iter()
        .map(|i| f(Seed::new(config.seed, i)))
        .collect()
}

fn tree_shapes(config: &ExperimentConfig) -> Result<Outcome> {
    let n = tree_n(config)?;
    let tol = &config.tolerances;
    let prefix_end = (tol.prefix_fraction * n as f64).floor() as usize;
    let rows = per_trial(config, |seed| {
        let tree = sample_uniform_tree_with(n, &mut seed.rng())?;
        let seq = tree_sequence(&tree).coeffs;
        let shape = analyze_shape(&seq);
        let alpha = seq.len() - 1;
        let tail_start = (2 * alpha).saturating_sub(1).div_ceil(3);
        Ok(vec![
            alpha as f64,
            shape.unimodal as u8 as f64,
            shape.mode_interval.0 as f64,
            shape.mode_interval.1 as f64,
            shape.increasing_prefix as f64,
            is_strictly_increasing_through(&seq, prefix_end) as u8 as f64,
            tail_start as f64,
            is_nonincreasing_from(&seq, tail_start) as u8 as f64,
        ])
    })?;
    let columns = [
        "alpha",
        "unimodal",
        "mode_low",
        "mode_high",
        "increasing_prefix",
        "prefix_holds",
        "tail_start",
        "tail_holds",
    ];
    let count = |col: usize| rows.iter().filter(|r| r[col] == 1.0).count();
    let trials = config.trials;
    let mut aggregates = BTreeMap::new();
    aggregates.insert("trials".into(), json!(trials));
    aggregates.insert("unimodal_count".into(), json!(count(1)));
    aggregates.insert("prefix_end".into(), json!(prefix_end));
    aggregates.insert("prefix_count".into(), json!(count(5)));
    aggregates.insert("tail_count".into(), json!(count(7)));
    let min_prefix = rows.iter().map(|r| r[4] as usize).min().unwrap_or(0);
    aggregates.insert("min_increasing_prefix".into(), json!(min_prefix));
    let mode_fracs: Vec<f64> = rows.iter().map(|r| r[2] / n as f64).collect();
    let (mode_mean, mode_se) = mean_and_std_error(&mode_fracs);
    aggregates.insert("mode_fraction_mean".into(), json!(mode_mean));
    aggregates.insert("mode_fraction_std_error".into(), json!(mode_se));
    let fraction_ok = |c: usize| c as f64 >= tol.pass_fraction * trials as f64;
    let verdicts = match config.experiment {
        ExperimentName::TreeUnimodality => vec![verdict(
            "unimodal",
            fraction_ok(count(1)),
            format!("{}/{trials} unimodal", count(1)),
        )],
        ExperimentName::TreePrefix => vec![verdict(
            "strict-prefix",
            fraction_ok(count(5)),
            format!("{}/{trials} strictly increasing through index {prefix_end}", count(5)),
        )],
        ExperimentName::TreeLastthird => vec![verdict(
            "last-third-tail",
            fraction_ok(count(7)),
            format!("{}/{trials} non-increasing from ⌈(2α−1)/3⌉", count(7)),
        )],
        _ => {
            let mut hist: BTreeMap<String, usize> = BTreeMap::new();
            for f in &mode_fracs {
                let bin = (f / tol.mode_bin_width).floor() * tol.mode_bin_width;
                *hist.entry(format!("{bin:.4}")).or_default() += 1;
            }
            aggregates.insert("mode_fraction_histogram".into(), json!(hist));
            Vec::new()
        }
    };
    Ok(Outcome {
        aggregates,
        verdicts,
        table: table(config, &columns, rows),
    })
}

fn table(config: &ExperimentConfig, columns: &[&str], rows: Vec<Vec<f64>>) -> TrialTable {
    TrialTable {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows: rows.into_iter().enumerate().map(|(i, r)| (i as u64, config.seed, r)).collect(),
    }
}

fn pittel(config: &ExperimentConfig) -> Result<Outcome> {
    let n = tree_n(config)?;
    let tol = &config.tolerances;
    let values = per_trial(config, |seed| {
        let tree = sample_uniform_tree_with(n, &mut seed.rng())?;
        Ok(tree_dp::forest_max_independent(tree.graph()) as f64)
    })?;
    let c = solve_rho();
    let (mean, se) = mean_and_std_error(&values);
    let sd = se * (values.len() as f64).sqrt();
    let mean_frac = mean / n as f64;
    let var_rate = sd * sd / n as f64;
    let gap = |x: f64| (var_rate - x).abs() / x;
    let (nearest, nearest_gap) = if gap(c.variance_rate) <= gap(c.variance_rate_squared) {
        ("unsquared", gap(c.variance_rate))
    } else {
        ("squared", gap(c.variance_rate_squared))
    };
    let matched = if nearest_gap <= tol.variance_match_relative { nearest } else { "neither" };
    let mut aggregates = BTreeMap::new();
    aggregates.insert("trials".into(), json!(config.trials));
    aggregates.insert("mean_fraction".into(), json!(mean_frac));
    aggregates.insert("mean_minus_rho_n".into(), json!(mean - c.rho * n as f64));
    aggregates.insert("predicted_mean_correction".into(), json!(c.mean_correction));
    aggregates.insert("variance_over_n".into(), json!(var_rate));
    aggregates.insert("variance_rate_unsquared".into(), json!(c.variance_rate));
    aggregates.insert("variance_rate_squared".into(), json!(c.variance_rate_squared));
    aggregates.insert("variance_expression_matched".into(), json!(matched));
    aggregates.insert("variance_expression_nearest".into(), json!(nearest));
    aggregates.insert("variance_relative_gap".into(), json!(nearest_gap));
    aggregates.insert("rho".into(), json!(c.rho));
    let verdicts = vec![
        verdict(
            "mean",
            (mean_frac - c.rho).abs() <= tol.pittel_mean_tolerance,
            format!("mean/n = {mean_frac:.5}, ρ = {:.6}", c.rho),
        ),
        verdict(
            "variance",
            var_rate >= tol.variance_band[0] && var_rate <= tol.variance_band[1],
            format!("Var/n = {var_rate:.5}; matched expression: {matched} (nearest {nearest}, relative gap {nearest_gap:.2})"),
        ),
    ];
    let rows = values.into_iter().map(|v| vec![v]).collect();
    Ok(Outcome { aggregates, verdicts, table: table(config, &["alpha"], rows) })
}

fn gnp_params(config: &ExperimentConfig) -> Result<(usize, f64)> {
    match config.model {
        ModelSpec::Gnp { n, .. } => Ok((n, config.model.degree().expect("gnp"))),
        _ => Err(Error::param(format!(
            "experiment {} needs the gnp family",
            config.experiment.as_str()
        ))),
    }
}

fn er_ratio(config: &ExperimentConfig) -> Result<Outcome> {
    let (n, d) = gnp_params(config)?;
    let beta = karp_constants(d)?.independent_fraction;
    let [k_min, k_max] = config.k_range.unwrap_or([1, (beta * n as f64).floor() as usize]);
    let ks: Vec<usize> = (k_min.max(1)..=k_max.min(n - 1)).filter(|&k| (k as f64) < beta * n as f64).collect();
    let bounds: Vec<(usize, f64, f64)> = ks
        .iter()
        .map(|&k| {
            let alpha = k as f64 / n as f64;
            let s = er_s(d, beta, alpha);
            let mean = planted_expected_unconnected(&config.model, k)?.value / (k + 1) as f64;
            Ok((k, (1.0 - s) * mean, (1.0 + s) * mean))
        })
        .collect::<Result<_>>()?;
    let trial_rows = per_trial(config, |seed| {
        let g = sample_model(&config.model, &mut seed.rng())?;
        let seq = independence_sequence_capped(&g, n)?;
        let mut cells = Vec::new();
        for &(k, lo, hi) in &bounds {
            let xk = seq.get(k);
            if num_traits::Zero::is_zero(&xk) {
                continue;
            }
            let r = ratio_to_f64(&(nat_ratio(&seq.get(k + 1)) / nat_ratio(&xk)));
            cells.push(vec![k as f64, r, lo, hi, (r >= lo && r <= hi) as u8 as f64]);
        }
        Ok(cells)
    })?;
    let mut rows = Vec::new();
    let mut inside = 0;
    let mut cells = 0;
    for (i, trial) in trial_rows.into_iter().enumerate() {
        for r in trial {
            cells += 1;
            inside += (r[4] == 1.0) as usize;
            rows.push((i as u64, config.seed, r));
        }
    }
    let frac = if cells == 0 { 0.0 } else { inside as f64 / cells as f64 };
    let mut aggregates = BTreeMap::new();
    aggregates.insert("beta".into(), json!(beta));
    aggregates.insert("cells".into(), json!(cells));
    aggregates.insert("inside".into(), json!(inside));
    aggregates.insert("inside_fraction".into(), json!(frac));
    let verdicts = vec![verdict(
        "sandwich",
        cells > 0 && frac >= config.tolerances.sandwich_fraction,
        format!("{inside}/{cells} ratios inside (1 ∓ s)·E N_σ/(k+1)"),
    )];
    let columns = ["k", "ratio", "lower", "upper", "inside"];
    Ok(Outcome {
        aggregates,
        verdicts,
        table: TrialTable { columns: columns.iter().map(|c| c.to_string()).collect(), rows },
    })
}

fn karp_maxind(config: &ExperimentConfig) -> Result<Outcome> {
    let (n, d) = gnp_params(config)?;
    let karp = karp_constants(d)?;
    let values = per_trial(config, |seed| {
        let g = sample_model(&config.model, &mut seed.rng())?;
        Ok(max_independent_set_size_capped(&g, n)? as f64 / n as f64)
    })?;
    let (mean, se) = mean_and_std_error(&values);
    let mut aggregates = BTreeMap::new();
    aggregates.insert("mean_fraction".into(), json!(mean));
    aggregates.insert("std_error".into(), json!(se));
    aggregates.insert("independent_fraction".into(), json!(karp.independent_fraction));
    let verdicts = vec![verdict(
        "independence-density",
        (mean - karp.independent_fraction).abs() <= config.tolerances.karp_tolerance,
        format!("mean α/n = {mean:.5} vs {:.5}", karp.independent_fraction),
    )];
    let rows = values.into_iter().map(|v| vec![v]).collect();
    Ok(Outcome { aggregates, verdicts, table: table(config, &["alpha_fraction"], rows) })
}

fn concentration(config: &ExperimentConfig) -> Result<Outcome> {
    let k = config
        .k_range
        .map(|r| r[0])
        .ok_or_else(|| Error::param("concentration needs k_range"))?;
    let tol = &config.tolerances;
    let r = planted_concentration_experiment(
        &config.model,
        k,
        config.trials,
        Seed::new(config.seed, 0),
        &tol.t_grid,
    )?;
    let mut aggregates = BTreeMap::new();
    aggregates.insert("report".into(), serde_json::to_value(&r)?);
    let gap = (r.empirical_mean - r.theoretical_mean).abs();
    let verdicts = vec![
        verdict(
            "tail-bounds",
            r.violations <= tol.max_violations,
            format!("{} violations over {} grid rows", r.violations, r.rows.len()),
        ),
        verdict(
            "planted-mean",
            gap <= tol.mean_sigma * r.std_error,
            format!(
                "empirical {:.4} vs exact {:.4} ({:.2} standard errors)",
                r.empirical_mean,
                r.theoretical_mean,
                gap / r.std_error
            ),
        ),
    ];
    let columns = ["t", "empirical_frequency", "bound", "violated"];
    let rows = r
        .rows
        .iter()
        .map(|row| vec![row.t, row.empirical_frequency, row.bound, row.violated as u8 as f64])
        .collect();
    Ok(Outcome { aggregates, verdicts, table: table(config, &columns, rows) })
}
