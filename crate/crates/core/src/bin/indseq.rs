//! Command-line front end. Every subcommand prints JSON on stdout (or CSV
//! where requested). Exit status: 0 on success with all verdicts passing,
//! 1 when some verdict failed, 2 on errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use indseq::analysis::analyze_shape;
use indseq::constants::{
    dani_degree_bound, er_low_degree_thresholds, frieze_beta, karp_constants, solve_rho,
    tree_unimodality_thresholds,
};
use indseq::count::{independence_sequence, IndepSequence, SequenceJson};
use indseq::estimators::{
    change_of_measure_check, counting_lemma_check, planted_concentration_experiment, ratio_estimate,
    sequence_estimate, DEFAULT_T_GRID,
};
use indseq::experiments::{run_experiment, ExperimentConfig};
use indseq::generators::{sample_model, sample_planted, ModelSpec};
use indseq::{Error, Graph, Result, Seed};

#[derive(Parser)]
#[command(name = "indseq", version, about = "Independent set sequences of random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph (optionally planted) and write it as an edge list.
    Gen {
        #[command(flatten)]
        model: ModelArgs,
        /// Plant an independent set of this size.
        #[arg(long)]
        planted: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact independence sequence of an edge-list graph.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Pad coefficients with zeros to length n + 1.
        #[arg(long)]
        padded: bool,
    },
    /// Shape of a coefficient sequence given as count output JSON.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate a named constant.
    Constants {
        #[arg(long, value_enum)]
        name: ConstantName,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Monte Carlo estimates built on uniform independent sets.
    Estimate {
        #[arg(value_enum)]
        what: EstimateKind,
        #[arg(long)]
        input: PathBuf,
        /// Set size for `ratio`, largest index for `sequence`.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact or statistical verification reports.
    Verify {
        #[command(subcommand)]
        what: VerifyKind,
    },
    /// Run an experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Directory for the JSON report and CSV rows (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; RAYON_NUM_THREADS is honoured when absent.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Check the pair-counting identity on an edge-list graph.
    CountingLemma {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exact planted/uniform law identities on an enumerable family.
    ChangeOfMeasure {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Planted tail frequencies against their bounds.
    Concentration {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Family,
    #[arg(long)]
    n: usize,
    /// Edge probability (gnp).
    #[arg(long, conflicts_with = "d")]
    p: Option<f64>,
    /// Expected degree (gnp) or degree (regular).
    #[arg(long)]
    d: Option<f64>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec> {
        match self.model {
            Family::Tree => Ok(ModelSpec::tree(self.n)),
            Family::Gnp => match (self.p, self.d) {
                (Some(p), None) => Ok(ModelSpec::gnp_p(self.n, p)),
                (None, Some(d)) => Ok(ModelSpec::gnp_d(self.n, d)),
                _ => Err(Error::InvalidParameter("gnp needs exactly one of --p, --d".into())),
            },
            Family::Regular => {
                let d = self.d.ok_or_else(|| Error::InvalidParameter("regular needs --d".into()))?;
                if d.fract() != 0.0 || d < 1.0 {
                    return Err(Error::InvalidParameter(format!("regular degree must be a positive integer, got {d}")));
                }
                Ok(ModelSpec::regular(self.n, d as usize))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Tree,
    Gnp,
    Regular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantName {
    Rho,
    Karp,
    Frieze,
    TreeThresholds,
    ErThresholds,
    Dani,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateKind {
    Ratio,
    Sequence,
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    Ok(Graph::parse_edge_list(&fs::read_to_string(path)?)?.0)
}

/// Reads count output; coefficients may be decimal strings or JSON integers.
fn read_sequence(path: &PathBuf) -> Result<IndepSequence> {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    if let Some(coeffs) = v.get_mut("coeffs").and_then(Value::as_array_mut) {
        for c in coeffs.iter_mut() {
            if c.is_u64() {
                *c = Value::String(c.to_string());
            }
        }
    }
    let parsed: SequenceJson = serde_json::from_value(v)?;
    parsed.to_sequence()
}

fn need(x: Option<f64>, flag: &str) -> Result<f64> {
    x.ok_or_else(|| Error::InvalidParameter(format!("missing --{flag}")))
}

fn print(v: &impl serde::Serialize) -> Result<()> {
    write_out(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

/// Writes to stdout, turning a closed pipe into an error instead of a panic.
fn write_out(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Returns whether every verdict of the command passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { model, planted, seed, out } => {
            let spec = model.spec()?;
            let seed = Seed::from(seed);
            let text = match planted {
                Some(k) => {
                    let s = sample_planted(&spec, k, seed)?;
                    s.graph.to_edge_list(Some(&s.sigma))
                }
                None => sample_model(&spec, &mut seed.rng())?.to_edge_list(None),
            };
            match out {
                Some(path) => fs::write(path, text)?,
                None => write_out(&text)?,
            }
            Ok(true)
        }
        Command::Count { input, format, padded } => {
            let seq = independence_sequence(&read_graph(&input)?)?;
            let coeffs = if padded { seq.padded() } else { seq.coeffs.clone() };
            match format {
                Format::Json => {
                    let mut j = seq.to_json();
                    j.coeffs = coeffs.iter().map(|c| c.to_string()).collect();
                    print(&j)?;
                }
                Format::Csv => {
                    let mut text = String::from("k,x_k\n");
                    for (k, c) in coeffs.iter().enumerate() {
                        text.push_str(&format!("{k},{c}\n"));
                    }
                    write_out(&text)?;
                }
            }
            Ok(true)
        }
        Command::Analyze { input } => {
            let seq = read_sequence(&input)?;
            print(&analyze_shape(&seq.coeffs))?;
            Ok(true)
        }
        Command::Constants { name, d, alpha } => {
            let v = match name {
                ConstantName::Rho => serde_json::to_value(solve_rho())?,
                ConstantName::Karp => serde_json::to_value(karp_constants(need(d, "d")?)?)?,
                ConstantName::Frieze => {
                    let d = need(d, "d")?;
                    json!({ "d": d, "beta": frieze_beta(d)? })
                }
                ConstantName::TreeThresholds => serde_json::to_value(tree_unimodality_thresholds())?,
                ConstantName::ErThresholds => serde_json::to_value(er_low_degree_thresholds(need(d, "d")?)?)?,
                ConstantName::Dani => serde_json::to_value(dani_degree_bound(need(alpha, "alpha")?)?)?,
            };
            print(&v)?;
            Ok(true)
        }
        Command::Estimate { what, input, k, trials, seed } => {
            let g = read_graph(&input)?;
            let seed = Seed::from(seed);
            match what {
                EstimateKind::Ratio => print(&ratio_estimate(&g, k, trials, seed)?)?,
                EstimateKind::Sequence => print(&sequence_estimate(&g, k, trials, seed)?)?,
            }
            Ok(true)
        }
        Command::Verify { what } => match what {
            VerifyKind::CountingLemma { input } => {
                let r = counting_lemma_check(&read_graph(&input)?)?;
                print(&r)?;
                Ok(r.holds)
            }
            VerifyKind::ChangeOfMeasure { model, k, probes, seed } => {
                let r = change_of_measure_check(&model.spec()?, k, probes, Seed::from(seed))?;
                print(&r)?;
                Ok(r.planted_identity_holds
                    && r.uniform_identity_holds
                    && r.inequality_violations == 0
                    && r.empty_event_holds)
            }
            VerifyKind::Concentration { model, k, trials, seed } => {
                let r = planted_concentration_experiment(&model.spec()?, k, trials, Seed::from(seed), &DEFAULT_T_GRID)?;
                print(&r)?;
                Ok(r.violations == 0)
            }
        },
        Command::Experiment { config, out, threads } => {
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            }
            let cfg = ExperimentConfig::from_json(&fs::read_to_string(config)?)?;
            let report = run_experiment(&cfg)?;
            if let Some(dir) = out.or_else(|| cfg.output.clone()) {
                report.write_to(&dir)?;
            }
            print(&report)?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
