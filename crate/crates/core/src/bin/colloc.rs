use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use colloc::bench::{self, ExperimentConfig, MethodConfig};
use colloc::cluster::empirical_weights;
use colloc::datagen::{DatasetKind, DatasetSpec};
use colloc::genz::{CornerPeakForm, GenzSpec};
use colloc::quadrature::{apply_rule, exact_beta_reference, mc_reference, relative_error};
use colloc::{DataMatrix, Error, QuadratureRule, Result, RngSpec};
use serde_json::json;

#[derive(Parser)]
#[command(name = "colloc", version, about = "Clustering-based stochastic collocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark data set as CSV.
    Datagen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 5.0)]
        beta: f64,
        /// Skip the rescaling to the unit cube.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a quadrature rule from a data set.
    Cluster {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        r: usize,
        #[arg(long, default_value_t = f64::EPSILON)]
        alpha: f64,
        #[arg(long, default_value_t = 500)]
        m: usize,
        /// `cluster`: cluster fractions; `nearest`: nearest-node fractions.
        #[arg(long, value_enum, default_value_t = Weights::Cluster)]
        weights: Weights,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate a Genz function with a rule and compare against a reference.
    Quad {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long = "fn")]
        function: u8,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Reference::Sample)]
        reference: Reference,
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<f64>>,
        #[arg(long)]
        classical_corner: bool,
        /// Beta shape for the exact reference.
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 5.0)]
        beta: f64,
    },
    /// Run an experiment described by a JSON config.
    Bench {
        #[arg(value_enum)]
        experiment: Experiment,
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiplies every sample size.
        #[arg(long)]
        scale: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Kme,
    Pca,
    Rsc,
    Pmc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weights {
    Cluster,
    Nearest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reference {
    Sample,
    ExactBeta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Dim,
    K,
    Convergence,
    Timing,
}

fn read_data(path: &PathBuf) -> Result<DataMatrix> {
    DataMatrix::read_csv(BufReader::new(File::open(path)?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Datagen { kind, p, n, seed, rho, sigma, alpha, beta, raw, out } => {
            let kind: DatasetKind = kind.parse()?;
            let spec = DatasetSpec { kind, p, n, rho, sigma_noise: sigma, alpha, beta };
            let rng = RngSpec::new(seed);
            let data = if raw { spec.generate(rng)? } else { spec.generate_benchmark(rng)? };
            data.write_csv(BufWriter::new(File::create(out)?))?;
        }
        Command::Cluster { method, kmax, seed, r, alpha, m, weights, data, out } => {
            let data = read_data(&data)?;
            let method = match method {
                Method::Kme => MethodConfig::Kme { r },
                Method::Pca => MethodConfig::Pca { alpha },
                Method::Rsc => MethodConfig::Rsc { m },
                Method::Pmc => MethodConfig::Pmc { repeats: 1 },
            };
            let mut rule = method.build_rule(&data, kmax, RngSpec::new(seed))?;
            if weights == Weights::Nearest {
                rule = empirical_weights(&data, rule.flat_nodes(), rule.dim())?;
            }
            std::fs::write(out, rule.to_json()?)?;
        }
        Command::Quad { rule, function, data, reference, a, u, classical_corner, alpha, beta } => {
            let rule = QuadratureRule::from_json(&std::fs::read_to_string(rule)?)?;
            let mut f = GenzSpec::standard(function, rule.dim())?;
            if let Some(a) = a {
                f.a = a;
            }
            if let Some(u) = u {
                f.u = u;
            }
            if classical_corner {
                f.corner = CornerPeakForm::Classical;
            }
            f.validate()?;
            if f.dim() != rule.dim() {
                return Err(Error::DimensionMismatch { expected: rule.dim(), found: f.dim() });
            }
            let estimate = apply_rule(&rule, |x| f.eval_unchecked(x))?;
            let (kind, reference) = match reference {
                Reference::Sample => {
                    let path = data.ok_or_else(|| {
                        Error::InvalidParameter("--data is required for the sample reference".into())
                    })?;
                    let data = read_data(&path)?;
                    if data.n_cols() != rule.dim() {
                        return Err(Error::DimensionMismatch { expected: rule.dim(), found: data.n_cols() });
                    }
                    ("sample", mc_reference(&data, |x| f.eval_unchecked(x))?)
                }
                Reference::ExactBeta => ("exact-beta", exact_beta_reference(&f, alpha, beta)?),
            };
            let out = json!({
                "genz_id": function,
                "estimate": estimate,
                "reference": reference,
                "reference_kind": kind,
                "relative_error": relative_error(estimate, reference)?,
            });
            println!("{out}");
        }
        Command::Bench { experiment, config, out, scale } => {
            let mut config = ExperimentConfig::from_json(&std::fs::read_to_string(config)?)?;
            if let Some(scale) = scale {
                config.scale = scale;
            }
            let out = out
                .or_else(|| config.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let report = match experiment {
                Experiment::Dim => bench::run_error_vs_dimension(&config)?,
                Experiment::K => bench::run_error_vs_k(&config)?,
                Experiment::Convergence => bench::run_convergence_comparison(&config)?,
                Experiment::Timing => bench::run_timing(&config)?,
            };
            report.write_outputs(&out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", json!({ "error": "Usage", "message": msg.trim() }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
