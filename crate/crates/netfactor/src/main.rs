//! Thin command-line front end over the netfactor library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netfactor::factor::{factorize, FactorConfig, Variant};
use netfactor::harness::{self, io, ExperimentSpec};
use netfactor::netstruct::HorizontalNetwork;
use netfactor::{eval, Result};

#[derive(Parser)]
#[command(name = "netfactor", version, about = "Structure-preserving factorization of multi-level networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Latent dimension k
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Structure weight α
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Second-level structure weight (defaults to α)
    #[arg(long)]
    alpha2: Option<f64>,
    /// Iteration cap
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Step-size clipping floor σ
    #[arg(long, default_value_t = 1e-9)]
    sigma: f64,
    /// Step-size denominator regularizer δ
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
    /// Stationarity threshold on the cost change
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn to_config(&self) -> FactorConfig {
        FactorConfig {
            k: self.k,
            alpha: self.alpha,
            alpha2: self.alpha2,
            max_iter: self.max_iter,
            sigma: self.sigma,
            delta: self.delta,
            stop_tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic ⟨V, H⟩ pair (optionally with planted communities)
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Edge probability for H
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Plant block communities (writes labels.txt as well)
        #[arg(long, default_value_t = false)]
        planted: bool,
        /// Community count for --planted
        #[arg(long, default_value_t = 4)]
        clusters: usize,
        /// Output directory (V.mtx, H.mtx, [labels.txt])
        #[arg(long)]
        out: PathBuf,
    },
    /// Factorize V against one or two horizontal networks
    Factorize {
        /// Vertical network file (coordinate format)
        #[arg(long)]
        v: PathBuf,
        /// First-level horizontal network file
        #[arg(long = "h1", visible_alias = "h")]
        h1: PathBuf,
        /// Optional second-level horizontal network file
        #[arg(long)]
        h2: Option<PathBuf>,
        /// nnmf|cnmf|dnmf|tnmf (aliases: whole|community|degree|tree)
        #[arg(long)]
        variant: Variant,
        #[command(flatten)]
        solver: SolverArgs,
        /// Output directory (A.mtx, X.mtx, trace.csv)
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment protocol from a JSON config file
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's trial count
        #[arg(long)]
        trials: Option<usize>,
        /// Override the config's output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute metrics for saved factors
    Eval {
        /// Factor matrix A (rows = first-level nodes)
        #[arg(long)]
        a: PathBuf,
        /// Factor matrix X (needed for prediction metrics)
        #[arg(long)]
        x: Option<PathBuf>,
        /// Horizontal network for structure scores
        #[arg(long = "h1", visible_alias = "h")]
        h1: Option<PathBuf>,
        /// Benchmark labels for clustering metrics (one id per line)
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Held-out entries (coordinate file) scored against A·X
        #[arg(long)]
        test: Option<PathBuf>,
        /// Cluster count for k-means comparisons (default: columns of A)
        #[arg(long)]
        cluster_k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the metric lines to this CSV file as well as stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_network(path: &PathBuf) -> Result<HorizontalNetwork> {
    HorizontalNetwork::new(io::load_matrix(path)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth {
            n,
            p,
            density,
            seed,
            planted,
            clusters,
            out,
        } => {
            std::fs::create_dir_all(&out)
                .map_err(|e| netfactor::Error::io(out.display().to_string(), e))?;
            if planted {
                let inst = harness::generate_planted_instance(n, p, clusters, seed)?;
                io::save_matrix(&inst.v, out.join("V.mtx"))?;
                io::save_matrix(inst.h.weights(), out.join("H.mtx"))?;
                io::save_labels(&inst.labels, out.join("labels.txt"))?;
            } else {
                let (v, h) = harness::generate_synthetic_pair(n, p, density, seed)?;
                io::save_matrix(&v, out.join("V.mtx"))?;
                io::save_matrix(h.weights(), out.join("H.mtx"))?;
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Factorize {
            v,
            h1,
            h2,
            variant,
            solver,
            out,
        } => {
            let v = io::load_matrix(&v)?;
            let h1 = load_network(&h1)?;
            let h2 = h2.map(|p| load_network(&p)).transpose()?;
            let cfg = solver.to_config();
            let result = factorize(&v, &h1, h2.as_ref(), variant, &cfg)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| netfactor::Error::io(out.display().to_string(), e))?;
            io::save_matrix(&result.a, out.join("A.mtx"))?;
            io::save_matrix(&result.x, out.join("X.mtx"))?;
            io::save_trace(&result.trace, out.join("trace.csv"))?;
            println!(
                "{} finished after {} iterations (final cost {}), wrote {}",
                variant,
                result.trace.len(),
                result.trace.last().copied().unwrap_or(f64::NAN),
                out.display()
            );
            Ok(())
        }
        Command::Experiment { config, trials, out } => {
            let mut spec = ExperimentSpec::from_json_file(&config)?;
            if let Some(trials) = trials {
                spec.trials = trials;
            }
            if let Some(out) = out {
                spec.out = out;
            }
            let report = harness::run_experiment(&spec)?;
            print!("{}", harness::render_summary(&spec, &report));
            Ok(())
        }
        Command::Eval {
            a,
            x,
            h1,
            labels,
            test,
            cluster_k,
            seed,
            out,
        } => {
            let a = io::load_matrix(&a)?;
            let cluster_k = cluster_k.unwrap_or(a.ncols());
            let mut lines = vec!["metric,value".to_string()];

            if let Some(h1) = &h1 {
                let h = load_network(h1)?;
                let scores = harness::score_factors(&h, &a, cluster_k, seed)?;
                lines.push(format!("jaccard,{}", scores.jaccard));
                lines.push(format!("folkes_mallows,{}", scores.folkes_mallows));
                lines.push(format!("f1,{}", scores.f1));
                lines.push(format!("degree_correlation,{}", scores.degree_correlation));
                lines.push(format!("tree_overlap,{}", scores.tree_overlap));
                lines.push(format!("max_overlap,{}", scores.max_overlap));
            }

            if let Some(labels_path) = &labels {
                let truth = io::load_labels(labels_path)?;
                let pred = eval::kmeans(&a, cluster_k, seed, 10)?;
                let pc = eval::pair_counts(&truth, &pred)?;
                lines.push(format!("clustering_jaccard,{}", eval::jaccard(&pc)));
                lines.push(format!(
                    "clustering_folkes_mallows,{}",
                    eval::folkes_mallows(&pc)
                ));
                lines.push(format!("clustering_f1,{}", eval::f1_measure(&pc)));
            }

            if let Some(test_path) = &test {
                let x_path = x.as_ref().ok_or_else(|| {
                    netfactor::Error::InvalidConfig("--test needs --x to predict A·X".into())
                })?;
                let x = io::load_matrix(x_path)?;
                let held = io::load_matrix(test_path)?;
                let recon = a.dot(&x);
                if held.dim() != recon.dim() {
                    return Err(netfactor::Error::DimensionMismatch {
                        op: "eval --test",
                        left: format!("{}x{}", recon.nrows(), recon.ncols()),
                        right: format!("{}x{}", held.nrows(), held.ncols()),
                    });
                }
                let mut pred = Vec::new();
                let mut actual = Vec::new();
                for ((i, j), v) in held.indexed_iter() {
                    if *v != 0.0 {
                        pred.push(recon[[i, j]]);
                        actual.push(*v);
                    }
                }
                lines.push(format!("mae,{}", eval::mae(&pred, &actual)?));
                lines.push(format!("pearson,{}", eval::pearson(&pred, &actual)?));
            }

            let body = lines.join("\n") + "\n";
            print!("{body}");
            if let Some(out) = out {
                std::fs::write(&out, body)
                    .map_err(|e| netfactor::Error::io(out.display().to_string(), e))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
