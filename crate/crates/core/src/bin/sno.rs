use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sno::aliasing::{aliasing_error_refined, write_aliasing_csv, Activation, AliasingRow};
use sno::harness::{self, ExperimentConfig, ExperimentKind, Subject};
use sno::nets::{load_checkpoint, save_checkpoint, Architecture, Checkpoint, TrainingInfo};
use sno::problems::{build_dataset, DataOptions, Dataset, ProblemId};
use sno::spectral::CoeffSeries;
use sno::C64;

#[derive(Parser)]
#[command(name = "sno", version, about = "Spectral neural operators and their experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset directory (manifest.json, inputs.specf, targets.specf).
    GenData {
        problem: ProblemId,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Input band as `k_min,k_max`.
        #[arg(long, value_parser = parse_band)]
        band: Option<(usize, usize)>,
        /// First random stream; test sets conventionally start at 2^32.
        #[arg(long, default_value_t = 0)]
        first_index: u64,
        /// Coefficients per axis (0: problem default).
        #[arg(long, default_value_t = 0)]
        resolution: usize,
    },
    /// Train a model and write a `.sno` checkpoint.
    Train {
        #[arg(long)]
        model: Architecture,
        #[arg(long)]
        problem: ProblemId,
        /// Experiment config supplying the train, model, data and band sections.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Training set directory; generated from the config when absent.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Initialisation seed (default: the first seed of the config).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Relative L2 error of a checkpoint on a dataset.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        /// Uniform evaluation grid per axis (default: dataset resolution).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Run an experiment and write its result table as CSV.
    Experiment {
        kind: ExperimentKind,
        /// Config file; the shipped preset of `kind` when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV (default: the config's output, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aliasing error of an activation applied to the extreme harmonics.
    Aliasing {
        #[arg(long, default_value = "relu")]
        activation: Activation,
        /// Band limit N: inputs are cos(pi N x) and T_N.
        #[arg(long, default_value_t = 8)]
        band: usize,
        /// Refinement factor k: harmonics up to kN count as resolved.
        #[arg(long, default_value_t = 1)]
        oversample: usize,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        basis: Which,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Fourier,
    Chebyshev,
    Both,
}

fn parse_band(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected k_min,k_max")?;
    let lo = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty band [{lo}, {hi}]"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> sno::Result<()> {
    match cmd {
        Command::GenData {
            problem,
            out,
            seed,
            count,
            band,
            first_index,
            resolution,
        } => {
            let opts = DataOptions {
                resolution,
                band,
                ..DataOptions::default()
            };
            build_dataset(problem, count, seed, first_index, &opts)?.save(&out)?;
            eprintln!("wrote {count} samples of {problem} to {}", out.display());
        }
        Command::Train {
            model,
            problem,
            config,
            data,
            out,
            seed,
        } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::load(p)?,
                None => harness::preset("benchmark")?,
            };
            cfg.problems = vec![problem];
            let train = match data {
                Some(dir) => Dataset::load(dir)?,
                None => {
                    let opts = DataOptions {
                        resolution: cfg.data.resolution,
                        band: cfg.band_for(problem),
                        sigma: cfg.data.sigma,
                        nu: None,
                        dt: cfg.data.dt,
                    };
                    build_dataset(problem, cfg.data.train_count, cfg.seed, 0, &opts)?
                }
            };
            let seed = seed.unwrap_or(cfg.seeds[0]);
            let spec = harness::model_spec(model, problem, &cfg, None)?;
            let (m, loss) = harness::fit(spec, seed, &train.inputs, &train.targets, &cfg.train)?;
            let ck = Checkpoint {
                model: m,
                training: Some(TrainingInfo {
                    train: cfg.train.clone(),
                    epoch: cfg.train.epochs,
                    seed,
                }),
            };
            save_checkpoint(&out, &ck)?;
            eprintln!("final loss {loss:.6e}; wrote {}", out.display());
        }
        Command::Eval {
            checkpoint,
            dataset,
            grid,
        } => {
            let ck = load_checkpoint(checkpoint)?;
            let data = Dataset::load(dataset)?;
            let dim = ck.model.spec.dim();
            let n = grid.unwrap_or(data.manifest.resolution);
            let err = Subject::Net(ck.model).evaluate(&data.inputs, &data.targets, &vec![n; dim])?;
            let mut o = io::stdout().lock();
            writeln!(o, "problem,count,grid,rel_l2")?;
            writeln!(o, "{},{},{n},{err}", data.manifest.problem, data.len())?;
        }
        Command::Experiment { kind, config, out } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::load(p)?,
                None => harness::preset(kind.name())?,
            };
            if cfg.kind != kind {
                return Err(sno::Error::Config(format!("config describes {}, not {kind}", cfg.kind)));
            }
            if out.is_some() {
                cfg.output = out;
            }
            let table = harness::run_experiment(&cfg)?;
            match &cfg.output {
                Some(p) => {
                    table.save(p)?;
                    eprintln!("wrote {} rows to {}", table.len(), p.display());
                }
                None => table.write_csv(io::stdout().lock())?,
            }
        }
        Command::Aliasing {
            activation,
            band,
            oversample,
            basis,
        } => {
            let mut inputs = Vec::new();
            if matches!(basis, Which::Fourier | Which::Both) {
                let mut c = vec![C64::new(0.0, 0.0); band + 1];
                c[band] = C64::new(0.5, 0.0);
                inputs.push((format!("cos(pi*{band}*x)"), CoeffSeries::fourier(c)));
            }
            if matches!(basis, Which::Chebyshev | Which::Both) {
                let mut c = vec![0.0; band + 1];
                c[band] = 1.0;
                inputs.push((format!("T_{band}"), CoeffSeries::chebyshev(&c)));
            }
            let rows = inputs
                .iter()
                .map(|(id, f)| Ok(AliasingRow::new(id.clone(), &aliasing_error_refined(f, activation, band, oversample)?)))
                .collect::<sno::Result<Vec<_>>>()?;
            write_aliasing_csv(io::stdout().lock(), &rows)?;
        }
    }
    Ok(())
}
