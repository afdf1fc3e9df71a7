use std::collections::BTreeMap;
use std::time::Instant;

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::{ResultRecord, ResultTable};
use super::subject::{exact_rule, fit, model_spec, Subject};
use crate::aliasing::operator_grid_discrepancy;
use crate::error::{Error, Result};
use crate::nets::Architecture;
use crate::problems::{build_dataset, DataOptions, Dataset, ProblemId};
use crate::spectral::{interpolate_to_grid, GridFunction, GridKind};

/// First random stream of test samples; training samples start at 0.
pub const TEST_STREAM: u64 = 1 << 32;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::Benchmark => run_benchmark(cfg),
        ExperimentKind::Superres => run_superres(cfg),
        ExperimentKind::Lowfreq => run_lowfreq(cfg),
        ExperimentKind::AliasingStudy => run_aliasing_study(cfg),
        ExperimentKind::InitSensitivity => run_init_sensitivity(cfg),
    }
}

/// Runs `cfg` and writes the table to its output path, if any.
pub fn run_and_save(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let table = run_experiment(cfg)?;
    if let Some(path) = &cfg.output {
        table.save(path)?;
    }
    Ok(table)
}

struct Recorder<'a> {
    cfg: &'a ExperimentConfig,
    table: ResultTable,
}

impl<'a> Recorder<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            table: ResultTable::new(),
        }
    }

    fn push(&mut self, model: &str, problem: ProblemId, param: String, metric: &str, value: f64, t0: Instant) -> Result<()> {
        let seconds = if self.cfg.timing {
            t0.elapsed().as_secs_f64()
        } else {
            0.0
        };
        self.table.push(ResultRecord {
            experiment: self.cfg.kind.name().into(),
            model: model.into(),
            problem: problem.name().into(),
            param,
            metric: metric.into(),
            value,
            seconds,
        })
    }
}

fn data_options(cfg: &ExperimentConfig, problem: ProblemId, band: Option<(usize, usize)>) -> DataOptions {
    let mut resolution = cfg.data.resolution;
    if let Some((_, hi)) = band {
        let base = if resolution == 0 {
            problem.default_resolution()
        } else {
            resolution
        };
        resolution = base.max(2 * hi + 2);
    }
    DataOptions {
        resolution,
        band,
        sigma: cfg.data.sigma,
        nu: None,
        dt: cfg.data.dt,
    }
}

fn train_test(cfg: &ExperimentConfig, problem: ProblemId, top: Option<usize>) -> Result<(Dataset, Dataset)> {
    let band = cfg.band_for(problem);
    let mut opts = data_options(cfg, problem, band);
    if let Some(t) = top {
        opts.resolution = opts.resolution.max(2 * t + 2);
    }
    let train = build_dataset(problem, cfg.data.train_count, cfg.seed, 0, &opts)?;
    let test = build_dataset(problem, cfg.data.test_count, cfg.seed, TEST_STREAM, &opts)?;
    Ok((train, test))
}

fn eval_sizes(cfg: &ExperimentConfig, problem: ProblemId, data: &Dataset) -> Vec<usize> {
    let n = if cfg.grids.eval > 0 {
        cfg.grids.eval
    } else {
        data.manifest.resolution
    };
    vec![n; problem.dim()]
}

enum Built {
    Trained(Subject, f64),
    Failed(&'static str),
}

/// Trains (or looks up the exact rule of) `model` for `problem`.
fn build(
    cfg: &ExperimentConfig,
    model: &str,
    problem: ProblemId,
    seed: u64,
    grid: Option<usize>,
    train: &Dataset,
) -> Result<Built> {
    if model == "exact" {
        return Ok(match exact_rule(problem) {
            Some(_) => Built::Trained(Subject::exact(problem)?, 0.0),
            None => Built::Failed("unsupported"),
        });
    }
    let arch: Architecture = model.parse()?;
    let spec = match model_spec(arch, problem, cfg, grid) {
        Ok(s) => s,
        Err(Error::InvalidArgument(_)) | Err(Error::DegenerateGrid(_)) => return Ok(Built::Failed("unsupported")),
        Err(e) => return Err(e),
    };
    match fit(spec, seed, &train.inputs, &train.targets, &cfg.train) {
        Ok((m, loss)) => Ok(Built::Trained(Subject::Net(m), loss)),
        Err(Error::Diverged(_)) => Ok(Built::Failed("diverged")),
        Err(e) => Err(e),
    }
}

fn seed_param(model: &str, seed: u64) -> String {
    if model == "exact" {
        String::new()
    } else {
        format!("seed={seed}")
    }
}

fn join(a: &str, b: &str) -> String {
    match (a.is_empty(), b.is_empty()) {
        (_, true) => a.into(),
        (true, _) => b.into(),
        _ => format!("{a};{b}"),
    }
}

fn seeds_for<'a>(cfg: &'a ExperimentConfig, model: &str) -> &'a [u64] {
    if model == "exact" {
        &cfg.seeds[..1]
    } else {
        &cfg.seeds
    }
}

/// Test error of every (problem, model, seed).
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rec = Recorder::new(cfg);
    for &problem in &cfg.problems {
        let (train, test) = train_test(cfg, problem, None)?;
        let sizes = eval_sizes(cfg, problem, &test);
        for model in &cfg.models {
            for &seed in seeds_for(cfg, model) {
                let t0 = Instant::now();
                let param = seed_param(model, seed);
                match build(cfg, model, problem, seed, None, &train)? {
                    Built::Failed(why) => rec.push(model, problem, param, why, f64::NAN, t0)?,
                    Built::Trained(s, loss) => {
                        let err = s.evaluate(&test.inputs, &test.targets, &sizes)?;
                        if model != "exact" {
                            rec.push(model, problem, param.clone(), "train_loss", loss, t0)?;
                        }
                        rec.push(model, problem, param, "test_rel_l2", err, t0)?;
                    }
                }
            }
        }
    }
    Ok(rec.table)
}

/// Error on bands shifted up from the training band, on a fine grid.
pub fn run_superres(cfg: &ExperimentConfig) -> Result<ResultTable> {
    band_shift(cfg, true)
}

/// Error on bands shifted down from the training band.
pub fn run_lowfreq(cfg: &ExperimentConfig) -> Result<ResultTable> {
    band_shift(cfg, false)
}

fn band_shift(cfg: &ExperimentConfig, up: bool) -> Result<ResultTable> {
    let mut rec = Recorder::new(cfg);
    for &problem in &cfg.problems {
        let (lo, hi) = cfg
            .band_for(problem)
            .ok_or_else(|| Error::Config(format!("{problem} has no input band")))?;
        let top = if up { hi + cfg.max_shift() } else { hi };
        let (train, test) = train_test(cfg, problem, Some(top))?;
        let sizes = eval_sizes(cfg, problem, &test);
        let mut shifted = BTreeMap::new();
        for &dk in &cfg.band.shifts {
            let band = if up { (lo + dk, hi + dk) } else { (lo - dk, hi - dk) };
            let mut opts = data_options(cfg, problem, Some(band));
            opts.resolution = train.manifest.resolution;
            let d = build_dataset(problem, cfg.data.test_count, cfg.seed, TEST_STREAM, &opts)?;
            shifted.insert(dk, d);
        }
        for model in &cfg.models {
            for &seed in seeds_for(cfg, model) {
                let t0 = Instant::now();
                let sp = seed_param(model, seed);
                let subject = match build(cfg, model, problem, seed, None, &train)? {
                    Built::Failed(why) => {
                        rec.push(model, problem, sp, why, f64::NAN, t0)?;
                        continue;
                    }
                    Built::Trained(s, _) => s,
                };
                let in_band = subject.evaluate(&test.inputs, &test.targets, &sizes)?;
                rec.push(model, problem, sp.clone(), "in_band_rel_l2", in_band, t0)?;
                for (dk, d) in &shifted {
                    let err = subject.evaluate(&d.inputs, &d.targets, &sizes)?;
                    rec.push(model, problem, join(&format!("dk={dk}"), &sp), "shifted_rel_l2", err, t0)?;
                }
            }
        }
    }
    Ok(rec.table)
}

/// Coarse/fine discrepancy of models trained on each grid, and the error of
/// the smallest-grid model on finer grids.
pub fn run_aliasing_study(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rec = Recorder::new(cfg);
    let mut sizes = cfg.grids.sizes.clone();
    sizes.sort_unstable();
    for &problem in &cfg.problems {
        let (train, test) = train_test(cfg, problem, None)?;
        for model in &cfg.models {
            for &seed in seeds_for(cfg, model) {
                let sp = seed_param(model, seed);
                for (i, &n) in sizes.iter().enumerate() {
                    let t0 = Instant::now();
                    let param = join(&format!("grid={n}"), &sp);
                    let subject = match build(cfg, model, problem, seed, Some(n), &train)? {
                        Built::Failed(why) => {
                            rec.push(model, problem, param, why, f64::NAN, t0)?;
                            continue;
                        }
                        Built::Trained(s, _) => s,
                    };
                    let fine = test
                        .inputs
                        .iter()
                        .map(|f| interpolate_to_grid(f, &[2 * n], &[GridKind::Uniform]))
                        .collect::<Result<Vec<GridFunction>>>()?;
                    let d = operator_grid_discrepancy(|u| subject.apply_grid(u), &fine, cfg.grids.projection)?;
                    let err = subject.evaluate(&test.inputs, &test.targets, &[n])?;
                    rec.push(model, problem, param.clone(), "test_rel_l2", err, t0)?;
                    rec.push(model, problem, param.clone(), "discrepancy_mean", d.mean, t0)?;
                    rec.push(model, problem, param.clone(), "discrepancy_median", d.median, t0)?;
                    rec.push(model, problem, param, "discrepancy_max", d.max, t0)?;
                    if i == 0 {
                        for &m in &cfg.grids.eval_sizes {
                            let t1 = Instant::now();
                            let err = subject.evaluate(&test.inputs, &test.targets, &[m])?;
                            let param = join(&format!("train={n};eval={m}"), &sp);
                            rec.push(model, problem, param, "coarse_model_rel_l2", err, t1)?;
                        }
                    }
                }
            }
        }
    }
    Ok(rec.table)
}

/// Mean and population standard deviation of `values`.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Test error over the seed list and its summary statistics.
pub fn run_init_sensitivity(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut rec = Recorder::new(cfg);
    for &problem in &cfg.problems {
        let (train, test) = train_test(cfg, problem, None)?;
        let sizes = eval_sizes(cfg, problem, &test);
        for model in &cfg.models {
            let t_all = Instant::now();
            let mut errors = Vec::new();
            for &seed in seeds_for(cfg, model) {
                let t0 = Instant::now();
                let param = seed_param(model, seed);
                match build(cfg, model, problem, seed, None, &train)? {
                    Built::Failed(why) => rec.push(model, problem, param, why, f64::NAN, t0)?,
                    Built::Trained(s, _) => {
                        let err = s.evaluate(&test.inputs, &test.targets, &sizes)?;
                        errors.push(err);
                        rec.push(model, problem, param, "test_rel_l2", err, t0)?;
                    }
                }
            }
            if errors.is_empty() {
                continue;
            }
            let (mean, std) = mean_std(&errors);
            let param = format!("seeds={}", errors.len());
            rec.push(model, problem, param.clone(), "mean", mean, t_all)?;
            rec.push(model, problem, param.clone(), "std", std, t_all)?;
            let skew = if mean - std < 0.0 { 1.0 } else { 0.0 };
            rec.push(model, problem, param, "right_skew", skew, t_all)?;
        }
    }
    Ok(rec.table)
}
