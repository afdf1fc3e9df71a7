//! Acceptance criteria. Each prints one `PASS`/`FAIL` line; the process exits
//! non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use sno::aliasing::{aliasing_error_refined, relu_cheb_coeff, Activation};
use sno::harness::{preset, run_experiment, ExperimentConfig, ResultTable};
use sno::nets::{gradient_check, Architecture, Model, ModelSpec};
use sno::problems::{random_function, sample_rng, Burgers};
use sno::spectral::{
    analysis, differentiate, integrate, interpolate_to_grid, multiply, CoeffSeries, GridFunction,
    GridKind,
};

const THEOREM_TOL: f64 = 1e-6;
const TAIL_TOL: f64 = 1e-10;
const MONOTONE_SLACK: f64 = 1e-12;
const TRANSFORM_TOL: f64 = 1e-11;
const GRADIENT_TOL: f64 = 1e-5;
const BURGERS_MEAN_TOL: f64 = 1e-10;
const RK4_RATIO: (f64, f64) = (12.0, 20.0);
const ELLIPTIC_TOL: f64 = 1e-8;
const KDV_TOL: f64 = 1e-6;
const TWO_SOLITON_TOL: f64 = 1e-5;
const BREATHER_TOL: f64 = 1e-5;
const DERIVATIVE_TOL: f64 = 0.05;
const EXACT_TOL: f64 = 1e-10;
const DEGRADATION_RATIO: f64 = 2.0;
const COARSE_DISCREPANCY: (f64, f64) = (0.10, 0.45);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    outcome(elapsed <= limit, format!("time {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

/// Joins sub-checks; the criterion passes if all of them do.
fn all(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|p| p.pass),
        detail: parts
            .iter()
            .map(|p| if p.pass { p.detail.clone() } else { format!("[failed] {}", p.detail) })
            .collect::<Vec<_>>()
            .join("; "),
    }
}

// Direct evaluation of series, independent of the library transforms.

fn cheb_t(k: usize, x: f64) -> f64 {
    (k as f64 * x.clamp(-1.0, 1.0).acos()).cos()
}

fn eval_cheb(c: &[C64], x: f64) -> C64 {
    c.iter().enumerate().map(|(k, &v)| v * cheb_t(k, x)).sum()
}

/// Real signal from packed coefficients: `c_0 + 2 Re sum_{k>0} c_k e^{i pi k x}`.
fn eval_fourier_packed(c: &[C64], x: f64) -> f64 {
    c[0].re
        + c.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &v)| 2.0 * (v * C64::from_polar(1.0, PI * k as f64 * x)).re)
            .sum::<f64>()
}

fn lcg(state: &mut u64) -> f64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    ((*state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(1e-300, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let reference = (PI * PI / 2.0 - 4.0).sqrt() / PI;
    let mut worst: f64 = 0.0;
    for n in [4, 8, 16] {
        let mut f = vec![C64::new(0.0, 0.0); n + 1];
        f[n] = C64::new(0.5, 0.0);
        let mut t = vec![0.0; n + 1];
        t[n] = 1.0;
        for s in [CoeffSeries::fourier(f), CoeffSeries::chebyshev(&t)] {
            let e = aliasing_error_refined(&s, Activation::Relu, n, 1).unwrap().e_a;
            worst = worst.max((e - reference).abs());
        }
    }
    all(vec![
        outcome(worst < THEOREM_TOL, format!("max |E_a - {reference:.9}| = {worst:.2e} (tol {THEOREM_TOL:e})")),
        within(t0.elapsed(), Duration::from_secs(1)),
    ])
}

/// `p_i` by Simpson quadrature of `(2/pi) int_0^{pi/2} cos t cos(i t) dt`.
fn relu_coeff_quadrature(i: usize) -> f64 {
    let m = 20_000;
    let h = (PI / 2.0) / m as f64;
    let g = |t: f64| t.cos() * (i as f64 * t).cos();
    let mut s = g(0.0) + g(PI / 2.0);
    for j in 1..m {
        s += if j % 2 == 1 { 4.0 } else { 2.0 } * g(j as f64 * h);
    }
    let scale = if i == 0 { 1.0 / PI } else { 2.0 / PI };
    scale * s * h / 3.0
}

fn criterion_2() -> Outcome {
    let coeff_err = (0..24)
        .map(|i| (relu_cheb_coeff(i) - relu_coeff_quadrature(i)).abs())
        .fold(0.0, f64::max);
    let tail: f64 = (2..2_000_000usize).rev().map(|i| relu_cheb_coeff(i).powi(2)).sum();
    let closed = (PI * PI - 8.0) / (4.0 * PI * PI);
    let tail_err = (tail - closed).abs();

    let mut violations = 0;
    let mut worst_rise: f64 = 0.0;
    for s in 0..50u64 {
        let mut rng = sample_rng(77, s);
        let n = 4 + (s as usize % 5) * 2;
        let fourier = random_function(0, n, 2.0, &mut rng);
        let f = if s % 2 == 0 {
            fourier
        } else {
            let c: Vec<f64> = fourier.coeffs().iter().map(|z| z.re + z.im).collect();
            CoeffSeries::chebyshev(&c)
        };
        let e: Vec<f64> = (1..=4)
            .map(|k| aliasing_error_refined(&f, Activation::Relu, n, k).unwrap().e_a)
            .collect();
        for w in e.windows(2) {
            if w[1] > w[0] + MONOTONE_SLACK {
                violations += 1;
                worst_rise = worst_rise.max(w[1] - w[0]);
            }
        }
    }
    all(vec![
        outcome(coeff_err < 1e-12, format!("p_i vs quadrature {coeff_err:.1e}")),
        outcome(tail_err < TAIL_TOL, format!("|sum p_i^2 - closed form| = {tail_err:.2e} (tol {TAIL_TOL:e})")),
        outcome(
            violations == 0,
            format!("E_a non-increasing in k on 50 inputs ({violations} rises, worst {worst_rise:.1e})"),
        ),
    ])
}

fn random_c(state: &mut u64, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(lcg(state), lcg(state))).collect()
}

fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let mut st = 12345u64;
    let mut rt: f64 = 0.0;
    let mut nyq: f64 = 0.0;
    let mut di: f64 = 0.0;
    let mut prod: f64 = 0.0;

    // Fourier, real signals on m uniform points
    for m in [8usize, 17, 64, 255, 256] {
        let vals: Vec<f64> = (0..m).map(|_| lcg(&mut st)).collect();
        let g = GridFunction::from_real(GridKind::Uniform, &vals).unwrap();
        let back = interpolate_to_grid(&analysis(&g, true).unwrap(), &[m], &[GridKind::Uniform]).unwrap();
        rt = rt.max(rel_diff(back.values(), g.values()));

        let kmax = (m - 1) / 2;
        let mut c = random_c(&mut st, kmax + 1);
        c[0].im = 0.0;
        let x = GridKind::Uniform.nodes(m).unwrap();
        let samples: Vec<f64> = x.iter().map(|&x| eval_fourier_packed(&c, x)).collect();
        let rec = analysis(&GridFunction::from_real(GridKind::Uniform, &samples).unwrap(), true).unwrap();
        let got: Vec<C64> = (0..=kmax).map(|k| rec.harmonic(k as i64)).collect();
        nyq = nyq.max(rel_diff(&got, &c));

        let mut z = c.clone();
        z[0] = C64::new(0.0, 0.0);
        let f = CoeffSeries::fourier(z.clone());
        let d = differentiate(&integrate(&f).unwrap());
        di = di.max(rel_diff(d.coeffs(), f.coeffs()));
    }

    // Chebyshev on n extreme points
    for n in [2usize, 9, 65, 256] {
        let vals: Vec<f64> = (0..n).map(|_| lcg(&mut st)).collect();
        let g = GridFunction::from_real(GridKind::Chebyshev, &vals).unwrap();
        let back = interpolate_to_grid(&analysis(&g, true).unwrap(), &[n], &[GridKind::Chebyshev]).unwrap();
        rt = rt.max(rel_diff(back.values(), g.values()));

        let c: Vec<C64> = (0..n).map(|_| C64::new(lcg(&mut st), 0.0)).collect();
        let x = GridKind::Chebyshev.nodes(n).unwrap();
        let samples: Vec<f64> = x.iter().map(|&x| eval_cheb(&c, x).re).collect();
        let rec = analysis(&GridFunction::from_real(GridKind::Chebyshev, &samples).unwrap(), true).unwrap();
        nyq = nyq.max(rel_diff(rec.coeffs(), &c));

        let f = CoeffSeries::chebyshev_complex(c);
        let d = differentiate(&integrate(&f).unwrap());
        di = di.max(rel_diff(&d.coeffs()[..n], f.coeffs()));
    }

    // products against pointwise multiplication, result lengths up to 256
    for (na, nb) in [(3usize, 5usize), (40, 24), (128, 128)] {
        let mut ca = random_c(&mut st, na);
        let mut cb = random_c(&mut st, nb);
        ca[0].im = 0.0;
        cb[0].im = 0.0;
        let fa = CoeffSeries::fourier(ca.clone());
        let fb = CoeffSeries::fourier(cb.clone());
        let p = multiply(&fa, &fb).unwrap();
        let pc: Vec<C64> = p.coeffs().to_vec();
        let scale = (0..64)
            .map(|j| {
                let x = -1.0 + 2.0 * j as f64 / 64.0;
                (eval_fourier_packed(&ca, x) * eval_fourier_packed(&cb, x)).abs()
            })
            .fold(1e-300, f64::max);
        for _ in 0..64 {
            let x = lcg(&mut st);
            let e = eval_fourier_packed(&pc, x) - eval_fourier_packed(&ca, x) * eval_fourier_packed(&cb, x);
            prod = prod.max(e.abs() / scale);
        }

        let ra: Vec<f64> = (0..na).map(|_| lcg(&mut st)).collect();
        let rb: Vec<f64> = (0..nb).map(|_| lcg(&mut st)).collect();
        let p = multiply(&CoeffSeries::chebyshev(&ra), &CoeffSeries::chebyshev(&rb)).unwrap();
        let (ra, rb): (Vec<C64>, Vec<C64>) = (
            ra.iter().map(|&v| C64::new(v, 0.0)).collect(),
            rb.iter().map(|&v| C64::new(v, 0.0)).collect(),
        );
        let scale = ra.iter().map(|z| z.norm()).sum::<f64>() * rb.iter().map(|z| z.norm()).sum::<f64>();
        for _ in 0..64 {
            let x = lcg(&mut st);
            let e = eval_cheb(p.coeffs(), x) - eval_cheb(&ra, x) * eval_cheb(&rb, x);
            prod = prod.max(e.norm() / scale);
        }
    }

    let tol = TRANSFORM_TOL;
    all(vec![
        outcome(rt < tol, format!("roundtrip {rt:.1e}")),
        outcome(nyq < tol, format!("band-limited recovery {nyq:.1e}")),
        outcome(di < tol, format!("d/dx of antiderivative {di:.1e}")),
        outcome(prod < tol, format!("product vs pointwise {prod:.1e} (tol {tol:e})")),
        within(t0.elapsed(), Duration::from_secs(10)),
    ])
}

fn toy_spec(arch: Architecture, dim: usize) -> ModelSpec {
    let mut s = ModelSpec::desk(arch, dim);
    s.features = 3;
    s.layers = 2;
    match arch {
        Architecture::SnoCh | Architecture::SnoF => {
            s.input_shape = vec![4; dim];
            s.output_shape = vec![3; dim];
            s.width = vec![5; dim];
        }
        Architecture::XsnoCh | Architecture::XsnoF | Architecture::XcsnoCh | Architecture::XcsnoF => {
            s.input_shape = vec![6; dim];
            s.output_shape = vec![5; dim];
            s.width = vec![4; dim];
        }
        Architecture::Fno => {
            s.input_shape = vec![8; dim];
            s.output_shape = vec![8; dim];
            s.modes = 3;
            s.activation = Activation::Softplus;
        }
        Architecture::DeepOnet => {
            s.input_shape = vec![5; dim];
            s.output_shape = vec![4; dim];
        }
    }
    s
}

fn toy_data(seed: u64) -> Vec<CoeffSeries> {
    let mut rng = sample_rng(seed, 0);
    (0..3)
        .map(|_| {
            let f = random_function(0, 2, 1.0, &mut rng);
            let c: Vec<f64> = f.coeffs().iter().map(|z| z.re).collect();
            CoeffSeries::chebyshev(&c)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for arch in Architecture::ALL {
        let model = Model::new(toy_spec(arch, 1), 7).unwrap();
        let err = gradient_check(&model, &toy_data(1), &toy_data(2), 1e-6).unwrap();
        parts.push(outcome(err < GRADIENT_TOL, format!("{arch} {err:.1e}")));
    }
    let mut o = all(parts);
    o.detail = format!("{} (tol {GRADIENT_TOL:e})", o.detail);
    o
}

fn criterion_5() -> Outcome {
    let t0 = Instant::now();
    let initial = CoeffSeries::fourier(vec![
        C64::new(0.3, 0.0),
        C64::new(0.2, -0.1),
        C64::new(0.1, 0.15),
        C64::new(-0.05, 0.05),
    ]);
    let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
    let out = Burgers::new(0.01, 1e-3, 64).unwrap().solve(&initial, &times).unwrap();
    let drift = out.iter().map(|s| (s.coeffs()[0].re - 0.3).abs()).fold(0.0, f64::max);

    let sol = |dt: f64| {
        Burgers::new(0.1, dt, 32)
            .unwrap()
            .solve(&initial.scale(4.0), &[0.1])
            .unwrap()
            .remove(0)
    };
    let (a, b, c) = (sol(0.01), sol(0.005), sol(0.0025));
    let ratio = a.max_abs_diff(&b) / b.max_abs_diff(&c);

    let ell = common::elliptic_manufactured_error(64);
    let kdv = common::soliton_residual();
    let kdv2 = common::two_soliton_residual();
    let nls = common::breather_residual();
    all(vec![
        outcome(drift < BURGERS_MEAN_TOL, format!("Burgers mean drift {drift:.1e}")),
        outcome(
            (RK4_RATIO.0..=RK4_RATIO.1).contains(&ratio),
            format!("dt-halving error ratio {ratio:.2} in [{}, {}]", RK4_RATIO.0, RK4_RATIO.1),
        ),
        outcome(ell < ELLIPTIC_TOL, format!("elliptic manufactured {ell:.1e}")),
        outcome(kdv < KDV_TOL, format!("KdV soliton residual {kdv:.1e}")),
        outcome(kdv2 < TWO_SOLITON_TOL, format!("two-soliton residual {kdv2:.1e}")),
        outcome(nls < BREATHER_TOL, format!("breather residual {nls:.1e}")),
        within(t0.elapsed(), Duration::from_secs(120)),
    ])
}

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

fn exact_rows(t: &ResultTable) -> (usize, f64) {
    let v: Vec<f64> = t
        .rows()
        .iter()
        .filter(|r| r.model == "exact" && r.metric.ends_with("rel_l2"))
        .map(|r| r.value)
        .collect();
    (v.len(), v.iter().copied().fold(0.0, f64::max))
}

fn criterion_6() -> Outcome {
    let t = run_experiment(&config(
        r#"
kind = "benchmark"
models = ["sno_f"]
problems = ["derivative"]
[train]
epochs = 300
batch_size = 20
learning_rate = 3e-3
decay_every = 100
"#,
    ))
    .unwrap();
    let err = t.value("sno_f", "derivative", "seed=0", "test_rel_l2").unwrap();
    let exact = run_experiment(&config(
        r#"
kind = "benchmark"
models = ["exact"]
problems = ["identity", "integration", "shift", "derivative", "derivative_k20"]
"#,
    ))
    .unwrap();
    let (n, worst) = exact_rows(&exact);
    all(vec![
        outcome(err < DERIVATIVE_TOL, format!("SNO_F derivative test error {err:.4} (tol {DERIVATIVE_TOL})")),
        outcome(n == 5 && worst < EXACT_TOL, format!("{n} exact rows, max {worst:.1e}")),
    ])
}

fn ratio_at(t: &ResultTable, model: &str, problem: &str, shift: usize) -> Outcome {
    let sp = if model == "exact" { String::new() } else { ";seed=0".into() };
    let base = t.value(model, problem, &format!("dk=0{sp}"), "shifted_rel_l2").unwrap();
    let far = t.value(model, problem, &format!("dk={shift}{sp}"), "shifted_rel_l2").unwrap();
    let ratio = far / base;
    outcome(
        ratio >= DEGRADATION_RATIO,
        format!("{model}: {base:.4} -> {far:.4} at dk={shift} (x{ratio:.1}, need x{DEGRADATION_RATIO})"),
    )
}

fn band_shift_criterion(name: &str, models: &[&str]) -> Outcome {
    let t0 = Instant::now();
    let cfg = preset(name).unwrap();
    let t = run_experiment(&cfg).unwrap();
    let shift = cfg.max_shift();
    let problem = cfg.problems[0].name();
    let mut parts: Vec<Outcome> = models.iter().map(|m| ratio_at(&t, m, problem, shift)).collect();
    let (n, worst) = exact_rows(&t);
    parts.push(outcome(n > 0 && worst < EXACT_TOL, format!("exact max {worst:.1e} over {n} rows")));
    parts.push(within(t0.elapsed(), Duration::from_secs(1800)));
    all(parts)
}

fn criterion_7() -> Outcome {
    band_shift_criterion("superres", &["sno_f", "fno"])
}

fn criterion_8() -> Outcome {
    band_shift_criterion("lowfreq", &["sno_f"])
}

fn criterion_9() -> Outcome {
    let cfg = preset("aliasing_study").unwrap();
    let t = run_experiment(&cfg).unwrap();
    let model = &cfg.models[0];
    let problem = cfg.problems[0].name();
    let mut sizes = cfg.grids.sizes.clone();
    sizes.sort_unstable();
    let d: Vec<f64> = sizes
        .iter()
        .map(|n| t.value(model, problem, &format!("grid={n};seed=0"), "discrepancy_mean").unwrap())
        .collect();
    let inversions = d.windows(2).filter(|w| w[1] > w[0]).count();
    let trend = sizes
        .iter()
        .zip(&d)
        .map(|(n, v)| format!("{n}:{v:.3}"))
        .collect::<Vec<_>>()
        .join(" ");
    let (lo, hi) = COARSE_DISCREPANCY;
    all(vec![
        outcome(
            sizes.len() >= 3 && inversions <= 1 && d[d.len() - 1] < d[0],
            format!("{model} discrepancy {trend} ({inversions} inversions)"),
        ),
        outcome((lo..=hi).contains(&d[0]), format!("coarsest {:.3} in [{lo}, {hi}]", d[0])),
    ])
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    for text in [
        r#"
kind = "superres"
models = ["sno_f", "fno", "exact"]
problems = ["derivative"]
[train]
epochs = 5
[data]
train_count = 20
test_count = 5
[band]
k_min = 0
k_max = 6
shifts = [0, 4]
[grids]
eval = 40
"#,
        r#"
kind = "init_sensitivity"
models = ["sno_ch", "deeponet"]
problems = ["integration"]
seeds = [0, 1]
[train]
epochs = 3
[data]
train_count = 10
test_count = 4
"#,
    ] {
        let cfg = config(text);
        let a = run_experiment(&cfg).unwrap().to_csv_string().unwrap();
        let b = run_experiment(&cfg).unwrap().to_csv_string().unwrap();
        parts.push(outcome(
            a == b && a.lines().count() > 1,
            format!("{}: {} bytes {}", cfg.kind, a.len(), if a == b { "identical" } else { "differ" }),
        ));
    }
    all(parts)
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("aliasing constant of ReLU on extreme harmonics", criterion_1),
        ("ReLU tail sum and refinement monotonicity", criterion_2),
        ("spectral transforms and calculus", criterion_3),
        ("backpropagation against finite differences", criterion_4),
        ("reference solvers", criterion_5),
        ("benchmark: derivative and exact rules", criterion_6),
        ("superresolution degradation", criterion_7),
        ("low-frequency degradation", criterion_8),
        ("FNO grid discrepancy trend", criterion_9),
        ("reproducible result files", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("criterion_{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let t0 = Instant::now();
        let o = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            });
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {id:<12} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t0.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
