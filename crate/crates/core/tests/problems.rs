mod common;

use sno::problems::*;
use sno::spectral::{differentiate, evaluate, multiply, Basis, GridKind};

#[test]
fn single_soliton_solves_kdv() {
    let r = common::soliton_residual();
    assert!(r < 1e-6, "residual {r:e}");
}

#[test]
fn two_solitons_solve_kdv() {
    let r = common::two_soliton_residual();
    assert!(r < 1e-5, "residual {r:e}");
}

#[test]
fn two_solitons_separate_into_single_solitons() {
    // far apart, each bump is a soliton of height 2 a^2
    let p = TwoSolitonParams { a1: 25.0, a2: 12.0, x01: 0.6, x02: -0.6 };
    for (a, c) in [(p.a1, -0.6), (p.a2, 0.6)] {
        let peak = (0..=4000)
            .map(|i| kdv_two_soliton(&p, c - 0.2 + 0.4 * i as f64 / 4000.0, 0.0))
            .fold(0.0, f64::max);
        let single = 2.0 * a * a;
        assert!((peak - single).abs() / single < 1e-2, "{peak} vs {single}");
    }
}

#[test]
fn breather_solves_nls() {
    let r = common::breather_residual();
    assert!(r < 1e-5, "residual {r:e}");
}

#[test]
fn ode_solution_has_small_residual() {
    let mut rng = sample_rng(3, 0);
    let f = random_function(1, 30, 2.0, &mut rng);
    let y = parametric_ode_solution(&f, 129).unwrap();
    let dy = differentiate(&y);
    let yf = multiply(&y, &f).unwrap();
    for j in 0..64 {
        let x = -1.0 + 2.0 * j as f64 / 64.0;
        let r = evaluate(&dy, &[x]).unwrap() - evaluate(&yf, &[x]).unwrap();
        assert!(r.norm() < 1e-8, "{x}: {r}");
    }
}

#[test]
fn elliptic_manufactured_solution() {
    let err = common::elliptic_manufactured_error(64);
    assert!(err < 1e-8, "{err:e}");
}

#[test]
fn elliptic_solution_is_nonnegative() {
    let mut rng = sample_rng(5, 1);
    let g = random_function(0, 20, 2.0, &mut rng);
    let k = compose_periodic(&g, 40, |v| 10.0 * (v.tanh() + 1.0) + 1.0).unwrap();
    let u = elliptic_solve_1d(&k, 48).unwrap();
    assert!(u.real_values().iter().all(|&v| v >= 0.0));
}

#[test]
fn separable_square_matches_one_dimensional_solves() {
    let n = 16;
    let x = GridKind::Chebyshev.nodes(n + 1).unwrap();
    let kx: Vec<f64> = x.iter().map(|&x| 3.0 + x.cos()).collect();
    let ky = vec![1.0; n + 1];
    let a = elliptic_solve_1d_nodal(&kx, &vec![1.0; n + 1]).unwrap();
    let b: Vec<f64> = x.iter().map(|&y| (1.0 - y * y) / 2.0).collect();
    let w = n + 1;
    let mut rhs = vec![0.0; w * w];
    for i in 0..w {
        for j in 0..w {
            rhs[i * w + j] = b[j] + kx[i] * a[i];
        }
    }
    let u = elliptic_solve_2d_nodal(&kx, &ky, &rhs).unwrap();
    for i in 0..w {
        for j in 0..w {
            assert!((u[i * w + j] - a[i] * b[j]).abs() < 1e-6);
        }
    }
}

#[test]
fn datasets_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let opts = DataOptions::default();
    for (sub, idx) in [("a", 0), ("b", 0)] {
        build_dataset(ProblemId::Derivative, 8, 1, idx, &opts)
            .unwrap()
            .save(dir.path().join(sub))
            .unwrap();
    }
    for file in ["manifest.json", "inputs.specf", "targets.specf"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let back = Dataset::load(dir.path().join("a")).unwrap();
    assert_eq!(back.len(), 8);
    for t in &back.targets {
        assert!(t.coeffs()[11..].iter().all(|c| c.norm() == 0.0));
    }
    assert_eq!(back.inputs[0].bases(), [Basis::Fourier]);
}

#[test]
fn viscous_burgers_targets_are_smooth() {
    let opts = DataOptions { dt: 1e-3, ..DataOptions::default() };
    let d = build_dataset(ProblemId::BurgersNu01, 3, 2, 0, &opts).unwrap();
    assert_eq!(d.manifest.solver["nu"], 0.1);
    for t in &d.targets {
        let e: Vec<f64> = t.coeffs().iter().map(|c| c.norm_sqr()).collect();
        let total: f64 = e.iter().sum();
        let tail: f64 = e[e.len() - e.len() / 10..].iter().sum();
        assert!(tail < 1e-6 * total, "{tail:e} of {total:e}");
    }
}

#[test]
fn every_problem_generates() {
    let opts = DataOptions { resolution: 16, dt: 2e-3, ..DataOptions::default() };
    for p in ProblemId::ALL {
        let d = build_dataset(p, 2, 4, 0, &opts).unwrap();
        assert_eq!(d.inputs[0].dim(), p.dim(), "{p}");
        assert_eq!(d.targets[0].dim(), p.dim(), "{p}");
        assert!(d.targets.iter().all(|t| t.coeffs().iter().all(|c| c.re.is_finite())), "{p}");
        assert_eq!(p.name().parse::<ProblemId>().unwrap(), p);
    }
    assert_eq!(ProblemId::benchmark().len(), 16);
}

#[test]
fn problem_names_agree_everywhere() {
    for p in ProblemId::ALL {
        assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.name()));
        assert_eq!(p.name().parse::<ProblemId>().unwrap(), p);
    }
}
