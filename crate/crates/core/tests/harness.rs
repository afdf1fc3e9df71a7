use sno::harness::*;

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

#[test]
fn presets_parse_and_roundtrip() {
    for name in PRESETS {
        let cfg = preset(name).unwrap();
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again, "{name}");
    }
    assert!(preset("nope").is_err());
}

#[test]
fn experiment_names_parse() {
    for k in ExperimentKind::ALL {
        assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
    }
    assert_eq!("aliasing-study".parse::<ExperimentKind>().unwrap(), ExperimentKind::AliasingStudy);
    assert!("other".parse::<ExperimentKind>().is_err());
}

#[test]
fn coarse_evaluation_grids_are_rejected() {
    let text = |eval: usize| {
        format!(
            "kind = \"superres\"\nmodels = [\"exact\"]\nproblems = [\"derivative\"]\n\
             [band]\nk_min = 0\nk_max = 10\nshifts = [0, 10]\n[grids]\neval = {eval}\n"
        )
    };
    // harmonic 20 needs 41 points
    assert!(ExperimentConfig::from_toml(&text(40)).is_err());
    assert!(ExperimentConfig::from_toml(&text(41)).is_ok());
}

#[test]
fn invalid_configs_are_rejected() {
    for bad in [
        "kind = \"benchmark\"\nmodels = []\nproblems = [\"identity\"]\n",
        "kind = \"benchmark\"\nmodels = [\"mlp\"]\nproblems = [\"identity\"]\n",
        "kind = \"benchmark\"\nmodels = [\"fno\"]\nproblems = [\"identity\"]\nunknown = 1\n",
        "kind = \"lowfreq\"\nmodels = [\"exact\"]\nproblems = [\"integration\"]\n[band]\nk_min = 3\nk_max = 5\nshifts = [4]\n",
        "kind = \"aliasing_study\"\nmodels = [\"fno\"]\nproblems = [\"derivative\"]\n[grids]\nsizes = [32]\n",
        "kind = \"lowfreq\"\nmodels = [\"exact\"]\nproblems = [\"integration\"]\n[band]\nk_min = 5\nk_max = 9\nshifts = [5]\n",
        "kind = \"benchmark\"\nmodels = [\"exact\"]\nproblems = [\"integration\"]\n[band]\nk_min = 0\n",
        "kind = \"aliasing_study\"\nmodels = [\"fno\"]\nproblems = [\"elliptic_2d\"]\n[grids]\nsizes = [16, 32]\n",
    ] {
        assert!(ExperimentConfig::from_toml(bad).is_err(), "{bad}");
    }
}

#[test]
fn exact_rules_have_no_grid_discrepancy() {
    let cfg = config(
        r#"
kind = "aliasing_study"
models = ["exact", "sno_f", "deeponet"]
problems = ["derivative"]
[train]
epochs = 2
[data]
train_count = 10
test_count = 6
[grids]
sizes = [24, 32]
eval_sizes = [24, 48]
"#,
    );
    let t = run_experiment(&cfg).unwrap();
    for n in [24, 32] {
        let exact = t.value("exact", "derivative", &format!("grid={n}"), "discrepancy_max").unwrap();
        assert!(exact < 1e-10, "exact {exact:e}");
        let don = t.value("deeponet", "derivative", &format!("grid={n};seed=0"), "discrepancy_max").unwrap();
        assert!(don < 1e-12, "deeponet {don:e}");
        let sno = t.value("sno_f", "derivative", &format!("grid={n};seed=0"), "discrepancy_max").unwrap();
        assert!(sno < 1e-10, "sno_f {sno:e}");
    }
    assert!(t.value("exact", "derivative", "train=24;eval=48", "coarse_model_rel_l2").unwrap() < 1e-10);
}

#[test]
fn init_sensitivity_summarises_seeds() {
    let cfg = config(
        r#"
kind = "init_sensitivity"
models = ["sno_f"]
problems = ["identity"]
seeds = [0, 1, 2, 3]
[train]
epochs = 60
learning_rate = 3e-3
[data]
train_count = 40
test_count = 10
"#,
    );
    let t = run_experiment(&cfg).unwrap();
    let errors: Vec<f64> = (0..4)
        .map(|s| t.value("sno_f", "identity", &format!("seed={s}"), "test_rel_l2").unwrap())
        .collect();
    let (mean, std) = mean_std(&errors);
    assert_eq!(t.value("sno_f", "identity", "seeds=4", "mean").unwrap(), mean);
    assert_eq!(t.value("sno_f", "identity", "seeds=4", "std").unwrap(), std);
    assert!(std < 0.5 * mean, "{errors:?}");
    assert_eq!(t.value("sno_f", "identity", "seeds=4", "right_skew").unwrap(), 0.0);
}

#[test]
fn problems_without_rules_record_unsupported() {
    let cfg = config(
        r#"
kind = "benchmark"
models = ["exact"]
problems = ["ode", "identity"]
[data]
train_count = 2
test_count = 2
"#,
    );
    let t = run_experiment(&cfg).unwrap();
    assert!(t.value("exact", "ode", "", "unsupported").unwrap().is_nan());
    assert_eq!(t.value("exact", "identity", "", "test_rel_l2").unwrap(), 0.0);
}

#[test]
fn results_are_saved_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(
        r#"
kind = "benchmark"
models = ["exact"]
problems = ["integration", "shift"]
[data]
train_count = 2
test_count = 3
"#,
    );
    cfg.output = Some(dir.path().join("out/results.csv"));
    let t = run_and_save(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    assert!(text.starts_with(HEADER));
    assert_eq!(ResultTable::read_csv(text.as_bytes()).unwrap(), t);
    assert_eq!(t.len(), 2);
}
