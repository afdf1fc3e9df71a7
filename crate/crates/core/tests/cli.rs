use std::process::Command;

fn sno() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sno"))
}

#[test]
fn gen_data_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let status = sno()
            .args(["gen-data", "derivative", "--count", "4", "--seed", "3", "--out"])
            .arg(dir.path().join(name))
            .status()
            .unwrap();
        assert!(status.success());
    }
    for file in ["manifest.json", "inputs.specf", "targets.specf"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn aliasing_prints_the_relu_constant() {
    let out = sno().args(["aliasing", "--band", "8"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row.contains("0.3077584"), "{row}");
    }
}

#[test]
fn train_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "kind = \"benchmark\"\nmodels = [\"sno_f\"]\nproblems = [\"integration\"]\n\
         [train]\nepochs = 3\n[data]\ntrain_count = 10\n",
    )
    .unwrap();
    let ck = dir.path().join("m.sno");
    let data = dir.path().join("test");
    assert!(sno()
        .args(["train", "--model", "sno_f", "--problem", "integration", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&ck)
        .status()
        .unwrap()
        .success());
    assert!(sno()
        .args(["gen-data", "integration", "--count", "3", "--out"])
        .arg(&data)
        .status()
        .unwrap()
        .success());
    let out = sno().arg("eval").arg("--checkpoint").arg(&ck).arg("--dataset").arg(&data).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("integration,3,"), "{row}");
    let err: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!(err.is_finite());
}

#[test]
fn experiment_writes_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "kind = \"lowfreq\"\nmodels = [\"exact\"]\nproblems = [\"integration\"]\n\
         [data]\ntrain_count = 2\ntest_count = 2\n[band]\nk_min = 6\nk_max = 10\nshifts = [0, 5]\n",
    )
    .unwrap();
    let out = sno().args(["experiment", "lowfreq", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("experiment,model,problem,param,metric,value,seconds"));
    assert_eq!(text.lines().count(), 4);

    let out = sno().args(["experiment", "superres", "--config"]).arg(&cfg).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn unknown_input_is_an_error() {
    assert!(!sno().arg("frobnicate").status().unwrap().success());
    assert!(!sno().args(["gen-data", "no_such_problem", "--out", "x"]).status().unwrap().success());
    assert!(!sno().args(["aliasing", "--activation", "nope"]).status().unwrap().success());
}
