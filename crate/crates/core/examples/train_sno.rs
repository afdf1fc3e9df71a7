//! Train a Fourier SNO to differentiate, then save and reload it.

use sno::nets::{
    evaluate_uniform, load_checkpoint, save_checkpoint, train, Architecture, Checkpoint, Model, ModelSpec,
    TrainConfig,
};
use sno::problems::{build_dataset, DataOptions, ProblemId};

fn main() -> sno::Result<()> {
    let opts = DataOptions::default();
    let train_set = build_dataset(ProblemId::Derivative, 200, 0, 0, &opts)?;
    let test_set = build_dataset(ProblemId::Derivative, 50, 0, 1 << 32, &opts)?;

    let mut model = Model::new(ModelSpec::desk(Architecture::SnoF, 1), 0)?;
    let cfg = TrainConfig { epochs: 100, learning_rate: 3e-3, decay_every: 40, ..TrainConfig::default() };
    let history = train(&mut model, &train_set.inputs, &train_set.targets, &cfg)?;
    for (e, l) in history.loss.iter().enumerate().step_by(20) {
        println!("epoch {e:3}  loss {l:.4}");
    }
    let err = evaluate_uniform(&model, &test_set.inputs, &test_set.targets, &[64])?;
    println!("test relative L2 error {err:.4}");

    let path = std::env::temp_dir().join("sno_derivative.sno");
    save_checkpoint(&path, &Checkpoint { model, training: None })?;
    let back = load_checkpoint(&path)?;
    let again = evaluate_uniform(&back.model, &test_set.inputs, &test_set.targets, &[64])?;
    println!("reloaded from {}: {again:.4}", path.display());
    Ok(())
}
