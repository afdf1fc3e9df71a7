//! An FNO trained on one grid disagrees with itself on a finer grid.

use sno::aliasing::{operator_grid_discrepancy, Projection};
use sno::nets::{train, Architecture, Model, ModelSpec, TrainConfig};
use sno::problems::{build_dataset, DataOptions, ProblemId};
use sno::spectral::{interpolate_to_grid, GridKind};

fn main() -> sno::Result<()> {
    let data = build_dataset(ProblemId::Derivative, 200, 0, 0, &DataOptions { resolution: 32, ..DataOptions::default() })?;
    let test = build_dataset(ProblemId::Derivative, 20, 0, 1 << 32, &DataOptions { resolution: 32, ..DataOptions::default() })?;
    for n in [26, 48] {
        let mut spec = ModelSpec::desk(Architecture::Fno, 1);
        spec.input_shape = vec![n];
        spec.output_shape = vec![n];
        let mut model = Model::new(spec, 0)?;
        let cfg = TrainConfig { epochs: 300, learning_rate: 3e-3, decay_every: 100, ..TrainConfig::default() };
        let h = train(&mut model, &data.inputs, &data.targets, &cfg)?;
        let fine = test
            .inputs
            .iter()
            .map(|f| interpolate_to_grid(f, &[2 * n], &[GridKind::Uniform]))
            .collect::<sno::Result<Vec<_>>>()?;
        let d = operator_grid_discrepancy(|u| model.apply_grid(u), &fine, Projection::Subsample)?;
        println!(
            "grid {n:3}: final loss {:.4}, discrepancy mean {:.4} median {:.4} max {:.4}",
            h.final_loss().unwrap_or(f64::NAN),
            d.mean,
            d.median,
            d.max
        );
    }
    Ok(())
}
