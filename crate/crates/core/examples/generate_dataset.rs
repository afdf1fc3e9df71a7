//! Generate, save and reload datasets of the problem suite.

use sno::problems::{build_dataset, DataOptions, Dataset, ProblemId};
use sno::spectral::norm_l2;

fn main() -> sno::Result<()> {
    let dir = std::env::temp_dir().join("sno_datasets");
    for problem in [ProblemId::Integration, ProblemId::Ode, ProblemId::Elliptic, ProblemId::Kdv, ProblemId::BurgersNu01Xt] {
        let d = build_dataset(problem, 4, 7, 0, &DataOptions::default())?;
        let path = dir.join(problem.name());
        d.save(&path)?;
        let back = Dataset::load(&path)?;
        assert_eq!(back, d);
        let m = &d.manifest;
        println!(
            "{:18} dim {} resolution {:3} input shape {:?} target shape {:?} |target_0| = {:.4}",
            problem.name(),
            problem.dim(),
            m.resolution,
            d.inputs[0].shape(),
            d.targets[0].shape(),
            norm_l2(&d.targets[0])
        );
    }
    println!("written under {}", dir.display());
    Ok(())
}
