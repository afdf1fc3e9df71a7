//! Run a shortened copy of a shipped experiment and print its result table.

use sno::harness::{preset, run_experiment};

fn main() -> sno::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "superres".into());
    let mut cfg = preset(&name)?;
    cfg.train.epochs = cfg.train.epochs.min(200);
    cfg.data.train_count = cfg.data.train_count.min(100);
    cfg.data.test_count = cfg.data.test_count.min(20);
    println!("{}", cfg.to_toml()?);
    let table = run_experiment(&cfg)?;
    table.write_csv(std::io::stdout().lock())
}
