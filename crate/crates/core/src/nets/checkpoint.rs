//! `.sno` checkpoints: one JSON manifest line (model spec, parameter shapes
//! and training settings), then the parameters as little-endian `f64` pairs `(re, im)` in
//! declared order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{param_shapes, Model};
use super::params::{ParamSet, ParamShape};
use super::spec::ModelSpec;
use super::train::TrainConfig;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Manifest {
    format: String,
    spec: ModelSpec,
    params: Vec<ParamShape>,
    #[serde(default = "unit")]
    output_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    training: Option<TrainingInfo>,
}

fn unit() -> f64 {
    1.0
}

/// How a checkpointed model was trained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingInfo {
    pub train: TrainConfig,
    /// Epochs completed.
    pub epoch: usize,
    /// Initialisation seed.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub model: Model,
    pub training: Option<TrainingInfo>,
}

const FORMAT: &str = "sno-checkpoint-1";

pub fn write_checkpoint<W: Write>(mut w: W, ck: &Checkpoint) -> Result<()> {
    let model = &ck.model;
    let manifest = Manifest {
        format: FORMAT.into(),
        spec: model.spec.clone(),
        params: model.params.shapes.clone(),
        output_scale: model.output_scale,
        training: ck.training.clone(),
    };
    serde_json::to_writer(&mut w, &manifest)?;
    w.write_all(b"\n")?;
    for v in model.params.to_flat() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(r: R) -> Result<Checkpoint> {
    let mut r = BufReader::new(r);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let manifest: Manifest = serde_json::from_str(line.trim_end())?;
    if manifest.format != FORMAT {
        return Err(Error::Format(format!("unknown checkpoint format {}", manifest.format)));
    }
    if param_shapes(&manifest.spec)? != manifest.params {
        return Err(Error::Format("parameter shapes do not match the model spec".into()));
    }
    let mut params = ParamSet::zeros(manifest.params);
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Format("truncated parameter blob".into()));
    }
    let flat: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    params.load_flat(&flat)?;
    Ok(Checkpoint {
        model: Model {
            spec: manifest.spec,
            params,
            output_scale: manifest.output_scale,
        },
        training: manifest.training,
    })
}

pub fn save_checkpoint(path: impl AsRef<Path>, ck: &Checkpoint) -> Result<()> {
    write_checkpoint(BufWriter::new(File::create(path)?), ck)
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Checkpoint> {
    read_checkpoint(File::open(path)?)
}
