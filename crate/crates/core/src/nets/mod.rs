//! Neural operators on spectral coefficients and grid values, with training
//! and checkpointing.

mod checkpoint;
mod model;
mod params;
mod spec;
mod train;

pub use checkpoint::{
    load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, Checkpoint, TrainingInfo,
};
pub use model::{param_shapes, row_weights, to_basis, Encoded, Forward, Model};
pub use params::{ParamKind, ParamSet, ParamShape};
pub use spec::{Architecture, ModelSpec, Repr};
pub use train::{
    evaluate_uniform, gradient_check, relative_l2, train, train_batches, Adam, Batches, History,
    TrainConfig,
};
