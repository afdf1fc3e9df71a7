//! Reverse-mode automatic differentiation over dense complex matrices.

mod graph;
mod tensor;

pub use graph::{ActMode, Gradients, Graph, NodeId};
pub use tensor::CMat;
