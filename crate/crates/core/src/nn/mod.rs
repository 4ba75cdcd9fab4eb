//! Deterministic neural-network core.
//!
//! Layers come as explicit forward/backward pairs over [`Tensor2`] batches
//! (rows are samples). Trainable weights live in a [`ParamStore`] next to
//! same-shaped gradient accumulators; layers only hold [`ParamId`] handles.
//! Everything runs in `f64` on a single thread.

mod activation;
mod adam;
mod checkpoint;
mod gradcheck;
mod linear;
mod lstm;
mod params;
mod rng;
mod tensor;

pub use activation::{bce_with_logits, bce_with_logits_grad, mean_bce_with_logits, relu, relu_backward, sigmoid};
pub use adam::Adam;
pub use checkpoint::{load_params, read_params, save_params, write_params};
pub use gradcheck::{gradient_check, GradCheckReport};
pub use linear::{linear_backward, linear_forward, Linear, LinearCache, LinearGrads};
pub use lstm::{lstm_cell_backward, lstm_cell_forward, Lstm, LstmCellCache, LstmCellGrads, LstmSeqCache, LstmWeights};
pub use params::{ParamId, ParamStore};
pub use rng::Rng;
pub use tensor::Tensor2;
