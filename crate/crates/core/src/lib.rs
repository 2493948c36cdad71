//! Wavelet-basis calculus for `C^n` functions on the ring of integers of a
//! local field (`Z_p` or `F_p[[t]]`), in exact finite-precision arithmetic.

pub mod calculus;
pub mod classify;
pub mod cli;
pub mod error;
pub mod field;
pub mod funcspace;
pub mod reps;
pub mod text;
pub mod verify;

pub use calculus::CoeffTable;
pub use classify::{Answer, SignClass, Verdict, Witness};
pub use error::{Error, Result};
pub use field::{AbsValue, Backend, FieldParams, RingElem, Scalar};
pub use funcspace::{CnCombo, CoeffStream, Evaluator, FnEvaluator, LeafPoly};
pub use reps::Rep;
