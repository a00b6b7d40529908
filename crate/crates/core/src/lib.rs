//! Sliding-window polar codes.
//!
//! A length-`N` code with transform `T = W_S ⊗ T_M` (`W_S` the `S×S` lower
//! triangular all-ones kernel, `T_M` the length-`M` Arıkan transform) can be
//! decoded by a length-`M` SC/SCL decoder sliding over the `S = N/M` windows
//! of the received frame. This crate provides construction, encoding,
//! windowed decoding, channel simulation and BLER analysis for such codes,
//! together with the independent-block (IND) and full-length (FULL)
//! baselines.

pub mod analysis;
pub mod channel;
pub mod code;
pub mod construction;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod sliding_window;
pub mod textio;

pub use code::{BinaryMatrix, BitVector, CodeConfig, IndexSet};
pub use construction::{CodeDesign, DesignChannel, ReliabilityKind, ReliabilityProfile};
pub use decoder::{BoxplusMode, LLR_MAX};
pub use error::{Error, Result};
