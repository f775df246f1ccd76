//! Classical-to-quantum encodings of DNA sequences.
//!
//! The crate bundles a small dense statevector simulator ([`qsim`]), sequence
//! parsing and dataset loading ([`seqio`]), discrete information measures
//! ([`infomath`]), the encoder families in [`encoders`], an energy-based test
//! harness ([`qoltz`]), and runtime oracle checks ([`verify`]).

pub mod error;
pub mod qsim;

pub use error::{Error, Result};
pub mod seqio;
pub mod infomath;
pub mod encoders;
pub mod qoltz;
pub mod verify;
