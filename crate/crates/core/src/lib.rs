//! Group convolution, cross-correlation and deconvolution over finite groups,
//! with matrix-level simulations of their block encodings.

pub mod block_encoding;
pub mod cli;
pub mod convolution;
pub mod deconvolution;
pub mod error;
pub mod group;
pub mod integral;
pub mod io;
pub mod linalg;
pub mod polynomial;
pub mod representations;
pub mod signal;

pub use error::{Error, Result};
