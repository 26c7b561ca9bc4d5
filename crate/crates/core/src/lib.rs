//! Weighted double Hurwitz numbers computed three independent ways, with
//! checks of loop equations, projection property and quasi-polynomiality.

pub mod cli;
pub mod closedform;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod series;
pub mod trengine;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Scalar, C, Q};
