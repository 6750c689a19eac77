//! Information-geometric security analysis of differential-phase-shift QKD.
//!
//! Qubit states live in the Bloch ball. The quantum relative entropy is the
//! Bregman divergence of the negative von Neumann entropy, and the smallest
//! enclosing ball of a signal set under that divergence measures how much
//! information an eavesdropper's cloner leaves with the legitimate parties.

pub mod attack;
pub mod cli;
pub mod cloner;
pub mod divergence;
pub mod error;
pub mod geometry;
pub mod protocol;
pub mod seb;
pub mod state;

pub use error::{Error, Result};
