//! Markovianity diagnostics for open qubit dynamics.
//!
//! The crate compares exact two-time correlation functions of three solvable
//! qubit–bath models with the values reconstructed from the reduced
//! dynamical map alone, and evaluates the trace-distance (BLP) and
//! divisibility (RHP) measures on the same maps.

pub mod criteria;
pub mod error;
pub mod qalg;
pub mod models;
pub mod ode;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/correlators.md")]
    mod correlators {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
