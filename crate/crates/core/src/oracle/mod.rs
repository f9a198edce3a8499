//! Brute-force system–bath dilations with discretized modes.

mod decay;
mod dephasing;
mod discretize;
mod pq;

pub use decay::{
    evolve_decay, evolve_decay_rk45, oracle_tpcf_decay, oracle_tpcf_decay_with, DilationState, SectorDynamics,
    LEAK_TOLERANCE,
};
pub use dephasing::{log_influence, oracle_tpcf_dephasing};
pub use discretize::{discretize, discretize_lorentzian, discretize_ohmic, DiscretizedBath, Scheme};
pub use pq::{pq_decomposition, PQTerms, Projection};
