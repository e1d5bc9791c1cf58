//! Oracle-bound reproduction and witness extraction.

mod theorem5;
mod witness;

pub use theorem5::{
    agrees_below, build_phi, build_tau_for, eta_component, tau_alignment, theorem5_bound, theorem5_check, Alignment,
    Theorem5Error, Theorem5Report, Theorem5Verdict,
};
pub use witness::{build_tau, extract_witness, Predicate, WitnessError, WitnessReport};
