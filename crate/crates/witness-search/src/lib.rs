//! The refutation machinery: certified witnesses against fast cylinder
//! decay in the coded process.
//!
//! A process that were a finitary factor of an i.i.d. process with some
//! positive rate `h'` would have all its repetition cylinders decay like
//! [`decay_bound`]. The coded process violates that: blocks of length L
//! occur with probability (1/100)(9/10)^{L−1}, and each such block forces
//! its code word to repeat across the whole first half. [`find_violation`]
//! scans block lengths for the first L where the exact block-start
//! probability beats the decay bound and attaches a Monte Carlo
//! confirmation, producing a [`WitnessRecord`] certificate.
//! [`verify_inequality_chain`] re-derives the supporting inequalities in
//! exact integer arithmetic, and the [`universal`] module implements the
//! positive-rate bound itself, as a statistical check that holds for
//! genuinely i.i.d.-factor data.

mod universal;
mod witness;

pub use universal::{
    missing_positions, universal_rate, universal_rate_check, UniversalCheckReport, UniversalRate,
};
pub use witness::{decay_bound, find_violation, verify_inequality_chain, WitnessRecord};
