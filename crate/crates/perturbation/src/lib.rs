//! Small perturbations of pair processes and the word-repetition events
//! that separate them from their unperturbed versions.
//!
//! The workbench uses this crate to demonstrate a targeted edit of a joining:
//! starting from a pair of aligned source windows, we plant many repetitions
//! of a short word `w` into the second component on a sparse, evenly spaced
//! set of base positions (a [`TowerSpec`]).  The edit is small in Hamming
//! (hence d-bar) distance and nearly invisible to low-order statistics, yet
//! it pushes the sample into the repetition event "some coordinate starts
//! `ceil(log2(2M))` consecutive copies of `w` with frequency above `1/M`" —
//! an event that an i.i.d. second component essentially never satisfies.
//! [`iid_obstruction_bound`] quantifies the latter: under independence the
//! per-coordinate probability of that many consecutive copies is at most
//! `1/(2M)`, uniformly in `M`.
//!
//! The pieces:
//!
//! - [`TowerSpec`] / [`build_tower_base`]: an evenly spaced, seeded-thinned
//!   set of base positions with a prescribed target density.
//! - [`PairWindow`] / [`perturb`]: aligned two-component windows and the
//!   word-planting edit.
//! - [`check_repeated_word_mass`]: the repetition-event membership test.
//! - [`iid_obstruction_bound`]: the closed-form obstruction for independent
//!   second components.
//! - [`run_perturbation_experiment`]: an end-to-end seeded experiment
//!   reporting d-bar, weak-star, and entropy movement alongside the event
//!   membership flags.

mod experiment;
mod pairs;
mod tower;

pub use experiment::{run_perturbation_experiment, PerturbationReport};
pub use pairs::{check_repeated_word_mass, perturb, PairWindow, PatternReport};
pub use tower::{build_tower_base, tower_height, TowerSpec};

use process_core::{Error, Result};

/// Ceiling of the base-2 logarithm of `n`, computed exactly on integers.
///
/// `ceil_log2(1) == 0`, `ceil_log2(2) == 1`, `ceil_log2(3) == 2`, and for
/// powers of two the exponent itself is returned.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log2 requires a positive argument");
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Closed-form bound on the repetition event for an independent second
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionBound {
    /// Probability that one fixed coordinate starts `exponent` consecutive
    /// copies of a word whose single-copy probability is `p_a`.
    pub bound: f64,
    /// Number of consecutive copies demanded by the event, `ceil(log2(2M))`.
    pub exponent: u32,
    /// Whether `bound <= 1/(2M)`, i.e. the event frequency threshold `1/M`
    /// dominates the i.i.d. expectation with a factor-two margin.
    pub ok: bool,
}

/// Bounds the per-coordinate probability that an i.i.d. process repeats a
/// word `ceil(log2(2M))` times in a row.
///
/// `p_a` is the probability of a single occurrence of the word (for a
/// length-`ell` word over a uniform `k`-symbol alphabet this is `k^-ell`);
/// it must lie in `(0, 1/2]`.  The returned bound is `p_a^ceil(log2(2M))`,
/// and `ok` records whether it is at most `1/(2M)`.  For `p_a = 1/2` the
/// comparison is exact in floating point (both sides are powers of two),
/// with equality precisely when `2M` is itself a power of two.
pub fn iid_obstruction_bound(p_a: f64, m: u64) -> Result<ObstructionBound> {
    if !(p_a > 0.0 && p_a <= 0.5) {
        return Err(Error::Domain(format!(
            "single-copy probability must lie in (0, 1/2], got {p_a}"
        )));
    }
    if m == 0 {
        return Err(Error::Domain(
            "frequency parameter M must be positive".into(),
        ));
    }
    let exponent = ceil_log2(2 * m);
    let bound = p_a.powi(exponent as i32);
    let ok = bound <= 1.0 / (2 * m) as f64;
    Ok(ObstructionBound {
        bound,
        exponent,
        ok,
    })
}
