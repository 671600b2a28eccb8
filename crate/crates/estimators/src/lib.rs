//! Monte Carlo and exact estimators over the block code.
//!
//! The coded process is only reachable by pushing sampled source windows
//! through the coding map, so everything here is built around one
//! primitive: draw a source window wide enough that the coded image is
//! fully determined on a requested range, then evaluate events or collect
//! statistics on that range. On top of it sit
//!
//! - [`mc_repetition_prob`]: repetition-cylinder probabilities of the
//!   coded process, with binomial standard errors;
//! - [`plugin_entropy_rate`]: plug-in block-entropy rate estimates;
//! - [`EmpiricalMeasure`] and [`weakstar_distance`]: empirical block
//!   measures compared in a truncated weak* metric;
//! - [`dbar_upper`]: the Hamming-density coupling bound on d-bar.
//!
//! All estimators are deterministic given a seed: each Monte Carlo sample
//! owns a fixed RNG stream, so results never depend on the worker count.

mod entropy;
mod measure;
mod sampling;

pub use entropy::{plugin_entropy_rate, EntropyEstimate};
pub use measure::{weakstar_distance, EmpiricalMeasure, WeakstarReport};
pub use sampling::{
    mc_coded_event, mc_repetition_prob, sample_coded_window, sample_coded_word,
    sample_determined_coding,
};

use process_core::{Error, Result, SymbolicWindow};

/// Fraction of coordinates at which two aligned windows disagree.
///
/// This is the coupling upper bound for the d-bar distance between the
/// processes the windows were sampled from: the identity coupling of the
/// two samples realizes exactly this Hamming density.
pub fn dbar_upper(x: &SymbolicWindow, y: &SymbolicWindow) -> Result<f64> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::Domain(format!(
            "windows over different alphabets ({} vs {})",
            x.alphabet().size(),
            y.alphabet().size()
        )));
    }
    if x.origin() != y.origin() || x.len() != y.len() {
        return Err(Error::Domain(format!(
            "windows must share origin and length, got {}..{} vs {}..{}",
            x.start(),
            x.end(),
            y.start(),
            y.end()
        )));
    }
    let mismatches = x
        .symbols()
        .iter()
        .zip(y.symbols())
        .filter(|(a, b)| a != b)
        .count();
    Ok(mismatches as f64 / x.len() as f64)
}
