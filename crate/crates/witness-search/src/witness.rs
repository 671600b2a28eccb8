use block_codec::WordEnumeration;
use estimators::mc_repetition_prob;
use num_bigint::BigUint;
use process_core::{decimal12, exact_block_start_prob, Error, EstimateReport, Result};
use serde_json::{json, Value};

/// The decay rate a finitary factor of an i.i.d. process would impose on
/// repetition cylinders: 2^{−(1−ε)·h′·r·ℓ}.
///
/// Pure evaluation — a zero exponent gives exactly 1.
pub fn decay_bound(h_prime: f64, epsilon: f64, r: u64, ell: u64) -> f64 {
    let exponent = (1.0 - epsilon) * h_prime * (r as f64) * (ell as f64);
    2f64.powf(-exponent)
}

/// A certified counterexample: a code word whose repetition probability
/// provably exceeds the decay bound.
///
/// Constructed by [`find_violation`], which guarantees the invariants
/// `word` = the enumeration word for `block_length`, `r` =
/// ⌊block_length/(2·ell)⌋, and `lower_bound` > `rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRecord {
    /// Length of the repeated word.
    pub ell: u64,
    /// Block length whose code word is the witness.
    pub block_length: u64,
    /// The code word itself.
    pub word: Vec<u8>,
    /// Number of repetitions: ⌊block_length/(2·ell)⌋.
    pub r: u64,
    /// Exact probability that a block of this length starts at a fixed
    /// coordinate — a sub-event of the repetition, hence a lower bound.
    pub lower_bound: f64,
    /// The decay bound the lower bound beats.
    pub rhs: f64,
    /// Monte Carlo estimate of the repetition probability itself.
    pub mc_estimate: EstimateReport,
}

impl WitnessRecord {
    /// Whether the Monte Carlo confirmation backs the certificate: the
    /// estimate must be consistent with the exact lower bound (within
    /// 4σ below it) and must clear the decay bound by more than 4σ.
    pub fn certified(&self) -> bool {
        let est = &self.mc_estimate;
        est.estimate >= self.lower_bound - 4.0 * est.stderr
            && est.estimate - 4.0 * est.stderr > self.rhs
    }

    /// The record as a JSON object. Probabilities are emitted as decimal
    /// strings with 12 significant digits; integers stay numeric.
    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell,
            "L": self.block_length,
            "word": self.word,
            "r": self.r,
            "lower_bound": decimal12(self.lower_bound),
            "rhs": decimal12(self.rhs),
            "mc_estimate": {
                "estimate": decimal12(self.mc_estimate.estimate),
                "stderr": decimal12(self.mc_estimate.stderr),
                "samples": self.mc_estimate.samples,
                "seed": self.mc_estimate.seed,
            },
        })
    }
}

/// Scans block lengths `l_min..=l_max` whose code word has length `ell`
/// and returns the first one where the exact block-start probability
/// exceeds the decay bound, with a Monte Carlo confirmation of the
/// repetition probability attached. Returns `None` when the range is
/// empty, contains no length-`ell` code words, or shows no violation.
pub fn find_violation(
    ell: u64,
    epsilon: f64,
    h_prime: f64,
    l_min: u64,
    l_max: u64,
    samples: u64,
    seed: u64,
) -> Result<Option<WitnessRecord>> {
    if ell == 0 {
        return Err(Error::Domain("word length must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "violation scans need ε strictly between 0 and 1, got {epsilon}"
        )));
    }
    if h_prime.is_nan() || h_prime <= 0.0 {
        return Err(Error::Domain(format!(
            "rate must be positive, got {h_prime}"
        )));
    }
    if samples == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    let enumeration = WordEnumeration;
    for block_length in l_min..=l_max {
        if block_length < 10 || enumeration.word_len(block_length)? as u64 != ell {
            continue;
        }
        let r = block_length / (2 * ell);
        if r == 0 {
            continue;
        }
        let lower_bound = exact_block_start_prob(block_length)?;
        let rhs = decay_bound(h_prime, epsilon, r, ell);
        if lower_bound > rhs {
            let word = enumeration.word(block_length)?;
            let mc_estimate = mc_repetition_prob(&word, r, samples, seed)?;
            return Ok(Some(WitnessRecord {
                ell,
                block_length,
                word,
                r,
                lower_bound,
                rhs,
                mc_estimate,
            }));
        }
    }
    Ok(None)
}

/// Exact integer verification of the two-step bound used to justify the
/// witness inequality: (1/100)(9/10)^{L−1} ≥ 2^{−L/3} (which needs L
/// large enough) and 2^{−L/3} ≥ 2^{−(5/6)·⌊L/(2ℓ)⌋·ℓ}. Returns the
/// conjunction; both comparisons are carried out without floating point.
pub fn verify_inequality_chain(block_length: u64, ell: u64) -> Result<bool> {
    if ell == 0 {
        return Err(Error::Domain("word length must be positive".into()));
    }
    if block_length < 10 * ell {
        return Err(Error::Domain(format!(
            "block length {block_length} below the coding regime floor 10·{ell}"
        )));
    }
    let exp9 = u32::try_from(3 * block_length - 3)
        .map_err(|_| Error::Domain(format!("block length {block_length} too large")))?;
    let exp10 = u32::try_from(3 * block_length + 3)
        .map_err(|_| Error::Domain(format!("block length {block_length} too large")))?;
    // Cubing (1/100)(9/10)^{L−1} ≥ 2^{−L/3} clears all roots:
    // 9^{3L−3}·2^L ≥ 10^{3L+3}.
    let lhs = BigUint::from(9u8).pow(exp9) << block_length;
    let first = lhs >= BigUint::from(10u8).pow(exp10);
    // 2^{−L/3} ≥ 2^{−(5/6)rℓ} with r = ⌊L/(2ℓ)⌋, i.e. 2L ≤ 5rℓ.
    let r = block_length / (2 * ell);
    let second = 2 * block_length <= 5 * r * ell;
    Ok(first && second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs()
    }

    #[test]
    fn decay_bound_frozen_values() {
        // 2^{-50/3}, 2^{-25/6}, and 2^{-65/6}.
        assert!(rel_close(
            decay_bound(1.0, 1.0 / 6.0, 20, 1),
            9.6124347678747e-6,
            1e-11
        ));
        assert!(rel_close(
            decay_bound(1.0, 1.0 / 6.0, 5, 1),
            5.56811698837712e-2,
            1e-11
        ));
        assert!(rel_close(
            decay_bound(1.0, 1.0 / 6.0, 13, 1),
            5.48077172026061e-4,
            1e-11
        ));
    }

    #[test]
    fn decay_bound_with_empty_exponent_is_one() {
        assert_eq!(decay_bound(0.0, 0.5, 7, 3), 1.0);
        assert_eq!(decay_bound(1.0, 0.5, 0, 3), 1.0);
    }

    #[test]
    fn decay_bound_shrinks_with_the_span() {
        let mut previous = 1.0;
        for r in 1..=30 {
            let bound = decay_bound(1.0, 1.0 / 6.0, r, 2);
            assert!(bound < previous);
            previous = bound;
        }
    }

    #[test]
    fn chain_examples() {
        assert!(verify_inequality_chain(36, 1).unwrap());
        assert!(!verify_inequality_chain(35, 1).unwrap());
        assert!(verify_inequality_chain(100, 10).unwrap());
    }

    #[test]
    fn chain_rejects_lengths_below_the_coding_regime() {
        assert!(matches!(
            verify_inequality_chain(9, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_inequality_chain(99, 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_inequality_chain(100, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn scan_rejects_degenerate_parameters() {
        for (ell, eps, h, n) in [
            (0u64, 0.1, 1.0, 100u64),
            (1, 1.0, 1.0, 100),
            (1, 1.5, 1.0, 100),
            (1, 0.0, 1.0, 100),
            (1, -0.5, 1.0, 100),
            (1, 0.1, 0.0, 100),
            (1, 0.1, -1.0, 100),
            (1, 0.1, 1.0, 0),
        ] {
            assert!(
                matches!(
                    find_violation(ell, eps, h, 10, 20, n, 1),
                    Err(Error::Domain(_))
                ),
                "ell={ell} eps={eps} h={h} n={n}"
            );
        }
    }

    #[test]
    fn empty_or_wordless_ranges_yield_no_witness() {
        // Inverted range.
        assert_eq!(
            find_violation(1, 1.0 / 6.0, 1.0, 50, 40, 100, 1).unwrap(),
            None
        );
        // No length-1 code words above block length 109.
        assert_eq!(
            find_violation(1, 1.0 / 6.0, 1.0, 110, 130, 100, 1).unwrap(),
            None
        );
        // Range entirely below the enumeration.
        assert_eq!(
            find_violation(1, 1.0 / 6.0, 1.0, 1, 9, 100, 1).unwrap(),
            None
        );
    }
}
