use block_codec::{pair, MARKER};
use estimators::{mc_coded_event, sample_determined_coding};
use process_core::{
    rng::{derive_seeds, stream_rng},
    Error, EstimateReport, ProbVector, Result,
};
use rand::distr::{Distribution, Uniform};
use rayon::prelude::*;

/// The universal positive rate a finitary factor of an i.i.d. process
/// inherits from a single source pattern.
///
/// If matching the odd-length pattern `word` centered at a coordinate
/// forces the factor output `target` there, then every output coordinate
/// differing from `target` rules the pattern out at a known source
/// position, and repetition cylinders must decay at least this fast.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalRate {
    /// The forcing source pattern.
    pub word: Vec<u8>,
    /// Half its length: the pattern spans the center ± this.
    pub half_length: u64,
    /// The output symbol the pattern forces.
    pub target: u8,
    /// i.i.d. probability of the pattern.
    pub word_prob: f64,
    /// Marginal probability that the factor output equals `target`.
    pub target_prob: f64,
    /// The rate: −log₂(1−word_prob)·(1−target_prob)/(2|word|).
    pub bits: f64,
}

/// Evaluates the universal rate formula for `word` under the i.i.d. law
/// `p`, given the output marginal `target_prob` of the forced symbol.
pub fn universal_rate(
    word: &[u8],
    p: &ProbVector,
    target: u8,
    target_prob: f64,
) -> Result<UniversalRate> {
    if word.is_empty() || word.len().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "pattern length must be odd, got {}",
            word.len()
        )));
    }
    let mut word_prob = 1.0;
    for &s in word {
        if !p.alphabet().contains(s) {
            return Err(Error::Domain(format!(
                "pattern symbol {s} outside alphabet of size {}",
                p.alphabet().size()
            )));
        }
        word_prob *= p.weights()[s as usize];
    }
    if !(word_prob > 0.0 && word_prob < 1.0) {
        return Err(Error::Domain(format!(
            "degenerate pattern probability {word_prob}"
        )));
    }
    if !(target_prob > 0.0 && target_prob < 1.0) {
        return Err(Error::Domain(format!(
            "degenerate target probability {target_prob}"
        )));
    }
    let bits = -(1.0 - word_prob).log2() * (1.0 - target_prob) / (2.0 * word.len() as f64);
    if bits.is_nan() || bits <= 0.0 {
        return Err(Error::Invariant(format!(
            "universal rate {bits} not positive for word_prob {word_prob}, target_prob {target_prob}"
        )));
    }
    Ok(UniversalRate {
        word: word.to_vec(),
        half_length: (word.len() as u64 - 1) / 2,
        target,
        word_prob,
        target_prob,
        bits,
    })
}

/// D(u): the indices j below ⌊|u|/pattern_len⌋ where the output word
/// disagrees with the forced symbol. At each such j, a source match of
/// the pattern centered at pattern_len·j is impossible.
pub fn missing_positions(u: &[u8], pattern_len: usize, target: u8) -> Vec<usize> {
    (0..u.len() / pattern_len)
        .filter(|&j| u[pattern_len * j] != target)
        .collect()
}

/// Everything a universal-rate check run measured.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalCheckReport {
    /// The rate instance, with the estimated output marginal inside.
    pub rate: UniversalRate,
    /// Repetitions of the length-ell exclusion structure.
    pub r: u64,
    /// Output word length per repetition.
    pub ell: u64,
    /// The decay bound 2^{−bits·r·ell} the estimate must respect.
    pub bound: f64,
    /// Monte Carlo estimate of the source-side avoidance probability.
    pub estimate: EstimateReport,
    /// Average size of the exclusion set per sampled output word.
    pub mean_missing: f64,
    /// estimate ≤ bound + 4·stderr.
    pub pass: bool,
}

/// Samples per parallel work unit, mirroring the estimator loops.
const CHUNK: u64 = 4096;

/// Statistical check of the universal rate bound against the block code.
///
/// Each sample draws a coded word `u` of length `ell`, finds its
/// exclusion set D(u), draws an independent source window, and tests
/// whether the source avoids the pattern at every excluded position of
/// every one of the `r` repetitions. Averaging over samples estimates
/// exactly the quantity the rate bound 2^{−bits·r·ell} dominates, with
/// the output marginal estimated in a smoothed pre-pass. The check
/// passes when the estimate stays below the bound within noise — which
/// the block code satisfies: the point of the workbench is that the
/// bound *holds* here, while the repetition probabilities of
/// [`crate::find_violation`] still beat the decay rate a finitary-factor
/// representation would force, pinning the contradiction on the
/// representation.
///
/// `word` and `target` must form a forcing pair for the block code: the
/// pattern (marker, c, marker) pins a complete two-symbol block, whose
/// code doubles the interior symbol, so the coded output at the center
/// is pair(c, c).
pub fn universal_rate_check(
    word: &[u8],
    target: u8,
    ell: u64,
    r: u64,
    samples: u64,
    seed: u64,
) -> Result<UniversalCheckReport> {
    let forced = match word {
        [MARKER, c, MARKER] if (1..=9).contains(c) => pair(*c, *c),
        _ => {
            return Err(Error::Config(format!(
                "pattern {word:?} is not a marker-delimited forcing pattern"
            )))
        }
    };
    if target != forced {
        return Err(Error::Config(format!(
            "pattern {word:?} forces coded symbol {forced}, not {target}"
        )));
    }
    let pattern_len = word.len() as u64;
    if ell < pattern_len {
        return Err(Error::Domain(format!(
            "output word length {ell} shorter than the pattern length {pattern_len}"
        )));
    }
    if r == 0 || samples == 0 {
        return Err(Error::Domain(
            "repetitions and sample count must be positive".into(),
        ));
    }
    let span = i64::try_from(
        r.checked_mul(ell)
            .ok_or_else(|| Error::Domain(format!("repetition span {r}·{ell} overflows")))?,
    )
    .map_err(|_| Error::Domain(format!("repetition span {r}·{ell} overflows coordinates")))?;

    let [marginal_seed, output_seed, source_seed] = derive_seeds(seed);

    // Smoothed estimate of the output marginal of the forced symbol; the
    // smoothing keeps it strictly inside (0,1) as the rate formula needs.
    let marginal = mc_coded_event(0, 1, samples, marginal_seed, |w| {
        Ok(w.get(0) == Some(target))
    })?;
    let target_prob = (marginal.estimate * samples as f64 + 1.0) / (samples as f64 + 2.0);
    let rate = universal_rate(word, &ProbVector::uniform(10)?, target, target_prob)?;
    let bound = 2f64.powf(-rate.bits * (r as f64) * (ell as f64));

    let chunks = samples.div_ceil(CHUNK);
    let (hits, missing_sum) = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<(u64, u64)> {
            let symbol = Uniform::new(0u8, 10).expect("valid symbol range");
            let from = chunk * CHUNK;
            let to = (from + CHUNK).min(samples);
            let mut hits = 0u64;
            let mut missing_sum = 0u64;
            let mut source = Vec::with_capacity(span as usize + 1);
            for i in from..to {
                let mut output_rng = stream_rng(output_seed, i + 1);
                let u = sample_determined_coding(&mut output_rng, 0, ell as i64)?;
                let missing = missing_positions(u.symbols(), pattern_len as usize, target);
                missing_sum += missing.len() as u64;

                // Source coordinates −1..span cover the pattern around
                // every excluded center m·ell + pattern_len·j.
                let mut source_rng = stream_rng(source_seed, i + 1);
                source.clear();
                source.extend((0..span as usize + 1).map(|_| symbol.sample(&mut source_rng)));
                let avoided = (0..r).all(|m| {
                    missing.iter().all(|&j| {
                        let center = (m * ell + pattern_len * j as u64) as usize;
                        // source[center] sits at coordinate center − 1.
                        source[center..center + pattern_len as usize] != *word
                    })
                });
                if avoided {
                    hits += 1;
                }
            }
            Ok((hits, missing_sum))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;

    let estimate = EstimateReport::from_counts(hits, samples, seed)?;
    let pass = estimate.estimate <= bound + 4.0 * estimate.stderr;
    Ok(UniversalCheckReport {
        rate,
        r,
        ell,
        bound,
        estimate,
        mean_missing: missing_sum as f64 / samples as f64,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform10() -> ProbVector {
        ProbVector::uniform(10).unwrap()
    }

    #[test]
    fn rate_matches_direct_evaluation() {
        // Pattern of three symbols under uniform(10): word_prob = 1e-3,
        // −log₂(0.999)/6 = 2.40569478278119e-4.
        let per_unit = 2.40569478278119e-4;
        let r = universal_rate(&[1, 2, 1], &uniform10(), 22, 0.5).unwrap();
        assert!((r.word_prob - 1e-3).abs() < 1e-15);
        assert!((r.bits - per_unit * 0.5).abs() < 1e-11 * per_unit);
        assert_eq!(r.half_length, 1);

        let r = universal_rate(&[1, 2, 1], &uniform10(), 22, 0.99).unwrap();
        assert!((r.bits - 2.40569478278119e-6).abs() < 1e-11 * r.bits.abs());
    }

    #[test]
    fn rate_is_positive_and_increasing_in_the_pattern_probability() {
        // Raising a weight raises word_prob and with it the rate.
        let mut previous = 0.0;
        for heavy in [0.1, 0.2, 0.4, 0.6] {
            let rest = (1.0 - heavy) / 9.0;
            let mut weights = vec![rest; 10];
            weights[3] = heavy;
            let p = ProbVector::new(weights).unwrap();
            let rate = universal_rate(&[3, 3, 3], &p, 0, 0.5).unwrap();
            assert!(rate.bits > previous, "heavy {heavy}");
            previous = rate.bits;
        }
    }

    #[test]
    fn rate_rejects_degenerate_inputs() {
        let p = uniform10();
        assert!(matches!(
            universal_rate(&[1, 2], &p, 0, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            universal_rate(&[], &p, 0, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            universal_rate(&[1, 12, 1], &p, 0, 0.5),
            Err(Error::Domain(_))
        ));
        for q in [0.0, 1.0, -0.2, 1.3] {
            assert!(matches!(
                universal_rate(&[1, 2, 1], &p, 0, q),
                Err(Error::Domain(_))
            ));
        }
        // A zero-weight symbol makes the pattern probability zero.
        let mut weights = vec![1.0 / 9.0; 10];
        weights[5] = 0.0;
        let degenerate = ProbVector::new(weights).unwrap();
        assert!(matches!(
            universal_rate(&[5, 5, 5], &degenerate, 0, 0.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn missing_positions_reads_every_pattern_stride() {
        let target = 22;
        let u = [22, 0, 0, 5, 0, 0, 22, 0, 0, 9, 0];
        // Strides of 3 land on indices 0, 3, 6; index 9 is cut off by
        // the floor. Only index 3 (stride 1) disagrees with the target.
        assert_eq!(missing_positions(&u, 3, target), vec![1]);
        let u = [5, 0, 0, 5, 0, 0, 22, 0, 0];
        assert_eq!(missing_positions(&u, 3, target), vec![0, 1]);
        // All-target word: empty exclusion set.
        let u = [22, 1, 2, 22, 3, 4];
        assert!(missing_positions(&u, 3, target).is_empty());
    }

    #[test]
    fn check_rejects_bad_forcing_pairs_and_parameters() {
        // Interior symbol must be non-marker and the target its double.
        assert!(matches!(
            universal_rate_check(&[0, 2, 0], 33, 12, 3, 10, 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            universal_rate_check(&[1, 2, 1], 22, 12, 3, 10, 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            universal_rate_check(&[0, 0, 0], 0, 12, 3, 10, 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            universal_rate_check(&[0, 2, 0, 2, 0], 22, 12, 3, 10, 1),
            Err(Error::Config(_))
        ));
        // Output word shorter than the pattern cannot carry a stride.
        assert!(matches!(
            universal_rate_check(&[0, 2, 0], 22, 2, 3, 10, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            universal_rate_check(&[0, 2, 0], 22, 12, 0, 10, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            universal_rate_check(&[0, 2, 0], 22, 12, 3, 0, 1),
            Err(Error::Domain(_))
        ));
    }
}
