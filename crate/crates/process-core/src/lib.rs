//! Core vocabulary for finite samples of symbolic processes: alphabets,
//! probability vectors, windows with an origin offset, seeded i.i.d.
//! sampling, cylinder and repetition events, and the exact block-start
//! law of the uniform ten-symbol source.
//!
//! Coordinates are absolute: a window remembers the index of its first
//! symbol, so events defined at fixed positions (a word at coordinate 0,
//! say) can be evaluated on any sample that covers them.

pub mod error;
pub mod rng;

pub use error::{Error, Result};

use rand::distr::{weighted::WeightedIndex, Distribution, Uniform};
use rng::{stream_rng, ChaCha8Rng};

/// A finite symbol alphabet {0, 1, ..., size−1}.
///
/// Symbols are stored as `u8`, so sizes are capped at 256. The block code
/// treats symbol 0 as its marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    size: u32,
}

impl Alphabet {
    /// An alphabet of `size` symbols; at least 2, at most 256.
    pub fn new(size: u32) -> Result<Self> {
        if !(2..=256).contains(&size) {
            return Err(Error::Config(format!(
                "alphabet size must be in 2..=256, got {size}"
            )));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, symbol: u8) -> bool {
        (symbol as u32) < self.size
    }
}

/// A probability vector over an alphabet: one weight per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    weights: Vec<f64>,
    uniform: bool,
}

impl ProbVector {
    /// Validates that every weight lies in [0,1] and the total is 1
    /// within 1e-12.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if !(2..=256).contains(&weights.len()) {
            return Err(Error::Config(format!(
                "probability vector needs 2..=256 weights, got {}",
                weights.len()
            )));
        }
        if weights
            .iter()
            .any(|w| !w.is_finite() || *w < 0.0 || *w > 1.0)
        {
            return Err(Error::Config(
                "probability weights must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "probability weights sum to {total}, expected 1 within 1e-12"
            )));
        }
        let uniform = weights.windows(2).all(|w| w[0] == w[1]);
        Ok(ProbVector { weights, uniform })
    }

    /// The uniform distribution on `size` symbols.
    pub fn uniform(size: u32) -> Result<Self> {
        Alphabet::new(size)?;
        let w = 1.0 / f64::from(size);
        Ok(ProbVector {
            weights: vec![w; size as usize],
            uniform: true,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet {
            size: self.weights.len() as u32,
        }
    }

    /// Appends `count` i.i.d. draws to `out`.
    ///
    /// The uniform case takes a fast integer path; general weights go
    /// through a weighted-index table. Draw order is part of the
    /// reproducibility contract, so both paths consume the generator
    /// one value per symbol.
    pub fn draw_into(&self, rng: &mut ChaCha8Rng, count: usize, out: &mut Vec<u8>) {
        out.reserve(count);
        if self.uniform {
            let dist = Uniform::new(0u8, self.weights.len() as u8).expect("non-empty symbol range");
            for _ in 0..count {
                out.push(dist.sample(rng));
            }
        } else {
            let dist =
                WeightedIndex::new(&self.weights).expect("weights validated at construction");
            for _ in 0..count {
                out.push(dist.sample(rng) as u8);
            }
        }
    }
}

/// A finite, contiguous sample of a bi-infinite symbol sequence.
///
/// `origin` is the absolute coordinate of the first stored symbol; the
/// window covers `origin..origin+len` (exclusive end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicWindow {
    alphabet: Alphabet,
    origin: i64,
    symbols: Vec<u8>,
}

impl SymbolicWindow {
    /// A window holding at least one symbol, all inside `alphabet`.
    pub fn new(alphabet: Alphabet, origin: i64, symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Invariant(
                "window must hold at least one symbol".into(),
            ));
        }
        if symbols.len() as u64 > i64::MAX as u64 {
            return Err(Error::Invariant(
                "window length overflows coordinates".into(),
            ));
        }
        if let Some(&bad) = symbols.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::Invariant(format!(
                "symbol {bad} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        if origin.checked_add(symbols.len() as i64).is_none() {
            return Err(Error::Invariant("window end overflows coordinates".into()));
        }
        Ok(SymbolicWindow {
            alphabet,
            origin,
            symbols,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        // The constructor guarantees at least one symbol.
        self.symbols.is_empty()
    }

    /// First covered coordinate.
    pub fn start(&self) -> i64 {
        self.origin
    }

    /// One past the last covered coordinate.
    pub fn end(&self) -> i64 {
        self.origin + self.symbols.len() as i64
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbol at absolute coordinate `pos`, if covered.
    pub fn get(&self, pos: i64) -> Option<u8> {
        if pos < self.start() || pos >= self.end() {
            return None;
        }
        Some(self.symbols[(pos - self.origin) as usize])
    }

    /// Whether the window covers every coordinate of `from..to`.
    pub fn covers(&self, from: i64, to: i64) -> bool {
        from >= to || (self.start() <= from && to <= self.end())
    }

    /// The symbols at absolute coordinates `from..to`.
    pub fn slice(&self, from: i64, to: i64) -> Result<&[u8]> {
        if from >= to {
            return Err(Error::Domain(format!(
                "empty coordinate range {from}..{to}"
            )));
        }
        if !self.covers(from, to) {
            return Err(Error::Coverage(format!(
                "window {}..{} does not cover {from}..{to}",
                self.start(),
                self.end()
            )));
        }
        let a = (from - self.origin) as usize;
        let b = (to - self.origin) as usize;
        Ok(&self.symbols[a..b])
    }

    /// A copy restricted to absolute coordinates `from..to`.
    pub fn restrict(&self, from: i64, to: i64) -> Result<SymbolicWindow> {
        let symbols = self.slice(from, to)?.to_vec();
        SymbolicWindow::new(self.alphabet, from, symbols)
    }
}

/// The event that a sequence carries `word` starting at `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSpec {
    word: Vec<u8>,
    position: i64,
}

impl CylinderSpec {
    pub fn new(word: Vec<u8>, position: i64) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Invariant("cylinder word must be nonempty".into()));
        }
        Ok(CylinderSpec { word, position })
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn position(&self) -> i64 {
        self.position
    }

    /// Whether `x` carries the word at the position. The window must
    /// cover the whole word.
    pub fn matches(&self, x: &SymbolicWindow) -> Result<bool> {
        let end = self.position + self.word.len() as i64;
        if !x.covers(self.position, end) {
            return Err(Error::Coverage(format!(
                "window {}..{} does not cover cylinder at {}..{end}",
                x.start(),
                x.end(),
                self.position
            )));
        }
        Ok(x.slice(self.position, end)?.iter().eq(self.word.iter()))
    }
}

/// A Monte Carlo point estimate with its binomial standard error and the
/// sampling parameters needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl EstimateReport {
    /// Report for `successes` hits out of `samples` binomial trials.
    pub fn from_counts(successes: u64, samples: u64, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Domain("sample count must be positive".into()));
        }
        if successes > samples {
            return Err(Error::Invariant(format!(
                "{successes} successes out of {samples} samples"
            )));
        }
        let p = successes as f64 / samples as f64;
        let stderr = (p * (1.0 - p) / samples as f64).sqrt();
        Ok(EstimateReport {
            estimate: p,
            stderr,
            samples,
            seed,
        })
    }
}

/// Formats a float as a decimal string with 12 significant digits.
///
/// Every number leaving the workbench in JSON goes through this helper so
/// manifests stay diff-stable across platforms while carrying enough
/// precision to reproduce comparisons.
pub fn decimal12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Draws a window of `length` i.i.d. symbols starting at `origin`.
///
/// Deterministic given (seed, length, origin); the draw uses stream 0 of
/// the seed, so callers composing several samples from one seed should
/// split it with [`rng::derive_seeds`] or use [`sample_iid_stream`].
pub fn sample_iid(p: &ProbVector, length: u64, origin: i64, seed: u64) -> Result<SymbolicWindow> {
    sample_iid_stream(p, length, origin, seed, rng::AUX_STREAM)
}

/// [`sample_iid`] with an explicit stream for callers that need several
/// independent windows from the same seed.
pub fn sample_iid_stream(
    p: &ProbVector,
    length: u64,
    origin: i64,
    seed: u64,
    stream: u64,
) -> Result<SymbolicWindow> {
    if length == 0 {
        return Err(Error::Domain("sample length must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, stream);
    let mut symbols = Vec::new();
    p.draw_into(&mut rng, length as usize, &mut symbols);
    SymbolicWindow::new(p.alphabet(), origin, symbols)
}

/// Whether `x` begins, at absolute coordinate 0, with `r` consecutive
/// copies of `word` (coordinates `0..r·|word|` all match).
///
/// `r = 1` is the plain cylinder event at the origin.
pub fn repetition_event(x: &SymbolicWindow, word: &[u8], r: u64) -> Result<bool> {
    if word.is_empty() || r == 0 {
        return Err(Error::Domain(
            "repetition event needs a nonempty word and r >= 1".into(),
        ));
    }
    if let Some(&bad) = word.iter().find(|s| !x.alphabet().contains(**s)) {
        return Err(Error::Domain(format!(
            "word symbol {bad} outside alphabet of size {}",
            x.alphabet().size()
        )));
    }
    let span = word.len() as u64 * r;
    if span > i64::MAX as u64 || !x.covers(0, span as i64) {
        return Err(Error::Coverage(format!(
            "window {}..{} does not cover coordinates 0..{span}",
            x.start(),
            x.end()
        )));
    }
    let base = (0 - x.origin()) as usize;
    let symbols = x.symbols();
    Ok((0..span as usize).all(|i| symbols[base + i] == word[i % word.len()]))
}

/// Exact probability, under the uniform ten-symbol i.i.d. source, that a
/// marker block of length exactly `block_length` starts at a fixed
/// coordinate: the marker there, `block_length − 1` non-markers, then the
/// next marker. Equals (1/10)² · (9/10)^(block_length−1).
pub fn exact_block_start_prob(block_length: u64) -> Result<f64> {
    if block_length == 0 {
        return Err(Error::Domain("block length must be at least 1".into()));
    }
    let exp = i32::try_from(block_length - 1)
        .map_err(|_| Error::Domain(format!("block length {block_length} too large")))?;
    Ok(0.01 * 0.9f64.powi(exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform10() -> ProbVector {
        ProbVector::uniform(10).unwrap()
    }

    #[test]
    fn point_mass_draws_constant_window() {
        let mut w = vec![0.0; 10];
        w[0] = 1.0;
        let p = ProbVector::new(w).unwrap();
        let x = sample_iid(&p, 5, 0, 1).unwrap();
        assert_eq!(x.symbols(), &[0, 0, 0, 0, 0]);
    }

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let p = uniform10();
        let a = sample_iid(&p, 1000, -3, 99).unwrap();
        let b = sample_iid(&p, 1000, -3, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_iid(&p, 1000, -3, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_length_sample_is_a_domain_error() {
        assert!(matches!(
            sample_iid(&uniform10(), 0, 0, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn invalid_prob_vectors_are_config_errors() {
        assert!(matches!(
            ProbVector::new(vec![0.5, 0.6]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ProbVector::new(vec![0.5, -0.1, 0.6]),
            Err(Error::Config(_))
        ));
        assert!(matches!(ProbVector::new(vec![1.0]), Err(Error::Config(_))));
    }

    #[test]
    fn window_constructor_enforces_invariants() {
        let a = Alphabet::new(4).unwrap();
        assert!(matches!(
            SymbolicWindow::new(a, 0, vec![]),
            Err(Error::Invariant(_))
        ));
        assert!(matches!(
            SymbolicWindow::new(a, 0, vec![0, 4]),
            Err(Error::Invariant(_))
        ));
        let w = SymbolicWindow::new(a, -2, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(w.start(), -2);
        assert_eq!(w.end(), 2);
        assert_eq!(w.get(-2), Some(0));
        assert_eq!(w.get(1), Some(3));
        assert_eq!(w.get(2), None);
    }

    #[test]
    fn repetition_constant_sequence() {
        let a = Alphabet::new(10).unwrap();
        let x = SymbolicWindow::new(a, 0, vec![3; 6]).unwrap();
        assert!(repetition_event(&x, &[3], 4).unwrap());
    }

    #[test]
    fn repetition_detects_mismatch() {
        let a = Alphabet::new(10).unwrap();
        let x = SymbolicWindow::new(a, 0, vec![3, 5, 3, 4, 0]).unwrap();
        assert!(!repetition_event(&x, &[3, 5], 2).unwrap());
        // r = 1 is the plain cylinder and does match.
        assert!(repetition_event(&x, &[3, 5], 1).unwrap());
    }

    #[test]
    fn repetition_requires_coverage_from_zero() {
        let a = Alphabet::new(10).unwrap();
        let x = SymbolicWindow::new(a, 1, vec![3, 3, 3]).unwrap();
        assert!(matches!(
            repetition_event(&x, &[3], 2),
            Err(Error::Coverage(_))
        ));
        let y = SymbolicWindow::new(a, 0, vec![3, 3, 3]).unwrap();
        assert!(matches!(
            repetition_event(&y, &[3], 4),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn repetition_rejects_degenerate_parameters() {
        let a = Alphabet::new(10).unwrap();
        let x = SymbolicWindow::new(a, 0, vec![3, 3, 3]).unwrap();
        assert!(matches!(
            repetition_event(&x, &[], 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            repetition_event(&x, &[3], 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cylinder_matches_at_offset_positions() {
        let a = Alphabet::new(10).unwrap();
        let x = SymbolicWindow::new(a, -1, vec![7, 2, 9, 2]).unwrap();
        let c = CylinderSpec::new(vec![2, 9], 0).unwrap();
        assert!(c.matches(&x).unwrap());
        let miss = CylinderSpec::new(vec![9, 9], 0).unwrap();
        assert!(!miss.matches(&x).unwrap());
        let outside = CylinderSpec::new(vec![2], 3).unwrap();
        assert!(matches!(outside.matches(&x), Err(Error::Coverage(_))));
    }

    #[test]
    fn block_start_prob_small_cases() {
        assert!((exact_block_start_prob(1).unwrap() - 0.01).abs() < 1e-15);
        assert!((exact_block_start_prob(2).unwrap() - 0.009).abs() < 1e-15);
    }

    #[test]
    fn block_start_prob_frozen_values() {
        // Values frozen from an independent 30-digit evaluation of
        // (1/100)·(9/10)^(L−1).
        let cases = [
            (26, 7.17897987691853e-4),
            (39, 1.82480036314007e-4),
            (40, 1.64232032682607e-4),
        ];
        for (len, expected) in cases {
            let got = exact_block_start_prob(len).unwrap();
            assert!(
                ((got - expected) / expected).abs() < 1e-12,
                "L={len}: got {got:e}, frozen {expected:e}"
            );
        }
    }

    #[test]
    fn block_start_prob_decreases_and_sums_to_one_tenth() {
        let mut prev = f64::INFINITY;
        let mut total = 0.0;
        for len in 1..=2000 {
            let p = exact_block_start_prob(len).unwrap();
            assert!(p < prev, "not strictly decreasing at L={len}");
            prev = p;
            total += p;
        }
        // Geometric tail beyond L=2000 is below 1e-93.
        assert!((total - 0.1).abs() < 1e-12, "sum {total}");
    }

    #[test]
    fn estimate_report_counts() {
        let r = EstimateReport::from_counts(25, 100, 7).unwrap();
        assert!((r.estimate - 0.25).abs() < 1e-15);
        assert!((r.stderr - (0.25 * 0.75 / 100.0f64).sqrt()).abs() < 1e-15);
        assert!(matches!(
            EstimateReport::from_counts(2, 0, 7),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            EstimateReport::from_counts(5, 4, 7),
            Err(Error::Invariant(_))
        ));
    }
}
