//! Aligned two-component windows, the word-planting edit, and the
//! repetition-event membership test.

use crate::{ceil_log2, tower_height, TowerSpec};
use process_core::{Alphabet, Error, Result, SymbolicWindow};

/// Two symbol windows over the same coordinate range, viewed as a sample of
/// a pair process (a joining of two marginal processes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWindow {
    first: SymbolicWindow,
    second: SymbolicWindow,
}

impl PairWindow {
    /// Pairs two windows; they must share origin and length.
    pub fn new(first: SymbolicWindow, second: SymbolicWindow) -> Result<Self> {
        if first.origin() != second.origin() {
            return Err(Error::Config(format!(
                "pair components must share an origin, got {} and {}",
                first.origin(),
                second.origin()
            )));
        }
        if first.len() != second.len() {
            return Err(Error::Config(format!(
                "pair components must share a length, got {} and {}",
                first.len(),
                second.len()
            )));
        }
        Ok(Self { first, second })
    }

    /// First (untouched) component.
    pub fn first(&self) -> &SymbolicWindow {
        &self.first
    }

    /// Second component, the one perturbations edit.
    pub fn second(&self) -> &SymbolicWindow {
        &self.second
    }

    /// Shared coordinate origin.
    pub fn origin(&self) -> i64 {
        self.first.origin()
    }

    /// Shared window length.
    pub fn len(&self) -> usize {
        self.first.len()
    }

    /// Whether the windows are empty (they never are; see `SymbolicWindow`).
    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    /// Encodes the pair as one window over the product alphabet, symbol
    /// `a * |B| + b` standing for the pair `(a, b)`.
    ///
    /// Fails when the product alphabet would not fit in a byte.
    pub fn product_window(&self) -> Result<SymbolicWindow> {
        let a = self.first.alphabet().size() as u16;
        let b = self.second.alphabet().size() as u16;
        let product = a * b;
        if product > 256 {
            return Err(Error::Domain(format!(
                "product alphabet of size {product} does not fit in a byte"
            )));
        }
        let symbols = self
            .first
            .symbols()
            .iter()
            .zip(self.second.symbols())
            .map(|(&x, &y)| (u16::from(x) * b + u16::from(y)) as u8)
            .collect();
        SymbolicWindow::new(Alphabet::new(u32::from(product))?, self.origin(), symbols)
    }
}

/// Plants `ceil(log2(2M))` consecutive copies of `word` into the second
/// component above every tower base position.
///
/// The first component is returned untouched, so at most
/// `tower.base_positions().len() * tower.height()` coordinates change.
/// The tower must have been built for this word and `M` (its height must be
/// `|word| * ceil(log2(2M))`) and must fit inside the pair's window.
pub fn perturb(pair: &PairWindow, word: &[u8], m: u64, tower: &TowerSpec) -> Result<PairWindow> {
    if word.is_empty() {
        return Err(Error::Domain("perturbation word must be nonempty".into()));
    }
    if m < 2 {
        return Err(Error::Domain(format!(
            "frequency parameter M must be at least 2, got {m}"
        )));
    }
    let alphabet = pair.second.alphabet();
    for &s in word {
        if !alphabet.contains(s) {
            return Err(Error::Domain(format!(
                "word symbol {s} lies outside the {}-symbol alphabet",
                alphabet.size()
            )));
        }
    }
    let height = tower_height(word.len(), m);
    if tower.height() != height {
        return Err(Error::Config(format!(
            "tower height {} does not match |word| * ceil(log2(2M)) = {height}",
            tower.height()
        )));
    }
    let origin = pair.origin();
    let end = origin + pair.len() as i64;
    let mut symbols = pair.second.symbols().to_vec();
    for &base in tower.base_positions() {
        if base < origin || base + height as i64 > end {
            return Err(Error::Config(format!(
                "tower base {base} overhangs the window [{origin}, {end})"
            )));
        }
        let at = (base - origin) as usize;
        for k in 0..height {
            symbols[at + k] = word[k % word.len()];
        }
    }
    let second = SymbolicWindow::new(alphabet, origin, symbols)?;
    PairWindow::new(pair.first.clone(), second)
}

/// Outcome of the repetition-event membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternReport {
    /// Whether the repetition frequency exceeds `1/M`.
    pub member: bool,
    /// Fraction of coordinates that start `repetitions` consecutive copies
    /// of the word in the second component.
    pub frequency: f64,
    /// The membership threshold `1/M`.
    pub threshold: f64,
    /// Number of consecutive copies demanded, `ceil(log2(2M))`.
    pub repetitions: u32,
    /// Length of the repeated pattern, `|word| * repetitions`.
    pub height: usize,
}

/// Tests whether the pair's second component carries repetitions of `word`
/// with frequency above `1/M`.
///
/// A coordinate `n` counts when the second component reads
/// `word^ceil(log2(2M))` on `n .. n + height`.  The window must be long
/// enough for the frequency to be meaningful: at least `100 * M * |word|`
/// coordinates, else a coverage error is returned.
pub fn check_repeated_word_mass(pair: &PairWindow, word: &[u8], m: u64) -> Result<PatternReport> {
    if word.is_empty() {
        return Err(Error::Domain("pattern word must be nonempty".into()));
    }
    if m == 0 {
        return Err(Error::Domain(
            "frequency parameter M must be positive".into(),
        ));
    }
    let alphabet = pair.second.alphabet();
    for &s in word {
        if !alphabet.contains(s) {
            return Err(Error::Domain(format!(
                "word symbol {s} lies outside the {}-symbol alphabet",
                alphabet.size()
            )));
        }
    }
    let required = 100usize
        .checked_mul(m as usize)
        .and_then(|v| v.checked_mul(word.len()))
        .ok_or_else(|| Error::Domain("coverage requirement overflows".into()))?;
    if pair.len() < required {
        return Err(Error::Coverage(format!(
            "window of length {} is too short to resolve frequency 1/{m}; need at least {required}",
            pair.len()
        )));
    }
    let repetitions = ceil_log2(2 * m);
    let height = tower_height(word.len(), m);
    let symbols = pair.second.symbols();
    let positions = symbols.len() - height + 1;
    let mut count = 0u64;
    for n in 0..positions {
        let mut matched = true;
        for k in 0..height {
            if symbols[n + k] != word[k % word.len()] {
                matched = false;
                break;
            }
        }
        if matched {
            count += 1;
        }
    }
    let frequency = count as f64 / positions as f64;
    let threshold = 1.0 / m as f64;
    Ok(PatternReport {
        member: frequency > threshold,
        frequency,
        threshold,
        repetitions,
        height,
    })
}
