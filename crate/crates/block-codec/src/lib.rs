//! The marker block code.
//!
//! A ten-symbol source sequence is cut into blocks at occurrences of the
//! marker symbol 0: each block is the marker followed by the non-marker
//! run behind it. Complete blocks are rewritten over the 100-symbol pair
//! alphabet — short blocks (length < 10) by doubling each symbol into a
//! pair, long blocks by filling the first half with an enumerated code
//! word and pairing each second-half symbol with the symbol half a block
//! earlier. The output at a coordinate is therefore a function of a
//! finite input window (the enclosing block plus its terminating marker),
//! and this module exposes that dependence explicitly: coded windows
//! carry per-coordinate determinacy flags, and [`finitary_radius`]
//! reports how far the dependence reaches.

use process_core::{Alphabet, Error, Result, SymbolicWindow};

/// The marker symbol that starts every block.
pub const MARKER: u8 = 0;

/// The ten-symbol source alphabet the block code reads.
pub fn source_alphabet() -> Alphabet {
    Alphabet::new(10).expect("10 is a valid alphabet size")
}

/// The 100-symbol pair alphabet the block code writes.
pub fn pair_alphabet() -> Alphabet {
    Alphabet::new(100).expect("100 is a valid alphabet size")
}

/// Encodes an ordered pair of source symbols as one pair-alphabet symbol.
///
/// Panics if either component is outside the source alphabet.
pub fn pair(first: u8, second: u8) -> u8 {
    assert!(
        first < 10 && second < 10,
        "pair components must be source symbols"
    );
    10 * first + second
}

/// Splits a pair-alphabet symbol back into its components.
pub fn pair_components(symbol: u8) -> (u8, u8) {
    (symbol / 10, symbol % 10)
}

/// The deterministic rule assigning a pair-alphabet code word to every
/// block length from 10 up.
///
/// Length `L` maps to the (L−9)-th word over the pair alphabet in
/// length-lexicographic order (shorter words first, ties broken by the
/// encoded symbol values, 1-indexed). Every word therefore appears for
/// exactly one length, and the word for length `L` is always at most
/// L/10 symbols long.
#[derive(Debug, Clone, Copy, Default)]
pub struct WordEnumeration;

impl WordEnumeration {
    /// The code word for blocks of length `block_length` (≥ 10).
    pub fn word(&self, block_length: u64) -> Result<Vec<u8>> {
        let (len, mut offset) = self.locate(block_length)?;
        let mut word = vec![0u8; len];
        for slot in word.iter_mut().rev() {
            *slot = (offset % 100) as u8;
            offset /= 100;
        }
        Ok(word)
    }

    /// Length of the code word for `block_length`, without materializing it.
    pub fn word_len(&self, block_length: u64) -> Result<usize> {
        Ok(self.locate(block_length)?.0)
    }

    /// Word length and 0-based offset within that length layer.
    fn locate(&self, block_length: u64) -> Result<(usize, u128)> {
        if block_length < 10 {
            return Err(Error::Domain(format!(
                "code words are assigned to block lengths >= 10, got {block_length}"
            )));
        }
        let index = u128::from(block_length) - 9; // 1-based rank in length-lex order
        let mut layer = 0usize;
        let mut layer_size = 1u128;
        let mut cumulative = 0u128;
        loop {
            layer += 1;
            layer_size *= 100;
            if cumulative + layer_size >= index {
                return Ok((layer, index - cumulative - 1));
            }
            cumulative += layer_size;
        }
    }
}

/// The code word for blocks of length `block_length`.
pub fn enumerate_word(block_length: u64) -> Result<Vec<u8>> {
    WordEnumeration.word(block_length)
}

/// One marker-delimited block: the marker at `start`, then non-marker
/// symbols up to (not including) the next marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    start: i64,
    content: Vec<u8>,
}

impl Block {
    pub fn new(start: i64, content: Vec<u8>) -> Result<Self> {
        match content.first() {
            None => return Err(Error::Invariant("block content must be nonempty".into())),
            Some(&first) if first != MARKER => {
                return Err(Error::Invariant(format!(
                    "block must start with the marker symbol, got {first}"
                )))
            }
            _ => {}
        }
        if let Some(&bad) = content[1..].iter().find(|&&s| s == MARKER || s >= 10) {
            return Err(Error::Invariant(format!(
                "block interior must be non-marker source symbols, got {bad}"
            )));
        }
        Ok(Block { start, content })
    }

    /// Absolute coordinate of the block's marker.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Block length, marker included.
    pub fn len(&self) -> u64 {
        self.content.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.content.is_empty()
    }

    pub fn content(&self) -> &[u8] {
        &self.content
    }
}

/// Positions and extents of the marker-delimited blocks inside a window.
///
/// `head_skip` counts the window symbols before the first marker;
/// `blocks` holds the complete blocks (those whose terminating marker is
/// also visible); `tail` holds everything from the last marker on — the
/// final block is incomplete because its length is still unknown. A
/// window with no marker at all is pure head: zero blocks, empty tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub head_skip: usize,
    pub blocks: Vec<Block>,
    pub tail: Vec<u8>,
}

/// Cuts a source window into marker-delimited blocks.
pub fn parse_blocks(x: &SymbolicWindow) -> Result<BlockDecomposition> {
    require_source(x)?;
    let symbols = x.symbols();
    let mut markers = symbols.iter().enumerate().filter(|(_, &s)| s == MARKER);
    let Some((first, _)) = markers.next() else {
        return Ok(BlockDecomposition {
            head_skip: symbols.len(),
            blocks: Vec::new(),
            tail: Vec::new(),
        });
    };
    let mut blocks = Vec::new();
    let mut block_start = first;
    for (next, _) in markers {
        blocks.push(Block::new(
            x.origin() + block_start as i64,
            symbols[block_start..next].to_vec(),
        )?);
        block_start = next;
    }
    Ok(BlockDecomposition {
        head_skip: first,
        blocks,
        tail: symbols[block_start..].to_vec(),
    })
}

/// Rewrites one complete block over the pair alphabet.
///
/// Blocks shorter than 10 double each symbol into a pair. Longer blocks
/// fill their first half (1-indexed positions 1..=⌊L/2⌋) with the
/// enumerated code word repeated cyclically, and pair each second-half
/// symbol with the symbol ⌊L/2⌋ places earlier.
pub fn encode_block(block: &Block, enumeration: &WordEnumeration) -> Result<Vec<u8>> {
    let mut out = vec![0u8; block.content().len()];
    encode_into(block.content(), enumeration, &mut out)?;
    Ok(out)
}

/// Encodes one complete block's content into a caller-provided slice of
/// the same length. The content must already satisfy the block shape
/// (callers here are [`encode_block`] and the coding scan, both of which
/// guarantee it).
fn encode_into(content: &[u8], enumeration: &WordEnumeration, out: &mut [u8]) -> Result<()> {
    let len = content.len();
    debug_assert_eq!(out.len(), len);
    if len < 10 {
        for (slot, &a) in out.iter_mut().zip(content) {
            *slot = pair(a, a);
        }
    } else {
        let code = enumeration.word(len as u64)?;
        let half = len / 2;
        for j in 0..half {
            out[j] = code[j % code.len()];
        }
        for j in half..len {
            out[j] = pair(content[j], content[j - half]);
        }
    }
    Ok(())
}

/// The coded image of a source window: pair-alphabet symbols plus a
/// per-coordinate flag saying whether the window determined them.
///
/// A coordinate is determined exactly when its enclosing block, both
/// delimiting markers included, lies inside the source window; for this
/// code that is the contiguous stretch from the first marker to the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedWindow {
    origin: i64,
    symbols: Vec<u8>,
    determined: Vec<bool>,
}

impl CodedWindow {
    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Raw symbol storage; positions where `determined()` is false hold a
    /// placeholder 0 and carry no information.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn determined(&self) -> &[bool] {
        &self.determined
    }

    /// The coded symbol at absolute coordinate `pos`, if determined.
    pub fn get(&self, pos: i64) -> Option<u8> {
        if pos < self.origin || pos >= self.origin + self.symbols.len() as i64 {
            return None;
        }
        let rel = (pos - self.origin) as usize;
        self.determined[rel].then(|| self.symbols[rel])
    }

    /// Absolute coordinate range `from..to` of the determined stretch.
    pub fn determined_span(&self) -> Option<(i64, i64)> {
        let first = self.determined.iter().position(|&d| d)?;
        let last = self.determined.iter().rposition(|&d| d).unwrap();
        Some((self.origin + first as i64, self.origin + last as i64 + 1))
    }

    /// The determined stretch as a pair-alphabet window.
    pub fn determined_window(&self) -> Option<SymbolicWindow> {
        let (from, to) = self.determined_span()?;
        let a = (from - self.origin) as usize;
        let b = (to - self.origin) as usize;
        Some(
            SymbolicWindow::new(pair_alphabet(), from, self.symbols[a..b].to_vec())
                .expect("span is nonempty and symbols are pair-alphabet"),
        )
    }

    pub fn determined_fraction(&self) -> f64 {
        if self.determined.is_empty() {
            return 0.0;
        }
        self.determined.iter().filter(|&&d| d).count() as f64 / self.determined.len() as f64
    }
}

/// Codes a source window: every complete block is rewritten with the
/// block encoding; head and tail coordinates stay undetermined. Works
/// straight off the marker scan rather than a materialized decomposition,
/// since Monte Carlo loops call this once per sample.
pub fn phi(x: &SymbolicWindow) -> Result<CodedWindow> {
    require_source(x)?;
    let source = x.symbols();
    let mut symbols = vec![0u8; source.len()];
    let mut determined = vec![false; source.len()];
    let enumeration = WordEnumeration;
    let mut open: Option<usize> = None;
    for (i, &s) in source.iter().enumerate() {
        if s != MARKER {
            continue;
        }
        if let Some(at) = open {
            encode_into(&source[at..i], &enumeration, &mut symbols[at..i])?;
            determined[at..i].fill(true);
        }
        open = Some(i);
    }
    Ok(CodedWindow {
        origin: x.origin(),
        symbols,
        determined,
    })
}

/// The marker indicator of a window: 1 where the source reads the marker
/// symbol, 0 elsewhere. Total — no coordinate is ever undetermined.
pub fn psi(x: &SymbolicWindow) -> SymbolicWindow {
    let indicator: Vec<u8> = x.symbols().iter().map(|&s| u8::from(s == MARKER)).collect();
    SymbolicWindow::new(
        Alphabet::new(2).expect("binary alphabet"),
        x.origin(),
        indicator,
    )
    .expect("indicator window mirrors a valid window")
}

/// How far the code looks to settle the output at coordinate `n`: the
/// smallest `r` such that knowing coordinates n−r..=n+r fixes the coded
/// symbol there. That is max(n−s, e−n) where `s` is the marker opening
/// the enclosing block and `e` the next marker after it. Returns `None`
/// when either marker falls outside the window, i.e. the radius is still
/// unresolved.
pub fn finitary_radius(x: &SymbolicWindow, n: i64) -> Result<Option<u64>> {
    require_source(x)?;
    if n < x.start() || n >= x.end() {
        return Err(Error::Domain(format!(
            "coordinate {n} outside window {}..{}",
            x.start(),
            x.end()
        )));
    }
    let symbols = x.symbols();
    let rel = (n - x.origin()) as usize;
    let Some(open) = symbols[..=rel].iter().rposition(|&s| s == MARKER) else {
        return Ok(None);
    };
    let Some(next) = symbols[rel + 1..]
        .iter()
        .position(|&s| s == MARKER)
        .map(|i| rel + 1 + i)
    else {
        return Ok(None);
    };
    Ok(Some(u64::max((rel - open) as u64, (next - rel) as u64)))
}

/// The exact entropy bookkeeping around the code, in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyConstants {
    /// Rate of the uniform ten-symbol source: log₂ 10.
    pub source_bits: f64,
    /// Rate of the marker indicator process: the binary entropy of 1/10.
    pub marker_bits: f64,
    /// Lower bound for the coded process rate: source rate minus marker
    /// rate, which works out to (9/10)·log₂ 9 and exceeds 1 bit.
    pub coded_lower_bound_bits: f64,
}

/// The three rate constants, with the bound checks baked in: the coded
/// lower bound equals (9/10)·log₂ 9 and is strictly greater than 1 bit.
pub fn entropy_lower_bound_constants() -> EntropyConstants {
    let source_bits = 10f64.log2();
    let marker_bits = 0.1 * 10f64.log2() + 0.9 * (10.0f64 / 9.0).log2();
    let coded_lower_bound_bits = source_bits - marker_bits;
    let reference = 0.9 * 9f64.log2();
    assert!(
        coded_lower_bound_bits >= reference - 1e-12,
        "rate difference {coded_lower_bound_bits} fell below (9/10)·log2(9) = {reference}"
    );
    assert!(reference > 1.0, "coded rate bound must exceed one bit");
    EntropyConstants {
        source_bits,
        marker_bits,
        coded_lower_bound_bits,
    }
}

fn require_source(x: &SymbolicWindow) -> Result<()> {
    if x.alphabet() != source_alphabet() {
        return Err(Error::Config(format!(
            "block code reads the ten-symbol source alphabet, window has size {}",
            x.alphabet().size()
        )));
    }
    Ok(())
}
