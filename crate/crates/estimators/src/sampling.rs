use block_codec::{phi, source_alphabet};
use process_core::{
    rng::{stream_rng, ChaCha8Rng, AUX_STREAM},
    Error, EstimateReport, Result, SymbolicWindow,
};
use rand::distr::{Distribution, Uniform};
use rayon::prelude::*;

/// Samples per parallel work unit. Each sample owns a fixed RNG stream,
/// so chunking only affects scheduling, never results.
const CHUNK: u64 = 4096;
/// Source symbols initially drawn on each side of the requested range.
const INITIAL_PAD: i64 = 64;
/// How many times the sampler may double the pad before reporting the
/// draw as persistently undetermined.
const WIDENING_BUDGET: u32 = 10;

fn extend_uniform_source(rng: &mut ChaCha8Rng, count: usize, out: &mut Vec<u8>) {
    let symbol = Uniform::new(0u8, 10).expect("valid symbol range");
    out.extend((0..count).map(|_| symbol.sample(rng)));
}

/// Draws one uniform source sample wide enough that its coded image is
/// fully determined on `lo..hi`, and returns that coded stretch as a
/// pair-alphabet window.
///
/// The draw starts with a symmetric pad of source symbols around the
/// range and doubles the pad (fresh symbols on both flanks) whenever a
/// complete block is still missing, so long blocks are widened into view
/// rather than discarded — discarding would bias exactly the long-block
/// events the repetition estimates care about. A draw that stays
/// undetermined past the widening budget is reported as a sampling
/// error; at that point the window spans tens of thousands of symbols
/// and the failure odds are astronomically small.
pub fn sample_determined_coding(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Result<SymbolicWindow> {
    if lo >= hi {
        return Err(Error::Domain(format!("coded range {lo}..{hi} is empty")));
    }
    let mut pad = INITIAL_PAD;
    let mut origin = lo - pad;
    let mut buf = Vec::with_capacity((hi - lo + 2 * pad) as usize);
    extend_uniform_source(rng, (hi + pad - origin) as usize, &mut buf);
    let mut widenings = 0;
    loop {
        let x = SymbolicWindow::new(source_alphabet(), origin, buf)?;
        let coded = phi(&x)?;
        if let Some(w) = coded.determined_window() {
            if w.covers(lo, hi) {
                return w.restrict(lo, hi);
            }
        }
        if widenings == WIDENING_BUDGET {
            return Err(Error::Sampling(format!(
                "coded range {lo}..{hi} stayed undetermined after {WIDENING_BUDGET} widenings"
            )));
        }
        widenings += 1;
        let mut wider = Vec::with_capacity(x.len() + 2 * pad as usize);
        extend_uniform_source(rng, pad as usize, &mut wider);
        wider.extend_from_slice(x.symbols());
        extend_uniform_source(rng, pad as usize, &mut wider);
        buf = wider;
        origin -= pad;
        pad *= 2;
    }
}

/// Monte Carlo probability that the coded process satisfies `event` on
/// the coordinate range `lo..hi`.
///
/// Each of the `samples` draws pushes a fresh source window through the
/// code via [`sample_determined_coding`] and evaluates `event` on the
/// determined pair-alphabet window covering exactly `lo..hi`. Sample `i`
/// owns stream `i + 1` of `seed` (stream 0 stays reserved for auxiliary
/// draws), so the estimate is identical for every worker count.
pub fn mc_coded_event<F>(
    lo: i64,
    hi: i64,
    samples: u64,
    seed: u64,
    event: F,
) -> Result<EstimateReport>
where
    F: Fn(&SymbolicWindow) -> Result<bool> + Sync,
{
    if samples == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    if lo >= hi {
        return Err(Error::Domain(format!("coded range {lo}..{hi} is empty")));
    }
    let chunks = samples.div_ceil(CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<u64> {
            let from = chunk * CHUNK;
            let to = (from + CHUNK).min(samples);
            let mut hits = 0u64;
            for i in from..to {
                let mut rng = stream_rng(seed, i + 1);
                let w = sample_determined_coding(&mut rng, lo, hi)?;
                if event(&w)? {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    EstimateReport::from_counts(hits, samples, seed)
}

/// Monte Carlo estimate of the coded process's probability of repeating
/// `word` at the `r` consecutive positions 0, ℓ, 2ℓ, …, (r−1)ℓ where
/// ℓ = |word|, i.e. of the intersection of the `r` shifted cylinders.
pub fn mc_repetition_prob(word: &[u8], r: u64, samples: u64, seed: u64) -> Result<EstimateReport> {
    if word.is_empty() || r == 0 {
        return Err(Error::Domain(
            "repetition span must be positive: need a nonempty word and r ≥ 1".into(),
        ));
    }
    for &s in word {
        if s >= 100 {
            return Err(Error::Domain(format!(
                "symbol {s} outside the coded alphabet of size 100"
            )));
        }
    }
    let span: i64 = (word.len() as u64)
        .checked_mul(r)
        .and_then(|s| i64::try_from(s).ok())
        .ok_or_else(|| Error::Domain(format!("repetition span {}·{r} overflows", word.len())))?;
    mc_coded_event(0, span, samples, seed, |w| {
        process_core::repetition_event(w, word, r)
    })
}

/// One coded sample covering coordinates `0..length`, drawn on the
/// auxiliary stream of `seed`.
pub fn sample_coded_window(length: u64, seed: u64) -> Result<SymbolicWindow> {
    coded_sample(length, seed, AUX_STREAM)
}

/// Like [`sample_coded_window`] but on an explicit stream of `seed`,
/// returning the raw symbols. Callers needing several independent draws
/// from one seed pick distinct streams.
pub fn sample_coded_word(length: u64, seed: u64, stream: u64) -> Result<Vec<u8>> {
    Ok(coded_sample(length, seed, stream)?.symbols().to_vec())
}

fn coded_sample(length: u64, seed: u64, stream: u64) -> Result<SymbolicWindow> {
    if length == 0 {
        return Err(Error::Domain("sample length must be positive".into()));
    }
    let hi = i64::try_from(length)
        .map_err(|_| Error::Domain(format!("sample length {length} overflows coordinates")))?;
    let mut rng = stream_rng(seed, stream);
    sample_determined_coding(&mut rng, 0, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use block_codec::pair_alphabet;

    const SEED: u64 = 20260817;

    #[test]
    fn determined_sample_covers_exactly_the_requested_range() {
        let mut rng = stream_rng(SEED, 1);
        let w = sample_determined_coding(&mut rng, -3, 9).unwrap();
        assert_eq!(w.start(), -3);
        assert_eq!(w.end(), 9);
        assert_eq!(w.alphabet(), pair_alphabet());
    }

    #[test]
    fn draws_are_reproducible_per_stream() {
        let draw = || {
            let mut rng = stream_rng(SEED, 7);
            sample_determined_coding(&mut rng, 0, 20).unwrap()
        };
        assert_eq!(draw(), draw());
        let mut other = stream_rng(SEED, 8);
        assert_ne!(draw(), sample_determined_coding(&mut other, 0, 20).unwrap());
    }

    #[test]
    fn coded_windows_and_words_agree() {
        let w = sample_coded_window(50, SEED).unwrap();
        let v = sample_coded_word(50, SEED, AUX_STREAM).unwrap();
        assert_eq!(w.symbols(), &v[..]);
        assert_eq!(w.start(), 0);
    }

    #[test]
    fn empty_requests_are_rejected() {
        let mut rng = stream_rng(SEED, 1);
        assert!(matches!(
            sample_determined_coding(&mut rng, 5, 5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            sample_coded_window(0, SEED),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mc_repetition_prob(&[0], 0, 100, SEED),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mc_repetition_prob(&[], 1, 100, SEED),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mc_repetition_prob(&[0], 1, 0, SEED),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            mc_repetition_prob(&[100], 1, 100, SEED),
            Err(Error::Domain(_))
        ));
    }
}
