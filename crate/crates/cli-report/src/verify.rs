//! The eight-point verification suite behind `finitary verify-all` and the
//! acceptance tests.
//!
//! Each criterion is a self-contained seeded check over the public crate
//! APIs; [`run_criterion`] measures it and reports pass/fail with a numeric
//! detail line.  `Quick` scale trims sample counts to fit the whole suite in
//! well under a minute while keeping every Monte Carlo certificate far from
//! its flake boundary.

use block_codec::{
    entropy_lower_bound_constants, finitary_radius, pair, parse_blocks, phi, source_alphabet,
    WordEnumeration, MARKER,
};
use estimators::{plugin_entropy_rate, sample_coded_window};
use perturbation::{ceil_log2, iid_obstruction_bound, run_perturbation_experiment};
use process_core::rng::{derive_seeds, stream_rng, AUX_STREAM};
use process_core::{sample_iid, Error, ProbVector, Result, SymbolicWindow};
use rand::Rng;
use std::time::Instant;
use witness_search::{find_violation, universal_rate_check, verify_inequality_chain};

/// Sample-count scale for the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Reduced counts; the full suite finishes in well under a minute.
    Quick,
    /// The documented sample counts.
    Full,
}

impl Scale {
    pub fn name(&self) -> &'static str {
        match self {
            Scale::Quick => "quick",
            Scale::Full => "full",
        }
    }
}

/// Number of criteria in the suite.
pub const CRITERION_COUNT: u8 = 8;

/// Result of one criterion run.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub index: u8,
    pub label: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    /// The one-line rendering printed by `verify-all` and the acceptance
    /// suite.
    pub fn line(&self) -> String {
        format!(
            "criterion {} ({}): {} — {} [{:.1}s]",
            self.index,
            self.label,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail,
            self.seconds
        )
    }
}

/// Human-readable name of a criterion.
pub fn criterion_label(index: u8) -> &'static str {
    match index {
        1 => "block-length law",
        2 => "entropy constants and coded rate",
        3 => "decay-violation witnesses",
        4 => "exact inequality chain",
        5 => "universal rate bound",
        6 => "perturbation sweep",
        7 => "i.i.d. obstruction bound",
        8 => "coding locality and word-length budget",
        _ => "unknown",
    }
}

/// Runs one criterion at the given scale, timing it.
pub fn run_criterion(index: u8, scale: Scale, seed: u64) -> Result<CriterionOutcome> {
    let seeds = derive_seeds::<8>(seed);
    let started = Instant::now();
    let (pass, detail) = match index {
        1 => block_length_law(scale, seeds[0])?,
        2 => entropy_constants_and_rate(scale, seeds[1])?,
        3 => decay_violation_witnesses(scale, seeds[2])?,
        4 => exact_inequality_chain()?,
        5 => universal_rate_bound(scale, seeds[4])?,
        6 => perturbation_sweep(scale, seeds[5])?,
        7 => obstruction_bound()?,
        8 => coding_locality(scale, seeds[7])?,
        other => {
            return Err(Error::Domain(format!(
                "criterion index must lie in 1..={CRITERION_COUNT}, got {other}"
            )))
        }
    };
    Ok(CriterionOutcome {
        index,
        label: criterion_label(index),
        pass,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Runs all criteria in order.
pub fn run_all(scale: Scale, seed: u64) -> Result<Vec<CriterionOutcome>> {
    (1..=CRITERION_COUNT)
        .map(|i| run_criterion(i, scale, seed))
        .collect()
}

/// Criterion 1: the empirical block-length histogram of a uniform sample
/// matches P(L = l) = (1/10)(9/10)^(l-1) within four binomial standard
/// errors in every bin l <= 30.
fn block_length_law(scale: Scale, seed: u64) -> Result<(bool, String)> {
    let length: u64 = match scale {
        Scale::Full => 10_000_000,
        Scale::Quick => 1_000_000,
    };
    let window = sample_iid(&ProbVector::uniform(10)?, length, 0, seed)?;
    let decomposition = parse_blocks(&window)?;
    let total = decomposition.blocks.len();
    let mut counts = [0u64; 31];
    for block in &decomposition.blocks {
        let l = block.len();
        if l <= 30 {
            counts[l as usize] += 1;
        }
    }
    let mut worst_z = 0.0f64;
    for (l, &count) in counts.iter().enumerate().skip(1) {
        let p = 0.1 * 0.9f64.powi(l as i32 - 1);
        let expected = total as f64 * p;
        let sigma = (total as f64 * p * (1.0 - p)).sqrt();
        let z = (count as f64 - expected).abs() / sigma;
        worst_z = worst_z.max(z);
    }
    Ok((
        worst_z <= 4.0,
        format!(
            "{total} blocks from a {length}-symbol sample; worst bin deviation {worst_z:.2} sigma (limit 4)"
        ),
    ))
}

/// Criterion 2: the three rate constants match their closed forms to six
/// decimals, the coded lower bound (9/10)·log2(9) exceeds one bit, and the
/// k = 3 plug-in rate of a large coded sample stays at or above 2.5
/// bits/symbol.
// The targets are deliberately truncated six-decimal reference values;
// substituting the full-precision library constants would defeat the check.
#[allow(clippy::approx_constant)]
fn entropy_constants_and_rate(scale: Scale, seed: u64) -> Result<(bool, String)> {
    let constants = entropy_lower_bound_constants();
    let near = |x: f64, t: f64| (x - t).abs() < 1e-6;
    let constants_ok = near(constants.source_bits, 3.321928)
        && near(constants.marker_bits, 0.468995)
        && near(constants.coded_lower_bound_bits, 2.852932);
    let reference = 0.9 * 9f64.log2();
    let identity_ok = (constants.coded_lower_bound_bits - reference).abs() < 1e-12
        && constants.coded_lower_bound_bits > 1.0;
    let length: u64 = match scale {
        Scale::Full => 10_000_000,
        Scale::Quick => 2_000_000,
    };
    let coded = sample_coded_window(length, seed)?;
    let estimate = plugin_entropy_rate(&coded, 3)?;
    let rate_ok = estimate.bits_per_symbol >= 2.5;
    Ok((
        constants_ok && identity_ok && rate_ok,
        format!(
            "constants ({:.6}, {:.6}, {:.6}) match to 1e-6, lower bound exceeds 1 bit; \
             k=3 plug-in on a {length}-symbol coded sample = {:.4} bits/symbol (floor 2.5)",
            constants.source_bits,
            constants.marker_bits,
            constants.coded_lower_bound_bits,
            estimate.bits_per_symbol
        ),
    ))
}

/// Criterion 3: scanning word length 1 with epsilon = 1/6 and unit rate
/// finds its first decay violation at block length 26, and the scan
/// restricted to lengths >= 40 reproduces the documented L = 40 record
/// (lower bound 1.64232e-4 against decay bound 9.61243e-6); both witnesses
/// carry 4-sigma Monte Carlo certificates.
fn decay_violation_witnesses(scale: Scale, seed: u64) -> Result<(bool, String)> {
    let samples: u64 = match scale {
        Scale::Full => 10_000_000,
        Scale::Quick => 2_000_000,
    };
    let rel = |x: f64, t: f64| (x - t).abs() <= 1e-11 * t.abs();

    let first = find_violation(1, 1.0 / 6.0, 1.0, 10, 109, samples, seed)?;
    let first_ok = first.as_ref().is_some_and(|record| {
        record.block_length == 26
            && record.r == 13
            && rel(record.lower_bound, 7.17897987691853e-4)
            && rel(record.rhs, 5.48077172026061e-4)
            && record.certified()
    });

    let reference = find_violation(1, 1.0 / 6.0, 1.0, 40, 109, samples, seed)?;
    let reference_ok = reference.as_ref().is_some_and(|record| {
        record.block_length == 40
            && record.r == 20
            && rel(record.lower_bound, 1.64232032682607e-4)
            && rel(record.rhs, 9.6124347678747e-6)
            && record.certified()
    });

    let describe = |record: &Option<witness_search::WitnessRecord>| match record {
        Some(r) => format!(
            "L = {} (lower {:.4e} > bound {:.4e}, estimate {:.4e} ± {:.1e})",
            r.block_length, r.lower_bound, r.rhs, r.mc_estimate.estimate, r.mc_estimate.stderr
        ),
        None => "none".to_string(),
    };
    Ok((
        first_ok && reference_ok,
        format!(
            "first violation from L = 10: {}; scan from L = 40 certifies the reference record: {}",
            describe(&first),
            describe(&reference)
        ),
    ))
}

/// Criterion 4: the exact integer inequality chain holds for every block
/// length 36..=1000 at word lengths 1..=3 and fails at (35, 1).
fn exact_inequality_chain() -> Result<(bool, String)> {
    let mut holds_everywhere = true;
    for ell in [1u64, 2, 3] {
        for l in (10 * ell).max(36)..=1000 {
            holds_everywhere &= verify_inequality_chain(l, ell)?;
        }
    }
    let fails_below = !verify_inequality_chain(35, 1)?;
    Ok((
        holds_everywhere && fails_below,
        format!(
            "chain holds at every L in [36, 1000] for word lengths 1..3 ({}), fails at L = 35 ({})",
            if holds_everywhere { "ok" } else { "violated" },
            if fails_below { "ok" } else { "violated" }
        ),
    ))
}

/// Criterion 5: the universal decay-rate bound holds (within 4 sigma) for
/// the forcing pattern at 20 random (ell, r) combinations with r·ell <= 200.
fn universal_rate_bound(scale: Scale, seed: u64) -> Result<(bool, String)> {
    let samples: u64 = match scale {
        Scale::Full => 100_000,
        Scale::Quick => 20_000,
    };
    let mut rng = stream_rng(seed, AUX_STREAM);
    let mut all_pass = true;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..20 {
        let ell = rng.random_range(3..=20u64);
        let r = rng.random_range(1..=200 / ell);
        let check_seed: u64 = rng.random();
        let report = universal_rate_check(
            &[MARKER, 1, MARKER],
            pair(1, 1),
            ell,
            r,
            samples,
            check_seed,
        )?;
        all_pass &= report.pass;
        let margin = report.bound + 4.0 * report.estimate.stderr - report.estimate.estimate;
        worst_margin = worst_margin.min(margin);
    }
    Ok((
        all_pass,
        format!(
            "20 random (ell, r) with r·ell <= 200 at {samples} samples each; \
             estimate <= bound + 4 sigma throughout (tightest margin {worst_margin:.2e})"
        ),
    ))
}

/// Criterion 6: across M in {16, 64, 256} the planted-word edit stays within
/// its d-bar budget, flips the repetition-event membership at M = 64, moves
/// the pair measure less and less in weak-star, and moves the k = 3 entropy
/// rate by at most 0.2 bits at M = 256.
fn perturbation_sweep(scale: Scale, seed: u64) -> Result<(bool, String)> {
    let length: u64 = match scale {
        Scale::Full => 1_000_000,
        Scale::Quick => 200_000,
    };
    let word = [3u8, 7];
    let mut reports = Vec::new();
    for m in [16u64, 64, 256] {
        reports.push(run_perturbation_experiment(length, m, &word, 3, 8, seed)?);
    }
    let budgets: Vec<f64> = reports
        .iter()
        .map(|r| 2.0 * word.len() as f64 * ceil_log2(2 * r.m) as f64 / r.m as f64)
        .collect();
    let dbar_ok = reports.iter().zip(&budgets).all(|(r, &b)| r.dbar <= b);
    let membership_ok = reports[1].member && !reports[1].unperturbed_member;
    let weakstar_ok =
        reports[0].weakstar > reports[1].weakstar && reports[1].weakstar > reports[2].weakstar;
    let entropy_delta = (reports[2].entropy_before - reports[2].entropy_after).abs();
    let entropy_ok = entropy_delta <= 0.2;
    Ok((
        dbar_ok && membership_ok && weakstar_ok && entropy_ok,
        format!(
            "(a) d-bar {:.4}/{:.4}/{:.4} within budgets {:.4}/{:.4}/{:.4}: {}; \
             (b) membership flips at M = 64: {}; \
             (c) weak-star {:.4} > {:.4} > {:.4}: {}; \
             (d) entropy delta {:.5} at M = 256 (tolerance 0.2): {}",
            reports[0].dbar,
            reports[1].dbar,
            reports[2].dbar,
            budgets[0],
            budgets[1],
            budgets[2],
            if dbar_ok { "ok" } else { "VIOLATED" },
            if membership_ok { "ok" } else { "VIOLATED" },
            reports[0].weakstar,
            reports[1].weakstar,
            reports[2].weakstar,
            if weakstar_ok { "ok" } else { "VIOLATED" },
            entropy_delta,
            if entropy_ok { "ok" } else { "VIOLATED" },
        ),
    ))
}

/// Criterion 7: for p = 1/2 the i.i.d. repetition bound p^ceil(log2(2M))
/// stays at or below 1/(2M) for every M up to 10^4, with equality exactly
/// when 2M is a power of two.
fn obstruction_bound() -> Result<(bool, String)> {
    let mut ok = true;
    let mut equality_count = 0u64;
    for m in 1..=10_000u64 {
        let report = iid_obstruction_bound(0.5, m)?;
        ok &= report.ok;
        let equality = report.bound == 1.0 / (2 * m) as f64;
        ok &= equality == (2 * m).is_power_of_two();
        if equality {
            equality_count += 1;
        }
    }
    Ok((
        ok,
        format!(
            "bound <= 1/(2M) for every M <= 10^4; equality exactly at the {equality_count} powers of two"
        ),
    ))
}

/// Criterion 8: editing any source coordinate farther from a coded position
/// than its coding radius never changes that coded symbol, and every code
/// word obeys the length budget 10·|word| <= block length.
fn coding_locality(scale: Scale, seed: u64) -> Result<(bool, String)> {
    let enumeration = WordEnumeration;
    let mut budget_ok = true;
    for l in 10..=100_000u64 {
        budget_ok &= 10 * enumeration.word_len(l)? as u64 <= l;
    }

    let trials: u64 = match scale {
        Scale::Full => 1_000,
        Scale::Quick => 300,
    };
    let uniform = ProbVector::uniform(10)?;
    let mut tested = 0u64;
    let mut locality_ok = true;
    for i in 0..trials {
        let mut rng = stream_rng(seed, i + 1);
        let len = rng.random_range(150..=400usize);
        let origin = rng.random_range(-200..=200i64);
        let mut symbols = Vec::with_capacity(len);
        uniform.draw_into(&mut rng, len, &mut symbols);
        let window = SymbolicWindow::new(source_alphabet(), origin, symbols)?;
        let coded = phi(&window)?;
        // Probe the center-most determined coordinate.
        let center = origin + len as i64 / 2;
        let Some(radius) = finitary_radius(&window, center)? else {
            continue;
        };
        let original = coded.get(center);
        if original.is_none() {
            continue;
        }
        // Collect coordinates strictly outside the coding radius.
        let mut outside: Vec<i64> = (window.start()..window.end())
            .filter(|&p| (p - center).unsigned_abs() > radius)
            .collect();
        if outside.is_empty() {
            continue;
        }
        // Edit up to three of them, one at a time.
        while outside.len() > 3 {
            let drop_at = rng.random_range(0..outside.len());
            outside.swap_remove(drop_at);
        }
        for p in outside {
            let mut edited = window.symbols().to_vec();
            let at = (p - origin) as usize;
            edited[at] = (edited[at] + 1 + rng.random_range(0..9u8)) % 10;
            let reshaped = SymbolicWindow::new(source_alphabet(), origin, edited)?;
            let recoded = phi(&reshaped)?;
            locality_ok &= recoded.get(center) == original;
            tested += 1;
        }
    }
    let enough = tested >= trials;
    Ok((
        budget_ok && locality_ok && enough,
        format!(
            "code words obey 10·|word| <= L for every L <= 10^5: {}; \
             {tested} out-of-radius edits left their coded coordinate unchanged: {}",
            if budget_ok { "ok" } else { "VIOLATED" },
            if locality_ok { "ok" } else { "VIOLATED" }
        ),
    ))
}
