//! Implementations of the `finitary` subcommands.
//!
//! Each command returns a [`CommandOutcome`]: a JSON result payload (what
//! the run manifest stores), an optional CSV table, and — for commands that
//! assert something — an optional certificate failure explaining why the
//! assertion did not hold.  Certificate failures still produce a payload,
//! so failed runs leave a complete record behind.

use block_codec::{pair, parse_blocks, phi, MARKER};
use estimators::{plugin_entropy_rate, sample_coded_window};
use perturbation::{iid_obstruction_bound, run_perturbation_experiment};
use process_core::{decimal12, sample_iid, Error, ProbVector, Result};
use serde_json::{json, Value};
use witness_search::{find_violation, universal_rate_check, verify_inequality_chain};

/// A rendered CSV table, header row included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub file_name: String,
    pub content: String,
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    /// Result payload stored in the run manifest.
    pub payload: Value,
    /// Optional CSV rendering of the payload's bulk data.
    pub csv: Option<CsvTable>,
    /// When set, the run completed but its certificate did not hold; the
    /// message explains what failed.
    pub certificate_failure: Option<String>,
}

impl CommandOutcome {
    fn ok(payload: Value) -> Self {
        CommandOutcome {
            payload,
            csv: None,
            certificate_failure: None,
        }
    }

    fn with_csv(mut self, file_name: &str, content: String) -> Self {
        self.csv = Some(CsvTable {
            file_name: file_name.to_string(),
            content,
        });
        self
    }

    fn with_failure(mut self, message: String) -> Self {
        self.certificate_failure = Some(message);
        self
    }
}

/// Draws an i.i.d. uniform source window and reports a digest.
pub fn sample_cmd(length: u64, origin: i64, seed: u64) -> Result<CommandOutcome> {
    let uniform = ProbVector::uniform(10)?;
    let window = sample_iid(&uniform, length, origin, seed)?;
    let marker_count = window.symbols().iter().filter(|&&s| s == MARKER).count();
    let head: Vec<u8> = window.symbols().iter().copied().take(100).collect();
    let mut csv = String::from("position,symbol\n");
    for (i, &s) in window.symbols().iter().enumerate() {
        csv.push_str(&format!("{},{}\n", window.origin() + i as i64, s));
    }
    Ok(CommandOutcome::ok(json!({
        "length": length,
        "origin": origin,
        "marker_count": marker_count,
        "marker_frequency": decimal12(marker_count as f64 / length as f64),
        "head": head,
    }))
    .with_csv("sample.csv", csv))
}

/// Cuts a sample into marker-delimited blocks and histograms the lengths.
pub fn blocks_cmd(length: u64, max_length: u64, seed: u64) -> Result<CommandOutcome> {
    if max_length == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    let uniform = ProbVector::uniform(10)?;
    let window = sample_iid(&uniform, length, 0, seed)?;
    let decomposition = parse_blocks(&window)?;
    let total = decomposition.blocks.len() as u64;
    let mut counts = vec![0u64; max_length as usize + 1];
    let mut longer = 0u64;
    for block in &decomposition.blocks {
        let l = block.len();
        if l <= max_length {
            counts[l as usize] += 1;
        } else {
            longer += 1;
        }
    }
    let mut csv = String::from("block_length,count,expected_probability\n");
    for l in 1..=max_length {
        let p = 0.1 * 0.9f64.powi(l as i32 - 1);
        csv.push_str(&format!("{},{},{}\n", l, counts[l as usize], decimal12(p)));
    }
    Ok(CommandOutcome::ok(json!({
        "length": length,
        "max_length": max_length,
        "total_blocks": total,
        "counts": counts[1..].to_vec(),
        "longer_blocks": longer,
    }))
    .with_csv("blocks.csv", csv))
}

/// Applies the block code to a sample and reports how much of the window it
/// determines.
pub fn encode_cmd(length: u64, seed: u64) -> Result<CommandOutcome> {
    let uniform = ProbVector::uniform(10)?;
    let window = sample_iid(&uniform, length, 0, seed)?;
    let coded = phi(&window)?;
    let head: Vec<Value> = coded
        .symbols()
        .iter()
        .zip(coded.determined())
        .take(100)
        .map(|(&s, &d)| if d { json!(s) } else { Value::Null })
        .collect();
    let mut csv = String::from("position,coded,determined\n");
    for (i, (&s, &d)) in coded.symbols().iter().zip(coded.determined()).enumerate() {
        csv.push_str(&format!("{},{},{}\n", coded.origin() + i as i64, s, d));
    }
    Ok(CommandOutcome::ok(json!({
        "length": length,
        "determined_fraction": decimal12(coded.determined_fraction()),
        "head": head,
    }))
    .with_csv("encode.csv", csv))
}

/// Plug-in entropy rate of the source process ("mu") or the coded process
/// ("nu").
pub fn entropy_cmd(process: &str, k: u32, length: u64, seed: u64) -> Result<CommandOutcome> {
    let window = match process {
        "mu" => sample_iid(&ProbVector::uniform(10)?, length, 0, seed)?,
        "nu" => sample_coded_window(length, seed)?,
        other => {
            return Err(Error::Config(format!(
                "unknown process {other:?}; expected \"mu\" or \"nu\""
            )))
        }
    };
    let estimate = plugin_entropy_rate(&window, k)?;
    Ok(CommandOutcome::ok(json!({
        "process": process,
        "k": k,
        "window_length": estimate.window_length,
        "bits_per_symbol": decimal12(estimate.bits_per_symbol),
    })))
}

/// Scans block lengths for a repetition-probability decay violation and
/// certifies the first hit by Monte Carlo.
pub fn witness_cmd(
    ell: u64,
    epsilon: f64,
    h_prime: f64,
    l_min: u64,
    l_max: u64,
    samples: u64,
    seed: u64,
) -> Result<CommandOutcome> {
    match find_violation(ell, epsilon, h_prime, l_min, l_max, samples, seed)? {
        None => Ok(CommandOutcome::ok(json!({
            "witness": Value::Null,
            "certified": false,
        }))
        .with_failure(format!(
            "no decay violation for word length {ell} among block lengths [{l_min}, {l_max}]"
        ))),
        Some(record) => {
            let certified = record.certified();
            let outcome = CommandOutcome::ok(json!({
                "witness": record.to_json(),
                "certified": certified,
            }));
            if certified {
                Ok(outcome)
            } else {
                Ok(outcome.with_failure(format!(
                    "witness at block length {} failed its 4-sigma certificate",
                    record.block_length
                )))
            }
        }
    }
}

/// Evaluates the exact integer inequality chain across a block-length range.
pub fn chain_cmd(ell: u64, l_min: u64, l_max: u64) -> Result<CommandOutcome> {
    if l_min > l_max {
        return Err(Error::Domain(format!(
            "empty block-length range [{l_min}, {l_max}]"
        )));
    }
    let mut rows = Vec::new();
    let mut first_true = None;
    let mut monotone = true;
    for l in l_min..=l_max {
        let holds = verify_inequality_chain(l, ell)?;
        if holds && first_true.is_none() {
            first_true = Some(l);
        }
        if !holds && first_true.is_some() {
            monotone = false;
        }
        rows.push((l, holds));
    }
    let mut csv = String::from("block_length,holds\n");
    for (l, holds) in &rows {
        csv.push_str(&format!("{l},{holds}\n"));
    }
    let true_count = rows.iter().filter(|(_, h)| *h).count();
    let outcome = CommandOutcome::ok(json!({
        "ell": ell,
        "l_min": l_min,
        "l_max": l_max,
        "first_true": first_true.map_or(Value::Null, |l| json!(l)),
        "true_count": true_count,
        "monotone": monotone,
    }))
    .with_csv("chain.csv", csv);
    if monotone {
        Ok(outcome)
    } else {
        Ok(
            outcome
                .with_failure("inequality chain flipped back to false after holding".to_string()),
        )
    }
}

/// Checks the universal decay-rate bound for the marker-delimited forcing
/// pattern built from interior symbol `c`.
pub fn prop3_cmd(c: u8, ell: u64, r: u64, samples: u64, seed: u64) -> Result<CommandOutcome> {
    if !(1..=9).contains(&c) {
        return Err(Error::Domain(format!(
            "interior symbol must lie in 1..=9, got {c}"
        )));
    }
    let word = [MARKER, c, MARKER];
    let report = universal_rate_check(&word, pair(c, c), ell, r, samples, seed)?;
    let outcome = CommandOutcome::ok(json!({
        "word": word.to_vec(),
        "target": pair(c, c),
        "ell": ell,
        "r": r,
        "rate_bits": decimal12(report.rate.bits),
        "word_prob": decimal12(report.rate.word_prob),
        "target_prob": decimal12(report.rate.target_prob),
        "bound": decimal12(report.bound),
        "estimate": decimal12(report.estimate.estimate),
        "stderr": decimal12(report.estimate.stderr),
        "samples": report.estimate.samples,
        "mean_missing": decimal12(report.mean_missing),
        "pass": report.pass,
    }));
    if report.pass {
        Ok(outcome)
    } else {
        Ok(outcome.with_failure(format!(
            "avoidance estimate {} exceeded the decay bound {} by more than 4 sigma",
            decimal12(report.estimate.estimate),
            decimal12(report.bound)
        )))
    }
}

/// Runs the seeded perturbation experiment and reports its movement metrics.
pub fn perturb_cmd(
    length: u64,
    m: u64,
    word: &[u8],
    k: u32,
    n_max: u32,
    seed: u64,
) -> Result<CommandOutcome> {
    let report = run_perturbation_experiment(length, m, word, k, n_max, seed)?;
    Ok(CommandOutcome::ok(report.to_json()))
}

/// Verifies the i.i.d. repetition obstruction bound for every `M` up to
/// `m_max`.
pub fn obstruct_cmd(p_a: f64, m_max: u64) -> Result<CommandOutcome> {
    if m_max == 0 {
        return Err(Error::Domain("m_max must be positive".into()));
    }
    let mut csv = String::from("M,exponent,bound,threshold,ok\n");
    let mut all_ok = true;
    let mut equality_count = 0u64;
    let mut first_failure = None;
    for m in 1..=m_max {
        let report = iid_obstruction_bound(p_a, m)?;
        let threshold = 1.0 / (2 * m) as f64;
        if report.bound == threshold {
            equality_count += 1;
        }
        if !report.ok {
            all_ok = false;
            first_failure.get_or_insert(m);
        }
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            m,
            report.exponent,
            decimal12(report.bound),
            decimal12(threshold),
            report.ok
        ));
    }
    let outcome = CommandOutcome::ok(json!({
        "pa": decimal12(p_a),
        "m_max": m_max,
        "all_ok": all_ok,
        "equality_count": equality_count,
        "first_failure": first_failure.map_or(Value::Null, |m| json!(m)),
    }))
    .with_csv("obstruct.csv", csv);
    if all_ok {
        Ok(outcome)
    } else {
        Ok(outcome.with_failure(format!(
            "obstruction bound failed first at M = {}",
            first_failure.unwrap()
        )))
    }
}
