//! Seeded end-to-end perturbation experiment.

use crate::{build_tower_base, check_repeated_word_mass, perturb, tower_height, PairWindow};
use estimators::{dbar_upper, plugin_entropy_rate, weakstar_distance, EmpiricalMeasure};
use process_core::rng::derive_seeds;
use process_core::{decimal12, sample_iid, ProbVector, Result};
use serde_json::{json, Value};

/// Summary of one perturbation experiment: how far the edit moved the pair
/// process in d-bar, weak-star, and entropy, and whether it crossed into the
/// repetition event.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    /// Frequency parameter of the targeted event.
    pub m: u64,
    /// The planted word.
    pub word: Vec<u8>,
    /// Interval height of the edit, `|word| * ceil(log2(2M))`.
    pub height: usize,
    /// Achieved density of tower base positions.
    pub base_density: f64,
    /// Upper bound on the d-bar distance between the second components
    /// before and after the edit (their aligned Hamming fraction).
    pub dbar: f64,
    /// Truncated weak-star distance between the empirical pair measures
    /// before and after the edit.
    pub weakstar: f64,
    /// Mass the truncation discarded from the weak-star sum.
    pub weakstar_truncation: f64,
    /// Plug-in entropy rate of the second component before the edit.
    pub entropy_before: f64,
    /// Plug-in entropy rate of the second component after the edit.
    pub entropy_after: f64,
    /// Whether the perturbed pair lies in the repetition event.
    pub member: bool,
    /// Whether the unperturbed pair already lay in the repetition event.
    pub unperturbed_member: bool,
}

impl PerturbationReport {
    /// Renders the report with its documented key set.  Floating-point
    /// values are decimal strings with twelve significant digits.
    pub fn to_json(&self) -> Value {
        json!({
            "M": self.m,
            "w": self.word,
            "height": self.height,
            "base_density": decimal12(self.base_density),
            "dbar": decimal12(self.dbar),
            "weakstar": decimal12(self.weakstar),
            "entropy_before": decimal12(self.entropy_before),
            "entropy_after": decimal12(self.entropy_after),
            "Ow_member": self.member,
        })
    }
}

/// Runs the full perturbation experiment on an independent pair of uniform
/// source samples of the given length.
///
/// The pair is a product joining: both components are i.i.d. uniform
/// 10-symbol windows drawn from seeds derived from `seed` (a third derived
/// seed drives the tower thinning).  The second component is edited to plant
/// `word` repetitions at target base density `2/M`, and the report compares
/// the pair before and after: aligned Hamming fraction of the edited
/// component, weak-star distance of the empirical pair measures truncated at
/// word length `n_max`, plug-in entropy rate at block order `k`, and
/// membership in the repetition event for both versions.
pub fn run_perturbation_experiment(
    length: u64,
    m: u64,
    word: &[u8],
    k: u32,
    n_max: u32,
    seed: u64,
) -> Result<PerturbationReport> {
    let [first_seed, second_seed, tower_seed] = derive_seeds(seed);
    let uniform = ProbVector::uniform(10)?;
    let first = sample_iid(&uniform, length, 0, first_seed)?;
    let second = sample_iid(&uniform, length, 0, second_seed)?;
    let pair = PairWindow::new(first, second)?;

    let height = tower_height(word.len(), m);
    let target_density = 2.0 / m as f64;
    let tower = build_tower_base(pair.second(), height, target_density, tower_seed)?;
    let edited = perturb(&pair, word, m, &tower)?;

    let dbar = dbar_upper(pair.second(), edited.second())?;
    let before_measure = EmpiricalMeasure::from_window(&pair.product_window()?, n_max)?;
    let after_measure = EmpiricalMeasure::from_window(&edited.product_window()?, n_max)?;
    let weakstar = weakstar_distance(&before_measure, &after_measure, n_max)?;
    let entropy_before = plugin_entropy_rate(pair.second(), k)?;
    let entropy_after = plugin_entropy_rate(edited.second(), k)?;
    let member = check_repeated_word_mass(&edited, word, m)?.member;
    let unperturbed_member = check_repeated_word_mass(&pair, word, m)?.member;

    Ok(PerturbationReport {
        m,
        word: word.to_vec(),
        height,
        base_density: tower.achieved_density(),
        dbar,
        weakstar: weakstar.distance,
        weakstar_truncation: weakstar.truncation_bound,
        entropy_before: entropy_before.bits_per_symbol,
        entropy_after: entropy_after.bits_per_symbol,
        member,
        unperturbed_member,
    })
}
