//! Evenly spaced base sets with a prescribed target density.
//!
//! A perturbation overwrites disjoint intervals of a fixed height, so its
//! base positions must be spaced at least that height apart.  The densest
//! such set on a window is the full grid with one base every `height`
//! coordinates, giving density `1/height`; any target density below that cap
//! is reached in expectation by keeping each grid candidate independently
//! with probability `target_density * height`.

use process_core::rng::{stream_rng, AUX_STREAM};
use process_core::{Error, Result, SymbolicWindow};
use rand::Rng;

/// Interval height an edit needs in order to plant `ceil(log2(2M))`
/// consecutive copies of a length-`word_len` word.
pub fn tower_height(word_len: usize, m: u64) -> usize {
    word_len * crate::ceil_log2(2 * m) as usize
}

/// A set of base positions for disjoint height-`height` intervals inside a
/// window.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerSpec {
    base_positions: Vec<i64>,
    height: usize,
    target_density: f64,
    window_length: usize,
}

impl TowerSpec {
    pub(crate) fn from_parts(
        base_positions: Vec<i64>,
        height: usize,
        target_density: f64,
        window_length: usize,
    ) -> Self {
        Self {
            base_positions,
            height,
            target_density,
            window_length,
        }
    }

    /// Sorted base positions; consecutive entries differ by at least
    /// [`height`](Self::height), and every interval `b .. b + height` lies
    /// inside the window the layout was built from.
    pub fn base_positions(&self) -> &[i64] {
        &self.base_positions
    }

    /// Height of the disjoint intervals above each base position.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Density the thinning coin aimed for.
    pub fn target_density(&self) -> f64 {
        self.target_density
    }

    /// Length of the window the layout was built from.
    pub fn window_length(&self) -> usize {
        self.window_length
    }

    /// Fraction of window coordinates that are base positions.
    pub fn achieved_density(&self) -> f64 {
        if self.window_length == 0 {
            0.0
        } else {
            self.base_positions.len() as f64 / self.window_length as f64
        }
    }
}

/// Builds a base set on `y`'s coordinate range with spacing `height` and the
/// given target density.
///
/// Grid candidates sit at `start, start + height, start + 2*height, ...`;
/// a candidate whose interval would overhang the window end is dropped, and
/// the survivors are thinned with an independent seeded coin.  The keep
/// probability is `min(1, target_density * height)`: targets at or above the
/// grid cap `1/height` saturate to keeping every candidate, so the achieved
/// density tops out at `1/height` rather than erroring.  A window shorter
/// than `height` yields an empty base set.
///
/// Only the coordinate range of `y` matters; its symbols are not read.
pub fn build_tower_base(
    y: &SymbolicWindow,
    height: usize,
    target_density: f64,
    seed: u64,
) -> Result<TowerSpec> {
    if height == 0 {
        return Err(Error::Domain("tower height must be positive".into()));
    }
    if !(target_density > 0.0 && target_density.is_finite()) {
        return Err(Error::Domain(format!(
            "target density must be positive and finite, got {target_density}"
        )));
    }
    let keep_probability = (target_density * height as f64).min(1.0);
    let mut rng = stream_rng(seed, AUX_STREAM);
    let mut base_positions = Vec::new();
    let mut candidate = y.start();
    // `b + height <= end` keeps the whole interval inside the window.
    while candidate + height as i64 <= y.end() {
        if rng.random_bool(keep_probability) {
            base_positions.push(candidate);
        }
        candidate += height as i64;
    }
    Ok(TowerSpec::from_parts(
        base_positions,
        height,
        target_density,
        y.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use process_core::Alphabet;

    fn flat_window(len: usize) -> SymbolicWindow {
        SymbolicWindow::new(Alphabet::new(10).unwrap(), 0, vec![1; len]).unwrap()
    }

    #[test]
    fn bases_are_spaced_and_stay_inside_the_window() {
        let y = flat_window(1000);
        let tower = build_tower_base(&y, 7, 0.05, 11).unwrap();
        assert!(!tower.base_positions().is_empty());
        for pair in tower.base_positions().windows(2) {
            assert!(pair[1] - pair[0] >= 7);
        }
        for &b in tower.base_positions() {
            assert!(b >= y.start());
            assert!(b + 7 <= y.end());
        }
    }

    #[test]
    fn saturated_target_keeps_the_full_grid() {
        // target * height = 1.0: the coin always lands keep, so the achieved
        // density equals the grid cap 1/height exactly.
        let y = flat_window(100_000);
        let tower = build_tower_base(&y, 4, 0.25, 3).unwrap();
        assert_eq!(tower.base_positions().len(), 25_000);
        assert_eq!(tower.achieved_density(), 0.25);
    }

    #[test]
    fn thinned_target_density_is_met_in_expectation() {
        let y = flat_window(1_000_000);
        let target = 2.0 / 64.0;
        let tower = build_tower_base(&y, 14, target, 5).unwrap();
        let achieved = tower.achieved_density();
        assert!(
            (achieved - target).abs() <= 0.1 * target,
            "achieved {achieved} strays more than 10% from target {target}"
        );
    }

    #[test]
    fn same_seed_reproduces_the_base_set() {
        let y = flat_window(10_000);
        let a = build_tower_base(&y, 9, 0.02, 42).unwrap();
        let b = build_tower_base(&y, 9, 0.02, 42).unwrap();
        assert_eq!(a, b);
        let c = build_tower_base(&y, 9, 0.02, 43).unwrap();
        assert_ne!(a.base_positions(), c.base_positions());
    }

    #[test]
    fn short_windows_yield_an_empty_base() {
        let y = flat_window(5);
        let tower = build_tower_base(&y, 6, 0.1, 1).unwrap();
        assert!(tower.base_positions().is_empty());
        assert_eq!(tower.achieved_density(), 0.0);
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        let y = flat_window(100);
        assert!(build_tower_base(&y, 0, 0.1, 1).is_err());
        assert!(build_tower_base(&y, 5, 0.0, 1).is_err());
        assert!(build_tower_base(&y, 5, -0.2, 1).is_err());
        assert!(build_tower_base(&y, 5, f64::INFINITY, 1).is_err());
        assert!(build_tower_base(&y, 5, f64::NAN, 1).is_err());
    }

    #[test]
    fn targets_beyond_the_grid_cap_saturate() {
        // No spaced base set can exceed density 1/height; requesting more
        // keeps every grid candidate instead of failing.
        let y = flat_window(1_000);
        let tower = build_tower_base(&y, 5, 3.0, 1).unwrap();
        assert_eq!(tower.base_positions().len(), 200);
        assert_eq!(tower.achieved_density(), 0.2);
    }
}
