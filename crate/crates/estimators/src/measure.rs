use process_core::{Alphabet, Error, Result, SymbolicWindow};

/// Empirical distribution of all blocks up to a fixed length.
///
/// Level `n` holds the counts of length-`n` words read at the first
/// `total` positions of the source window, where `total` is chosen so
/// every level counts the same positions. That keeps the defining
/// invariant exact: at each level the counts sum to `total`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    alphabet: Alphabet,
    n_max: u32,
    total: u64,
    /// `levels[n - 1]` is a sorted run-length list of (word key, count)
    /// where the key reads the word big-endian in base `alphabet.size()`.
    levels: Vec<Vec<(u64, u64)>>,
}

impl EmpiricalMeasure {
    /// Counts all blocks of length 1..=n_max in `x`.
    pub fn from_window(x: &SymbolicWindow, n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("block depth must be positive".into()));
        }
        let alpha = u64::from(x.alphabet().size());
        if alpha.checked_pow(n_max).is_none() {
            return Err(Error::Domain(format!(
                "{alpha}^{n_max} block keys do not fit in 64 bits"
            )));
        }
        if x.len() < n_max as usize {
            return Err(Error::Domain(format!(
                "window of length {} is shorter than block depth {n_max}",
                x.len()
            )));
        }
        let total = (x.len() - n_max as usize + 1) as u64;
        let symbols = x.symbols();
        let mut levels = Vec::with_capacity(n_max as usize);
        let mut keys = Vec::with_capacity(total as usize);
        for n in 1..=n_max {
            let space = alpha.pow(n);
            keys.clear();
            let mut key = 0u64;
            for (i, &s) in symbols[..total as usize + n as usize - 1]
                .iter()
                .enumerate()
            {
                key = ((u128::from(key) * u128::from(alpha) + u128::from(s)) % u128::from(space))
                    as u64;
                if i + 1 >= n as usize {
                    keys.push(key);
                }
            }
            keys.sort_unstable();
            let mut level: Vec<(u64, u64)> = Vec::new();
            for &k in keys.iter() {
                match level.last_mut() {
                    Some((prev, c)) if *prev == k => *c += 1,
                    _ => level.push((k, 1)),
                }
            }
            levels.push(level);
        }
        Ok(EmpiricalMeasure {
            alphabet: x.alphabet(),
            n_max,
            total,
            levels,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Deepest block length counted.
    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Positions counted at every level.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of occurrences of `word` among the counted positions.
    pub fn count(&self, word: &[u8]) -> Result<u64> {
        let n = word.len() as u32;
        if n == 0 || n > self.n_max {
            return Err(Error::Domain(format!(
                "word length {n} outside counted range 1..={}",
                self.n_max
            )));
        }
        let mut key = 0u64;
        for &s in word {
            if !self.alphabet.contains(s) {
                return Err(Error::Domain(format!(
                    "symbol {s} outside alphabet of size {}",
                    self.alphabet.size()
                )));
            }
            key = key * u64::from(self.alphabet.size()) + u64::from(s);
        }
        let level = &self.levels[(n - 1) as usize];
        Ok(match level.binary_search_by_key(&key, |&(k, _)| k) {
            Ok(i) => level[i].1,
            Err(_) => 0,
        })
    }

    /// Empirical probability of `word`.
    pub fn prob(&self, word: &[u8]) -> Result<f64> {
        Ok(self.count(word)? as f64 / self.total as f64)
    }

    /// Pools the counts of two measures over the same alphabet and depth,
    /// as when windows are counted in parallel and combined. Associative.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::Domain(format!(
                "merging measures over different alphabets ({} vs {})",
                self.alphabet.size(),
                other.alphabet.size()
            )));
        }
        if self.n_max != other.n_max {
            return Err(Error::Domain(format!(
                "merging measures of different depths ({} vs {})",
                self.n_max, other.n_max
            )));
        }
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| merge_counts(a, b))
            .collect();
        Ok(EmpiricalMeasure {
            alphabet: self.alphabet,
            n_max: self.n_max,
            total: self.total + other.total,
            levels,
        })
    }

    fn level(&self, n: u32) -> &[(u64, u64)] {
        &self.levels[(n - 1) as usize]
    }
}

fn merge_counts(a: &[(u64, u64)], b: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ka, ca)), Some(&(kb, cb))) if ka == kb => {
                out.push((ka, ca + cb));
                i += 1;
                j += 1;
            }
            (Some(&(ka, ca)), Some(&(kb, _))) if ka < kb => {
                out.push((ka, ca));
                i += 1;
            }
            (Some(_), Some(&(kb, cb))) => {
                out.push((kb, cb));
                j += 1;
            }
            (Some(&(ka, ca)), None) => {
                out.push((ka, ca));
                i += 1;
            }
            (None, Some(&(kb, cb))) => {
                out.push((kb, cb));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// A truncated weak* distance together with how much the truncation can
/// hide: the discarded tail sums to at most `truncation_bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakstarReport {
    pub distance: f64,
    pub truncation_bound: f64,
}

/// Truncated weak* distance between two empirical measures:
/// Σ_{n=1}^{n_max} 2^{-n} · TV_n, where TV_n is the total-variation
/// distance between the length-n block distributions.
///
/// The untruncated metric continues the sum over all n; since every
/// total-variation term is at most 1, truncating at `n_max` discards at
/// most 2^{-n_max}, which the report carries alongside the distance.
pub fn weakstar_distance(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    n_max: u32,
) -> Result<WeakstarReport> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::Domain(format!(
            "measures over different alphabets ({} vs {})",
            a.alphabet().size(),
            b.alphabet().size()
        )));
    }
    if n_max == 0 || n_max > a.n_max() || n_max > b.n_max() {
        return Err(Error::Domain(format!(
            "depth {n_max} outside both measures' counted range (1..={}, 1..={})",
            a.n_max(),
            b.n_max()
        )));
    }
    let (ta, tb) = (a.total() as f64, b.total() as f64);
    let mut distance = 0.0;
    for n in 1..=n_max {
        let (la, lb) = (a.level(n), b.level(n));
        let mut spread = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < la.len() || j < lb.len() {
            match (la.get(i), lb.get(j)) {
                (Some(&(ka, ca)), Some(&(kb, cb))) if ka == kb => {
                    spread += (ca as f64 / ta - cb as f64 / tb).abs();
                    i += 1;
                    j += 1;
                }
                (Some(&(ka, ca)), Some(&(kb, _))) if ka < kb => {
                    spread += ca as f64 / ta;
                    i += 1;
                }
                (Some(_), Some(&(_, cb))) => {
                    spread += cb as f64 / tb;
                    j += 1;
                }
                (Some(&(_, ca)), None) => {
                    spread += ca as f64 / ta;
                    i += 1;
                }
                (None, Some(&(_, cb))) => {
                    spread += cb as f64 / tb;
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        distance += 2f64.powi(-(n as i32)) * (spread / 2.0);
    }
    Ok(WeakstarReport {
        distance,
        truncation_bound: 2f64.powi(-(n_max as i32)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(alphabet: u32, symbols: &[u8]) -> SymbolicWindow {
        SymbolicWindow::new(Alphabet::new(alphabet).unwrap(), 0, symbols.to_vec()).unwrap()
    }

    #[test]
    fn counts_at_every_level_sum_to_total() {
        let x = window(3, &[0, 1, 2, 1, 0, 0, 2, 1, 1, 0, 2]);
        let m = EmpiricalMeasure::from_window(&x, 3).unwrap();
        assert_eq!(m.total(), 9);
        for n in 1..=3u32 {
            let mut sum = 0;
            for key in 0..3u64.pow(n) {
                let word: Vec<u8> = (0..n)
                    .rev()
                    .map(|d| ((key / 3u64.pow(d)) % 3) as u8)
                    .collect();
                sum += m.count(&word).unwrap();
            }
            assert_eq!(sum, m.total(), "level {n}");
        }
    }

    #[test]
    fn lookup_matches_hand_count() {
        let x = window(2, &[0, 1, 1, 0, 1, 1, 0]);
        let m = EmpiricalMeasure::from_window(&x, 2).unwrap();
        // Positions 0..6 are counted at both levels.
        assert_eq!(m.count(&[0]).unwrap(), 2);
        assert_eq!(m.count(&[1]).unwrap(), 4);
        assert_eq!(m.count(&[1, 1]).unwrap(), 2);
        assert_eq!(m.count(&[0, 1]).unwrap(), 2);
        assert_eq!(m.count(&[1, 0]).unwrap(), 2);
        assert_eq!(m.count(&[0, 0]).unwrap(), 0);
        assert!((m.prob(&[1]).unwrap() - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_lookups_and_depths() {
        let x = window(2, &[0, 1, 0]);
        assert!(matches!(
            EmpiricalMeasure::from_window(&x, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            EmpiricalMeasure::from_window(&x, 4),
            Err(Error::Domain(_))
        ));
        let m = EmpiricalMeasure::from_window(&x, 2).unwrap();
        assert!(matches!(m.count(&[]), Err(Error::Domain(_))));
        assert!(matches!(m.count(&[0, 1, 0]), Err(Error::Domain(_))));
        assert!(matches!(m.count(&[5]), Err(Error::Domain(_))));
    }

    #[test]
    fn merge_pools_counts() {
        let a = EmpiricalMeasure::from_window(&window(2, &[0, 0, 1, 0]), 2).unwrap();
        let b = EmpiricalMeasure::from_window(&window(2, &[1, 1, 0, 1]), 2).unwrap();
        let m = a.merge(&b).unwrap();
        assert_eq!(m.total(), a.total() + b.total());
        for word in [&[0u8][..], &[1], &[0, 0], &[0, 1], &[1, 0], &[1, 1]] {
            assert_eq!(
                m.count(word).unwrap(),
                a.count(word).unwrap() + b.count(word).unwrap(),
                "word {word:?}"
            );
        }
    }

    #[test]
    fn identical_measures_are_at_distance_zero() {
        let m = EmpiricalMeasure::from_window(&window(4, &[0, 3, 1, 2, 2, 0, 3]), 3).unwrap();
        let report = weakstar_distance(&m, &m, 3).unwrap();
        assert_eq!(report.distance, 0.0);
        assert_eq!(report.truncation_bound, 0.125);
    }

    #[test]
    fn point_masses_on_distinct_symbols() {
        let a = EmpiricalMeasure::from_window(&window(10, &[3; 50]), 1).unwrap();
        let b = EmpiricalMeasure::from_window(&window(10, &[7; 50]), 1).unwrap();
        let report = weakstar_distance(&a, &b, 1).unwrap();
        // First term: 2^{-1} · ½ · (1 + 1) = 0.5.
        assert_eq!(report.distance, 0.5);
        assert_eq!(report.truncation_bound, 0.5);
    }

    #[test]
    fn disjoint_supports_attain_the_truncation_cap() {
        let a = EmpiricalMeasure::from_window(&window(10, &[3; 50]), 3).unwrap();
        let b = EmpiricalMeasure::from_window(&window(10, &[7; 50]), 3).unwrap();
        let report = weakstar_distance(&a, &b, 3).unwrap();
        // Every level's total variation is 1, so the distance is the full
        // truncated series 1/2 + 1/4 + 1/8.
        assert!((report.distance - 0.875).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatched_measures() {
        let a = EmpiricalMeasure::from_window(&window(2, &[0, 1, 0]), 2).unwrap();
        let b = EmpiricalMeasure::from_window(&window(3, &[0, 1, 0]), 2).unwrap();
        assert!(matches!(
            weakstar_distance(&a, &b, 2),
            Err(Error::Domain(_))
        ));
        let shallow = EmpiricalMeasure::from_window(&window(2, &[0, 1, 0]), 1).unwrap();
        assert!(matches!(
            weakstar_distance(&a, &shallow, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            weakstar_distance(&a, &a, 0),
            Err(Error::Domain(_))
        ));
    }
}
