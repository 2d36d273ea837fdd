use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec;

/// Counts in half-open bins `[i w, (i+1) w)`; only nonempty bins are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub width: f64,
    pub bins: BTreeMap<i64, u64>,
}

impl Histogram {
    pub fn center(&self, i: i64) -> f64 {
        (i as f64 + 0.5) * self.width
    }

    pub fn total(&self) -> u64 {
        self.bins.values().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.bins.values().copied().max().unwrap_or(0)
    }

    /// `(center, count)` for every nonempty bin, ascending.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.bins.iter().map(|(&i, &c)| (self.center(i), c as f64)).collect()
    }
}

const SHARD: usize = 1 << 16;

pub fn histogram(values: &[f64], width: f64) -> Result<Histogram> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidArgument(format!("box width {width} must be positive")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite value {v}")));
    }
    let shards: Vec<&[f64]> = values.chunks(SHARD).collect();
    let maps = exec::map(&shards, |chunk| {
        let mut m = BTreeMap::new();
        for &x in *chunk {
            *m.entry((x / width).floor() as i64).or_insert(0u64) += 1;
        }
        m
    });
    let mut bins = BTreeMap::new();
    for m in maps {
        for (k, v) in m {
            *bins.entry(k).or_insert(0) += v;
        }
    }
    Ok(Histogram { width, bins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn floor_rule() {
        let h = histogram(&[0.00049, 0.0006, -0.0003], 0.001).unwrap();
        assert_eq!(h.bins.get(&0), Some(&2));
        assert_eq!(h.bins.get(&-1), Some(&1));
        assert!((h.center(0) - 0.0005).abs() < 1e-15);
        assert!((h.center(-1) + 0.0005).abs() < 1e-15);
        assert_eq!(histogram(&[0.0], 0.37).unwrap().bins, BTreeMap::from([(0, 1)]));
        assert!(histogram(&[], 0.1).unwrap().bins.is_empty());
        assert!(histogram(&[1.0], 0.0).is_err());
    }

    #[test]
    fn uniform_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v: Vec<f64> = (0..1_000_000).map(|_| rng.random_range(-1.0..1.0)).collect();
        let h = histogram(&v, 0.001).unwrap();
        assert_eq!(h.bins.len(), 2000);
        let sigma = (500.0f64 * (1.0 - 1.0 / 2000.0)).sqrt();
        for &c in h.bins.values() {
            assert!((c as f64 - 500.0).abs() < 5.0 * sigma, "count {c}");
        }
    }

    proptest! {
        #[test]
        fn counts_are_conserved(v in prop::collection::vec(-5.0f64..5.0, 0..400), w in 1e-4f64..1.0) {
            let h = histogram(&v, w).unwrap();
            prop_assert_eq!(h.total(), v.len() as u64);
            prop_assert!(h.bins.values().all(|&c| c > 0));
        }
    }
}
