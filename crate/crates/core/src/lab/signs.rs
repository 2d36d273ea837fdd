//! Sign statistics of coefficient streams.

use std::fmt;

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.5758293035489004;

#[derive(Clone, Debug, PartialEq)]
pub struct SignReport {
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_zero: u64,
    /// `n_pos / (n_pos + n_neg)`, undefined without nonzero values.
    pub pos_fraction: Option<f64>,
}

impl SignReport {
    /// Normal-approximation binomial interval around 1/2 at quantile `z`
    /// for the number of nonzero values.
    pub fn symmetric_band(&self, z: f64) -> Option<(f64, f64)> {
        let n = (self.n_pos + self.n_neg) as f64;
        (n > 0.0).then(|| {
            let h = z * 0.5 / n.sqrt();
            (0.5 - h, 0.5 + h)
        })
    }
}

pub fn sign_report(values: &[f64]) -> SignReport {
    let n_pos = values.iter().filter(|&&v| v > 0.0).count() as u64;
    let n_neg = values.iter().filter(|&&v| v < 0.0).count() as u64;
    let n_zero = values.len() as u64 - n_pos - n_neg;
    let nz = n_pos + n_neg;
    SignReport { n_pos, n_neg, n_zero, pos_fraction: (nz > 0).then(|| n_pos as f64 / nz as f64) }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceRatio {
    pub lo: f64,
    pub hi: f64,
    pub n_pos: u64,
    pub n_total: u64,
    pub ratio: Option<f64>,
    pub wilson95: Option<(f64, f64)>,
}

impl fmt::Display for IndependenceRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ratio, self.wilson95) {
            (Some(r), Some((a, b))) => {
                write!(f, "[{}, {}]: {}/{} = {r:.6} (95% {a:.6}..{b:.6})", self.lo, self.hi, self.n_pos, self.n_total)
            }
            _ => write!(f, "[{}, {}]: no data in interval", self.lo, self.hi),
        }
    }
}

/// Share of positive values among those with `|v|` in `[lo, hi]`.
pub fn independence_ratio(values: &[f64], lo: f64, hi: f64) -> Result<IndependenceRatio> {
    if !(lo > 0.0 && lo <= hi) {
        return Err(Error::InvalidArgument(format!("interval [{lo}, {hi}] must satisfy 0 < lo <= hi")));
    }
    let inside = values.iter().filter(|v| (lo..=hi).contains(&v.abs()));
    let (mut n_pos, mut n_total) = (0u64, 0u64);
    for &v in inside {
        n_total += 1;
        if v > 0.0 {
            n_pos += 1;
        }
    }
    let ratio = (n_total > 0).then(|| n_pos as f64 / n_total as f64);
    let wilson95 = (n_total > 0).then(|| wilson_interval(n_pos, n_total, Z95));
    Ok(IndependenceRatio { lo, hi, n_pos, n_total, ratio, wilson95 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        let r = sign_report(&[1.0, -2.0, 3.0, 0.0]);
        assert_eq!((r.n_pos, r.n_neg, r.n_zero), (2, 1, 1));
        assert_eq!(r.pos_fraction, Some(2.0 / 3.0));
        let e = sign_report(&[]);
        assert_eq!((e.n_pos, e.n_neg, e.n_zero, e.pos_fraction), (0, 0, 0, None));
    }

    #[test]
    fn ratios() {
        assert_eq!(independence_ratio(&[0.5, -0.5], 0.4, 0.6).unwrap().ratio, Some(0.5));
        assert_eq!(independence_ratio(&[0.5, 0.6], 0.4, 0.7).unwrap().ratio, Some(1.0));
        let none = independence_ratio(&[0.1, 3.0], 0.4, 0.7).unwrap();
        assert_eq!(none.ratio, None);
        assert!(none.to_string().contains("no data in interval"));
        assert!(independence_ratio(&[1.0], 0.0, 1.0).is_err());
        // endpoints are inclusive
        assert_eq!(independence_ratio(&[-0.4, 0.6], 0.4, 0.6).unwrap().n_total, 2);
    }

    #[test]
    fn wilson_reference() {
        // 50 of 100 at 95%: 0.5 -/+ 0.0962...
        let (a, b) = wilson_interval(50, 100, Z95);
        assert!((a - 0.403831).abs() < 1e-6 && (b - 0.596169).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn antisymmetric_lists_are_balanced(v in prop::collection::vec(0.001f64..10.0, 1..100)) {
            let all: Vec<f64> = v.iter().flat_map(|&x| [x, -x]).collect();
            prop_assert_eq!(sign_report(&all).pos_fraction, Some(0.5));
        }
    }
}
