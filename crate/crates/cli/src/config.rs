//! Validated run configuration.

use std::path::PathBuf;

use plusform::lab::ModelKind;
use plusform::modforms::plus_space::dim_cusp_level1;

use crate::CliError;

pub const DEFAULT_WIDTHS: [f64; 3] = [0.001, 0.0001, 0.00001];
pub const DEFAULT_INTERVALS: [(f64, f64); 3] = [(0.1, 0.5), (0.5, 1.0), (1.0, 2.0)];
pub const DEFAULT_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub two_k: Option<u32>,
    pub bound: u64,
    pub widths: Vec<f64>,
    pub models: Vec<ModelKind>,
    pub subsets: usize,
    pub prime_only: bool,
    pub intervals: Vec<(f64, f64)>,
    pub out: PathBuf,
    pub threads: usize,
    pub seed: u64,
    pub lift_depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            two_k: None,
            bound: DEFAULT_BOUND,
            widths: DEFAULT_WIDTHS.to_vec(),
            models: ModelKind::ALL.to_vec(),
            subsets: 1,
            prime_only: false,
            intervals: DEFAULT_INTERVALS.to_vec(),
            out: PathBuf::from("run"),
            threads: 0,
            seed: 0,
            lift_depth: plusform::shimura::DEFAULT_DEPTH,
        }
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn validate_weight(two_k: u32) -> Result<u32, CliError> {
    if two_k % 2 == 0 || !(13..=61).contains(&two_k) {
        return Err(config(format!("weight {two_k}/2: numerator must be odd and in 13..=61")));
    }
    if dim_cusp_level1(two_k - 1) == 0 {
        return Err(config(format!("weight {two_k}/2 has no cusp forms")));
    }
    Ok(two_k)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(w) = self.two_k {
            validate_weight(w)?;
        }
        if self.bound < 100 {
            return Err(config(format!("bound {} is below 100", self.bound)));
        }
        if self.widths.is_empty() || self.widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(config("box widths must be positive"));
        }
        if self.models.is_empty() {
            return Err(config("no models selected"));
        }
        if self.subsets == 0 {
            return Err(config("subset count must be at least 1"));
        }
        if self.intervals.iter().any(|&(lo, hi)| !(lo > 0.0 && lo <= hi)) {
            return Err(config("intervals must satisfy 0 < lo <= hi"));
        }
        if self.lift_depth == 0 {
            return Err(config("lift depth must be positive"));
        }
        Ok(())
    }
}

pub fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').or_else(|| s.split_once(',')).ok_or(format!("expected lo:hi, got {s:?}"))?;
    let lo = a.trim().parse::<f64>().map_err(|e| format!("{a:?}: {e}"))?;
    let hi = b.trim().parse::<f64>().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((lo, hi))
}

/// `13/2(1)` becomes `13_2-1`.
pub fn file_stem(label: &str) -> String {
    label.replace('/', "_").replace('(', "-").replace(')', "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert!(validate_weight(13).is_ok());
        assert!(validate_weight(61).is_ok());
        for bad in [11, 14, 15, 63] {
            assert!(validate_weight(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn run_config() {
        let mut c = RunConfig { two_k: Some(25), ..Default::default() };
        assert!(c.validate().is_ok());
        c.bound = 99;
        assert!(c.validate().is_err());
        c.bound = 100;
        c.widths = vec![0.001, 0.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn intervals_and_stems() {
        assert_eq!(parse_interval("0.1:0.5"), Ok((0.1, 0.5)));
        assert_eq!(parse_interval("1,2"), Ok((1.0, 2.0)));
        assert!(parse_interval("3").is_err());
        assert_eq!(file_stem("25/2(2)"), "25_2-2");
    }
}
