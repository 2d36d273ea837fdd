//! `analyze`: histograms, fits, subsets, prime comparison and sign
//! statistics for coefficient files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use plusform::exec;
use plusform::lab::export::{histogram_text, FitRecord};
use plusform::lab::signs::Z99;
use plusform::lab::{fit_nested, histogram, Histogram, independence_ratio, sign_report, ModelKind};
use plusform::pipeline::stream::format_value;
use plusform::pipeline::{prime_filter, read_stream, subset_split, CoeffStream};

use crate::config::RunConfig;
use crate::{write_text, CliError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    pub width: f64,
    pub histogram: String,
    pub bins: usize,
    pub fits: Vec<FitRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetRow {
    pub index: usize,
    pub first: u64,
    pub last: u64,
    pub count: usize,
    pub fits: Vec<FitRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeRow {
    pub indices: String,
    pub count: usize,
    pub fits: Vec<FitRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignRecord {
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_zero: u64,
    pub pos_fraction: Option<f64>,
    pub band99: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: f64,
    pub hi: f64,
    pub n_pos: u64,
    pub n_total: u64,
    pub ratio: Option<f64>,
    pub wilson95: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub label: String,
    pub source: String,
    pub two_k: u32,
    pub bound: u64,
    pub count: usize,
    pub seed: u64,
    pub widths: Vec<WidthReport>,
    #[serde(default)]
    pub subset_width: Option<f64>,
    #[serde(default)]
    pub subsets: Vec<SubsetRow>,
    #[serde(default)]
    pub primes: Vec<PrimeRow>,
    pub signs: SignRecord,
    pub intervals: Vec<IntervalRecord>,
}

impl AnalysisReport {
    pub fn fit_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut scan = |ctx: String, fits: &[FitRecord]| {
            for f in fits.iter().filter(|f| !f.ok()) {
                out.push(format!("{} {ctx} {}: {}", self.label, f.model, f.error.as_deref().unwrap_or("not converged")));
            }
        };
        for w in &self.widths {
            scan(format!("width {}", w.width), &w.fits);
        }
        for s in &self.subsets {
            scan(format!("subset {}", s.index), &s.fits);
        }
        for p in &self.primes {
            scan(format!("{} indices", p.indices), &p.fits);
        }
        out
    }
}

/// Widths as they appear in file names: `0.001`, `0.0001`, ...
pub fn width_tag(w: f64) -> String {
    format!("{w}")
}

fn fits_for(values: &[f64], width: f64, models: &[ModelKind]) -> Result<(Histogram, Vec<FitRecord>), CliError> {
    let h = histogram(values, width)?;
    let fits = fit_nested(&h, models).iter().map(|(k, r)| FitRecord::new(*k, r)).collect();
    Ok((h, fits))
}

pub fn rms_table(r: &AnalysisReport) -> String {
    let models: Vec<&str> = r.widths.first().map(|w| w.fits.iter().map(|f| f.model.as_str()).collect()).unwrap_or_default();
    let mut s = format!("# rms of residuals, {}\nwidth", r.label);
    for m in &models {
        let _ = write!(s, "\t{m}");
    }
    s.push('\n');
    for w in &r.widths {
        let _ = write!(s, "{}", width_tag(w.width));
        for f in &w.fits {
            let v = if f.ok() { format_value(f.rms) } else { "-".into() };
            let _ = write!(s, "\t{v}");
        }
        s.push('\n');
    }
    s
}

fn analyze_stream(stream: &CoeffStream, source: &Path, dir: &Path, cfg: &RunConfig) -> Result<AnalysisReport, CliError> {
    let values = stream.values();
    let per_width = exec::map(&cfg.widths, |&w| fits_for(&values, w, &cfg.models));
    let mut widths = Vec::new();
    for (&w, r) in cfg.widths.iter().zip(per_width) {
        let (h, fits) = r?;
        let name = format!("hist-{}.txt", width_tag(w));
        write_text(&dir.join(&name), &histogram_text(&h))?;
        widths.push(WidthReport { width: w, histogram: name, bins: h.bins.len(), fits });
    }

    let w0 = cfg.widths[0];
    let mut subsets = Vec::new();
    if cfg.subsets > 1 {
        let parts = subset_split(stream, cfg.subsets);
        let rows = exec::map(&parts, |p| fits_for(&p.values(), w0, &cfg.models));
        for (i, (p, r)) in parts.iter().zip(rows).enumerate() {
            let (_, fits) = r?;
            subsets.push(SubsetRow {
                index: i + 1,
                first: p.entries.first().map_or(0, |e| e.0),
                last: p.entries.last().map_or(0, |e| e.0),
                count: p.len(),
                fits,
            });
        }
    }

    let mut primes = Vec::new();
    if cfg.prime_only {
        let ps = prime_filter(stream);
        for (indices, s) in [("squarefree", stream), ("prime", &ps)] {
            let (_, fits) = fits_for(&s.values(), w0, &cfg.models)?;
            primes.push(PrimeRow { indices: indices.into(), count: s.len(), fits });
        }
    }

    let sr = sign_report(&values);
    let signs = SignRecord {
        n_pos: sr.n_pos,
        n_neg: sr.n_neg,
        n_zero: sr.n_zero,
        pos_fraction: sr.pos_fraction,
        band99: sr.symmetric_band(Z99),
    };
    let mut intervals = Vec::new();
    for &(lo, hi) in &cfg.intervals {
        let r = independence_ratio(&values, lo, hi)?;
        intervals.push(IntervalRecord { lo, hi, n_pos: r.n_pos, n_total: r.n_total, ratio: r.ratio, wilson95: r.wilson95 });
    }

    Ok(AnalysisReport {
        label: stream.label.clone(),
        source: source.file_name().map_or(String::new(), |n| n.to_string_lossy().into_owned()),
        two_k: stream.two_k,
        bound: stream.bound,
        count: stream.len(),
        seed: cfg.seed,
        widths,
        subset_width: (cfg.subsets > 1 || cfg.prime_only).then_some(w0),
        subsets,
        primes,
        signs,
        intervals,
    })
}

pub fn analysis_dir(out: &Path, source: &Path) -> PathBuf {
    let stem = source.file_stem().map_or("stream".into(), |s| s.to_string_lossy().into_owned());
    out.join("analysis").join(stem)
}

/// Analyses every file; fit failures are recorded, not fatal.
pub fn run(files: &[PathBuf], cfg: &RunConfig) -> Result<Vec<AnalysisReport>, CliError> {
    if files.is_empty() {
        return Err(CliError::Config("analyze needs at least one coefficient file".into()));
    }
    let mut reports = Vec::new();
    for f in files {
        let stream = read_stream(f)?;
        let dir = analysis_dir(&cfg.out, f);
        let r = analyze_stream(&stream, f, &dir, cfg)?;
        write_text(&dir.join("analysis.toml"), &toml::to_string(&r).map_err(|e| CliError::Config(e.to_string()))?)?;
        write_text(&dir.join("rms.txt"), &rms_table(&r))?;
        reports.push(r);
    }
    Ok(reports)
}
