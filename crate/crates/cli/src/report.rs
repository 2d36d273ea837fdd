//! `report`: one text summary of a run directory plus plot scripts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use plusform::lab::export::{plot_script, FitRecord};
use plusform::pipeline::stream::format_value;

use crate::analyze::{width_tag, AnalysisReport};
use crate::build::BuildReport;
use crate::{write_text, CliError};

#[derive(Debug, PartialEq)]
pub enum Status {
    NothingToReport,
    Written { report: PathBuf, plots: Vec<PathBuf> },
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    v.sort();
    Ok(v)
}

fn params(f: &FitRecord) -> String {
    if !f.ok() {
        return format!("failed ({})", f.error.as_deref().unwrap_or("not converged"));
    }
    let mut s = String::new();
    for (k, v) in &f.params {
        let _ = write!(s, "{k}={} ", format_value(*v));
    }
    let _ = write!(s, "rms={}", format_value(f.rms));
    s
}

fn fit_rows(out: &mut String, prefix: &str, fits: &[FitRecord]) {
    for f in fits {
        let _ = writeln!(out, "{prefix}\t{}\t{}", f.model, params(f));
    }
}

fn render(builds: &[BuildReport], analyses: &[(String, AnalysisReport)]) -> String {
    let mut s = String::from("# plusform run report\n");
    if !builds.is_empty() {
        s.push_str("\n## Builds\n");
        for b in builds {
            let _ = writeln!(
                s,
                "weight {}/2: dimension {}, T(9) polynomial {}, bound {}, memory estimate {} bytes",
                b.two_k, b.dimension, b.charpoly, b.bound, b.memory_estimate_bytes
            );
            for f in &b.forms {
                let ev: Vec<String> = f.eigenvalues_real.iter().map(|(p, v)| format!("T({p}^2)={v:.6e}")).collect();
                let lifts: Vec<String> = f
                    .lifts
                    .iter()
                    .map(|l| format!("t={} {}", l.t, if l.passed { "ok" } else { "FAILED" }))
                    .collect();
                let depth = f.lifts.first().map_or(0, |l| l.depth);
                let _ = writeln!(s, "  {}\t{}\tlifts to depth {depth}: {}", f.label, ev.join(" "), lifts.join(", "));
            }
        }
    }
    if analyses.is_empty() {
        return s;
    }
    s.push_str("\n## GG parameters by box width\nlabel\twidth\tparameters\n");
    for (_, a) in analyses {
        for w in &a.widths {
            if let Some(f) = w.fits.iter().find(|f| f.model == "GG") {
                let _ = writeln!(s, "{}\t{}\t{}", a.label, width_tag(w.width), params(f));
            }
        }
    }
    s.push_str("\n## Fits by model\nlabel\twidth\tmodel\tparameters\n");
    for (_, a) in analyses {
        if let Some(w) = a.widths.first() {
            fit_rows(&mut s, &format!("{}\t{}", a.label, width_tag(w.width)), &w.fits);
        }
    }
    if analyses.iter().any(|(_, a)| !a.subsets.is_empty()) {
        s.push_str("\n## Consecutive subsets\nlabel\tsubset\tfirst\tlast\tcount\tmodel\tparameters\n");
        for (_, a) in analyses {
            for r in &a.subsets {
                fit_rows(&mut s, &format!("{}\t{}\t{}\t{}\t{}", a.label, r.index, r.first, r.last, r.count), &r.fits);
            }
        }
    }
    if analyses.iter().any(|(_, a)| !a.primes.is_empty()) {
        s.push_str("\n## Squarefree against prime indices\nlabel\tindices\tcount\tmodel\tparameters\n");
        for (_, a) in analyses {
            for r in &a.primes {
                fit_rows(&mut s, &format!("{}\t{}\t{}", a.label, r.indices, r.count), &r.fits);
            }
        }
    }
    s.push_str("\n## Signs\nlabel\tpositive\tnegative\tzero\tpositive fraction\t99% band\n");
    for (_, a) in analyses {
        let g = &a.signs;
        let frac = g.pos_fraction.map_or("-".into(), |f| format!("{f:.6}"));
        let band = g.band99.map_or("-".into(), |(lo, hi)| format!("{lo:.6}..{hi:.6}"));
        let _ = writeln!(s, "{}\t{}\t{}\t{}\t{frac}\t{band}", a.label, g.n_pos, g.n_neg, g.n_zero);
    }
    s.push_str("\n## Independence ratios\nlabel\tinterval\tpositive/total\tratio\t95% Wilson\n");
    for (_, a) in analyses {
        for r in &a.intervals {
            let ratio = r.ratio.map_or("-".into(), |x| format!("{x:.6}"));
            let wil = r.wilson95.map_or("no data in interval".into(), |(lo, hi)| format!("{lo:.6}..{hi:.6}"));
            let _ = writeln!(s, "{}\t[{}, {}]\t{}/{}\t{ratio}\t{wil}", a.label, r.lo, r.hi, r.n_pos, r.n_total);
        }
    }
    s
}

pub fn run(dir: &Path) -> Result<Status, CliError> {
    let mut builds = Vec::new();
    let mut missing = Vec::new();
    for p in sorted_entries(&dir.join("build"))? {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if !name.ends_with(".toml") || name.ends_with(".timing.toml") {
            continue;
        }
        let b: BuildReport = read_toml(&p)?;
        for f in &b.forms {
            if !dir.join(&f.file).is_file() {
                missing.push(f.file.clone());
            }
        }
        builds.push(b);
    }
    let mut analyses = Vec::new();
    for d in sorted_entries(&dir.join("analysis"))? {
        let p = d.join("analysis.toml");
        if !d.is_dir() {
            continue;
        }
        if !p.is_file() {
            missing.push(p.strip_prefix(dir).unwrap_or(&p).display().to_string());
            continue;
        }
        let a: AnalysisReport = read_toml(&p)?;
        let stem = d.file_name().unwrap().to_string_lossy().into_owned();
        for w in &a.widths {
            if !d.join(&w.histogram).is_file() {
                missing.push(format!("analysis/{stem}/{}", w.histogram));
            }
        }
        analyses.push((stem, a));
    }
    if !missing.is_empty() {
        return Err(CliError::Missing(missing));
    }
    if builds.is_empty() && analyses.is_empty() {
        return Ok(Status::NothingToReport);
    }

    let mut plots = Vec::new();
    for (stem, a) in &analyses {
        for w in &a.widths {
            let tag = width_tag(w.width);
            let hist = format!("analysis/{stem}/{}", w.histogram);
            let png = format!("plots/{stem}-{tag}.png");
            let title = format!("{} width {tag}", a.label);
            let path = dir.join("plots").join(format!("{stem}-{tag}.gp"));
            write_text(&path, &plot_script(&title, &hist, &png, &w.fits))?;
            plots.push(path);
        }
    }
    let report = dir.join("report.txt");
    write_text(&report, &render(&builds, &analyses))?;
    Ok(Status::Written { report, plots })
}
