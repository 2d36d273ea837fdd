//! `build`: eigenforms, coefficient files and the build report.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use plusform::arith::roots::rational_to_f64;
use plusform::arith::{AlgebraicNumber, RealEmbedding};
use plusform::modforms::assembly::{assembly_memory_estimate, Selection};
use plusform::modforms::level1::level1_eigenform;
use plusform::modforms::EigenOrbit;
use plusform::pipeline::{normalize, write_stream};
use plusform::shimura::{lift_parameters, lift_selection, verify_lift};
use plusform::{exec, Error};

use crate::config::{file_stem, RunConfig};
use crate::{write_text, CliError};

pub const EIGENVALUE_PRIMES: [u64; 3] = [3, 5, 7];
pub const LIFT_PARAMETERS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftRecord {
    pub t: u64,
    pub depth: usize,
    pub passed: bool,
    pub max_abs_discrepancy: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormRecord {
    pub label: String,
    pub file: String,
    pub embedding: f64,
    pub count: usize,
    /// `T(p^2)` eigenvalues, exact and under the embedding.
    pub eigenvalues: BTreeMap<String, String>,
    pub eigenvalues_real: BTreeMap<String, f64>,
    pub lifts: Vec<LiftRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub two_k: u32,
    pub ell: u32,
    pub bound: u64,
    pub dimension: usize,
    pub charpoly: String,
    pub lift_depth: usize,
    pub lift_parameters: Vec<u64>,
    pub memory_estimate_bytes: u64,
    pub forms: Vec<FormRecord>,
}

/// Kept apart from [`BuildReport`] so that the report itself is
/// reproducible byte for byte.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildTiming {
    pub two_k: u32,
    pub wall_seconds: f64,
    pub mode: String,
    pub threads: usize,
}

fn approx(x: &AlgebraicNumber, e: &RealEmbedding) -> f64 {
    let r = e.approx();
    x.coords().iter().rev().fold(0.0, |acc, c| acc * r + rational_to_f64(c))
}

pub fn report_path(out: &Path, two_k: u32) -> std::path::PathBuf {
    out.join("build").join(format!("{two_k}_2.toml"))
}

pub fn run(cfg: &RunConfig) -> Result<BuildReport, CliError> {
    let two_k = cfg.two_k.ok_or(CliError::Config("build needs --weight".into()))?;
    let ell = (two_k - 1) / 2;
    let start = Instant::now();
    let orbit = EigenOrbit::compute(ell)?;
    let selection = Selection::Dense(cfg.bound as usize + 1);
    let memory = assembly_memory_estimate(ell, &orbit.monomial_coords, &selection);
    let coeffs = Arc::new(orbit.assemble(&selection)?);
    let forms = orbit.forms(coeffs);
    let streams = exec::try_map(&forms, |f| normalize(f, cfg.bound))?;

    let coeff_dir = cfg.out.join("coefficients");
    fs::create_dir_all(&coeff_dir).map_err(|e| CliError::io(&coeff_dir, e))?;
    let mut files = Vec::new();
    for s in &streams {
        let name = format!("{}.txt", file_stem(&s.label));
        write_stream(s, coeff_dir.join(&name))?;
        files.push(format!("coefficients/{name}"));
    }

    let mut eigen = BTreeMap::new();
    for p in EIGENVALUE_PRIMES {
        eigen.insert(p, orbit.eigenvalue(p)?);
    }

    let ts = lift_parameters(ell, LIFT_PARAMETERS, |n| orbit.coefficient(n))?;
    let lift_coeffs = Arc::new(orbit.assemble(&lift_selection(ell, &ts, cfg.lift_depth))?);
    let lift_forms = orbit.forms(lift_coeffs);
    let gs = level1_eigenform(2 * ell, cfg.lift_depth + 1)?;
    let mut records = Vec::new();
    let mut failure = None;
    for (((f, g), s), file) in lift_forms.iter().zip(&gs).zip(&streams).zip(files) {
        let mut lifts = Vec::new();
        for &t in &ts {
            let r = verify_lift(f, g, t, cfg.lift_depth)?;
            if !r.passed() && failure.is_none() {
                failure = Some(format!("lift of {} with t = {t} differs by {}", f.label, r.max_abs_discrepancy));
            }
            lifts.push(LiftRecord {
                t,
                depth: r.depth,
                passed: r.passed(),
                max_abs_discrepancy: r.max_abs_discrepancy.to_string(),
            });
        }
        records.push(FormRecord {
            label: f.label.clone(),
            file,
            embedding: f.embedding.approx(),
            count: s.len(),
            eigenvalues: eigen.iter().map(|(p, v)| (p.to_string(), v.to_string())).collect(),
            eigenvalues_real: eigen.iter().map(|(p, v)| (p.to_string(), approx(v, &f.embedding))).collect(),
            lifts,
        });
    }

    let report = BuildReport {
        two_k,
        ell,
        bound: cfg.bound,
        dimension: orbit.degree(),
        charpoly: orbit.charpoly.to_string(),
        lift_depth: cfg.lift_depth,
        lift_parameters: ts,
        memory_estimate_bytes: memory,
        forms: records,
    };
    let path = report_path(&cfg.out, two_k);
    write_text(&path, &toml::to_string(&report).map_err(|e| CliError::Config(e.to_string()))?)?;
    let timing = BuildTiming {
        two_k,
        wall_seconds: start.elapsed().as_secs_f64(),
        mode: exec::MODE.into(),
        threads: cfg.threads,
    };
    let tpath = cfg.out.join("build").join(format!("{two_k}_2.timing.toml"));
    write_text(&tpath, &toml::to_string(&timing).map_err(|e| CliError::Config(e.to_string()))?)?;
    if let Some(msg) = failure {
        return Err(Error::Certificate(msg).into());
    }
    Ok(report)
}
