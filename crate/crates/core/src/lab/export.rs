//! Text exports: histogram tables, fit records and gnuplot scripts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::fit::FitResult;
use super::histogram::Histogram;
use super::models::ModelKind;
use crate::error::Result;
use crate::pipeline::stream::{format_value, round_to_format};

/// `center<TAB>count` per nonempty bin.
pub fn histogram_text(h: &Histogram) -> String {
    let mut out = String::with_capacity(24 * h.bins.len());
    for (&i, &c) in &h.bins {
        let _ = writeln!(out, "{}\t{c}", format_value(h.center(i)));
    }
    out
}

/// Serializable outcome of one fit, parameters to 10 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub model: String,
    pub converged: bool,
    pub iterations: usize,
    pub n_points: usize,
    pub n_params: usize,
    pub rms: f64,
    pub ssr: f64,
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl FitRecord {
    pub fn new(kind: ModelKind, r: &Result<FitResult>) -> Self {
        match r {
            Ok(f) => FitRecord {
                model: kind.tag().into(),
                converged: f.converged,
                iterations: f.iterations,
                n_points: f.n_points,
                n_params: f.n_params,
                rms: round_to_format(f.rms),
                ssr: round_to_format(f.ssr),
                params: f.named_params().into_iter().map(|(k, v)| (k.to_string(), round_to_format(v))).collect(),
                error: None,
            },
            Err(e) => FitRecord {
                model: kind.tag().into(),
                converged: false,
                iterations: 0,
                n_points: 0,
                n_params: kind.n_params(),
                rms: f64::NAN,
                ssr: f64::NAN,
                params: BTreeMap::new(),
                error: Some(e.to_string()),
            },
        }
    }

    pub fn ok(&self) -> bool {
        self.error.is_none() && self.converged
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    /// Gnuplot expression of the fitted curve.
    pub fn gnuplot_expr(&self) -> Option<String> {
        let p = |k: &str| self.params.get(k).map(|v| format!("({})", format_value(*v)));
        Some(match self.model.as_str() {
            "GGG" => format!("{}*exp(-(({}+x**2)**{})/{})", p("b")?, p("d")?, p("a")?, p("c")?),
            "GG" => format!("{}*exp(-((x**2)**{})/{})", p("b")?, p("a")?, p("c")?),
            "Laplace" => format!("{}*exp(-abs(x)/{})", p("b")?, p("c")?),
            "Cauchy" => format!("{}/({}+({}*x)**2)", p("a")?, p("b")?, p("c")?),
            _ => return None,
        })
    }
}

/// A gnuplot script overlaying a histogram file with fitted curves.
pub fn plot_script(title: &str, histogram_file: &str, output: &str, fits: &[FitRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set terminal pngcairo size 1200,800");
    let _ = writeln!(s, "set output '{output}'");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set samples 2000");
    let _ = writeln!(s, "set xrange [-3:3]");
    let mut parts = vec![format!("'{histogram_file}' using 1:2 with points pt 7 ps 0.3 title 'data'")];
    for f in fits {
        if let (true, Some(e)) = (f.ok(), f.gnuplot_expr()) {
            parts.push(format!("{e} with lines lw 2 title '{}'", f.model));
        }
    }
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}
