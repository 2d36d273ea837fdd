//! Kolmogorov-Smirnov distance between data and a fitted density.

use super::fit::FitResult;
use super::models::{model_eval, ModelKind};
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    adapt(f, a, b, fa, fb, fc, whole, eps, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64, fc: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * eps {
        return left + right + diff / 15.0;
    }
    adapt(f, a, c, fa, fc, fd, left, eps / 2.0, depth - 1) + adapt(f, c, b, fc, fb, fe, right, eps / 2.0, depth - 1)
}

/// `x(t) = t / (1 - t^2)` maps `(-1, 1)` onto the real line.
fn t_of_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (-1.0 + (1.0 + 4.0 * x * x).sqrt()) / (2.0 * x)
    }
}

/// Fitted density as an integrable function; errors if it cannot be
/// normalised.
fn density(fit: &FitResult) -> Result<impl Fn(f64) -> f64 + '_> {
    if fit.model == ModelKind::Cauchy {
        return Err(Error::Domain("CDF comparison is defined for the exponential families".into()));
    }
    let probe = [0.0, 1e-3, 1.0, 10.0];
    for x in probe {
        model_eval(fit.model, &fit.params, x)?;
    }
    Ok(move |x: f64| model_eval(fit.model, &fit.params, x).unwrap_or(0.0))
}

/// Integral of the fitted model over the real line (relative accuracy 1e-8).
pub fn normalizing_constant(fit: &FitResult) -> Result<f64> {
    let f = density(fit)?;
    let g = |t: f64| {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t * t;
        f(t / s) * (1.0 + t * t) / (s * s)
    };
    let scale = f(0.0).abs().max(1e-300);
    let mut z = simpson(&g, -1.0, 0.0, 1e-10 * scale) + simpson(&g, 0.0, 1.0, 1e-10 * scale);
    // refine until the relative tolerance is met
    let mut eps = 1e-10 * scale;
    for _ in 0..6 {
        eps /= 16.0;
        let z2 = simpson(&g, -1.0, 0.0, eps) + simpson(&g, 0.0, 1.0, eps);
        let done = (z2 - z).abs() <= 1e-8 * z2.abs();
        z = z2;
        if done {
            break;
        }
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("{} is not normalisable (integral {z})", fit.model)));
    }
    Ok(z)
}

/// Sup distance between the empirical CDF of `values` and the fitted model
/// normalised to a probability density.
pub fn cdf_distance(values: &[f64], fit: &FitResult) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("no values".into()));
    }
    let z = normalizing_constant(fit)?;
    let f = density(fit)?;
    let g = |t: f64| {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t * t;
        f(t / s) * (1.0 + t * t) / (s * s)
    };
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let eps = 1e-12 * z;
    let mut acc = simpson(&g, -1.0, t_of_x(v[0]), eps);
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        if i > 0 && x > v[i - 1] {
            acc += simpson(&f, v[i - 1], x, eps);
        }
        let cdf = (acc / z).clamp(0.0, 1.0);
        d = d.max(cdf - i as f64 / n).max((i + 1) as f64 / n - cdf);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
