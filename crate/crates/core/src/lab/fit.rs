//! Damped least squares (Levenberg-Marquardt) fits of histogram counts.
//!
//! Points are `(center, count)` over nonempty bins. `b` and `c` of the
//! exponential families are optimised through their logarithms; the Jacobian
//! comes from central differences in the optimised coordinates.

use super::histogram::Histogram;
use super::models::{model_eval, ModelKind};
use crate::error::{Error, Result};
use crate::exec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Stop once the relative SSR decrease of an accepted step is below this.
    pub tolerance: f64,
    pub lambda0: f64,
    /// Consecutive step halvings allowed when the model is not finite.
    pub max_halvings: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_iterations: 200, tolerance: 1e-10, lambda0: 1e-3, max_halvings: 20 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub model: ModelKind,
    pub params: Vec<f64>,
    pub ssr: f64,
    pub rms: f64,
    pub iterations: usize,
    pub converged: bool,
    pub n_points: usize,
    pub n_params: usize,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        let i = self.model.param_names().iter().position(|&n| n == name)?;
        Some(self.params[i])
    }

    pub fn named_params(&self) -> Vec<(&'static str, f64)> {
        self.model.param_names().iter().copied().zip(self.params.iter().copied()).collect()
    }
}

/// `sqrt(SSR / (n_points - n_params))`.
pub fn rms(fit: &FitResult) -> Result<f64> {
    if fit.n_points <= fit.n_params {
        return Err(Error::Fit(format!("{} points for {} parameters", fit.n_points, fit.n_params)));
    }
    Ok((fit.ssr / (fit.n_points - fit.n_params) as f64).sqrt())
}

fn log_slots(kind: ModelKind) -> &'static [usize] {
    match kind {
        ModelKind::Ggg | ModelKind::Gg => &[1, 2],
        ModelKind::Laplace => &[0, 1],
        ModelKind::Cauchy => &[],
    }
}

fn to_internal(kind: ModelKind, p: &[f64]) -> Result<Vec<f64>> {
    let mut t = p.to_vec();
    for &i in log_slots(kind) {
        if !(p[i] > 0.0) {
            return Err(Error::Domain(format!("{kind} parameter {} = {} must be positive", kind.param_names()[i], p[i])));
        }
        t[i] = p[i].ln();
    }
    Ok(t)
}

fn to_external(kind: ModelKind, t: &[f64]) -> Vec<f64> {
    let mut p = t.to_vec();
    for &i in log_slots(kind) {
        p[i] = t[i].exp();
    }
    p
}

struct Problem<'a> {
    kind: ModelKind,
    xs: &'a [f64],
    ys: &'a [f64],
}

impl Problem<'_> {
    fn values(&self, t: &[f64]) -> Option<Vec<f64>> {
        let p = to_external(self.kind, t);
        if p.iter().any(|v| !v.is_finite()) {
            return None;
        }
        self.xs.iter().map(|&x| model_eval(self.kind, &p, x).ok()).collect()
    }

    fn residuals(&self, t: &[f64]) -> Option<Vec<f64>> {
        let v = self.values(t)?;
        Some(self.ys.iter().zip(v).map(|(y, f)| y - f).collect())
    }

    fn jacobian(&self, t: &[f64]) -> Option<Vec<Vec<f64>>> {
        let n = self.xs.len();
        let mut cols = Vec::with_capacity(t.len());
        for k in 0..t.len() {
            let h = (1e-6 * t[k].abs()).max(1e-6);
            let shifted = |s: f64| {
                let mut u = t.to_vec();
                u[k] += s;
                self.values(&u)
            };
            let col = match (shifted(h), shifted(-h)) {
                (Some(a), Some(b)) => a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect(),
                (fwd, bwd) => {
                    let mid = self.values(t)?;
                    match (fwd, bwd) {
                        (Some(a), None) => a.iter().zip(&mid).map(|(x, y)| (x - y) / h).collect(),
                        (None, Some(b)) => mid.iter().zip(&b).map(|(x, y)| (x - y) / h).collect(),
                        _ => return None,
                    }
                }
            };
            cols.push(col);
        }
        Some((0..n).map(|i| cols.iter().map(|c: &Vec<f64>| c[i]).collect()).collect())
    }
}

fn ssr(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Solves `a x = b` for a small dense system by elimination with partial
/// pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Default starting point for a model on `(x, y)` points.
pub fn default_init(kind: ModelKind, pts: &[(f64, f64)]) -> Vec<f64> {
    let peak = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let total: f64 = pts.iter().map(|p| p.1).sum();
    let spacing = pts.windows(2).map(|w| w[1].0 - w[0].0).filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min);
    let spacing = if spacing.is_finite() { spacing } else { 1.0 };
    let mean_abs = pts.iter().map(|&(x, y)| x.abs() * y).sum::<f64>() / if total > 0.0 { total } else { 1.0 };
    let c0 = mean_abs.max(spacing);
    match kind {
        ModelKind::Ggg => vec![0.5, peak, c0, 0.01],
        ModelKind::Gg => vec![0.5, peak, c0],
        ModelKind::Laplace => vec![peak, c0],
        ModelKind::Cauchy => {
            let xm = pts.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map_or(0.0, |p| p.0);
            let hw = pts
                .iter()
                .filter(|p| 2.0 * p.1 >= peak)
                .map(|p| (p.0 - xm).abs())
                .fold(0.0, f64::max)
                .max(spacing / 2.0);
            vec![peak * hw * hw, hw * hw, 1.0]
        }
    }
}

/// Fits `kind` to the histogram's nonempty bins.
pub fn fit(kind: ModelKind, h: &Histogram, init: Option<&[f64]>) -> Result<FitResult> {
    fit_with(kind, h, init, &FitOptions::default())
}

pub fn fit_with(kind: ModelKind, h: &Histogram, init: Option<&[f64]>, opts: &FitOptions) -> Result<FitResult> {
    fit_points(kind, &h.points(), init, opts)
}

/// Fits `kind` to arbitrary `(x, y)` points.
pub fn fit_points(kind: ModelKind, pts: &[(f64, f64)], init: Option<&[f64]>, opts: &FitOptions) -> Result<FitResult> {
    let np = kind.n_params();
    if pts.len() <= np {
        return Err(Error::Fit(format!("{kind}: {} points for {np} parameters", pts.len())));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let start = match init {
        Some(p) if p.len() != np => return Err(Error::InvalidArgument(format!("{kind} takes {np} parameters"))),
        Some(p) => p.to_vec(),
        None => default_init(kind, pts),
    };
    let prob = Problem { kind, xs: &xs, ys: &ys };
    let mut t = to_internal(kind, &start)?;
    let mut r = prob
        .residuals(&t)
        .ok_or_else(|| Error::Fit(format!("{kind}: model not finite at the initial parameters")))?;
    let mut s = ssr(&r);
    let floor = 1e-30 * ys.iter().map(|y| y * y).sum::<f64>();
    let mut lambda = opts.lambda0;
    let mut iterations = 0;
    let mut converged = s <= floor;
    'outer: while !converged && iterations < opts.max_iterations {
        let jac = prob.jacobian(&t).ok_or_else(|| Error::Fit(format!("{kind}: Jacobian not finite")))?;
        let mut a = vec![vec![0.0; np]; np];
        let mut g = vec![0.0; np];
        for (row, ri) in jac.iter().zip(&r) {
            for i in 0..np {
                g[i] += row[i] * ri;
                for j in 0..np {
                    a[i][j] += row[i] * row[j];
                }
            }
        }
        loop {
            let mut m = a.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += lambda * a[i][i].max(1e-300);
            }
            let Some(mut delta) = solve(m, g.clone()) else {
                lambda *= 10.0;
                if lambda > 1e16 {
                    converged = true;
                    break 'outer;
                }
                continue;
            };
            let mut halvings = 0;
            let (trial, r_new) = loop {
                let trial: Vec<f64> = t.iter().zip(&delta).map(|(x, d)| x + d).collect();
                if let Some(rn) = prob.residuals(&trial) {
                    break (trial, rn);
                }
                halvings += 1;
                if halvings >= opts.max_halvings {
                    return Err(Error::Fit(format!("{kind}: model stayed non-finite after {halvings} step halvings")));
                }
                delta.iter_mut().for_each(|d| *d *= 0.5);
            };
            let s_new = ssr(&r_new);
            if s_new < s {
                lambda = (lambda / 10.0).max(1e-12);
                iterations += 1;
                let rel = (s - s_new) / s;
                t = trial;
                r = r_new;
                s = s_new;
                if rel < opts.tolerance || s <= floor {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                // no damped step decreases the residual: stationary point
                converged = true;
                break 'outer;
            }
        }
    }
    let n_points = xs.len();
    let mut out = FitResult {
        model: kind,
        params: to_external(kind, &t),
        ssr: s,
        rms: 0.0,
        iterations,
        converged,
        n_points,
        n_params: np,
    };
    out.rms = rms(&out)?;
    Ok(out)
}

/// Fits the requested models, starting `GG` also from the `Laplace` optimum
/// (`a = 1/2`) and `GGG` also from the `GG` optimum (`d = 0`), keeping the
/// lower SSR. The results are returned in the order requested.
pub fn fit_nested(h: &Histogram, kinds: &[ModelKind]) -> Vec<(ModelKind, Result<FitResult>)> {
    let wants = |k: ModelKind| kinds.contains(&k);
    let need_chain = wants(ModelKind::Ggg) || wants(ModelKind::Gg) || wants(ModelKind::Laplace);
    let best = |a: Result<FitResult>, b: Option<Result<FitResult>>| match (a, b) {
        (Ok(x), Some(Ok(y))) => Ok(if y.ssr < x.ssr { y } else { x }),
        (Err(_), Some(Ok(y))) => Ok(y),
        (a, _) => a,
    };
    let chain = || {
        if !need_chain {
            return (None, None, None);
        }
        let lap = fit(ModelKind::Laplace, h, None);
        let gg_seed = lap.as_ref().ok().map(|f| vec![0.5, f.params[0], f.params[1]]);
        let gg = if wants(ModelKind::Gg) || wants(ModelKind::Ggg) {
            let (plain, nested) = exec::join(
                || fit(ModelKind::Gg, h, None),
                || gg_seed.as_ref().map(|s| fit(ModelKind::Gg, h, Some(s))),
            );
            Some(best(plain, nested))
        } else {
            None
        };
        let ggg = if wants(ModelKind::Ggg) {
            let seed = gg.as_ref().and_then(|g| g.as_ref().ok()).map(|f| vec![f.params[0], f.params[1], f.params[2], 0.0]);
            let (plain, nested) = exec::join(
                || fit(ModelKind::Ggg, h, None),
                || seed.as_ref().map(|s| fit(ModelKind::Ggg, h, Some(s))),
            );
            Some(best(plain, nested))
        } else {
            None
        };
        (Some(lap), gg, ggg)
    };
    let cauchy = || wants(ModelKind::Cauchy).then(|| fit(ModelKind::Cauchy, h, None));
    let ((lap, gg, ggg), cauchy) = exec::join(chain, cauchy);
    let (mut lap, mut gg, mut ggg, mut cauchy) = (lap, gg, ggg, cauchy);
    kinds
        .iter()
        .map(|&k| {
            let slot = match k {
                ModelKind::Laplace => &mut lap,
                ModelKind::Gg => &mut gg,
                ModelKind::Ggg => &mut ggg,
                ModelKind::Cauchy => &mut cauchy,
            };
            let r = slot.take().unwrap_or_else(|| Err(Error::Fit(format!("{k} not fitted"))));
            (k, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn model_hist(kind: ModelKind, p: &[f64], w: f64, half: i64) -> Histogram {
        let mut bins = BTreeMap::new();
        for i in -half..half {
            let x = (i as f64 + 0.5) * w;
            bins.insert(i, model_eval(kind, p, x).unwrap());
        }
        // counts are stored as integers; keep them exact by scaling the model
        Histogram { width: w, bins: bins.into_iter().map(|(k, v)| (k, v.round() as u64)).collect() }
    }

    #[test]
    fn single_residual_rms() {
        let f = FitResult {
            model: ModelKind::Laplace,
            params: vec![1.0, 1.0],
            ssr: 9.0,
            rms: 0.0,
            iterations: 0,
            converged: true,
            n_points: 3,
            n_params: 2,
        };
        assert_eq!(rms(&f).unwrap(), 3.0);
        assert!(rms(&FitResult { n_points: 2, ..f }).is_err());
    }

    #[test]
    fn too_few_bins() {
        let h = Histogram { width: 0.1, bins: BTreeMap::from([(0, 5), (1, 3)]) };
        assert!(matches!(fit(ModelKind::Laplace, &h, None), Err(Error::Fit(_))));
    }

    #[test]
    fn recovers_rounded_laplace() {
        let h = model_hist(ModelKind::Laplace, &[1000.0, 0.5], 0.01, 300);
        let f = fit(ModelKind::Laplace, &h, None).unwrap();
        assert!(f.converged);
        assert!((f.params[0] / 1000.0 - 1.0).abs() < 1e-3);
        assert!((f.params[1] / 0.5 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn deterministic() {
        let h = model_hist(ModelKind::Gg, &[0.7, 800.0, 1.1], 0.02, 200);
        assert_eq!(fit(ModelKind::Gg, &h, None).unwrap(), fit(ModelKind::Gg, &h, None).unwrap());
    }

    #[test]
    fn solver() {
        let x = solve(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        assert!(solve(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![1.0, 1.0]).is_none());
    }
}
