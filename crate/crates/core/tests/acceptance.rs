//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criterion 10 (appendix scale, 10^7 coefficients) runs only with
//! `ACCEPTANCE_EXTENDED=1`. Failing criteria are reported, not panicked on;
//! set `ACCEPTANCE_STRICT=1` to turn any FAIL into a non-zero exit.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use plusform::lab::{fit, fit_nested, fit_points, histogram, independence_ratio, model_eval, sign_report, ModelKind};
use plusform::lab::fit::{FitOptions, FitResult};
use plusform::modforms::generators::delta;
use plusform::modforms::plus_space::{dim_cusp_level1, plus_forbidden};
use plusform::modforms::{extract_eigenforms, level1_eigenform, EigenOrbit, HalfIntegralForm};
use plusform::pipeline::{normalize, subset_split, CoeffStream};
use plusform::shimura::{lift_parameters, lift_selection, verify_lift, DEFAULT_DEPTH};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const DESK_X: u64 = 1_000_000;
const WIDTHS: [f64; 3] = [0.001, 0.0001, 0.00001];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Normalised desk-scale streams, built once and shared by criteria 6-9, 11.
#[derive(Default)]
struct Streams(BTreeMap<u32, Vec<CoeffStream>>);

impl Streams {
    fn get(&mut self, ell: u32) -> &[CoeffStream] {
        self.0.entry(ell).or_insert_with(|| {
            let forms = extract_eigenforms(ell, DESK_X as usize + 1).expect("build");
            forms.iter().map(|f| normalize(f, DESK_X).expect("normalize")).collect()
        })
    }
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    let mut counts = BTreeMap::new();
    for ell in 6..=30u32 {
        let dim = dim_cusp_level1(2 * ell);
        if dim == 0 {
            continue;
        }
        match extract_eigenforms(ell, 1000) {
            Ok(f) => {
                let labels: Vec<String> = (1..=dim).map(|j| format!("{}/2({j})", 2 * ell + 1)).collect();
                let got: Vec<String> = f.iter().map(|x| x.label.clone()).collect();
                if got != labels {
                    bad.push(format!("{}/2: {got:?}", 2 * ell + 1));
                }
                counts.insert(2 * ell + 1, f.len());
            }
            Err(e) => bad.push(format!("{}/2: {e}", 2 * ell + 1)),
        }
    }
    let named = [(13, 1), (25, 2), (35, 2), (61, 5)];
    for (w, n) in named {
        if counts.get(&w) != Some(&n) {
            bad.push(format!("{w}/2 has {:?} forms, expected {n}", counts.get(&w)));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} weights", counts.len()) } else { bad.join("; ") })
}

fn c2() -> Outcome {
    let primes = [3u64, 5, 7, 11];
    let d = delta(12).expect("delta");
    let orbit = EigenOrbit::compute(6).expect("orbit");
    let forms = extract_eigenforms(6, 11 * 11 + 1).expect("forms");
    let mut bad = Vec::new();
    let mut shown = Vec::new();
    for p in primes {
        let tau = num_rational::BigRational::from_integer(d.coeff(p as usize).clone());
        let hecke = orbit.eigenvalue(p).expect("eigenvalue");
        let from_coeffs = forms[0].eigenvalue_from_coefficients(p).expect("coefficients");
        if hecke.as_rational() != Some(&tau) || from_coeffs.as_rational() != Some(&tau) {
            bad.push(format!("p={p}: tau {tau}, matrix {hecke}, coefficients {from_coeffs}"));
        }
        shown.push(format!("{tau}"));
    }
    outcome(bad.is_empty(), if bad.is_empty() { shown.join(", ") } else { bad.join("; ") })
}

fn c3() -> Outcome {
    let depth = DEFAULT_DEPTH;
    let mut bad = Vec::new();
    let mut checked = 0;
    for ell in 6..=14u32 {
        if dim_cusp_level1(2 * ell) == 0 {
            continue;
        }
        let orbit = EigenOrbit::compute(ell).expect("orbit");
        let ts = lift_parameters(ell, 3, |n| orbit.coefficient(n)).expect("lift parameters");
        let coeffs = Arc::new(orbit.assemble(&lift_selection(ell, &ts, depth)).expect("assembly"));
        let gs = level1_eigenform(2 * ell, depth + 1).expect("level one");
        for (f, g) in orbit.forms(coeffs).iter().zip(&gs) {
            for &t in &ts {
                match verify_lift(f, g, t, depth) {
                    Ok(r) if r.passed() => checked += 1,
                    Ok(r) => bad.push(format!("{} t={t}: discrepancy {}", f.label, r.max_abs_discrepancy)),
                    Err(e) => bad.push(format!("{} t={t}: {e}", f.label)),
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{checked} certificates at depth {depth}") } else { bad.join("; ") })
}

fn c4() -> Outcome {
    let n = 10_000u64;
    let mut bad = Vec::new();
    let mut forms = 0;
    for ell in 6..=30u32 {
        if dim_cusp_level1(2 * ell) == 0 {
            continue;
        }
        let fs = extract_eigenforms(ell, n as usize + 1).expect("forms");
        forms += fs.len();
        let c = &fs[0].coeffs;
        for m in 1..=n {
            if plus_forbidden(ell, m) && !c.is_zero_at(m).unwrap() {
                bad.push(format!("{}/2: a({m}) != 0", 2 * ell + 1));
            }
        }
        if !c.is_zero_at(0).unwrap() {
            bad.push(format!("{}/2: a(0) != 0", 2 * ell + 1));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{forms} forms to n = {n}") } else { bad.join("; ") })
}

fn c5() -> Outcome {
    let truth = |k: ModelKind| match k {
        ModelKind::Ggg => vec![0.622, 1177.4, 0.967, 0.045],
        ModelKind::Gg => vec![0.677, 1038.0, 1.08],
        ModelKind::Laplace => vec![1000.0, 0.5],
        ModelKind::Cauchy => vec![143.0, 0.14, 0.49],
    };
    let ident = |k: ModelKind, p: &[f64]| match k {
        ModelKind::Cauchy => vec![p[0] / p[1], p[2] * p[2] / p[1]],
        _ => p.to_vec(),
    };
    let rel = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max);
    let mut bad = Vec::new();
    let mut worst_noisy = Vec::new();
    for (seed, kind) in ModelKind::ALL.into_iter().enumerate() {
        let p = truth(kind);
        let xs: Vec<f64> = (-4000..4000).map(|i| (i as f64 + 0.5) * 0.001).collect();
        let exact: Vec<(f64, f64)> = xs.iter().map(|&x| (x, model_eval(kind, &p, x).unwrap())).collect();
        let peak = exact.iter().map(|e| e.1).fold(0.0, f64::max);
        match fit_points(kind, &exact, None, &FitOptions::default()) {
            Ok(f) => {
                let e = rel(&ident(kind, &f.params), &ident(kind, &p));
                if e >= 1e-6 || f.rms >= 1e-8 * peak {
                    bad.push(format!("{kind} exact: rel {e:.1e}, rms {:.1e}", f.rms));
                }
            }
            Err(e) => bad.push(format!("{kind} exact: {e}")),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed as u64);
        let noise = Normal::new(0.0, 0.01 * peak).unwrap();
        let noisy: Vec<(f64, f64)> = exact.iter().map(|&(x, y)| (x, y + noise.sample(&mut rng))).collect();
        match fit_points(kind, &noisy, None, &FitOptions::default()) {
            Ok(f) => {
                let e = rel(&ident(kind, &f.params), &ident(kind, &p));
                worst_noisy.push(format!("{kind} {e:.1e}"));
                if e >= 0.01 {
                    bad.push(format!("{kind} noisy: rel {e:.2e}, params {:?}", f.params));
                }
            }
            Err(e) => bad.push(format!("{kind} noisy: {e}")),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("noisy errors {}", worst_noisy.join(", ")) } else { bad.join("; ") })
}

fn c6(streams: &mut Streams) -> Outcome {
    let kinds = [ModelKind::Ggg, ModelKind::Gg, ModelKind::Laplace];
    let mut bad = Vec::new();
    let mut n = 0;
    for ell in [6u32, 8, 10] {
        for s in streams.get(ell) {
            let values = s.values();
            let mut sets: Vec<(String, Vec<f64>)> = vec![(s.label.clone(), values)];
            for (i, part) in subset_split(s, 4).iter().enumerate() {
                sets.push((format!("{} subset {}", s.label, i + 1), part.values()));
            }
            for (name, v) in &sets {
                for w in WIDTHS {
                    let h = histogram(v, w).unwrap();
                    let fits = fit_nested(&h, &kinds);
                    let ssr: Vec<Option<f64>> = fits.iter().map(|(_, r)| r.as_ref().ok().map(|f| f.ssr)).collect();
                    n += 1;
                    match (ssr[0], ssr[1], ssr[2]) {
                        (Some(a), Some(b), Some(c)) if a <= b * (1.0 + 1e-9) && b <= c * (1.0 + 1e-9) => {}
                        _ => bad.push(format!("{name} w={w}: {ssr:?}")),
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{n} histograms ordered") } else { bad.join("; ") })
}

fn gg(values: &[f64], w: f64) -> Result<FitResult, String> {
    let h = histogram(values, w).map_err(|e| e.to_string())?;
    let fits = fit_nested(&h, &[ModelKind::Gg, ModelKind::Laplace]);
    fits.into_iter().next().unwrap().1.map_err(|e| e.to_string())
}

fn c7(streams: &mut Streams) -> Outcome {
    let values = streams.get(6)[0].values();
    let mut a = Vec::new();
    for w in WIDTHS {
        match gg(&values, w) {
            Ok(f) => a.push(f.params[0]),
            Err(e) => return outcome(false, format!("w={w}: {e}")),
        }
    }
    let spread = a.iter().cloned().fold(f64::MIN, f64::max) - a.iter().cloned().fold(f64::MAX, f64::min);
    outcome(spread < 0.005, format!("GG a = {a:.4?}, spread {spread:.4}"))
}

fn c8(streams: &mut Streams) -> Outcome {
    let mut bad = Vec::new();
    let mut shown = Vec::new();
    for ell in [6u32, 8, 10] {
        for s in streams.get(ell) {
            let r = sign_report(&s.values());
            let f = r.pos_fraction.unwrap_or(f64::NAN);
            shown.push(format!("{} {f:.4}", s.label));
            if !(0.49..=0.51).contains(&f) {
                bad.push(format!("{} pos_fraction {f:.4}", s.label));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { shown.join(", ") } else { bad.join("; ") })
}

fn c9(streams: &mut Streams) -> Outcome {
    let values = streams.get(6)[0].values();
    let mut bad = Vec::new();
    let mut shown = Vec::new();
    for (lo, hi) in [(0.1, 0.5), (0.5, 1.0), (1.0, 2.0)] {
        let r = independence_ratio(&values, lo, hi).unwrap();
        match r.wilson95 {
            Some((a, b)) if a <= 0.5 && 0.5 <= b => shown.push(format!("[{lo},{hi}] {:.4}", r.ratio.unwrap())),
            _ => bad.push(format!("[{lo},{hi}]: {r}")),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { shown.join(", ") } else { bad.join("; ") })
}

fn c10() -> Option<Outcome> {
    if std::env::var("ACCEPTANCE_EXTENDED").as_deref() != Ok("1") {
        return None;
    }
    let x = 10_000_000u64;
    let form: HalfIntegralForm = extract_eigenforms(6, x as usize + 1).expect("build").remove(0);
    let values = normalize(&form, x).expect("normalize").values();
    let h = histogram(&values, 0.001).unwrap();
    let fits = fit_nested(&h, &[ModelKind::Ggg, ModelKind::Gg, ModelKind::Laplace]);
    let (ggg, gg) = match (&fits[0].1, &fits[1].1) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Some(outcome(false, "fit failed")),
    };
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let ok_gg = (gg.params[0] - 0.677).abs() <= 0.02 && rel(gg.params[1], 1038.0) <= 0.05 && (gg.params[2] - 1.08).abs() <= 0.05;
    let ok_ggg = (ggg.params[0] - 0.622).abs() <= 0.02
        && rel(ggg.params[1], 1177.4) <= 0.05
        && (ggg.params[2] - 0.967).abs() <= 0.05
        && (ggg.params[3] - 0.045).abs() <= 0.02;
    Some(outcome(ok_gg && ok_ggg, format!("GG {:.4?}, GGG {:.4?}", gg.params, ggg.params)))
}

fn c11(streams: &mut Streams) -> Outcome {
    let s = &streams.get(6)[0];
    let mut c = Vec::new();
    for part in subset_split(s, 4) {
        let h = histogram(&part.values(), 0.001).unwrap();
        match fit(ModelKind::Laplace, &h, None) {
            Ok(f) => c.push(f.params[1]),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let ok = c.windows(2).all(|w| w[1] <= w[0]);
    outcome(ok, format!("Laplace c = {c:.5?}"))
}

fn main() {
    // the harness passes its own flags; a name filter selects nothing here
    if std::env::args().skip(1).any(|a| !a.starts_with('-')) {
        return;
    }
    let mut streams = Streams::default();
    let mut failures = 0;
    let mut report = |n: u32, name: &str, f: &mut dyn FnMut() -> Option<Outcome>| {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Some(o) => {
                failures += usize::from(!o.pass);
                println!("[{}] {n:>2} {name}: {} ({secs:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            }
            None => println!("[SKIP] {n:>2} {name}: set ACCEPTANCE_EXTENDED=1 to run"),
        }
    };
    report(1, "dimensions and labels", &mut || Some(c1()));
    report(2, "tau eigenvalues", &mut || Some(c2()));
    report(3, "Shimura lift certificates", &mut || Some(c3()));
    report(4, "plus-space support", &mut || Some(c4()));
    report(5, "fitter oracle", &mut || Some(c5()));
    report(6, "nesting order", &mut || Some(c6(&mut streams)));
    report(7, "box-width stability", &mut || Some(c7(&mut streams)));
    report(8, "sign equidistribution", &mut || Some(c8(&mut streams)));
    report(9, "independence ratios", &mut || Some(c9(&mut streams)));
    report(10, "appendix reproduction", &mut || c10());
    report(11, "drift direction", &mut || Some(c11(&mut streams)));
    println!("acceptance: {failures} failing");
    if failures > 0 && std::env::var("ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
