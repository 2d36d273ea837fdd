use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The four density families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    /// `b exp(-(d + x^2)^a / c)`
    Ggg,
    /// `b exp(-(x^2)^a / c)`
    Gg,
    /// `b exp(-|x| / c)`
    Laplace,
    /// `a / (b + (c x)^2)`
    Cauchy,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Ggg, ModelKind::Gg, ModelKind::Laplace, ModelKind::Cauchy];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Ggg => "GGG",
            ModelKind::Gg => "GG",
            ModelKind::Laplace => "Laplace",
            ModelKind::Cauchy => "Cauchy",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Ggg => &["a", "b", "c", "d"],
            ModelKind::Gg => &["a", "b", "c"],
            ModelKind::Laplace => &["b", "c"],
            ModelKind::Cauchy => &["a", "b", "c"],
        }
    }

    pub fn n_params(self) -> usize {
        self.param_names().len()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model {s:?}")))
    }
}

fn gen_gauss(a: f64, b: f64, c: f64, base: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("scale c = {c} must be positive")));
    }
    if base < 0.0 {
        return Err(Error::Domain(format!("d + x^2 = {base} is negative")));
    }
    let p = if base == 0.0 {
        if a > 0.0 {
            0.0
        } else {
            return Err(Error::Domain(format!("0^{a} is undefined")));
        }
    } else {
        base.powf(a)
    };
    Ok(b * (-p / c).exp())
}

/// Value of a model at `x`.
pub fn model_eval(kind: ModelKind, params: &[f64], x: f64) -> Result<f64> {
    if params.len() != kind.n_params() {
        return Err(Error::InvalidArgument(format!("{kind} takes {} parameters", kind.n_params())));
    }
    let v = match kind {
        ModelKind::Ggg => gen_gauss(params[0], params[1], params[2], params[3] + x * x)?,
        ModelKind::Gg => gen_gauss(params[0], params[1], params[2], x * x)?,
        ModelKind::Laplace => {
            if !(params[1] > 0.0) {
                return Err(Error::Domain(format!("scale c = {} must be positive", params[1])));
            }
            params[0] * (-x.abs() / params[1]).exp()
        }
        ModelKind::Cauchy => {
            if !(params[1] > 0.0) {
                return Err(Error::Domain(format!("Cauchy b = {} must be positive", params[1])));
            }
            params[0] / (params[1] + (params[2] * x).powi(2))
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{kind} is not finite at x = {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_forms() {
        let (a, b, c, d) = (0.6, 3.0, 1.5, 0.04);
        let v = model_eval(ModelKind::Ggg, &[a, b, c, d], 0.0).unwrap();
        assert!((v - b * (-d.powf(a) / c).exp()).abs() < 1e-14);
        let l = model_eval(ModelKind::Laplace, &[2.0, 1.0], 1.0).unwrap();
        assert!((l - 2.0 / std::f64::consts::E).abs() < 1e-15);
        assert_eq!(model_eval(ModelKind::Gg, &[0.7, 5.0, 1.0], 0.0).unwrap(), 5.0);
        assert_eq!(model_eval(ModelKind::Cauchy, &[6.0, 2.0, -1.0], 1.0).unwrap(), 2.0);
    }

    #[test]
    fn nesting_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: f64 = rng.random_range(-3.0..3.0);
            let (b, c) = (rng.random_range(1.0..100.0), rng.random_range(0.1..2.0));
            let gg = model_eval(ModelKind::Gg, &[0.5, b, c], x).unwrap();
            let lap = model_eval(ModelKind::Laplace, &[b, c], x).unwrap();
            assert!((gg - lap).abs() <= 1e-12 * lap);
            let a = rng.random_range(0.2..1.5);
            let gg = model_eval(ModelKind::Gg, &[a, b, c], x).unwrap();
            let ggg = model_eval(ModelKind::Ggg, &[a, b, c, 0.0], x).unwrap();
            assert_eq!(gg, ggg);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(model_eval(ModelKind::Gg, &[0.5, 1.0, 0.0], 1.0), Err(Error::Domain(_))));
        assert!(matches!(model_eval(ModelKind::Laplace, &[1.0, -1.0], 1.0), Err(Error::Domain(_))));
        assert!(matches!(model_eval(ModelKind::Ggg, &[0.5, 1.0, 1.0, -2.0], 0.5), Err(Error::Domain(_))));
        assert!(matches!(model_eval(ModelKind::Cauchy, &[1.0, 0.0, 1.0], 1.0), Err(Error::Domain(_))));
        assert!(model_eval(ModelKind::Gg, &[0.5, 1.0], 1.0).is_err());
        assert_eq!("gg".parse::<ModelKind>().unwrap(), ModelKind::Gg);
    }
}
