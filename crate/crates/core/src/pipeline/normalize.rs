//! Real normalised coefficients `b(n) = a(n) / n^((k-1)/2)`, scaled so the
//! first recorded entry is 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::sieve::recorded_indices;
use super::stream::{round_to_format, CoeffStream};
use crate::arith::roots::{bigint_to_mantissa, rational_to_f64, FixedPointPowers};
use crate::error::{Error, Result};
use crate::exec;
use crate::modforms::assembly::ExactCoefficients;
use crate::modforms::HalfIntegralForm;

/// Relative width a real enclosure must reach.
const CERTIFIED_RELATIVE: f64 = 1e-11;
const START_BITS: u64 = 128;

/// `(k - 1)/2` for weight `k = two_k/2`.
pub fn normalization_exponent(two_k: u32) -> f64 {
    (two_k as f64 - 2.0) / 4.0
}

/// Real value of `a(n)` under the form's embedding, certified to relative
/// accuracy `1e-11` (exactly 0 when `a(n) = 0`).
pub fn real_coefficient(form: &HalfIntegralForm, coeffs: &ExactCoefficients, n: u64) -> Result<f64> {
    let nums = coeffs.numerators(n).ok_or(Error::Precision { required: n as usize + 1, available: coeffs.precision() })?;
    if nums.iter().all(|c| c.is_zero()) {
        return Ok(0.0);
    }
    if nums.len() == 1 {
        return Ok(rational_to_f64(&BigRational::new(nums[0].clone(), coeffs.den().clone())));
    }
    let owned: Vec<BigInt> = nums.into_iter().cloned().collect();
    let mut bits = START_BITS;
    loop {
        let fp = FixedPointPowers::new(&form.embedding, owned.len(), bits);
        let (lo, hi) = fp.enclose(&owned);
        if lo.sign() == hi.sign() && !lo.is_zero() {
            let (wm, we) = bigint_to_mantissa(&(&hi - &lo));
            let (lm, le) = bigint_to_mantissa(&lo.abs().min(hi.abs()));
            if wm * 2f64.powi((we - le) as i32) <= CERTIFIED_RELATIVE * lm {
                let mid = BigRational::new(lo + hi, coeffs.den() << (bits as usize + 1));
                return Ok(rational_to_f64(&mid));
            }
        }
        bits *= 2;
        if bits > 1 << 16 {
            return Err(Error::Certificate(format!("could not certify a({n}) for {}", form.label)));
        }
    }
}

/// The normalised stream of `form` on recorded indices `n <= x`.
pub fn normalize(form: &HalfIntegralForm, x: u64) -> Result<CoeffStream> {
    let idx = recorded_indices(form.ell, x);
    let n0 = idx.first().copied().ok_or(Error::InvalidArgument(format!("no recorded index up to {x}")))?;
    let a0 = form
        .coeffs
        .get(n0)
        .ok_or(Error::Precision { required: n0 as usize + 1, available: form.precision() })?;
    let inv = a0.inv().ok_or(Error::NormalizationUndefined { index: n0 })?;
    // canonical representative with a(n0) = 1, so the output ignores scaling
    let rescaled;
    let coeffs = if a0.is_one() {
        &*form.coeffs
    } else {
        rescaled = form.coeffs.rescaled(&inv);
        &rescaled
    };
    if let Some(&last) = idx.last() {
        if coeffs.numerators(last).is_none() {
            return Err(Error::Precision { required: last as usize + 1, available: coeffs.precision() });
        }
    }
    let e = normalization_exponent(form.two_k);
    let n0f = n0 as f64;
    let values = exec::try_map(&idx, |&n| -> Result<f64> {
        let a = real_coefficient(form, coeffs, n)?;
        Ok(if n == n0 { 1.0 } else { round_to_format(a * (n0f / n as f64).powf(e)) })
    })?;
    Ok(CoeffStream {
        label: form.label.clone(),
        two_k: form.two_k,
        ell: form.ell,
        bound: x,
        entries: idx.into_iter().zip(values).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qfrac, AlgebraicNumber};
    use crate::modforms::extract_eigenforms;
    use std::sync::Arc;

    #[test]
    fn exponent() {
        assert_eq!(normalization_exponent(13), 11.0 / 4.0);
    }

    #[test]
    fn first_entry_and_scale_invariance() {
        let forms = extract_eigenforms(6, 400).unwrap();
        let f = &forms[0];
        let s = normalize(f, 399).unwrap();
        assert_eq!(s.entries[0], (1, 1.0));
        // b(5) = a(5)/5^(11/4) with a(5) known exactly
        let a5 = f.coefficient(5).unwrap().as_rational().unwrap().clone();
        let want = rational_to_f64(&a5) / 5f64.powf(2.75);
        assert!((s.entries[1].1 - want).abs() <= 1e-9 * want.abs());
        let mut g = f.clone();
        g.coeffs = Arc::new(f.coeffs.rescaled(&AlgebraicNumber::from_rational(&f.field, qfrac(-7, 3))));
        assert_eq!(normalize(&g, 399).unwrap(), s);
    }

    #[test]
    fn quadratic_field_values_are_certified() {
        let forms = extract_eigenforms(12, 300).unwrap();
        for f in &forms {
            let s = normalize(f, 299).unwrap();
            assert_eq!(s.entries[0].1, 1.0);
            // compare with a plain float evaluation of the exact coefficient
            let alpha = f.embedding.approx();
            for &(n, b) in &s.entries {
                let a = f.coefficient(n).unwrap();
                let v: f64 = a.coords().iter().enumerate().map(|(j, c)| rational_to_f64(c) * alpha.powi(j as i32)).sum();
                let want = v / (n as f64).powf(normalization_exponent(25));
                assert!((b - want).abs() <= 1e-7 * want.abs().max(1e-3), "{} n={n}: {b} vs {want}", f.label);
            }
        }
    }

    #[test]
    fn precision_shortfall() {
        let forms = extract_eigenforms(6, 100).unwrap();
        assert!(matches!(normalize(&forms[0], 200), Err(Error::Precision { .. })));
    }
}
