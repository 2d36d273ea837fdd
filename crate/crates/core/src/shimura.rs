//! Shimura-lift certificates: the coefficients `a(t m^2)` of a plus-space
//! eigenform must reproduce `a(t)` times the level one eigenform of weight
//! `2 ell`, exactly.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::nt::{divisors, is_squarefree, kronecker};
use crate::arith::{AlgebraicNumber, NumberField, Q};
use crate::error::{Error, Result};
use crate::modforms::assembly::Selection;
use crate::modforms::eigen::first_recorded_index;
use crate::modforms::{HalfIntegralForm, Level1Eigenform};

/// Default lift depth.
pub const DEFAULT_DEPTH: usize = 500;
/// Primes whose eigenvalues pair the two forms.
pub const PAIRING_PRIMES: [u64; 2] = [3, 5];

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub label: String,
    pub t: u64,
    pub depth: usize,
    /// Largest absolute coordinate of `A_t(n) - a(t) g(n)`, `n <= depth`.
    pub max_abs_discrepancy: Q,
    pub matched_eigenvalues: Vec<(u64, AlgebraicNumber)>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.max_abs_discrepancy.is_zero()
    }
}

/// Indices `t m^2` (`m <= depth`) for each `t`, plus `p^2 n0` for the
/// pairing primes.
pub fn lift_selection(ell: u32, ts: &[u64], depth: usize) -> Selection {
    let n0 = first_recorded_index(ell);
    let mut idx: Vec<u64> = ts.iter().flat_map(|&t| (1..=depth as u64).map(move |m| t * m * m)).collect();
    idx.push(n0);
    idx.extend(PAIRING_PRIMES.iter().map(|p| p * p * n0));
    Selection::sparse(idx)
}

fn into_field(x: AlgebraicNumber, field: &Arc<NumberField>) -> Result<AlgebraicNumber> {
    if x.field() == field {
        return Ok(x);
    }
    match x.as_rational() {
        Some(r) if x.field().degree() == 1 => Ok(AlgebraicNumber::from_rational(field, r.clone())),
        _ => Err(Error::Certificate("wrong eigenform pairing: coefficient fields differ".into())),
    }
}

/// `A_t(n) = sum_{d | n} ((-1)^ell t | d) d^(ell-1) a(t (n/d)^2)` for
/// `1 <= n <= depth` (entry 0 is zero).
pub fn lift_with(
    ell: u32,
    field: &Arc<NumberField>,
    a: impl Fn(u64) -> Option<AlgebraicNumber>,
    t: u64,
    depth: usize,
) -> Result<Vec<AlgebraicNumber>> {
    if !is_squarefree(t) {
        return Err(Error::InvalidArgument(format!("lift parameter {t} is not squarefree")));
    }
    let disc = if ell % 2 == 0 { t as i64 } else { -(t as i64) };
    let mut out = vec![AlgebraicNumber::zero(field)];
    for n in 1..=depth as u64 {
        let mut s = AlgebraicNumber::zero(field);
        for d in divisors(n) {
            let chi = kronecker(disc, d);
            if chi == 0 {
                continue;
            }
            let m = n / d;
            let idx = t * m * m;
            let c = a(idx).ok_or(Error::Precision { required: idx as usize + 1, available: 0 })?;
            let w = Q::from_integer(BigInt::from(d).pow(ell - 1) * chi);
            s = s.add(&into_field(c, field)?.scale(&w));
        }
        out.push(s);
    }
    Ok(out)
}

pub fn shimura_lift(f: &HalfIntegralForm, t: u64, depth: usize) -> Result<Vec<AlgebraicNumber>> {
    lift_with(f.ell, &f.field, |n| f.coefficient(n), t, depth)
}

/// Largest absolute coordinate of `A_t(n) - a(t) g(n)` for `n <= depth`.
pub fn lift_discrepancy(
    ell: u32,
    a: impl Fn(u64) -> Option<AlgebraicNumber>,
    g: &Level1Eigenform,
    t: u64,
    depth: usize,
) -> Result<Q> {
    if g.coeffs.len() <= depth {
        return Err(Error::Precision { required: depth + 1, available: g.coeffs.len() });
    }
    let at = into_field(a(t).ok_or(Error::Precision { required: t as usize + 1, available: 0 })?, &g.field)?;
    let lift = lift_with(ell, &g.field, &a, t, depth)?;
    let mut worst = Q::zero();
    for n in 1..=depth {
        let diff = lift[n].sub(&at.mul(g.coefficient(n)));
        for c in diff.coords() {
            if c.abs() > worst {
                worst = c.abs();
            }
        }
    }
    Ok(worst)
}

/// Pairs `f` with `g` through `T(p^2)` / `T_p` eigenvalues and certifies the
/// lift identity for parameter `t` to `depth`.
pub fn verify_lift(f: &HalfIntegralForm, g: &Level1Eigenform, t: u64, depth: usize) -> Result<LiftReport> {
    if g.weight != 2 * f.ell {
        return Err(Error::Certificate(format!("wrong eigenform pairing: weight {} vs {}", g.weight, 2 * f.ell)));
    }
    if f.field.min_poly() != g.field.min_poly() {
        return Err(Error::Certificate(format!(
            "wrong eigenform pairing: T(9) polynomial {} differs from T_3 polynomial {}",
            f.field.min_poly(),
            g.field.min_poly()
        )));
    }
    let mut matched = Vec::new();
    for p in PAIRING_PRIMES {
        let lf = f.eigenvalue_from_coefficients(p).ok_or(Error::Precision {
            required: (p * p * f.n0) as usize + 1,
            available: f.precision(),
        })?;
        let lf = into_field(lf, &g.field)?;
        let lg = g.coefficient(p as usize).clone();
        if lf != lg {
            return Err(Error::Certificate(format!("wrong eigenform pairing at p = {p}: {lf} vs {lg}")));
        }
        matched.push((p, lg));
    }
    let worst = lift_discrepancy(f.ell, |n| f.coefficient(n), g, t, depth)?;
    Ok(LiftReport { label: f.label.clone(), t, depth, max_abs_discrepancy: worst, matched_eigenvalues: matched })
}

/// The first `count` recorded indices `t` with `a(t) != 0`, read from
/// `a` (which must cover them).
pub fn lift_parameters(ell: u32, count: usize, a: impl Fn(u64) -> Result<AlgebraicNumber>) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut t = first_recorded_index(ell);
    while out.len() < count {
        if is_squarefree(t) && !a(t)?.is_zero() {
            out.push(t);
        }
        t += 4;
    }
    Ok(out)
}
