//! Generator q-expansions: theta, the weight 2 form `F` on Gamma0(4), and the
//! level one Eisenstein series and discriminant.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{series_mul, IntSeries, Series};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Theta,
    F,
    E4,
    E6,
    Delta,
}

#[derive(Clone, Debug)]
pub struct GeneratorSeries {
    pub kind: GeneratorKind,
    pub series: IntSeries,
}

impl GeneratorSeries {
    pub fn new(kind: GeneratorKind, n: usize) -> Result<Self> {
        let series = match kind {
            GeneratorKind::Theta => theta(n),
            GeneratorKind::F => f_series(n),
            GeneratorKind::E4 => e4(n),
            GeneratorKind::E6 => e6(n),
            GeneratorKind::Delta => delta(n)?,
        };
        Ok(GeneratorSeries { kind, series })
    }
}

/// `sigma_1(m)` for `m < n` (entry 0 is 0).
pub fn sigma1_table(n: usize) -> Vec<u64> {
    let mut s = vec![0u64; n];
    for d in 1..n {
        for m in (d..n).step_by(d) {
            s[m] += d as u64;
        }
    }
    s
}

/// `sigma_k(m)` for `m < n` as exact integers.
pub fn sigma_table(k: u32, n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); n];
    for d in 1..n {
        let dk = BigInt::from(d).pow(k);
        for m in (d..n).step_by(d) {
            s[m] += &dk;
        }
    }
    s
}

/// `theta = sum_{m in Z} q^(m^2)`.
pub fn theta(n: usize) -> IntSeries {
    let mut c = vec![BigInt::zero(); n.max(1)];
    c[0] = BigInt::from(1);
    let mut m = 1usize;
    while m * m < n {
        c[m * m] = BigInt::from(2);
        m += 1;
    }
    Series::new(c)
}

/// `F = sum_{n odd} sigma_1(n) q^n`, weight 2 on Gamma0(4).
pub fn f_series(n: usize) -> IntSeries {
    let s = sigma1_table(n);
    Series::new(
        (0..n.max(1))
            .map(|m| if m % 2 == 1 { BigInt::from(s[m]) } else { BigInt::zero() })
            .collect(),
    )
}

/// Coefficients of `theta^4`: `r_4(n) = 8 sigma(n) - 32 sigma(n/4)`.
pub fn r4_table(n: usize) -> Vec<u64> {
    let s = sigma1_table(n);
    (0..n)
        .map(|m| match m {
            0 => 1,
            _ if m % 4 == 0 => 8 * s[m] - 32 * s[m / 4],
            _ => 8 * s[m],
        })
        .collect()
}

pub fn theta4(n: usize) -> IntSeries {
    Series::new(r4_table(n.max(1)).into_iter().map(BigInt::from).collect())
}

fn eisenstein(n: usize, k: u32, c: i64) -> IntSeries {
    let s = sigma_table(k, n.max(1));
    let mut out: Vec<BigInt> = s.into_iter().map(|x| x * c).collect();
    out[0] = BigInt::from(1);
    Series::new(out)
}

pub fn e4(n: usize) -> IntSeries {
    eisenstein(n, 3, 240)
}

pub fn e6(n: usize) -> IntSeries {
    eisenstein(n, 5, -504)
}

/// `Delta = (E4^3 - E6^2) / 1728`.
pub fn delta(n: usize) -> Result<IntSeries> {
    let a = e4(n);
    let b = e6(n);
    let a3 = series_mul(&series_mul(&a, &a, n)?, &a, n)?;
    let b2 = series_mul(&b, &b, n)?;
    let k = BigInt::from(1728);
    let c = a3
        .coeffs()
        .iter()
        .zip(b2.coeffs())
        .map(|(x, y)| {
            let d = x - y;
            if !(&d % &k).is_zero() {
                return Err(Error::Certificate("E4^3 - E6^2 not divisible by 1728".into()));
            }
            Ok(d / &k)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Series::new(c))
}
