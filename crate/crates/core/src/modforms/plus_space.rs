//! The plus cusp space of weight `ell + 1/2` on Gamma0(4), spanned inside the
//! monomials `theta^a F^b`, and the Hecke operators `T(p^2)` acting on it.

use num_bigint::BigInt;
use num_traits::Zero;

use super::generators::{f_series, theta, theta4};
use crate::arith::nt::{is_prime, kronecker};
use crate::arith::{series_mul, ExactSeries, IntSeries, QMatrix, Series, Q};
use crate::error::{Error, Result};
use crate::exec;

/// Exponent pairs `(a, b)` with `a + 4b = 2 ell + 1`, ordered by `b`.
pub fn monomial_exponents(ell: u32) -> Vec<(u32, u32)> {
    let w = 2 * ell + 1;
    (0..=w / 4).map(|b| (w - 4 * b, b)).collect()
}

/// Number of leading coefficients used to cut out the plus cusp space.
pub fn constraint_bound(ell: u32) -> usize {
    8 * monomial_exponents(ell).len() + 16
}

/// Dimension of `M_k(SL2(Z))` for even `k >= 0`.
pub fn dim_modular_level1(k: u32) -> usize {
    if k % 2 == 1 || k == 2 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// Dimension of `S_k(SL2(Z))` for even `k`.
pub fn dim_cusp_level1(k: u32) -> usize {
    if k < 12 {
        return 0;
    }
    dim_modular_level1(k) - 1
}

/// Whether the plus condition forces `a(n) = 0`.
pub fn plus_forbidden(ell: u32, n: u64) -> bool {
    let r = if ell % 2 == 0 { n % 4 } else { (4 - n % 4) % 4 };
    r == 2 || r == 3
}

/// `theta^a F^b` for every exponent pair of [`monomial_exponents`], to
/// precision `n`, with integer coefficients.
pub fn monomial_basis(ell: u32, n: usize) -> Result<Vec<IntSeries>> {
    if ell < 6 {
        return Err(Error::InvalidArgument(format!("ell = {ell} must be at least 6")));
    }
    let exps = monomial_exponents(ell);
    let big_b = exps.len() - 1;
    let th = theta(n);
    let a0 = exps[big_b].0;
    let t = match a0 {
        1 => th,
        _ => series_mul(&series_mul(&th, &th, n)?, &th, n)?,
    };
    let g = theta4(n);
    let f = f_series(n);
    let mut gp = vec![Series::one(n)];
    let mut fp = vec![Series::one(n)];
    for i in 1..=big_b {
        gp.push(series_mul(&gp[i - 1], &g, n)?);
        fp.push(series_mul(&fp[i - 1], &f, n)?);
    }
    // theta^a F^b = theta^a0 G^(B-b) F^b
    let out = exec::try_map(&(0..=big_b).collect::<Vec<_>>(), |&b| {
        series_mul(&series_mul(&t, &gp[big_b - b], n)?, &fp[b], n)
    })?;
    Ok(out)
}

/// Basis of the plus cusp space in reduced echelon form.
#[derive(Clone, Debug)]
pub struct PlusCuspBasis {
    pub ell: u32,
    /// Row `i` holds the monomial coordinates of basis element `i`.
    pub coords: Vec<Vec<Q>>,
    /// Index of the leading coefficient of each basis element.
    pub leading: Vec<usize>,
    pub series: Vec<ExactSeries>,
    /// Integer monomials the basis was built from.
    pub monomials: Vec<IntSeries>,
}

impl PlusCuspBasis {
    /// Computes the basis with `n` coefficients (at least `B_c + 1`).
    pub fn compute(ell: u32, n: usize) -> Result<Self> {
        let bc = constraint_bound(ell);
        let n = n.max(bc + 1);
        let monomials = monomial_basis(ell, n)?;
        let m = monomials.len();
        let mut rows = vec![(0..m).map(|j| Q::from_integer(monomials[j].coeff(0).clone())).collect::<Vec<_>>()];
        for idx in 1..=bc {
            if plus_forbidden(ell, idx as u64) {
                rows.push((0..m).map(|j| Q::from_integer(monomials[j].coeff(idx).clone())).collect());
            }
        }
        let kernel = QMatrix::from_rows(rows).nullspace();
        let expected = dim_cusp_level1(2 * ell);
        if kernel.len() != expected {
            return Err(Error::DimensionMismatch { two_k: 2 * ell + 1, found: kernel.len(), expected });
        }
        let dim = kernel.len();
        if dim == 0 {
            return Ok(PlusCuspBasis { ell, coords: vec![], leading: vec![], series: vec![], monomials });
        }
        let combine = |c: &[Q], upto: usize| -> Vec<Q> {
            (0..upto)
                .map(|i| {
                    c.iter()
                        .zip(&monomials)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(Q::zero(), |acc, (x, s)| acc + x * Q::from_integer(s.coeff(i).clone()))
                })
                .collect()
        };
        let window = bc + 1;
        let mut win = QMatrix::from_rows(kernel.iter().map(|c| combine(c, window)).collect());
        let mut comp = QMatrix::from_rows(kernel.clone());
        let leading = win.rref_with(Some(&mut comp));
        if leading.len() != dim {
            return Err(Error::Certificate(format!(
                "plus cusp basis for ell = {ell} is dependent on the first {window} coefficients"
            )));
        }
        let coords: Vec<Vec<Q>> = (0..dim).map(|i| comp.row(i).to_vec()).collect();
        let series = exec::map(&coords, |c| Series::new(combine(c, n)));
        Ok(PlusCuspBasis { ell, coords, leading, series, monomials })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn precision(&self) -> usize {
        self.monomials[0].precision()
    }

    /// Matrix of `T(p^2)`: entry `(i, j)` is the coefficient of basis element
    /// `i` in `T(p^2)` of basis element `j`.
    pub fn hecke_matrix(&self, p: u64) -> Result<QMatrix> {
        let d = self.dim();
        let max_lead = self.leading.iter().copied().max().unwrap_or(0);
        let n_out = self.precision() / (p * p) as usize;
        if n_out < max_lead + 1 {
            return Err(Error::Precision { required: (p * p) as usize * (max_lead + 1), available: self.precision() });
        }
        let images = exec::try_map(&self.series, |f| hecke_t_p2(f, p, self.ell, n_out))?;
        let mut m = QMatrix::zeros(d, d);
        for (j, img) in images.iter().enumerate() {
            let mut rest = img.clone();
            for i in 0..d {
                let c = img.coeff(self.leading[i]).clone();
                if !c.is_zero() {
                    rest = rest.add_scaled(&-c.clone(), &self.series[i].truncate(n_out)?);
                }
                m[(i, j)] = c;
            }
            if rest.valuation().is_some() {
                return Err(Error::Certificate(format!(
                    "T({p}^2) image leaves the plus cusp space for ell = {}",
                    self.ell
                )));
            }
        }
        Ok(m)
    }
}

/// Plus cusp basis series to precision `n`.
pub fn plus_cusp_basis(ell: u32, n: usize) -> Result<Vec<ExactSeries>> {
    let b = PlusCuspBasis::compute(ell, n)?;
    b.series.iter().map(|s| s.truncate(n)).collect()
}

/// `T(p^2)` on a weight `ell + 1/2` series, `n_out` output coefficients.
pub fn hecke_t_p2(f: &ExactSeries, p: u64, ell: u32, n_out: usize) -> Result<ExactSeries> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("T(p^2) needs an odd prime, got {p}")));
    }
    let p2 = (p * p) as usize;
    let need = p2 * n_out;
    if f.precision() < need {
        return Err(Error::Precision { required: need, available: f.precision() });
    }
    let c1 = Q::from_integer(BigInt::from(p).pow(ell - 1));
    let c2 = Q::from_integer(BigInt::from(p).pow(2 * ell - 1));
    let sign: i64 = if ell % 2 == 0 { 1 } else { -1 };
    let out = (0..n_out)
        .map(|n| {
            let mut v = f.coeff(p2 * n).clone();
            let chi = kronecker(sign * n as i64, p);
            if chi != 0 {
                let t = &c1 * f.coeff(n);
                if chi > 0 {
                    v += t;
                } else {
                    v -= t;
                }
            }
            if n % p2 == 0 {
                v += &c2 * f.coeff(n / p2);
            }
            v
        })
        .collect();
    Ok(Series::new(out))
}

/// Matrix of `T(p^2)` on the plus cusp space of weight `ell + 1/2`, computed
/// at the minimal precision that determines it.
pub fn hecke_matrix(ell: u32, p: u64) -> Result<QMatrix> {
    let pre = PlusCuspBasis::compute(ell, 0)?;
    if pre.dim() == 0 {
        return Err(Error::InvalidArgument(format!("plus cusp space for ell = {ell} is zero")));
    }
    let max_lead = pre.leading.iter().copied().max().unwrap();
    let need = (p * p) as usize * (constraint_bound(ell).max(max_lead) + 1);
    PlusCuspBasis::compute(ell, need)?.hecke_matrix(p)
}
