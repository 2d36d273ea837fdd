//! Level one cusp eigenforms of even weight, from the basis
//! `Delta * E4^a * E6^b`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::eigen::EMBEDDING_DIGITS;
use super::generators::{delta, e4, e6};
use super::plus_space::dim_cusp_level1;
use crate::arith::nt::is_prime;
use crate::arith::{
    kernel_vector, series_mul, series_pow, AlgebraicNumber, IntSeries, NumberField, QMatrix, QPoly, RealEmbedding, Q,
};
use crate::error::{Error, Result};

/// Echelon basis of `S_k(SL2(Z))` to precision `n`; leading indices are
/// `1..=dim`.
pub fn cusp_basis_level1(k: u32, n: usize) -> Result<Vec<Vec<Q>>> {
    let dim = dim_cusp_level1(k);
    if dim == 0 {
        return Ok(vec![]);
    }
    let n = n.max(dim + 2);
    let (d, a, b) = (delta(n)?, e4(n), e6(n));
    let mut gens: Vec<IntSeries> = Vec::new();
    let rest = k - 12;
    for j in 0..=rest / 6 {
        let r = rest - 6 * j;
        if r % 4 == 0 {
            let s = series_mul(&series_pow(&a, r / 4, n)?, &series_pow(&b, j, n)?, n)?;
            gens.push(series_mul(&d, &s, n)?);
        }
    }
    if gens.len() != dim {
        return Err(Error::DimensionMismatch { two_k: k, found: gens.len(), expected: dim });
    }
    let rows = gens.iter().map(|g| g.coeffs().iter().map(|c| Q::from_integer(c.clone())).collect()).collect();
    let mut m = QMatrix::from_rows(rows);
    let piv = m.rref_with(None);
    if piv != (1..=dim).collect::<Vec<_>>() {
        return Err(Error::Certificate(format!("level one basis in weight {k} has leading indices {piv:?}")));
    }
    Ok((0..dim).map(|i| m.row(i).to_vec()).collect())
}

/// `T_p` on a level one series: `c(pn) + p^(k-1) c(n/p)`.
pub fn hecke_t_p(f: &[Q], p: u64, k: u32, n_out: usize) -> Result<Vec<Q>> {
    let p_us = p as usize;
    if f.len() < p_us * n_out {
        return Err(Error::Precision { required: p_us * n_out, available: f.len() });
    }
    let c = Q::from_integer(BigInt::from(p).pow(k - 1));
    Ok((0..n_out)
        .map(|n| {
            let mut v = f[p_us * n].clone();
            if n % p_us == 0 {
                v += &c * &f[n / p_us];
            }
            v
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct Level1Eigenform {
    pub weight: u32,
    pub hecke_prime: u64,
    pub charpoly: QPoly,
    pub field: Arc<NumberField>,
    /// Coefficients `c(0), c(1), ...` with `c(1) = 1`; shared by the orbit.
    pub coeffs: Arc<Vec<AlgebraicNumber>>,
    pub embedding: RealEmbedding,
}

impl Level1Eigenform {
    pub fn coefficient(&self, n: usize) -> &AlgebraicNumber {
        &self.coeffs[n]
    }
}

/// Eigenforms of weight `k`, diagonalising `T_3`.
pub fn level1_eigenform(k: u32, n: usize) -> Result<Vec<Level1Eigenform>> {
    level1_eigenform_with(k, 3, n)
}

/// Eigenforms of weight `k` with `g` the characteristic polynomial of `T_p`
/// and `K = Q[x]/(g)`; the generator of `K` is the `T_p` eigenvalue.
pub fn level1_eigenform_with(k: u32, p: u64, n: usize) -> Result<Vec<Level1Eigenform>> {
    if k < 12 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("weight {k} must be even and at least 12")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let dim = dim_cusp_level1(k);
    if dim == 0 {
        return Ok(vec![]);
    }
    let prec = n.max(p as usize * (dim + 1)).max(2);
    let basis = cusp_basis_level1(k, prec)?;
    let mut mp = QMatrix::zeros(dim, dim);
    for (j, f) in basis.iter().enumerate() {
        let img = hecke_t_p(f, p, k, dim + 1)?;
        for i in 0..dim {
            mp[(i, j)] = img[i + 1].clone();
        }
        // the image must be the combination read off at the leading indices
        let n_out = prec / p as usize;
        let full = hecke_t_p(f, p, k, n_out)?;
        for m in 0..n_out {
            let comb = (0..dim).fold(Q::zero(), |acc, i| acc + &mp[(i, j)] * &basis[i][m]);
            if comb != full[m] {
                return Err(Error::Certificate(format!("T_{p} image leaves S_{k}")));
            }
        }
    }
    let charpoly = mp.charpoly()?;
    if !charpoly.is_squarefree() {
        return Err(Error::Certificate(format!("T_{p} has repeated eigenvalues in weight {k}")));
    }
    let field = NumberField::new(&charpoly)?;
    let alpha = AlgebraicNumber::generator(&field);
    let m: Vec<Vec<AlgebraicNumber>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let e = AlgebraicNumber::from_rational(&field, mp[(i, j)].clone());
                    if i == j {
                        e.sub(&alpha)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let v = kernel_vector(&m)?;
    let n_final = n.max(2);
    let mut coeffs: Vec<AlgebraicNumber> = (0..n_final)
        .map(|idx| {
            v.iter()
                .zip(&basis)
                .fold(AlgebraicNumber::zero(&field), |acc, (vi, b)| acc.add(&vi.scale(&b[idx])))
        })
        .collect();
    let inv = coeffs[1].inv().ok_or(Error::NormalizationUndefined { index: 1 })?;
    for c in coeffs.iter_mut() {
        *c = c.mul(&inv);
    }
    let coeffs = Arc::new(coeffs);
    Ok(field
        .real_embeddings(EMBEDDING_DIGITS)
        .into_iter()
        .map(|embedding| Level1Eigenform {
            weight: k,
            hecke_prime: p,
            charpoly: charpoly.clone(),
            field: field.clone(),
            coeffs: coeffs.clone(),
            embedding,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn delta_is_the_weight_12_form() {
        let f = level1_eigenform(12, 10).unwrap();
        assert_eq!(f.len(), 1);
        let c: Vec<Q> = f[0].coeffs.iter().map(|x| x.as_rational().unwrap().clone()).collect();
        let tau = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643];
        assert_eq!(c, tau.iter().map(|&t| q(t)).collect::<Vec<_>>());
    }

    #[test]
    fn empty_weight() {
        assert!(level1_eigenform(14, 10).unwrap().is_empty());
    }

    #[test]
    fn weight_24_quadratic() {
        let f = level1_eigenform_with(24, 2, 30).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].field.degree(), 2);
        // Hecke multiplicativity on coprime indices
        for (m, n) in [(2usize, 3usize), (3, 5), (4, 7)] {
            let g = &f[0];
            assert_eq!(g.coefficient(m * n).clone(), g.coefficient(m).mul(g.coefficient(n)));
        }
        // T_2 eigenvalue is the generator, so c(2) = x
        assert_eq!(f[0].coefficient(2), &AlgebraicNumber::generator(&f[0].field));
    }
}
