//! Hecke eigenforms in the plus cusp space.
//!
//! The field of coefficients is `K = Q[x]/(g)` with `g` the characteristic
//! polynomial of `T(9)`. One eigenvector over `K` describes the whole Galois
//! orbit; each real root of `g` gives one real eigenform.

use std::sync::Arc;

use num_bigint::BigInt;

use super::assembly::{assemble_exact, assemble_modular, ExactCoefficients, Selection};
use super::plus_space::{constraint_bound, PlusCuspBasis};
use crate::arith::nt::kronecker;
use crate::arith::roots::MIN_DIGITS;
use crate::arith::{kernel_vector, AlgebraicNumber, NumberField, QMatrix, QPoly, RealEmbedding, Q};
use crate::error::{Error, Result};

/// Digits requested for the real embeddings of eigenvalue fields.
pub const EMBEDDING_DIGITS: u32 = 15;

/// The Galois orbit of eigenforms of weight `ell + 1/2`.
#[derive(Clone, Debug)]
pub struct EigenOrbit {
    pub ell: u32,
    pub basis: PlusCuspBasis,
    pub hecke3: QMatrix,
    pub charpoly: QPoly,
    pub field: Arc<NumberField>,
    /// Eigenvector in the echelon basis.
    pub eigenvector: Vec<AlgebraicNumber>,
    /// Coordinates in the `theta^a F^b` monomials, scaled so `a(n0) = 1`.
    pub monomial_coords: Vec<AlgebraicNumber>,
    pub n0: u64,
}

/// Smallest index not forced to vanish and squarefree: 1 or 3.
pub fn first_recorded_index(ell: u32) -> u64 {
    if ell % 2 == 0 {
        1
    } else {
        3
    }
}

impl EigenOrbit {
    pub fn compute(ell: u32) -> Result<Self> {
        let n = 9 * (constraint_bound(ell) + 1);
        let basis = PlusCuspBasis::compute(ell, n)?;
        if basis.dim() == 0 {
            return Err(Error::InvalidArgument(format!("no cusp forms in weight {}/2", 2 * ell + 1)));
        }
        let hecke3 = basis.hecke_matrix(3)?;
        let charpoly = hecke3.charpoly()?;
        if !charpoly.is_squarefree() {
            return Err(Error::Certificate(format!("T(9) has repeated eigenvalues: {charpoly}")));
        }
        let field = NumberField::new(&charpoly)?;
        let d = basis.dim();
        let alpha = AlgebraicNumber::generator(&field);
        let m: Vec<Vec<AlgebraicNumber>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let e = AlgebraicNumber::from_rational(&field, hecke3[(i, j)].clone());
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
        let nmono = basis.monomials.len();
        let w: Vec<AlgebraicNumber> = (0..nmono)
            .map(|b| {
                v.iter().zip(&basis.coords).fold(AlgebraicNumber::zero(&field), |acc, (vi, row)| {
                    acc.add(&vi.scale(&row[b]))
                })
            })
            .collect();
        let n0 = first_recorded_index(ell);
        let a_n0 = combine(&w, &basis, n0 as usize);
        let inv = a_n0.inv().ok_or(Error::NormalizationUndefined { index: n0 })?;
        let monomial_coords = w.iter().map(|x| x.mul(&inv)).collect();
        let eigenvector = v.iter().map(|x| x.mul(&inv)).collect();
        Ok(EigenOrbit { ell, basis, hecke3, charpoly, field, eigenvector, monomial_coords, n0 })
    }

    pub fn two_k(&self) -> u32 {
        2 * self.ell + 1
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Exact coefficient from the Hecke-phase monomials.
    pub fn coefficient(&self, n: u64) -> Result<AlgebraicNumber> {
        if n as usize >= self.basis.precision() {
            return Err(Error::Precision { required: n as usize + 1, available: self.basis.precision() });
        }
        Ok(combine(&self.monomial_coords, &self.basis, n as usize))
    }

    /// Eigenvalue of `T(p^2)` from the Hecke matrix on the echelon basis.
    pub fn eigenvalue(&self, p: u64) -> Result<AlgebraicNumber> {
        let mp = if p == 3 {
            self.hecke3.clone()
        } else {
            let n = (p * p) as usize * (constraint_bound(self.ell) + 1);
            PlusCuspBasis::compute(self.ell, n)?.hecke_matrix(p)?
        };
        let v = &self.eigenvector;
        let i = v.iter().position(|x| !x.is_zero()).unwrap();
        let row = (0..v.len()).fold(AlgebraicNumber::zero(&self.field), |acc, j| {
            acc.add(&v[j].scale(&mp[(i, j)]))
        });
        let lambda = row.div(&v[i]).unwrap();
        for (r, vr) in v.iter().enumerate() {
            let lhs = (0..v.len()).fold(AlgebraicNumber::zero(&self.field), |acc, j| {
                acc.add(&v[j].scale(&mp[(r, j)]))
            });
            if lhs != lambda.mul(vr) {
                return Err(Error::Certificate(format!("eigenvector is not a T({p}^2) eigenvector")));
            }
        }
        Ok(lambda)
    }

    /// Coefficients on a selection by the multi-modular engine.
    pub fn assemble(&self, selection: &Selection) -> Result<ExactCoefficients> {
        assemble_modular(self.ell, &self.monomial_coords, selection)
    }

    /// Coefficients from exact integer monomials (small precision only).
    pub fn assemble_exact(&self, n: usize) -> Result<ExactCoefficients> {
        let mono = super::plus_space::monomial_basis(self.ell, n)?;
        assemble_exact(&mono, &self.monomial_coords, &Selection::Dense(n))
    }

    pub fn embeddings(&self) -> Vec<RealEmbedding> {
        self.field.real_embeddings(EMBEDDING_DIGITS.max(MIN_DIGITS))
    }

    /// One form per real embedding, ascending, sharing `coeffs`.
    pub fn forms(&self, coeffs: Arc<ExactCoefficients>) -> Vec<HalfIntegralForm> {
        self.embeddings()
            .into_iter()
            .enumerate()
            .map(|(j, emb)| HalfIntegralForm {
                two_k: self.two_k(),
                ell: self.ell,
                label: format!("{}/2({})", self.two_k(), j + 1),
                field: self.field.clone(),
                monomial_coords: self.monomial_coords.clone(),
                embedding: emb,
                n0: self.n0,
                coeffs: coeffs.clone(),
            })
            .collect()
    }
}

fn combine(w: &[AlgebraicNumber], basis: &PlusCuspBasis, n: usize) -> AlgebraicNumber {
    w.iter().zip(&basis.monomials).fold(AlgebraicNumber::zero(w[0].field()), |acc, (x, m)| {
        acc.add(&x.scale(&Q::from_integer(m.coeff(n).clone())))
    })
}

/// A real plus-space cusp eigenform: the orbit's exact coefficients seen
/// through one real embedding.
#[derive(Clone, Debug)]
pub struct HalfIntegralForm {
    pub two_k: u32,
    pub ell: u32,
    pub label: String,
    pub field: Arc<NumberField>,
    pub monomial_coords: Vec<AlgebraicNumber>,
    pub embedding: RealEmbedding,
    pub n0: u64,
    pub coeffs: Arc<ExactCoefficients>,
}

impl HalfIntegralForm {
    pub fn coefficient(&self, n: u64) -> Option<AlgebraicNumber> {
        self.coeffs.get(n)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.precision()
    }

    /// `(-1)^ell`.
    pub fn sign(&self) -> i64 {
        if self.ell % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Eigenvalue of `T(p^2)` read from the coefficients at `n0` and `p^2 n0`
    /// (valid because `a(n0) = 1` and `n0 < p^2`).
    pub fn eigenvalue_from_coefficients(&self, p: u64) -> Option<AlgebraicNumber> {
        let a = self.coefficient(p * p * self.n0)?;
        let chi = kronecker(self.sign() * self.n0 as i64, p);
        let c = Q::from_integer(BigInt::from(p).pow(self.ell - 1) * chi);
        Some(a.add(&AlgebraicNumber::from_rational(&self.field, c)))
    }
}

/// All eigenforms of weight `ell + 1/2` with dense coefficients `0..n`.
pub fn extract_eigenforms(ell: u32, n: usize) -> Result<Vec<HalfIntegralForm>> {
    extract_eigenforms_with(ell, &Selection::Dense(n))
}

pub fn extract_eigenforms_with(ell: u32, selection: &Selection) -> Result<Vec<HalfIntegralForm>> {
    let orbit = EigenOrbit::compute(ell)?;
    let coeffs = Arc::new(orbit.assemble(selection)?);
    Ok(orbit.forms(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::plus_space::{hecke_t_p2, plus_forbidden};
    use crate::arith::{q, Series};

    #[test]
    fn weight_13_2_orbit() {
        let o = EigenOrbit::compute(6).unwrap();
        assert_eq!(o.degree(), 1);
        assert_eq!(o.charpoly, QPoly::from_ints(&[-252, 1]));
        for (p, tau) in [(3, 252), (5, 4830), (7, -16744)] {
            assert_eq!(o.eigenvalue(p).unwrap().as_rational(), Some(&q(tau)));
        }
        assert_eq!(o.coefficient(1).unwrap().as_rational(), Some(&q(1)));
        // A(2)/A(1) = tau(2) for the t = 1 lift forces a(4) = -56 a(1)
        assert_eq!(o.coefficient(4).unwrap().as_rational(), Some(&q(-56)));
    }

    #[test]
    fn forms_and_labels() {
        let f = extract_eigenforms(12, 300).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].label, "25/2(1)");
        assert_eq!(f[1].label, "25/2(2)");
        assert!(f[0].embedding.approx() < f[1].embedding.approx());
        assert!(Arc::ptr_eq(&f[0].coeffs, &f[1].coeffs));
    }

    #[test]
    fn plus_condition_and_eigen_equation() {
        for ell in [6u32, 9, 12] {
            let o = EigenOrbit::compute(ell).unwrap();
            let n = 2000;
            let c = o.assemble(&Selection::Dense(n)).unwrap();
            for m in 0..n as u64 {
                if m == 0 || plus_forbidden(ell, m) {
                    assert_eq!(c.is_zero_at(m), Some(true), "ell {ell} n {m}");
                }
            }
            // T(p^2) f = lambda f coordinate-wise over K
            for p in [3u64, 5] {
                let lambda = o.eigenvalue(p).unwrap();
                let d = o.degree();
                let lam_alpha: Vec<AlgebraicNumber> = (0..d)
                    .map(|i| lambda.mul(&AlgebraicNumber::generator(&o.field).pow(i as u32)))
                    .collect();
                let cols: Vec<Series<Q>> = (0..d)
                    .map(|i| Series::new((0..n as u64).map(|m| c.get(m).unwrap().coords()[i].clone()).collect()))
                    .collect();
                let n_out = n / (p * p) as usize;
                let images: Vec<_> = cols.iter().map(|s| hecke_t_p2(s, p, ell, n_out).unwrap()).collect();
                for m in 0..n_out {
                    let lhs: Vec<Q> = (0..d).map(|i| images[i].coeff(m).clone()).collect();
                    let lhs = AlgebraicNumber::from_coords(&o.field, lhs);
                    let rhs = (0..d).fold(AlgebraicNumber::zero(&o.field), |acc, i| {
                        acc.add(&lam_alpha[i].scale(cols[i].coeff(m)))
                    });
                    assert_eq!(lhs, rhs, "ell {ell}, p {p}, n {m}");
                }
            }
        }
    }
}
