//! Assembly of number-field valued q-expansions from monomial coordinates.
//!
//! A form `sum_b w_b theta^(a_b) F^b` with `w_b` in `K = Q(alpha)` is stored
//! as `a(n) = (1/D) sum_j C_j(n) alpha^j` with integer columns `C_j`. Two
//! routes produce the columns: an exact one from precomputed integer
//! monomials (small precision) and a multi-modular one that evaluates the
//! combination by Horner's rule in `F` and `G = theta^4` with number-theoretic
//! transforms and recovers `C_j` by Chinese remaindering against a rigorous
//! size bound.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::generators::{r4_table, sigma1_table};
use super::plus_space::monomial_exponents;
use crate::arith::modular::{ntt_primes, primes_for_bound, CrtBasis, NttPlan, NttPrime};
use crate::arith::{AlgebraicNumber, IntSeries, NumberField, Q};
use crate::error::{Error, Result};
use crate::exec;

/// Which coefficients an assembly produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Every index `0 <= n < N`.
    Dense(usize),
    /// The listed indices (sorted, distinct).
    Sparse(Vec<u64>),
}

impl Selection {
    pub fn sparse(mut idx: Vec<u64>) -> Self {
        idx.sort_unstable();
        idx.dedup();
        Selection::Sparse(idx)
    }

    pub fn len(&self) -> usize {
        match self {
            Selection::Dense(n) => *n,
            Selection::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Series precision needed to produce the selection.
    pub fn precision(&self) -> usize {
        match self {
            Selection::Dense(n) => *n,
            Selection::Sparse(v) => v.last().map_or(0, |&m| m as usize + 1),
        }
    }

    pub fn index(&self, k: usize) -> u64 {
        match self {
            Selection::Dense(_) => k as u64,
            Selection::Sparse(v) => v[k],
        }
    }

    pub fn position(&self, n: u64) -> Option<usize> {
        match self {
            Selection::Dense(m) => ((n as usize) < *m).then_some(n as usize),
            Selection::Sparse(v) => v.binary_search(&n).ok(),
        }
    }
}

/// Exact coefficients `a(n) = (1/D) sum_j C_j(n) alpha^j` on a selection.
#[derive(Clone, Debug)]
pub struct ExactCoefficients {
    field: Arc<NumberField>,
    den: BigInt,
    selection: Selection,
    columns: Vec<Vec<BigInt>>,
}

impl ExactCoefficients {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn selection(&self) -> &Selection {
        &self.selection
    }

    pub fn precision(&self) -> usize {
        self.selection.precision()
    }

    /// Integer numerators `C_j(n)` if `n` is selected.
    pub fn numerators(&self, n: u64) -> Option<Vec<&BigInt>> {
        let k = self.selection.position(n)?;
        Some(self.columns.iter().map(|c| &c[k]).collect())
    }

    pub fn is_zero_at(&self, n: u64) -> Option<bool> {
        self.numerators(n).map(|v| v.iter().all(|c| c.is_zero()))
    }

    pub fn get(&self, n: u64) -> Option<AlgebraicNumber> {
        let nums = self.numerators(n)?;
        let den = Q::from_integer(self.den.clone());
        let coords = nums.into_iter().map(|c| Q::from_integer(c.clone()) / &den).collect();
        Some(AlgebraicNumber::from_coords(&self.field, coords))
    }

    /// The coefficients of `s * f`.
    pub fn rescaled(&self, s: &AlgebraicNumber) -> Self {
        let d = self.field.degree();
        // column i of the multiplication-by-s matrix is s * alpha^i
        let alpha = AlgebraicNumber::generator(&self.field);
        let mut mat: Vec<Vec<Q>> = vec![vec![Q::zero(); d]; d];
        let mut pw = AlgebraicNumber::one(&self.field);
        for i in 0..d {
            let col = s.mul(&pw);
            for (j, c) in col.coords().iter().enumerate() {
                mat[j][i] = c.clone();
            }
            pw = pw.mul(&alpha);
        }
        let l = mat.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let imat: Vec<Vec<BigInt>> = mat
            .iter()
            .map(|row| row.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect())
            .collect();
        let len = self.selection.len();
        let columns: Vec<Vec<BigInt>> = (0..d)
            .map(|j| {
                exec::map_range(len, |k| {
                    (0..d).fold(BigInt::zero(), |acc, i| acc + &imat[j][i] * &self.columns[i][k])
                })
            })
            .collect();
        let mut out = ExactCoefficients {
            field: self.field.clone(),
            den: &self.den * l,
            selection: self.selection.clone(),
            columns,
        };
        out.reduce();
        out
    }

    fn reduce(&mut self) {
        let mut g = self.den.clone();
        for c in self.columns.iter().flatten() {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.columns.iter_mut().flatten() {
                *c /= &g;
            }
        }
    }
}

/// Common denominator `D` and integer matrix `W[b][j] = D * coord_j(w_b)`.
pub fn integer_weights(w: &[AlgebraicNumber]) -> (BigInt, Vec<Vec<BigInt>>) {
    let den = w.iter().flat_map(|x| x.coords()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let dq = Q::from_integer(den.clone());
    let d = w[0].field().degree();
    let mat = w
        .iter()
        .map(|x| (0..d).map(|j| (&x.coords()[j] * &dq).to_integer()).collect())
        .collect();
    (den, mat)
}

/// Exact route: combine precomputed integer monomials.
pub fn assemble_exact(monomials: &[IntSeries], w: &[AlgebraicNumber], selection: &Selection) -> Result<ExactCoefficients> {
    let need = selection.precision();
    let have = monomials[0].precision();
    if have < need {
        return Err(Error::Precision { required: need, available: have });
    }
    let field = w[0].field().clone();
    let (den, mat) = integer_weights(w);
    let d = field.degree();
    let columns = (0..d)
        .map(|j| {
            exec::map_range(selection.len(), |k| {
                let n = selection.index(k) as usize;
                mat.iter().zip(monomials).fold(BigInt::zero(), |acc, (row, m)| acc + &row[j] * m.coeff(n))
            })
        })
        .collect();
    let mut out = ExactCoefficients { field, den, selection: selection.clone(), columns };
    out.reduce();
    Ok(out)
}

/// Bound on `|C_j(n)|`, `n < N`, from `sum |coef(theta)| <= 1 + 2 sqrt(N)` and
/// `sum |coef(F)| < N^2`.
pub fn column_bound(ell: u32, mat: &[Vec<BigInt>], n: usize) -> BigInt {
    let exps = monomial_exponents(ell);
    let st = BigInt::from(1 + 2 * (n as u64).isqrt());
    let sf = BigInt::from(n as u64).pow(2);
    let d = mat[0].len();
    (0..d)
        .map(|j| {
            exps.iter()
                .zip(mat)
                .fold(BigInt::zero(), |acc, (&(a, b), row)| acc + row[j].abs() * st.pow(a) * sf.pow(b))
        })
        .max()
        .unwrap()
}

/// Multi-modular route.
pub fn assemble_modular(ell: u32, w: &[AlgebraicNumber], selection: &Selection) -> Result<ExactCoefficients> {
    assemble_modular_with(ell, w, selection, None)
}

/// Multi-modular route with a fixed per-prime scheme (`None` picks the
/// cheaper one).
pub fn assemble_modular_with(
    ell: u32,
    w: &[AlgebraicNumber],
    selection: &Selection,
    scheme: Option<Scheme>,
) -> Result<ExactCoefficients> {
    let n = selection.precision();
    let field = w[0].field().clone();
    let d = field.degree();
    let (den, mat) = integer_weights(w);
    if n == 0 {
        let columns = vec![Vec::new(); d];
        return Ok(ExactCoefficients { field, den, selection: selection.clone(), columns });
    }
    let exps = monomial_exponents(ell);
    if exps.len() != mat.len() {
        return Err(Error::InvalidArgument("monomial coordinate count does not match ell".into()));
    }
    let k = primes_for_bound(&column_bound(ell, &mat, n));
    let sigma = sigma1_table(n);
    let r4 = r4_table(n);
    let a0 = exps[exps.len() - 1].0;
    let scheme = scheme.unwrap_or_else(|| Scheme::choose(ell, d, n));
    let per_prime: Vec<Vec<Vec<u64>>> = exec::map_range(k, |i| {
        let inputs = PrimeInputs::new(i, a0, &sigma, &r4);
        match scheme {
            Scheme::Horner => columns_horner(&inputs, &mat, selection),
            Scheme::Pointwise => columns_pointwise(&inputs, &mat, selection),
        }
    });
    drop(sigma);
    drop(r4);
    let crt = CrtBasis::new(k);
    let columns = (0..d)
        .map(|j| {
            exec::map_range(selection.len(), |s| {
                let res: Vec<u64> = per_prime.iter().map(|pp| pp[j][s]).collect();
                crt.reconstruct(&res)
            })
        })
        .collect();
    let mut out = ExactCoefficients { field, den, selection: selection.clone(), columns };
    out.reduce();
    Ok(out)
}

/// Rough peak heap use in bytes of [`assemble_modular`] with one transform
/// in flight: the per-prime working vectors, the residue tables of every
/// prime and the reconstructed columns.
pub fn assembly_memory_estimate(ell: u32, w: &[AlgebraicNumber], selection: &Selection) -> u64 {
    let n = selection.precision();
    if n == 0 {
        return 0;
    }
    let d = w[0].field().degree() as u64;
    let (_, mat) = integer_weights(w);
    let bound = column_bound(ell, &mat, n);
    let k = primes_for_bound(&bound) as u64;
    let len = selection.len() as u64;
    let working = match Scheme::choose(ell, d as usize, n) {
        Scheme::Horner => 8 * ((6 + d) * n as u64 + 5 * NttPlan::size_for(n) as u64),
        Scheme::Pointwise => 8 * (4 + d) * Scheme::pointwise_size(ell, n) as u64,
    };
    let residues = 8 * k * d * len;
    let columns = d * len * (32 + bound.bits() / 16);
    working + residues + columns
}

/// Per-prime evaluation scheme of the monomial combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Horner's rule in `F` with truncated products of length `2N`.
    Horner,
    /// One transform of `F`, `G`, `theta` long enough for the untruncated
    /// product, pointwise combination, one inverse per column.
    Pointwise,
}

/// Upper limit on the working set of one pointwise transform.
pub const POINTWISE_MEMORY_LIMIT: u64 = 2 << 30;

impl Scheme {
    fn pointwise_size(ell: u32, n: usize) -> usize {
        let exps = monomial_exponents(ell);
        let (a0, big_b) = (exps[exps.len() - 1].0 as usize, exps.len() - 1);
        ((big_b + a0) * n.saturating_sub(1) + 1).next_power_of_two().max(2)
    }

    /// The cheaper scheme in butterfly units, subject to the memory limit.
    pub fn choose(ell: u32, d: usize, n: usize) -> Scheme {
        let big_b = monomial_exponents(ell).len() - 1;
        let ntt = |size: usize| (size / 2) as f64 * size.trailing_zeros() as f64;
        let s2 = NttPlan::size_for(n);
        let horner = (2 * big_b.saturating_sub(1) * (d + 1) + 5) as f64 * ntt(s2);
        let sp = Self::pointwise_size(ell, n);
        let pointwise = (3 + d) as f64 * ntt(sp) + (sp * big_b * (1 + 2 * d)) as f64 / 2.0;
        let bytes = 8 * (4 + d as u64) * sp as u64;
        if pointwise < horner && bytes <= POINTWISE_MEMORY_LIMIT {
            Scheme::Pointwise
        } else {
            Scheme::Horner
        }
    }
}

/// `F`, `G = theta^4` and `theta` modulo one transform prime, Montgomery form.
struct PrimeInputs {
    pr: NttPrime,
    a0: u32,
    f: Vec<u64>,
    g: Vec<u64>,
    theta: Vec<u64>,
}

impl PrimeInputs {
    fn new(i: usize, a0: u32, sigma: &[u64], r4: &[u64]) -> Self {
        let pr = ntt_primes()[i];
        let n = sigma.len();
        let f = (0..n).map(|m| if m % 2 == 1 { pr.mont_of_u64(sigma[m]) } else { 0 }).collect();
        let g = r4.iter().map(|&x| pr.mont_of_u64(x)).collect();
        let mut theta = vec![0u64; n];
        theta[0] = pr.mont_of_u64(1);
        let two = pr.mont_of_u64(2);
        let mut m = 1usize;
        while m * m < n {
            theta[m * m] = two;
            m += 1;
        }
        PrimeInputs { pr, a0, f, g, theta }
    }

    fn weights(&self, mat: &[Vec<BigInt>]) -> Vec<Vec<u64>> {
        mat.iter().map(|row| row.iter().map(|x| self.pr.mont_of_bigint(x)).collect()).collect()
    }

    fn read(&self, c: &[u64], selection: &Selection) -> Vec<u64> {
        (0..selection.len()).map(|s| self.pr.from_mont(c[selection.index(s) as usize])).collect()
    }
}

fn columns_horner(inp: &PrimeInputs, mat: &[Vec<BigInt>], selection: &Selection) -> Vec<Vec<u64>> {
    let pr = inp.pr;
    let n = inp.f.len();
    let plan = NttPlan::new(pr, NttPlan::size_for(n));
    let th_hat = plan.forward(&inp.theta);
    let t_hat = if inp.a0 == 1 {
        th_hat
    } else {
        let sq = plan.mul_trunc_hat(&inp.theta, &th_hat, n);
        let cube = plan.mul_trunc_hat(&sq, &th_hat, n);
        plan.forward(&cube)
    };
    let f_hat = plan.forward(&inp.f);
    let g_hat = plan.forward(&inp.g);
    let big_b = mat.len() - 1;
    let d = mat[0].len();
    let wm = inp.weights(mat);
    let mut qs: Vec<Vec<u64>> = (0..d)
        .map(|j| {
            let (wb, wb1) = (wm[big_b][j], wm[big_b - 1][j]);
            inp.f.iter().zip(&inp.g).map(|(&x, &y)| pr.add(pr.mul(wb, x), pr.mul(wb1, y))).collect()
        })
        .collect();
    let mut gpow = inp.g.clone();
    for b in (0..big_b.saturating_sub(1)).rev() {
        gpow = plan.mul_trunc_hat(&gpow, &g_hat, n);
        for (j, q) in qs.iter_mut().enumerate() {
            let mut next = plan.mul_trunc_hat(q, &f_hat, n);
            let wbj = wm[b][j];
            for (x, &y) in next.iter_mut().zip(&gpow) {
                *x = pr.add(*x, pr.mul(wbj, y));
            }
            *q = next;
        }
    }
    drop(gpow);
    drop(f_hat);
    drop(g_hat);
    qs.iter().map(|q| inp.read(&plan.mul_trunc_hat(q, &t_hat, n), selection)).collect()
}

fn columns_pointwise(inp: &PrimeInputs, mat: &[Vec<BigInt>], selection: &Selection) -> Vec<Vec<u64>> {
    let pr = inp.pr;
    let n = inp.f.len();
    let big_b = mat.len() - 1;
    let ell = (4 * big_b as u32 + inp.a0 - 1) / 2;
    let plan = NttPlan::new(pr, Scheme::pointwise_size(ell, n));
    let d = mat[0].len();
    let wm = inp.weights(mat);
    let mut acc: Vec<Vec<u64>> = {
        let f_hat = plan.forward(&inp.f);
        let g_hat = plan.forward(&inp.g);
        let mut acc = vec![vec![0u64; plan.size()]; d];
        let mut h = vec![0u64; d];
        for (i, (&x, &y)) in f_hat.iter().zip(&g_hat).enumerate() {
            // sum_b W_bj y^(B-b) x^b by Horner in x
            h.copy_from_slice(&wm[big_b]);
            let mut gp = y;
            for b in (0..big_b).rev() {
                for (hj, &w) in h.iter_mut().zip(&wm[b]) {
                    *hj = pr.add(pr.mul(*hj, x), pr.mul(w, gp));
                }
                gp = pr.mul(gp, y);
            }
            for (col, &hj) in acc.iter_mut().zip(&h) {
                col[i] = hj;
            }
        }
        acc
    };
    let th_hat = plan.forward(&inp.theta);
    for col in acc.iter_mut() {
        for (x, &t) in col.iter_mut().zip(&th_hat) {
            let t3 = if inp.a0 == 1 { t } else { pr.mul(t, pr.mul(t, t)) };
            *x = pr.mul(*x, t3);
        }
    }
    drop(th_hat);
    acc.iter_mut()
        .map(|col| {
            plan.inverse_in_place(col);
            inp.read(col, selection)
        })
        .collect()
}
