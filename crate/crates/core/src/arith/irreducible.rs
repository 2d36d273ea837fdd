//! Irreducibility certificates for rational polynomials.
//!
//! A polynomial is certified irreducible when some reduction modulo a small
//! prime is irreducible, or when the factor-degree patterns of several
//! reductions leave no room for a proper factor over the rationals. It is
//! certified reducible by an exact rational root. Anything else is reported
//! as undetermined; callers must not guess.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::QPoly;
use crate::error::{Error, Result};

/// Primes tried first, in order.
pub const CERTIFICATE_PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Further primes tried when the first batch gives no certificate.
const EXTENDED_PRIME_LIMIT: u64 = 400;

/// Certified irreducibility over the rationals.
///
/// Returns `Ok(true)` for a certificate of irreducibility, `Ok(false)` when a
/// rational root exists, and [`Error::IrreducibilityUndetermined`] otherwise.
pub fn is_irreducible(f: &QPoly) -> Result<bool> {
    let d = match f.degree() {
        None | Some(0) => {
            return Err(Error::InvalidArgument("irreducibility of a constant polynomial".into()))
        }
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let ints = f.primitive_integer();
    let full: BTreeSet<usize> = (0..=d).collect();
    let mut possible = full;

    let try_prime = |p: u64, possible: &mut BTreeSet<usize>| -> Option<bool> {
        let lc = ints.last().unwrap();
        if (lc % BigInt::from(p)).is_zero() {
            return None;
        }
        let fp = ModPoly::from_bigints(&ints, p);
        if !fp.is_squarefree() {
            return None;
        }
        let pattern = fp.factor_degrees();
        if pattern.len() == 1 {
            return Some(true);
        }
        let sums = subset_sums(&pattern);
        possible.retain(|k| sums.contains(k));
        None
    };

    for &p in &CERTIFICATE_PRIMES {
        if let Some(true) = try_prime(p, &mut possible) {
            return Ok(true);
        }
    }
    if has_rational_root(f) {
        return Ok(false);
    }
    if d <= 3 {
        // a proper factor would be linear
        return Ok(true);
    }
    if possible.len() == 2 {
        return Ok(true);
    }
    for p in (29..=EXTENDED_PRIME_LIMIT).filter(|&p| is_small_prime(p)) {
        if let Some(true) = try_prime(p, &mut possible) {
            return Ok(true);
        }
        if possible.len() == 2 {
            return Ok(true);
        }
    }
    Err(Error::IrreducibilityUndetermined { poly: f.to_string() })
}

fn subset_sums(parts: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &p in parts {
        let next: Vec<usize> = sums.iter().map(|s| s + p).collect();
        sums.extend(next);
    }
    sums
}

fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Complete rational root test: a rational root `r` of a primitive integer
/// polynomial with leading coefficient `c` has `c*r` integral, so isolating
/// every real root to width below `1/(2c)` and rounding settles it exactly.
pub fn has_rational_root(f: &QPoly) -> bool {
    rational_roots(f).next().is_some()
}

pub fn rational_roots(f: &QPoly) -> impl Iterator<Item = BigRational> {
    let ints = f.primitive_integer();
    let lc = ints.last().cloned().unwrap_or_else(|| BigInt::from(1)).abs();
    let g = QPoly::from_bigints(&ints);
    let mut found = Vec::new();
    if ints.first().is_some_and(|c| c.is_zero()) {
        found.push(BigRational::zero());
    }
    let lcq = BigRational::from_integer(lc.clone());
    let tol_bits = lc.bits() + 2;
    for root in super::roots::isolate_real_roots_bits(&g, tol_bits) {
        let mid = (&root.lo + &root.hi) / BigRational::from_integer(BigInt::from(2));
        let k = (&mid * &lcq).round();
        let cand = k / &lcq;
        if g.eval(&cand).is_zero() && !found.contains(&cand) {
            found.push(cand);
        }
    }
    found.into_iter()
}

/// Dense polynomial over `F_p` for small `p`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModPoly {
    p: u64,
    c: Vec<u64>,
}

impl ModPoly {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    pub(crate) fn from_bigints(ints: &[BigInt], p: u64) -> Self {
        let pb = BigInt::from(p);
        let c = ints.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect();
        Self::new(p, c)
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.p as i128) as u64
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = self.inv(lc);
                Self::new(self.p, self.c.iter().map(|&x| self.mulm(x, inv)).collect())
            }
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Self::new(self.p, vec![]);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulm(a, b)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.deg().expect("division by zero");
        let inv = self.inv(*d.c.last().unwrap());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = self.mulm(r[k + dd], inv);
            q[k] = coef;
            if coef != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + self.p - self.mulm(coef, dj)) % self.p;
                }
            }
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.c.is_empty() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, &x)| self.mulm(x, i as u64 % self.p)).collect();
        Self::new(self.p, c)
    }

    fn is_squarefree(&self) -> bool {
        match self.deg() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.c.is_empty() && self.gcd(&d).deg() == Some(0)
            }
        }
    }

    /// `base^e mod m`.
    fn pow_mod(&self, e: u64, m: &Self) -> Self {
        let mut result = Self::new(self.p, vec![1]);
        let mut base = self.div_rem(m).1;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).div_rem(m).1;
            }
            base = base.mul(&base).div_rem(m).1;
            e >>= 1;
        }
        result
    }

    /// Degrees of the irreducible factors of a squarefree polynomial
    /// (distinct-degree factorisation).
    pub(crate) fn factor_degrees(&self) -> Vec<usize> {
        let mut f = self.monic();
        let x = Self::new(self.p, vec![0, 1]);
        let mut h = x.clone();
        let mut degrees = Vec::new();
        let mut i = 1;
        while let Some(df) = f.deg() {
            if df < 2 * i {
                if df > 0 {
                    degrees.push(df);
                }
                break;
            }
            h = h.pow_mod(self.p, &f);
            let g = h.sub(&x).gcd(&f);
            let dg = g.deg().unwrap_or(0);
            if dg > 0 {
                degrees.extend(std::iter::repeat_n(i, dg / i));
                f = f.div_rem(&g).0;
                h = h.div_rem(&f).1;
            }
            i += 1;
        }
        degrees
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn examples() {
        assert!(is_irreducible(&QPoly::from_ints(&[-2, 1])).unwrap());
        assert!(!is_irreducible(&QPoly::from_ints(&[-1, 0, 1])).unwrap());
        assert!(is_irreducible(&QPoly::from_ints(&[-5, 0, 1])).unwrap());
    }

    #[test]
    fn five_is_a_non_residue_mod_seven() {
        // squares mod 7 are {0,1,2,4}
        let squares: BTreeSet<u64> = (0..7).map(|x| x * x % 7).collect();
        assert!(!squares.contains(&5));
        let f = ModPoly::from_bigints(&[BigInt::from(-5), BigInt::from(0), BigInt::from(1)], 7);
        assert_eq!(f.factor_degrees(), vec![2]);
    }

    #[test]
    fn factor_degree_patterns() {
        // (x-1)(x-2)(x^2+1) mod 7: x^2+1 irreducible since -1 is a non-residue
        let f = QPoly::from_ints(&[-1, 1])
            .mul(&QPoly::from_ints(&[-2, 1]))
            .mul(&QPoly::from_ints(&[1, 0, 1]));
        let fp = ModPoly::from_bigints(&f.primitive_integer(), 7);
        let mut d = fp.factor_degrees();
        d.sort();
        assert_eq!(d, vec![1, 1, 2]);
    }

    #[test]
    fn product_of_quadratics_is_reducible_or_undetermined() {
        // (x^2-2)(x^2-3) has no rational root and every reduction splits
        let f = QPoly::from_ints(&[-2, 0, 1]).mul(&QPoly::from_ints(&[-3, 0, 1]));
        match is_irreducible(&f) {
            Err(Error::IrreducibilityUndetermined { .. }) => {}
            other => panic!("must not certify a reducible quartic: {other:?}"),
        }
    }

    #[test]
    fn cubic_without_rational_root_is_irreducible() {
        assert!(is_irreducible(&QPoly::from_ints(&[-2, 0, 0, 1])).unwrap());
        assert!(!is_irreducible(&QPoly::from_ints(&[-8, 0, 0, 1])).unwrap());
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (2x - 3)(x + 5)
        let f = QPoly::from_ints(&[-15, 7, 2]);
        let mut r: Vec<_> = rational_roots(&f).collect();
        r.sort();
        assert_eq!(r, vec![q(-5), crate::arith::qfrac(3, 2)]);
    }

    #[test]
    fn quintic_with_galois_group_s5() {
        // x^5 - x - 1 is irreducible
        assert!(is_irreducible(&QPoly::from_ints(&[-1, -1, 0, 0, 0, 1])).unwrap());
    }
}
