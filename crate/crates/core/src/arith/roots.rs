//! Real root isolation with Sturm sequences and certified refinement.
//!
//! Intervals are kept with dyadic endpoints. Refinement bisects until the
//! interval is narrow relative to its midpoint, then switches to Newton steps
//! whose result is accepted only when a sign change brackets it.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{sturm_count, QPoly};
use super::Q;

/// Minimum number of certified significant digits for an embedding.
pub const MIN_DIGITS: u32 = 10;

/// An isolating interval `(lo, hi)` for one real root of a squarefree
/// polynomial. Either `lo < hi` with a sign change and exactly one root
/// inside, or `lo == hi` equal to a rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
}

/// A real embedding of `Q[x]/(f)`: one real root of `f` pinned down by an
/// isolating interval of relative width below `10^-digits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEmbedding {
    poly: QPoly,
    interval: RootInterval,
    digits: u32,
}

impl RealEmbedding {
    /// The squarefree polynomial whose root this is.
    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Q {
        &self.interval.lo
    }

    pub fn hi(&self) -> &Q {
        &self.interval.hi
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Midpoint as a float (good to the certified digits).
    pub fn approx(&self) -> f64 {
        let mid = (&self.interval.lo + &self.interval.hi) / Q::from_integer(BigInt::from(2));
        rational_to_f64(&mid)
    }

    /// Same root, interval narrowed to absolute width below `2^-bits`.
    pub fn refined_to_bits(&self, bits: u64) -> RootInterval {
        let mut iv = self.interval.clone();
        let tol = Q::new(BigInt::one(), BigInt::one() << bits);
        refine(&self.poly, &mut iv, |lo, hi| hi - lo < tol);
        iv
    }

    /// Number of distinct roots of the polynomial in the closed interval;
    /// exactly one for a valid embedding.
    pub fn sturm_count(&self) -> usize {
        let seq = self.poly.sturm_sequence();
        let eps = Q::new(BigInt::one(), BigInt::one() << 1024u32);
        if self.interval.lo == self.interval.hi {
            return sturm_count(&seq, &(&self.interval.lo - &eps), &self.interval.hi);
        }
        sturm_count(&seq, &self.interval.lo, &self.interval.hi)
    }
}

/// All real roots of `f`, ascending, each refined to relative width below
/// `10^-digits` (`digits` is raised to at least [`MIN_DIGITS`]).
pub fn isolate_real_roots(f: &QPoly, digits: u32) -> Vec<RealEmbedding> {
    let digits = digits.max(MIN_DIGITS);
    let g = f.squarefree_part();
    let scale = Q::from_integer(BigInt::from(10u32).pow(digits));
    let zero_is_root = g.coeff(0).is_zero();
    isolate(&g)
        .into_iter()
        .map(|mut iv| {
            refine(&g, &mut iv, |lo, hi| {
                let same_side = (lo.is_positive() && hi.is_positive()) || (lo.is_negative() && hi.is_negative());
                if !same_side {
                    // only a zero root may keep straddling 0; it gets an absolute width
                    return zero_is_root && (hi - lo) * &scale < Q::one();
                }
                (hi - lo) * &scale < lo.abs().min(hi.abs())
            });
            RealEmbedding { poly: g.clone(), interval: iv, digits }
        })
        .collect()
}

/// All real roots of `f`, ascending, with absolute width below `2^-bits`.
pub fn isolate_real_roots_bits(f: &QPoly, bits: u64) -> Vec<RootInterval> {
    let g = f.squarefree_part();
    let tol = Q::new(BigInt::one(), BigInt::one() << bits);
    isolate(&g)
        .into_iter()
        .map(|mut iv| {
            refine(&g, &mut iv, |lo, hi| hi - lo < tol);
            iv
        })
        .collect()
}

fn two() -> Q {
    Q::from_integer(BigInt::from(2))
}

/// Isolating intervals for the roots of a squarefree `g`.
fn isolate(g: &QPoly) -> Vec<RootInterval> {
    if g.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = g.sturm_sequence();
    // power-of-two bound keeps every endpoint dyadic
    let bound = g.root_bound();
    let mut b = Q::one();
    while b < bound {
        b *= two();
    }
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((a, c)) = stack.pop() {
        let n = sturm_count(&seq, &a, &c);
        match n {
            0 => {}
            1 => out.push(settle(g, &seq, a, c)),
            _ => {
                let m = (&a + &c) / two();
                stack.push((m.clone(), c));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Turns `(a, c]` holding exactly one root into an interval with nonzero,
/// opposite endpoint signs, or an exact rational root.
fn settle(g: &QPoly, seq: &[QPoly], mut a: Q, mut c: Q) -> RootInterval {
    loop {
        if g.sign_at(&c) == 0 {
            return RootInterval { lo: c.clone(), hi: c };
        }
        let sa = g.sign_at(&a);
        if sa != 0 {
            return RootInterval { lo: a, hi: c };
        }
        let m = (&a + &c) / two();
        if g.sign_at(&m) == 0 {
            return RootInterval { lo: m.clone(), hi: m };
        }
        if sturm_count(seq, &a, &m) == 1 {
            c = m;
        } else {
            a = m;
        }
    }
}

/// Narrows `iv` until `done(lo, hi)` holds.
fn refine(g: &QPoly, iv: &mut RootInterval, done: impl Fn(&Q, &Q) -> bool) {
    if iv.lo == iv.hi {
        widen_exact(g, iv, &done);
        return;
    }
    let dg = g.derivative();
    let slo = g.sign_at(&iv.lo);
    let mut newton_shift: u32 = 4;
    while !done(&iv.lo, &iv.hi) {
        let w = &iv.hi - &iv.lo;
        let mid = (&iv.lo + &iv.hi) / two();
        let narrow = w.clone() * Q::from_integer(BigInt::from(1000)) < mid.abs();
        if narrow {
            if let Some(next) = newton_bracket(g, &dg, iv, &mid, &w, newton_shift, slo) {
                *iv = next;
                if iv.lo == iv.hi {
                    widen_exact(g, iv, &done);
                    return;
                }
                newton_shift = newton_shift.saturating_mul(2).min(1 << 16);
                continue;
            }
            newton_shift = (newton_shift / 2).max(1);
        }
        let sm = g.sign_at(&mid);
        if sm == 0 {
            *iv = RootInterval { lo: mid.clone(), hi: mid };
            widen_exact(g, iv, &done);
            return;
        }
        if sm == slo {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
}

fn newton_bracket(g: &QPoly, dg: &QPoly, iv: &RootInterval, mid: &Q, w: &Q, shift: u32, slo: i32) -> Option<RootInterval> {
    let d = dg.eval(mid);
    if d.is_zero() {
        return None;
    }
    let x = mid - g.eval(mid) / d;
    let delta = w / Q::from_integer(BigInt::one() << shift);
    let grid = &delta / Q::from_integer(BigInt::from(4));
    let x = (&x / &grid).round() * &grid;
    let (lo, hi) = (&x - &delta, &x + &delta);
    if lo <= iv.lo || hi >= iv.hi {
        return None;
    }
    let (sl, sh) = (g.sign_at(&lo), g.sign_at(&hi));
    if sl == 0 {
        return Some(RootInterval { lo: lo.clone(), hi: lo });
    }
    if sh == 0 {
        return Some(RootInterval { lo: hi.clone(), hi });
    }
    // one simple root in iv: a sign change on [lo, hi] pins it there
    (sl == slo && sh != slo).then_some(RootInterval { lo, hi })
}

/// Replaces an exact rational root `r` by `(r - eps, r + eps)` with `eps`
/// small enough that the interval still isolates `r` and meets `done`.
fn widen_exact(g: &QPoly, iv: &mut RootInterval, done: &impl Fn(&Q, &Q) -> bool) {
    let r = iv.lo.clone();
    let seq = g.sturm_sequence();
    let mut k: u32 = 1;
    loop {
        let eps = Q::new(BigInt::one(), BigInt::one() << k);
        let (lo, hi) = (&r - &eps, &r + &eps);
        if g.sign_at(&lo) != 0
            && g.sign_at(&hi) != 0
            && sturm_count(&seq, &lo, &hi) == 1
            && done(&lo, &hi)
        {
            *iv = RootInterval { lo, hi };
            return;
        }
        k += 1;
    }
}

/// Float approximation of a rational (relative error ~1e-16).
pub fn rational_to_f64(x: &Q) -> f64 {
    let (mn, en) = bigint_to_mantissa(x.numer());
    let (md, ed) = bigint_to_mantissa(x.denom());
    (mn / md) * 2f64.powi((en - ed) as i32)
}

/// `(m, e)` with `x = m * 2^e` approximately and `|m| < 2^63`.
pub fn bigint_to_mantissa(x: &BigInt) -> (f64, i64) {
    let bits = x.bits() as i64;
    if bits <= 63 {
        return (x.to_f64().unwrap_or(0.0), 0);
    }
    let shift = bits - 63;
    ((x >> shift as usize).to_f64().unwrap(), shift)
}

/// Certified enclosure of `sum_j c_j * alpha^j` for an embedded `alpha`,
/// computed in fixed point with `bits` fractional bits.
pub struct FixedPointPowers {
    bits: u64,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

impl FixedPointPowers {
    pub fn new(emb: &RealEmbedding, degree: usize, bits: u64) -> Self {
        let iv = emb.refined_to_bits(bits + 8 * degree as u64 + 8);
        let scale = Q::from_integer(BigInt::one() << bits);
        let (mut plo, mut phi) = (Q::one(), Q::one());
        let mut lo = Vec::with_capacity(degree);
        let mut hi = Vec::with_capacity(degree);
        for _ in 0..degree {
            lo.push((&plo * &scale).floor().to_integer());
            hi.push((&phi * &scale).ceil().to_integer());
            let cands = [&plo * &iv.lo, &plo * &iv.hi, &phi * &iv.lo, &phi * &iv.hi];
            plo = cands.iter().min().unwrap().clone();
            phi = cands.iter().max().unwrap().clone();
        }
        FixedPointPowers { bits, lo, hi }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Enclosure `[lo, hi] * 2^-bits` of `sum_j coords[j] * alpha^j`.
    pub fn enclose(&self, coords: &[BigInt]) -> (BigInt, BigInt) {
        let mut s_lo = BigInt::zero();
        let mut s_hi = BigInt::zero();
        for (c, (l, h)) in coords.iter().zip(self.lo.iter().zip(&self.hi)) {
            if c.is_negative() {
                s_lo += c * h;
                s_hi += c * l;
            } else {
                s_lo += c * l;
                s_hi += c * h;
            }
        }
        (s_lo, s_hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    #[test]
    fn linear_root() {
        let r = isolate_real_roots(&QPoly::from_ints(&[-2, 1]), 10);
        assert_eq!(r.len(), 1);
        let e = &r[0];
        assert!(e.lo() < &q(2) && e.hi() > &q(2));
        assert!((e.hi() - e.lo()) * q(10_000_000_000) < q(2));
        assert_eq!(e.sturm_count(), 1);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&QPoly::from_ints(&[1, 0, 1]), 10).is_empty());
    }

    #[test]
    fn sqrt_five_endpoints_straddle() {
        let r = isolate_real_roots(&QPoly::from_ints(&[-5, 0, 1]), 12);
        assert_eq!(r.len(), 2);
        for (e, expect) in r.iter().zip([-2.236_067_977_499_79, 2.236_067_977_499_79]) {
            // endpoints square to either side of 5
            let (lo2, hi2) = (e.lo() * e.lo(), e.hi() * e.hi());
            assert!((lo2 < q(5)) != (hi2 < q(5)));
            assert!((e.approx() - expect).abs() < 1e-11);
            assert_eq!(e.sturm_count(), 1);
            assert_ne!(e.poly().sign_at(e.lo()), e.poly().sign_at(e.hi()));
        }
    }

    #[test]
    fn repeated_roots_are_reduced() {
        // (x-1)^2 (x+3)
        let f = QPoly::from_ints(&[3, -5, 1, 1]);
        let r = isolate_real_roots(&f, 10);
        assert_eq!(r.len(), 2);
        assert!((r[0].approx() + 3.0).abs() < 1e-9);
        assert!((r[1].approx() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn clustered_roots_separate() {
        // roots 1/1000 and 2/1000 and -7
        let f = QPoly::new(vec![qfrac(1, 1000), q(-1)])
            .mul(&QPoly::new(vec![qfrac(-2, 1000), q(1)]))
            .mul(&QPoly::from_ints(&[7, 1]));
        let r = isolate_real_roots(&f, 15);
        let v: Vec<f64> = r.iter().map(RealEmbedding::approx).collect();
        assert_eq!(v.len(), 3);
        assert!((v[0] + 7.0).abs() < 1e-12 && (v[1] - 0.001).abs() < 1e-15 && (v[2] - 0.002).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_enclosure() {
        let e = isolate_real_roots(&QPoly::from_ints(&[-5, 0, 1]), 10).pop().unwrap();
        let fp = FixedPointPowers::new(&e, 2, 80);
        // 3 + 2*sqrt5
        let (lo, hi) = fp.enclose(&[BigInt::from(3), BigInt::from(2)]);
        let v = rational_to_f64(&Q::new(lo.clone(), BigInt::one() << 80u32));
        assert!((v - (3.0 + 2.0 * 5f64.sqrt())).abs() < 1e-14);
        assert!(hi - lo < BigInt::from(64));
    }
}
