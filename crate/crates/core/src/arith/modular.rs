//! Multi-modular arithmetic: NTT-friendly 62-bit primes with Montgomery
//! multiplication, number-theoretic transforms for long truncated products,
//! and signed Chinese remaindering back to exact integers.
//!
//! Every prime has the form `c * 2^32 + 1`, so transforms of any length up to
//! `2^32` exist. Residues inside a transform are kept in Montgomery form.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Largest supported transform length.
pub const MAX_TRANSFORM_LOG: u32 = 32;
/// Transform levels below this span run block by block (64K words).
const BLOCK: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NttPrime {
    p: u64,
    generator: u64,
    neg_inv: u64,
    r2: u64,
}

impl NttPrime {
    fn new(p: u64) -> Self {
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r2 = ((u128::MAX % p as u128 + 1) % p as u128) as u64;
        NttPrime { p, generator: primitive_root(p), neg_inv: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        self.canon(u)
    }

    /// `x mod p` for `x < 2p`, without branches (`p < 2^62`).
    #[inline(always)]
    fn canon(&self, x: u64) -> u64 {
        let r = x.wrapping_sub(self.p);
        r.wrapping_add(self.p & ((r as i64 >> 63) as u64))
    }

    /// Montgomery product.
    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.canon(a + b)
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let r = a.wrapping_sub(b);
        r.wrapping_add(self.p & ((r as i64 >> 63) as u64))
    }

    /// Residue (plain form, `< p`) to Montgomery form.
    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    /// Montgomery form of an arbitrary integer.
    pub fn mont_of_bigint(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor_u64(self.p);
        self.to_mont(r)
    }

    pub fn mont_of_u64(&self, x: u64) -> u64 {
        self.to_mont(x % self.p)
    }

    /// Montgomery power.
    pub fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut r = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        self.mod_floor(&BigInt::from(p)).to_u64().unwrap()
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = vec![2u64];
    let mut c = (p - 1) >> (p - 1).trailing_zeros();
    let mut f = 3;
    while f * f <= c {
        if c % f == 0 {
            factors.push(f);
            while c % f == 0 {
                c /= f;
            }
        }
        f += 2;
    }
    if c > 1 {
        factors.push(c);
    }
    (2..)
        .find(|&g| factors.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1))
        .unwrap()
}

/// The fixed, ordered list of transform primes (all in `(2^61, 2^62)`).
pub fn ntt_primes() -> &'static [NttPrime] {
    static PRIMES: OnceLock<Vec<NttPrime>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut c: u64 = (1 << 30) - 1;
        while out.len() < 48 {
            let p = (c << 32) + 1;
            if is_prime_u64(p) {
                out.push(NttPrime::new(p));
            }
            c -= 1;
        }
        out
    })
}

/// Number of leading [`ntt_primes`] whose product exceeds `2 * bound`, so
/// residues determine any integer of absolute value at most `bound`.
pub fn primes_for_bound(bound: &BigInt) -> usize {
    let target = bound.abs() * 2u32;
    let mut prod = BigInt::one();
    for (i, p) in ntt_primes().iter().enumerate() {
        prod *= p.p;
        if prod > target {
            return i + 1;
        }
    }
    panic!("coefficient bound of {} bits exceeds the prime table", bound.bits());
}

/// Twiddle as a plain residue with its Shoup quotient `floor(w 2^64 / p)`.
/// Multiplying Montgomery-form data by a plain residue keeps it in
/// Montgomery form.
#[derive(Clone, Copy, Default)]
struct Twiddle {
    w: u64,
    q: u64,
}

/// Transform plan for one prime and one power-of-two length.
pub struct NttPlan {
    prime: NttPrime,
    size: usize,
    tw: Vec<Twiddle>,
    size_inv: u64,
}

impl NttPlan {
    pub fn new(prime: NttPrime, size: usize) -> Self {
        assert!(size.is_power_of_two() && size >= 2, "transform size must be a power of two");
        assert!(size.trailing_zeros() <= MAX_TRANSFORM_LOG);
        let p = prime.p;
        let g = prime.to_mont(prime.generator);
        let mut tw = vec![Twiddle::default(); size];
        // top level by powers of a primitive root; lower levels are its even
        // entries
        let half = size / 2;
        let w = prime.pow(g, (p - 1) / size as u64);
        let mut a = prime.to_mont(1);
        for j in 0..half {
            let plain = prime.from_mont(a);
            tw[half + j] = Twiddle { w: plain, q: (((plain as u128) << 64) / p as u128) as u64 };
            a = prime.mul(a, w);
        }
        let mut len = half / 2;
        while len >= 1 {
            for j in 0..len {
                tw[len + j] = tw[2 * len + 2 * j];
            }
            len /= 2;
        }
        let size_inv = prime.inv(prime.to_mont(size as u64));
        NttPlan { prime, size, tw, size_inv }
    }

    /// Smallest plan length that holds a truncated product of `n` terms.
    pub fn size_for(n: usize) -> usize {
        (2 * n).next_power_of_two().max(2)
    }

    pub fn prime(&self) -> &NttPrime {
        &self.prime
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// In-place decimation-in-frequency transform (output bit-reversed).
    pub fn forward_in_place(&self, a: &mut [u64]) {
        let mut len = self.size / 2;
        while len >= 1 && 2 * len > BLOCK {
            self.dif_level(a, len);
            len /= 2;
        }
        // the remaining levels act within blocks that stay in cache
        for block in a.chunks_exact_mut((2 * len).max(1)) {
            let mut l = len;
            while l >= 1 {
                self.dif_level(block, l);
                l /= 2;
            }
        }
        self.canonicalize(a);
    }

    /// `a w mod p` in `[0, 2p)` for any `a < 2^64`.
    #[inline(always)]
    fn shoup(&self, a: u64, t: Twiddle) -> u64 {
        let q = ((a as u128 * t.q as u128) >> 64) as u64;
        a.wrapping_mul(t.w).wrapping_sub(q.wrapping_mul(self.prime.p))
    }

    /// `x mod 2p` for `x < 4p`.
    #[inline(always)]
    fn fold2(&self, x: u64) -> u64 {
        let r = x.wrapping_sub(2 * self.prime.p);
        r.wrapping_add((2 * self.prime.p) & ((r as i64 >> 63) as u64))
    }

    fn canonicalize(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            *x = self.prime.canon(*x);
        }
    }

    // Butterflies keep values in [0, 2p).
    fn dif_level(&self, a: &mut [u64], len: usize) {
        let p2 = 2 * self.prime.p;
        let tw = &self.tw[len..2 * len];
        for chunk in a.chunks_exact_mut(2 * len) {
            let (x, y) = chunk.split_at_mut(len);
            for ((u, v), &w) in x.iter_mut().zip(y.iter_mut()).zip(tw) {
                let (s, t) = (*u, *v);
                *u = self.fold2(s + t);
                *v = self.shoup(s + p2 - t, w);
            }
        }
    }

    fn dit_level(&self, a: &mut [u64], len: usize) {
        let p2 = 2 * self.prime.p;
        let tw = &self.tw[len..2 * len];
        for chunk in a.chunks_exact_mut(2 * len) {
            let (x, y) = chunk.split_at_mut(len);
            for ((u, v), &w) in x.iter_mut().zip(y.iter_mut()).zip(tw) {
                let s = *u;
                let t = self.shoup(*v, w);
                *u = self.fold2(s + t);
                *v = self.fold2(s + p2 - t);
            }
        }
    }

    /// In-place inverse of [`Self::forward_in_place`], including the `1/n`
    /// scaling.
    pub fn inverse_in_place(&self, a: &mut [u64]) {
        let pr = &self.prime;
        let block = BLOCK.min(self.size);
        for chunk in a.chunks_exact_mut(block) {
            let mut l = 1;
            while l < block {
                self.dit_level(chunk, l);
                l *= 2;
            }
        }
        let mut len = block;
        while len < self.size {
            self.dit_level(a, len);
            len *= 2;
        }
        // with root w instead of 1/w the output comes out at index -k
        a[1..].reverse();
        for x in a.iter_mut() {
            *x = pr.mul(*x, self.size_inv);
        }
    }

    /// Forward transform of a Montgomery-form vector (zero padded).
    pub fn forward(&self, a: &[u64]) -> Vec<u64> {
        assert!(a.len() <= self.size);
        let mut buf = vec![0u64; self.size];
        buf[..a.len()].copy_from_slice(a);
        self.forward_in_place(&mut buf);
        buf
    }

    /// First `n` terms of `a * b`, where `b_hat` is a forward transform.
    pub fn mul_trunc_hat(&self, a: &[u64], b_hat: &[u64], n: usize) -> Vec<u64> {
        assert!(a.len() + n <= self.size + 1, "transform too short for the product");
        let mut buf = self.forward(&a[..a.len().min(n)]);
        for (x, &y) in buf.iter_mut().zip(b_hat) {
            *x = self.prime.mul(*x, y);
        }
        self.inverse_in_place(&mut buf);
        buf.truncate(n);
        buf
    }

    /// First `n` terms of `a * b` (both Montgomery form, length `<= n`).
    pub fn mul_trunc(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        let b_hat = self.forward(&b[..b.len().min(n)]);
        self.mul_trunc_hat(a, &b_hat, n)
    }
}

/// Chinese remaindering over the first `k` transform primes, producing the
/// representative in `(-M/2, M/2]`.
pub struct CrtBasis {
    primes: Vec<NttPrime>,
    /// `inv[i][j]` = Montgomery form of `p_j^{-1} mod p_i`, `j < i`.
    inv: Vec<Vec<u64>>,
    modulus: BigInt,
    half: BigInt,
}

impl CrtBasis {
    pub fn new(k: usize) -> Self {
        let primes: Vec<NttPrime> = ntt_primes()[..k].to_vec();
        let inv = primes
            .iter()
            .enumerate()
            .map(|(i, pi)| {
                primes[..i]
                    .iter()
                    .map(|pj| {
                        // Montgomery form of p_j^{-1}: mul by r2 twice turns inv(mont) into mont(inv)
                        let m = pi.mont_of_u64(pj.p);
                        pi.inv(m)
                    })
                    .collect()
            })
            .collect();
        let modulus = primes.iter().fold(BigInt::one(), |acc, p| acc * p.p);
        let half = &modulus >> 1usize;
        CrtBasis { primes, inv, modulus, half }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Signed integer with the given residues (plain form, one per prime).
    pub fn reconstruct(&self, residues: &[u64]) -> BigInt {
        let k = self.primes.len();
        debug_assert_eq!(residues.len(), k);
        let mut digits = [0u64; 64];
        for i in 0..k {
            let pi = &self.primes[i];
            let mut t = residues[i] % pi.p;
            for j in 0..i {
                let vj = digits[j] % pi.p;
                // (t - v_j) * p_j^{-1}; Montgomery product with a mont constant gives a plain result
                t = pi.mul(pi.sub(t, vj), self.inv[i][j]);
            }
            digits[i] = t;
        }
        if digits[..k].iter().all(|&d| d == 0) {
            return BigInt::zero();
        }
        let mut x = BigInt::from(digits[k - 1]);
        for i in (0..k - 1).rev() {
            x = x * self.primes[i].p + digits[i];
        }
        if x > self.half {
            x -= &self.modulus;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_table_is_sound() {
        let ps = ntt_primes();
        assert!(ps.len() >= 24);
        for p in ps.iter().take(8) {
            assert!(is_prime_u64(p.p));
            assert_eq!((p.p - 1) % (1u64 << 32), 0);
            assert!(p.p > 1 << 61 && p.p < 1 << 62);
            // generator has full order: g^((p-1)/2) = -1
            assert_eq!(powmod(p.generator, (p.p - 1) / 2, p.p), p.p - 1);
        }
    }

    #[test]
    fn miller_rabin_small() {
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime_u64(n), brute(n), "n = {n}");
        }
        assert!(is_prime_u64(998_244_353));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn montgomery_roundtrip() {
        let p = ntt_primes()[0];
        for x in [0u64, 1, 2, 12345, p.p - 1] {
            assert_eq!(p.from_mont(p.to_mont(x)), x);
        }
        let (a, b) = (p.to_mont(123_456_789), p.to_mont(987_654_321));
        assert_eq!(p.from_mont(p.mul(a, b)), mulmod(123_456_789, 987_654_321, p.p));
    }

    fn schoolbook(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn ntt_product_matches_schoolbook(a in prop::collection::vec(0u64..1_000_000_000_000, 1..120),
                                          b in prop::collection::vec(0u64..1_000_000_000_000, 1..120)) {
            let pr = ntt_primes()[1];
            let n = a.len().max(b.len());
            let plan = NttPlan::new(pr, NttPlan::size_for(n));
            let am: Vec<u64> = a.iter().map(|&x| pr.mont_of_u64(x)).collect();
            let bm: Vec<u64> = b.iter().map(|&x| pr.mont_of_u64(x)).collect();
            let got: Vec<u64> = plan.mul_trunc(&am, &bm, n).into_iter().map(|x| pr.from_mont(x)).collect();
            prop_assert_eq!(got, schoolbook(&a, &b, n, pr.p));
        }

        #[test]
        fn crt_recovers_signed_integers(limbs in prop::collection::vec(any::<u64>(), 1..6), neg in any::<bool>()) {
            let mut x = BigInt::zero();
            for l in &limbs {
                x = (x << 64usize) + *l;
            }
            if neg {
                x = -x;
            }
            let k = primes_for_bound(&x);
            let crt = CrtBasis::new(k);
            let res: Vec<u64> = ntt_primes()[..k].iter().map(|p| x.mod_floor_u64(p.p)).collect();
            prop_assert_eq!(crt.reconstruct(&res), x);
        }
    }

    #[test]
    fn transform_roundtrip() {
        let pr = ntt_primes()[2];
        let plan = NttPlan::new(pr, 64);
        let v: Vec<u64> = (0..64).map(|i| pr.mont_of_u64(i * i + 7)).collect();
        let mut w = v.clone();
        plan.forward_in_place(&mut w);
        plan.inverse_in_place(&mut w);
        assert_eq!(v, w);
    }
}
