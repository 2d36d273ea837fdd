use bitvec::prelude::*;

/// Bit `n` set iff `n` is squarefree, for `0 <= n <= x`.
pub fn squarefree_sieve(x: u64) -> BitVec {
    let n = x as usize;
    let mut bits = bitvec![1; n + 1];
    bits.set(0, false);
    let mut composite = bitvec![0; n.isqrt() + 1];
    for p in 2..=n.isqrt() {
        if composite[p] {
            continue;
        }
        for m in (p * p..=n.isqrt()).step_by(p) {
            composite.set(m, true);
        }
        for m in (p * p..=n).step_by(p * p) {
            bits.set(m, false);
        }
    }
    bits
}

/// Squarefree `n <= x` with `n = (-1)^ell (mod 4)`, ascending.
pub fn recorded_indices(ell: u32, x: u64) -> Vec<u64> {
    let sf = squarefree_sieve(x);
    let start = if ell % 2 == 0 { 1 } else { 3 };
    (start..=x).step_by(4).filter(|&n| sf[n as usize]).collect()
}
