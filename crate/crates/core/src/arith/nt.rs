//! Small elementary number theory helpers.

/// Kronecker symbol `(a | n)` for `n >= 1`; equals the Jacobi symbol for odd
/// `n`, with `(a | 2)` given by the second supplement (0 for even `a`).
pub fn kronecker(a: i64, n: u64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut result = 1i32;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let m8 = a.rem_euclid(8);
        if tz % 2 == 1 && (m8 == 3 || m8 == 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi (a | n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn is_squarefree(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    super::modular::is_prime_u64(n)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    // Euler's criterion for odd primes
    fn legendre(a: i64, p: u64) -> i32 {
        let r = a.rem_euclid(p as i64) as u64;
        if r == 0 {
            return 0;
        }
        let mut acc = 1u64;
        for _ in 0..(p - 1) / 2 {
            acc = acc * r % p;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 29] {
            for a in -40..40 {
                assert_eq!(kronecker(a, p), legendre(a, p), "({a}|{p})");
            }
        }
    }

    #[test]
    fn multiplicative_in_the_bottom() {
        for a in [-7i64, -3, 1, 5, 13, 21] {
            for m in 1..30u64 {
                for n in 1..30u64 {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
                }
            }
        }
    }

    #[test]
    fn second_supplement() {
        assert_eq!(kronecker(1, 2), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(4, 2), 0);
        assert_eq!(kronecker(7, 1), 1);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert!(is_squarefree(30) && !is_squarefree(50) && !is_squarefree(0));
    }
}
