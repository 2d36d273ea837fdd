//! Dense truncated power series with exact coefficients.
//!
//! Products use schoolbook multiplication below [`KARATSUBA_THRESHOLD`]
//! terms and Karatsuba above it. The top levels of the Karatsuba recursion
//! fork through [`crate::exec::join`]; the arithmetic is exact so the result
//! does not depend on scheduling.

use std::ops::{AddAssign, Mul, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec;

/// Below this many terms products fall back to schoolbook multiplication.
pub const KARATSUBA_THRESHOLD: usize = 64;

/// Recursion levels above this size are forked onto the worker pool.
const PARALLEL_THRESHOLD: usize = 2048;

/// Coefficient rings usable in [`Series`].
pub trait Ring:
    Clone + Zero + One + PartialEq + Send + Sync + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
where
    for<'a> &'a Self: Mul<&'a Self, Output = Self>,
{
}

impl Ring for BigInt {}
impl Ring for BigRational {}

/// Truncated power series `c_0 + c_1 q + ... + c_{N-1} q^{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

/// Series with exact rational coefficients.
pub type ExactSeries = Series<BigRational>;
/// Series with integer coefficients (theta/F monomials live here).
pub type IntSeries = Series<BigInt>;

impl<T> Series<T>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Builds a series from its first `coeffs.len()` coefficients.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "series precision must be positive");
        Series { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        Self::new(vec![T::zero(); precision])
    }

    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = T::one();
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.precision() {
            return Err(Error::Precision { required: n.max(1), available: self.precision() });
        }
        Ok(Series::new(self.coeffs[..n].to_vec()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Series::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `self + c * other` on the common precision.
    pub fn add_scaled(&self, c: &T, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let mut out = self.coeffs[..n].to_vec();
        for (o, x) in out.iter_mut().zip(&other.coeffs[..n]) {
            *o += &(c * x);
        }
        Series::new(out)
    }
}

impl IntSeries {
    pub fn to_rational(&self) -> ExactSeries {
        Series::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

/// Product of `a` and `b` truncated to `n` terms.
pub fn series_mul<T>(a: &Series<T>, b: &Series<T>, n: usize) -> Result<Series<T>>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let have = a.precision().min(b.precision());
    if n == 0 || have < n {
        return Err(Error::Precision { required: n.max(1), available: have });
    }
    Ok(Series::new(mul_trunc(&a.coeffs[..n], &b.coeffs[..n], n)))
}

/// `a^e` truncated to `n` terms by binary exponentiation, truncating after
/// every product.
pub fn series_pow<T>(a: &Series<T>, e: u32, n: usize) -> Result<Series<T>>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    if n == 0 || a.precision() < n {
        return Err(Error::Precision { required: n.max(1), available: a.precision() });
    }
    let mut result = Series::one(n);
    let mut base = a.truncate(n)?;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = series_mul(&result, &base, n)?;
        }
        e >>= 1;
        if e > 0 {
            base = series_mul(&base, &base, n)?;
        }
    }
    Ok(result)
}

/// Low `n` coefficients of `a * b`; both inputs have at least `n` terms.
pub(crate) fn mul_trunc<T>(a: &[T], b: &[T], n: usize) -> Vec<T>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let (a, b) = (&a[..n], &b[..n]);
    if n <= KARATSUBA_THRESHOLD {
        return schoolbook_trunc(a, b, n);
    }
    // low halves fully, cross terms truncated recursively
    let h = n.div_ceil(2);
    let rest = n - h;
    let ((low, cross1), cross2) = exec::join(
        || {
            maybe_join(n, || karatsuba(&a[..h], &b[..h]), || mul_trunc(&a[..rest], &b[h..], rest))
        },
        || mul_trunc(&a[h..], &b[..rest], rest),
    );
    let mut out = vec![T::zero(); n];
    for (o, x) in out.iter_mut().zip(low.iter()) {
        *o += x;
    }
    for (i, (x, y)) in cross1.iter().zip(cross2.iter()).enumerate() {
        out[h + i] += x;
        out[h + i] += y;
    }
    out
}

fn maybe_join<A, B, RA, RB>(n: usize, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    if n >= PARALLEL_THRESHOLD {
        exec::join(a, b)
    } else {
        (a(), b())
    }
}

fn schoolbook_trunc<T>(a: &[T], b: &[T], n: usize) -> Vec<T>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut out = vec![T::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

fn schoolbook_full<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// Full product of two equal-length slices (length `a.len() + b.len() - 1`).
fn karatsuba<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Ring,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let n = a.len().max(b.len());
    if a.len().min(b.len()) <= KARATSUBA_THRESHOLD || a.len() != b.len() {
        return schoolbook_full(a, b);
    }
    let m = n / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let sum = |x: &[T], y: &[T]| -> Vec<T> {
        let mut s: Vec<T> = y.to_vec();
        for (si, xi) in s.iter_mut().zip(x.iter()) {
            *si += xi;
        }
        s
    };
    // a1, b1 are at least as long as a0, b0
    let sa = sum(a0, a1);
    let sb = sum(b0, b1);
    let ((z0, z2), z1) = maybe_join(
        n,
        || maybe_join(n, || karatsuba(a0, b0), || karatsuba(a1, b1)),
        || karatsuba(&sa, &sb),
    );
    let mut mid = z1;
    for (i, x) in z0.iter().enumerate() {
        mid[i] -= x;
    }
    for (i, x) in z2.iter().enumerate() {
        mid[i] -= x;
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in z0.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in mid.iter().enumerate() {
        if i + m < out.len() {
            out[i + m] += x;
        }
    }
    for (i, x) in z2.iter().enumerate() {
        out[i + 2 * m] += x;
    }
    out
}
