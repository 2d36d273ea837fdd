//! Number fields `Q[x]/(f)` with elements in the power basis.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{is_irreducible, isolate_real_roots, QPoly, RealEmbedding, Q};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    min_poly: QPoly,
}

impl NumberField {
    /// Builds `Q[x]/(f)` after certifying that `f` is irreducible. `f` is
    /// made monic.
    pub fn new(f: &QPoly) -> Result<Arc<Self>> {
        if !is_irreducible(f)? {
            return Err(Error::Certificate(format!("{f} is reducible over Q")));
        }
        Ok(Arc::new(NumberField { min_poly: f.monic() }))
    }

    /// `Q[x]/(f)` without the irreducibility certificate; only for callers
    /// that know every element they invert is a unit.
    #[cfg(test)]
    pub(crate) fn new_unchecked(f: &QPoly) -> Arc<Self> {
        Arc::new(NumberField { min_poly: f.monic() })
    }

    /// The rational field `Q = Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberField { min_poly: QPoly::x() })
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    /// Real embeddings, ascending by the image of the generator.
    pub fn real_embeddings(&self, digits: u32) -> Vec<RealEmbedding> {
        isolate_real_roots(&self.min_poly, digits)
    }
}

/// Element of a number field, coordinates in the basis `1, x, ..., x^(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    coords: Vec<Q>,
}

impl AlgebraicNumber {
    pub fn from_coords(field: &Arc<NumberField>, mut coords: Vec<Q>) -> Self {
        assert!(coords.len() <= field.degree(), "too many coordinates");
        coords.resize(field.degree(), Q::zero());
        AlgebraicNumber { field: field.clone(), coords }
    }

    pub fn from_rational(field: &Arc<NumberField>, c: Q) -> Self {
        Self::from_coords(field, vec![c])
    }

    pub fn from_int(field: &Arc<NumberField>, c: i64) -> Self {
        Self::from_rational(field, super::q(c))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_coords(field, Vec::new())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The class of `x`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &QPoly::x())
    }

    fn from_poly(field: &Arc<NumberField>, p: &QPoly) -> Self {
        let r = p.rem(field.min_poly());
        let d = field.degree();
        Self::from_coords(field, (0..d).map(|i| r.coeff(i)).collect())
    }

    fn to_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Q> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    fn same_field(&self, o: &Self) {
        debug_assert!(Arc::ptr_eq(&self.field, &o.field) || self.field == o.field, "mixed number fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        AlgebraicNumber { field: self.field.clone(), coords }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        AlgebraicNumber { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        if self.field.degree() == 1 {
            return Self::from_rational(&self.field, &self.coords[0] * &o.coords[0]);
        }
        Self::from_poly(&self.field, &self.to_poly().mul(&o.to_poly()))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.field.degree() == 1 {
            return Some(Self::from_rational(&self.field, Q::one() / &self.coords[0]));
        }
        let (g, s, _) = self.to_poly().ext_gcd(self.field.min_poly());
        (g == QPoly::one()).then(|| Self::from_poly(&self.field, &s))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(&self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Common denominator and integer numerators of the coordinates.
    pub fn integer_coords(&self) -> (BigInt, Vec<BigInt>) {
        use num_integer::Integer;
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.coords.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
        (den, nums)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_poly();
        write!(f, "{p}")
    }
}

/// Nonzero kernel vector of a square matrix of rank `d - 1` over a number
/// field, scaled so its first nonzero coordinate is 1.
pub fn kernel_vector(m: &[Vec<AlgebraicNumber>]) -> Result<Vec<AlgebraicNumber>> {
    let d = m.len();
    if d == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if let Some(row) = m.iter().find(|r| r.len() != d) {
        return Err(Error::NotSquare { rows: d, cols: row.len() });
    }
    let field = m[0][0].field().clone();
    let mut a: Vec<Vec<AlgebraicNumber>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(p) = (r..d).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c]
            .inv()
            .ok_or_else(|| Error::InvalidArgument("pivot is not invertible".into()))?;
        a[r] = a[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..d {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let nullity = d - pivots.len();
    if nullity != 1 {
        return Err(Error::EigenspaceDimension { found: nullity });
    }
    let free = (0..d).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![AlgebraicNumber::zero(&field); d];
    v[free] = AlgebraicNumber::one(&field);
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = a[row][free].neg();
    }
    let lead = v.iter().find(|x| !x.is_zero()).unwrap().inv().unwrap();
    Ok(v.iter().map(|x| x.mul(&lead)).collect())
}
