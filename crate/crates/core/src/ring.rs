//! Minimal ring abstraction shared by the jet, slice and certificate code.

use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use thiserror::Error;

use crate::error::ArithError;
use crate::poly::{FieldDescriptor, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstituteError {
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image of a denominator is not invertible in the target ring")]
    NotInvertible,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A ring whose elements are handled through a context value (the ring itself).
pub trait Ring: Clone + Send + Sync {
    type Scalar: Scalar;
    type Elem: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_scalar(&self, c: Self::Scalar) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Inverse of a unit this ring knows how to invert, `None` otherwise.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn scale(&self, a: &Self::Elem, c: Self::Scalar) -> Self::Elem {
        self.mul(&self.from_scalar(c), a)
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// A ring presented by a finite list of generators over its scalar field.
pub trait Algebra: Ring {
    fn generators(&self) -> Vec<Self::Elem>;

    fn generator_names(&self) -> Vec<String>;

    /// Evaluates `a` after replacing generator `i` by `images[i]` in `target`.
    ///
    /// Products are expanded left to right, so the images need only respect
    /// the relations of this algebra, not commute with each other.
    fn substitute<T: Ring<Scalar = Self::Scalar>>(
        &self,
        a: &Self::Elem,
        target: &T,
        images: &[T::Elem],
    ) -> Result<T::Elem, SubstituteError>;

    /// Commutes with every generator (hence with everything).
    fn is_central(&self, a: &Self::Elem) -> bool {
        self.generators()
            .iter()
            .all(|g| self.equal(&self.mul(a, g), &self.mul(g, a)))
    }
}

/// Evaluates a polynomial at generator images in `target`.
///
/// Powers of each image are cached; monomials multiply images in variable order.
pub fn eval_poly<C: Scalar, T: Ring<Scalar = C>>(
    p: &MultiPoly<C>,
    target: &T,
    images: &[T::Elem],
) -> Result<T::Elem, SubstituteError> {
    let n = p.field().num_vars();
    if images.len() != n {
        return Err(SubstituteError::ImageCount { expected: n, got: images.len() });
    }
    let mut powers: Vec<Vec<T::Elem>> = images.iter().map(|g| vec![target.one(), g.clone()]).collect();
    let mut acc = target.zero();
    for (m, c) in p.terms() {
        let mut term = target.from_scalar(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e as usize;
            while powers[i].len() <= e {
                let next = target.mul(powers[i].last().unwrap(), &images[i]);
                powers[i].push(next);
            }
            term = target.mul(&term, &powers[i][e]);
        }
        acc = target.add(&acc, &term);
    }
    Ok(acc)
}

/// The rational function field described by a [`FieldDescriptor`]; polynomial
/// rings are handled as its subrings.
pub struct FunctionField<C: Scalar> {
    field: Arc<FieldDescriptor>,
    _scalar: PhantomData<C>,
}

impl<C: Scalar> Clone for FunctionField<C> {
    fn clone(&self) -> Self {
        FunctionField { field: self.field.clone(), _scalar: PhantomData }
    }
}

impl<C: Scalar> fmt::Debug for FunctionField<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionField({:?})", self.field)
    }
}

impl<C: Scalar> FunctionField<C> {
    pub fn new(field: Arc<FieldDescriptor>) -> Result<Self, ArithError> {
        if field.characteristic() != C::CHARACTERISTIC {
            return Err(ArithError::CharacteristicMismatch {
                declared: field.characteristic(),
                scalar: C::CHARACTERISTIC,
            });
        }
        Ok(FunctionField { field, _scalar: PhantomData })
    }

    /// Shorthand for a fresh field over the given variable names.
    pub fn with_vars<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Self, ArithError> {
        Self::new(FieldDescriptor::for_scalar::<C, S>(vars)?)
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn var(&self, i: usize) -> RatFunc<C> {
        RatFunc::var(&self.field, i)
    }

    pub fn var_named(&self, name: &str) -> Option<RatFunc<C>> {
        self.field.var_index(name).map(|i| self.var(i))
    }

    pub fn int(&self, n: i64) -> RatFunc<C> {
        RatFunc::constant(&self.field, C::from_i64(n))
    }
}

impl<C: Scalar> Ring for FunctionField<C> {
    type Scalar = C;
    type Elem = RatFunc<C>;

    fn zero(&self) -> RatFunc<C> {
        RatFunc::zero(&self.field)
    }
    fn one(&self) -> RatFunc<C> {
        RatFunc::one(&self.field)
    }
    fn from_scalar(&self, c: C) -> RatFunc<C> {
        RatFunc::constant(&self.field, c)
    }
    fn add(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        a + b
    }
    fn neg(&self, a: &RatFunc<C>) -> RatFunc<C> {
        -a
    }
    fn sub(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        a - b
    }
    fn mul(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        a * b
    }
    fn is_zero(&self, a: &RatFunc<C>) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> bool {
        a == b
    }
    fn unit_inverse(&self, a: &RatFunc<C>) -> Option<RatFunc<C>> {
        a.inv().ok()
    }
    fn scale(&self, a: &RatFunc<C>, c: C) -> RatFunc<C> {
        a.scale(&c)
    }
    fn pow(&self, a: &RatFunc<C>, n: u64) -> RatFunc<C> {
        a.pow(n)
    }
}

impl<C: Scalar> Algebra for FunctionField<C> {
    fn generators(&self) -> Vec<RatFunc<C>> {
        (0..self.field.num_vars()).map(|i| self.var(i)).collect()
    }

    fn generator_names(&self) -> Vec<String> {
        self.field.variables().to_vec()
    }

    fn substitute<T: Ring<Scalar = C>>(
        &self,
        a: &RatFunc<C>,
        target: &T,
        images: &[T::Elem],
    ) -> Result<T::Elem, SubstituteError> {
        let num = eval_poly(a.numerator(), target, images)?;
        if a.is_polynomial() {
            return Ok(num);
        }
        let den = eval_poly(a.denominator(), target, images)?;
        let inv = target.unit_inverse(&den).ok_or(SubstituteError::NotInvertible)?;
        Ok(target.mul(&num, &inv))
    }

    fn is_central(&self, _a: &RatFunc<C>) -> bool {
        true
    }
}

/// A truncated power series `sum a_i s^i mod s^(N+1)` with coefficients in a ring.
#[derive(Clone, Debug)]
pub struct Series<E>(pub Vec<E>);

impl<E: fmt::Display> fmt::Display for Series<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// `R[s]/(s^(N+1))` with `s` central.
#[derive(Clone, Debug)]
pub struct TruncatedSeries<R: Ring> {
    base: R,
    truncation: usize,
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn new(base: R, truncation: usize) -> Self {
        TruncatedSeries { base, truncation }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn constant(&self, a: R::Elem) -> Series<R::Elem> {
        let mut v = vec![self.base.zero(); self.truncation + 1];
        v[0] = a;
        Series(v)
    }

    /// Builds a series from leading coefficients, padding or truncating to length N+1.
    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Series<R::Elem> {
        let mut v = coeffs;
        v.truncate(self.truncation + 1);
        while v.len() < self.truncation + 1 {
            v.push(self.base.zero());
        }
        Series(v)
    }

    /// The series variable `s`.
    pub fn variable(&self) -> Series<R::Elem> {
        let mut v = vec![self.base.zero(); self.truncation + 1];
        if self.truncation >= 1 {
            v[1] = self.base.one();
        }
        Series(v)
    }
}

impl<R: Ring> Ring for TruncatedSeries<R> {
    type Scalar = R::Scalar;
    type Elem = Series<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Series(vec![self.base.zero(); self.truncation + 1])
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn from_scalar(&self, c: R::Scalar) -> Self::Elem {
        self.constant(self.base.from_scalar(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Series(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Series(a.0.iter().map(|x| self.base.neg(x)).collect())
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Series(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.truncation;
        let mut out = vec![self.base.zero(); n + 1];
        let bz: Vec<bool> = b.0.iter().map(|y| self.base.is_zero(y)).collect();
        for (i, x) in a.0.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for j in 0..=(n - i) {
                if bz[j] {
                    continue;
                }
                let t = self.base.mul(x, &b.0[j]);
                out[i + j] = self.base.add(&out[i + j], &t);
            }
        }
        Series(out)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.0.iter().all(|x| self.base.is_zero(x))
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a.0.iter().zip(&b.0).all(|(x, y)| self.base.equal(x, y))
    }

    /// `b_0 = v^(-1)`, `b_n = -v^(-1) sum_(i=1..n) a_i b_(n-i)` for a unit constant term `v`.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let v_inv = self.base.unit_inverse(&a.0[0])?;
        let mut b = Vec::with_capacity(self.truncation + 1);
        b.push(v_inv.clone());
        for n in 1..=self.truncation {
            let terms: Vec<_> = (1..=n)
                .filter(|&i| !self.base.is_zero(&a.0[i]))
                .map(|i| self.base.mul(&a.0[i], &b[n - i]))
                .collect();
            let s = self.base.sum(&terms);
            b.push(self.base.neg(&self.base.mul(&v_inv, &s)));
        }
        Some(Series(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn series_inverse_of_u_plus_s() {
        let k = FunctionField::<Q>::with_vars(["u"]).unwrap();
        let ser = TruncatedSeries::new(k.clone(), 4);
        let u = k.var(0);
        let a = ser.from_coeffs(vec![u.clone(), k.one()]);
        let inv = ser.unit_inverse(&a).unwrap();
        assert!(ser.equal(&ser.mul(&a, &inv), &ser.one()));
        // 1/u, -1/u^2, 1/u^3, ...
        for (i, c) in inv.0.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let expected = k.int(sign).try_div(&u.pow(i as u64 + 1)).unwrap();
            assert_eq!(*c, expected);
        }
    }

    #[test]
    fn substitute_into_series() {
        let k = FunctionField::<Q>::with_vars(["u"]).unwrap();
        let ser = TruncatedSeries::new(k.clone(), 3);
        let img = ser.from_coeffs(vec![k.var(0), k.one()]);
        let u2 = k.var(0).pow(2);
        let got = k.substitute(&u2, &ser, &[img]).unwrap();
        assert_eq!(got.0[0], u2);
        assert_eq!(got.0[1], k.var(0).scale(&Q::from_i64(2)));
        assert!(got.0[2].is_one());
        assert!(got.0[3].is_zero());
    }
}
