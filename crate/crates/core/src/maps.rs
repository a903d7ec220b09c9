//! Derivations and automorphisms of a rational function field, given by the
//! images of the generators.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::ArithError;
use crate::lucas::{base_p_digits, p_power_exponent};
use crate::poly::{same_field, FieldDescriptor, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::ring::{eval_poly, FunctionField};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("generator image lives in a different field")]
    ImageField,
    #[error("maps are defined on different fields")]
    FieldMismatch,
    #[error("automorphism sends a nonzero denominator to zero")]
    Degenerate,
    #[error("supplied inverse does not undo the map on generator `{0}`")]
    BadInverse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A derivation `d` of `F(x1..xn)` over the prime field, fixed by `d(x_i)`.
///
/// Extended to the whole field by Leibniz and the quotient rule. In
/// characteristic p it kills every p-th power automatically.
#[derive(Clone)]
pub struct DerivationSpec<C: Scalar> {
    field: Arc<FieldDescriptor>,
    images: Vec<RatFunc<C>>,
}

impl<C: Scalar> DerivationSpec<C> {
    pub fn new(field: &Arc<FieldDescriptor>, images: Vec<RatFunc<C>>) -> Result<Self, MapError> {
        if images.len() != field.num_vars() {
            return Err(MapError::ImageCount { expected: field.num_vars(), got: images.len() });
        }
        if images.iter().any(|g| !same_field(g.field(), field)) {
            return Err(MapError::ImageField);
        }
        Ok(DerivationSpec { field: field.clone(), images })
    }

    /// The zero derivation.
    pub fn zero(field: &Arc<FieldDescriptor>) -> Self {
        DerivationSpec { field: field.clone(), images: vec![RatFunc::zero(field); field.num_vars()] }
    }

    /// `d/dx_i`.
    pub fn partial(field: &Arc<FieldDescriptor>, i: usize) -> Self {
        let mut d = Self::zero(field);
        d.images[i] = RatFunc::one(field);
        d
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn images(&self) -> &[RatFunc<C>] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &RatFunc<C> {
        &self.images[i]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(RatFunc::is_zero)
    }

    /// `d(u) = sum_i (du/dx_i) d(x_i)` for a polynomial `u`.
    pub fn apply_poly(&self, u: &MultiPoly<C>) -> RatFunc<C> {
        let mut acc = RatFunc::zero(&self.field);
        if u.is_constant() {
            return acc;
        }
        let all_poly = self.images.iter().all(RatFunc::is_polynomial);
        if all_poly {
            let mut p = MultiPoly::zero(&self.field);
            for i in u.support_vars() {
                if self.images[i].is_zero() {
                    continue;
                }
                let du = u.partial_derivative(i);
                if du.is_zero() {
                    continue;
                }
                p = &p + &(&du * self.images[i].numerator());
            }
            return RatFunc::from_poly(p);
        }
        for i in u.support_vars() {
            if self.images[i].is_zero() {
                continue;
            }
            let du = u.partial_derivative(i);
            if du.is_zero() {
                continue;
            }
            acc = &acc + &(&RatFunc::from_poly(du) * &self.images[i]);
        }
        acc
    }

    /// Applies the derivation; on `u/v` this is `(d(u) v - u d(v)) / v^2`.
    pub fn apply(&self, f: &RatFunc<C>) -> Result<RatFunc<C>, MapError> {
        if !same_field(f.field(), &self.field) {
            return Err(MapError::FieldMismatch);
        }
        Ok(self.apply_unchecked(f))
    }

    pub(crate) fn apply_unchecked(&self, f: &RatFunc<C>) -> RatFunc<C> {
        let du = self.apply_poly(f.numerator());
        if f.is_polynomial() {
            return du;
        }
        let v = RatFunc::from_poly(f.denominator().clone());
        let dv = self.apply_poly(f.denominator());
        let u = RatFunc::from_poly(f.numerator().clone());
        let top = &(&du * &v) - &(&u * &dv);
        top.try_div(&v.pow(2)).expect("nonzero denominator")
    }

    /// Pointwise sum of two derivations.
    pub fn add(&self, other: &Self) -> Result<Self, MapError> {
        if !same_field(&self.field, &other.field) {
            return Err(MapError::FieldMismatch);
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a + b).collect();
        Ok(DerivationSpec { field: self.field.clone(), images })
    }
}

impl<C: Scalar> fmt::Debug for DerivationSpec<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DerivationSpec(")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.field.variables()[i], img)?;
        }
        write!(f, ")")
    }
}

/// The n-fold composite `d^n`, applied by repeated application.
///
/// In characteristic p every `d^(p^i)` is again a derivation; the generator
/// images of those powers are computed once, and `d^n` is applied as the
/// product of `d^(p^i)` over the base-p digits of n.
#[derive(Clone, Debug)]
pub struct DerivationPower<C: Scalar> {
    base: DerivationSpec<C>,
    exponent: u64,
    /// `ladder[i]` is `d^(p^i)` as a derivation (characteristic p only).
    ladder: Vec<DerivationSpec<C>>,
}

/// Builds `d^n`.
pub fn compose_power<C: Scalar>(d: &DerivationSpec<C>, n: u64) -> DerivationPower<C> {
    let p = C::CHARACTERISTIC;
    let mut ladder = vec![d.clone()];
    if p > 0 {
        let mut pi = p;
        while pi <= n {
            let prev = ladder.last().unwrap();
            let images = prev
                .images
                .iter()
                .map(|g| (1..p).fold(g.clone(), |acc, _| prev.apply_unchecked(&acc)))
                .collect();
            ladder.push(DerivationSpec { field: d.field.clone(), images });
            match pi.checked_mul(p) {
                Some(next) => pi = next,
                None => break,
            }
        }
    }
    DerivationPower { base: d.clone(), exponent: n, ladder }
}

impl<C: Scalar> DerivationPower<C> {
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn base(&self) -> &DerivationSpec<C> {
        &self.base
    }

    pub fn apply(&self, f: &RatFunc<C>) -> Result<RatFunc<C>, MapError> {
        if !same_field(f.field(), &self.base.field) {
            return Err(MapError::FieldMismatch);
        }
        let p = C::CHARACTERISTIC;
        let mut acc = f.clone();
        if p == 0 {
            for _ in 0..self.exponent {
                if acc.is_zero() {
                    break;
                }
                acc = self.base.apply_unchecked(&acc);
            }
            return Ok(acc);
        }
        for (i, digit) in base_p_digits(self.exponent, p).into_iter().enumerate() {
            for _ in 0..digit {
                if acc.is_zero() {
                    return Ok(acc);
                }
                acc = self.ladder[i].apply_unchecked(&acc);
            }
        }
        Ok(acc)
    }

    /// `d^n` as a derivation, when it is one: n = 1, or n a power of the characteristic.
    pub fn as_derivation(&self) -> Option<DerivationSpec<C>> {
        let p = C::CHARACTERISTIC;
        if self.exponent == 1 {
            return Some(self.base.clone());
        }
        if p == 0 {
            return None;
        }
        match p_power_exponent(self.exponent, p) {
            Some(j) if j >= 1 => Some(self.ladder[j as usize].clone()),
            _ => None,
        }
    }

    /// Images of the generators under `d^n`.
    pub fn generator_images(&self) -> Vec<RatFunc<C>> {
        (0..self.base.field.num_vars())
            .map(|i| self.apply(&RatFunc::var(&self.base.field, i)).expect("same field"))
            .collect()
    }
}

/// True iff both maps agree on every generator.
///
/// For derivations over the p-th power subfield this is equality as maps.
pub fn derivation_equal_on_generators<C: Scalar>(
    d1: &DerivationSpec<C>,
    d2: &DerivationSpec<C>,
) -> Result<bool, MapError> {
    if !same_field(&d1.field, &d2.field) {
        return Err(MapError::FieldMismatch);
    }
    Ok(d1.images.iter().zip(&d2.images).all(|(a, b)| a == b))
}

/// Same comparison for iterated powers, which need not be derivations.
pub fn powers_equal_on_generators<C: Scalar>(
    a: &DerivationPower<C>,
    b: &DerivationPower<C>,
) -> Result<bool, MapError> {
    if !same_field(&a.base.field, &b.base.field) {
        return Err(MapError::FieldMismatch);
    }
    Ok(a.generator_images().iter().zip(b.generator_images().iter()).all(|(x, y)| x == y))
}

/// A field automorphism fixing the prime field, given on generators.
#[derive(Clone)]
pub struct AutomorphismSpec<C: Scalar> {
    field: Arc<FieldDescriptor>,
    images: Vec<RatFunc<C>>,
    inverse: Option<Vec<RatFunc<C>>>,
}

impl<C: Scalar> AutomorphismSpec<C> {
    pub fn new(
        field: &Arc<FieldDescriptor>,
        images: Vec<RatFunc<C>>,
        inverse: Option<Vec<RatFunc<C>>>,
    ) -> Result<Self, MapError> {
        let n = field.num_vars();
        if images.len() != n {
            return Err(MapError::ImageCount { expected: n, got: images.len() });
        }
        if images.iter().chain(inverse.iter().flatten()).any(|g| !same_field(g.field(), field)) {
            return Err(MapError::ImageField);
        }
        if let Some(inv) = &inverse {
            if inv.len() != n {
                return Err(MapError::ImageCount { expected: n, got: inv.len() });
            }
        }
        let spec = AutomorphismSpec { field: field.clone(), images, inverse };
        spec.check_inverse()?;
        Ok(spec)
    }

    pub fn identity(field: &Arc<FieldDescriptor>) -> Self {
        let images: Vec<_> = (0..field.num_vars()).map(|i| RatFunc::var(field, i)).collect();
        AutomorphismSpec { field: field.clone(), images: images.clone(), inverse: Some(images) }
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn images(&self) -> &[RatFunc<C>] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, g)| *g == RatFunc::var(&self.field, i))
    }

    pub fn apply(&self, f: &RatFunc<C>) -> Result<RatFunc<C>, MapError> {
        if !same_field(f.field(), &self.field) {
            return Err(MapError::FieldMismatch);
        }
        substitute_field(f, &self.field, &self.images)
    }

    pub fn inverse(&self) -> Option<AutomorphismSpec<C>> {
        self.inverse.as_ref().map(|inv| AutomorphismSpec {
            field: self.field.clone(),
            images: inv.clone(),
            inverse: Some(self.images.clone()),
        })
    }

    /// With an inverse supplied, checks `sigma(sigma^-1(x_i)) = x_i` and the reverse.
    pub fn check_inverse(&self) -> Result<(), MapError> {
        let Some(inv) = &self.inverse else { return Ok(()) };
        for (i, name) in self.field.variables().iter().enumerate() {
            let x = RatFunc::var(&self.field, i);
            let there = substitute_field(&inv[i], &self.field, &self.images)?;
            let back = substitute_field(&self.images[i], &self.field, inv)?;
            if there != x || back != x {
                return Err(MapError::BadInverse(name.clone()));
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for AutomorphismSpec<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutomorphismSpec(")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.field.variables()[i], img)?;
        }
        write!(f, ")")
    }
}

/// Substitutes generator images (elements of `field`) into `f`.
pub(crate) fn substitute_field<C: Scalar>(
    f: &RatFunc<C>,
    field: &Arc<FieldDescriptor>,
    images: &[RatFunc<C>],
) -> Result<RatFunc<C>, MapError> {
    let ring = FunctionField::<C>::new(field.clone())?;
    let num = eval_poly(f.numerator(), &ring, images).map_err(|_| MapError::ImageField)?;
    if f.is_polynomial() {
        return Ok(num);
    }
    let den = eval_poly(f.denominator(), &ring, images).map_err(|_| MapError::ImageField)?;
    if den.is_zero() {
        return Err(MapError::Degenerate);
    }
    Ok(num.try_div(&den)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    type F2 = Fp<2>;

    fn shift_p2() -> (Arc<FieldDescriptor>, DerivationSpec<F2>) {
        let f = FieldDescriptor::new(2, ["x1", "x2", "x3"]).unwrap();
        let imgs = (0..3).map(|i| RatFunc::var(&f, (i + 1) % 3)).collect();
        let d = DerivationSpec::new(&f, imgs).unwrap();
        (f, d)
    }

    #[test]
    fn shift_examples() {
        let (f, d) = shift_p2();
        let x = |i| RatFunc::<F2>::var(&f, i);
        assert_eq!(d.apply(&x(0)).unwrap(), x(1));
        assert!(d.apply(&x(0).pow(2)).unwrap().is_zero());
        let inv = x(0).inv().unwrap();
        let expected = x(1).try_div(&x(0).pow(2)).unwrap();
        assert_eq!(d.apply(&inv).unwrap(), expected);
    }

    #[test]
    fn power_examples() {
        let (f, d) = shift_p2();
        let x = |i| RatFunc::<F2>::var(&f, i);
        assert_eq!(compose_power(&d, 2).apply(&x(0)).unwrap(), x(2));
        assert_eq!(compose_power(&d, 0).apply(&x(1)).unwrap(), x(1));
        assert_eq!(compose_power(&d, 3).apply(&x(0)).unwrap(), x(0));
        assert!(compose_power(&d, 2).as_derivation().is_some());
        assert!(compose_power(&d, 3).as_derivation().is_none());
        assert!(compose_power(&d, 0).as_derivation().is_none());
    }

    #[test]
    fn generator_equality_examples() {
        let (_, d) = shift_p2();
        let d4 = compose_power(&d, 4).as_derivation().unwrap();
        let d2 = compose_power(&d, 2).as_derivation().unwrap();
        assert!(derivation_equal_on_generators(&d4, &d).unwrap());
        assert!(derivation_equal_on_generators(&d, &d).unwrap());
        assert!(!derivation_equal_on_generators(&d, &d2).unwrap());
        let g = FieldDescriptor::new(2, ["y"]).unwrap();
        assert_eq!(
            derivation_equal_on_generators(&d, &DerivationSpec::zero(&g)).unwrap_err(),
            MapError::FieldMismatch
        );
    }

    #[test]
    fn automorphism_inverse_checked() {
        let f = FieldDescriptor::new(0, ["a", "b"]).unwrap();
        let a = RatFunc::<crate::Q>::var(&f, 0);
        let b = RatFunc::<crate::Q>::var(&f, 1);
        let swap = AutomorphismSpec::new(&f, vec![b.clone(), a.clone()], Some(vec![b.clone(), a.clone()]));
        assert!(swap.is_ok());
        let bad = AutomorphismSpec::new(&f, vec![b.clone(), a.clone()], Some(vec![a.clone(), a.clone()]));
        assert!(matches!(bad, Err(MapError::BadInverse(_))));
        let s = swap.unwrap();
        let q = (&a + &b).try_div(&a).unwrap();
        assert_eq!(s.apply(&q).unwrap(), (&a + &b).try_div(&b).unwrap());
    }
}
