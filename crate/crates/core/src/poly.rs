//! Sparse multivariate polynomials over a [`Scalar`] field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::ArithError;
use crate::lucas::is_prime;
use crate::scalar::Scalar;

/// Characteristic plus an ordered list of variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    characteristic: u64,
    variables: Vec<String>,
}

impl FieldDescriptor {
    pub fn new<S: Into<String>>(
        characteristic: u64,
        variables: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Self>, ArithError> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(ArithError::InvalidCharacteristic(characteristic));
        }
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(ArithError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Arc::new(FieldDescriptor { characteristic, variables }))
    }

    /// Descriptor whose characteristic is taken from the scalar type.
    pub fn for_scalar<C: Scalar, S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Self>, ArithError> {
        Self::new(C::CHARACTERISTIC, variables)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }
}

pub(crate) fn same_field(a: &Arc<FieldDescriptor>, b: &Arc<FieldDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Degree of a polynomial; the zero polynomial has no integer degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    Undefined,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Undefined => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Undefined => write!(f, "undefined"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense exponent vector, one entry per field variable.
///
/// Ordered graded-lexicographically with `x1 > x2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * n).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if exact.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect()))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(&names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: monomial -> nonzero coefficient.
#[derive(Clone)]
pub struct MultiPoly<C: Scalar> {
    field: Arc<FieldDescriptor>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(field: &Arc<FieldDescriptor>) -> Self {
        debug_assert_eq!(field.characteristic(), C::CHARACTERISTIC);
        MultiPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(field: &Arc<FieldDescriptor>) -> Self {
        Self::constant(field, C::one())
    }

    pub fn constant(field: &Arc<FieldDescriptor>, c: C) -> Self {
        Self::monomial(field, Monomial::one(field.num_vars()), c)
    }

    pub fn monomial(field: &Arc<FieldDescriptor>, m: Monomial, c: C) -> Self {
        let mut p = Self::zero(field);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(field: &Arc<FieldDescriptor>, i: usize) -> Self {
        Self::monomial(field, Monomial::var(field.num_vars(), i), C::one())
    }

    pub fn from_terms(field: &Arc<FieldDescriptor>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (0 for the zero polynomial).
    pub fn constant_value(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn check_same_field(&self, other: &Self) -> Result<(), ArithError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(ArithError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same_field(other)?;
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same_field(other)?;
        let mut out = Self::zero(&self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        MultiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        MultiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Degree {
        self.terms.keys().map(Monomial::degree).max().map_or(Degree::Undefined, Degree::Finite)
    }

    pub fn degree_in(&self, var: usize) -> Degree {
        self.terms.keys().map(|m| m.exp(var)).max().map_or(Degree::Undefined, Degree::Finite)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<C> {
        self.leading_term().map(|(_, c)| c.clone())
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            out.add_term(m.with_exp(var, e - 1), c.clone() * C::from_i64(e as i64));
        }
        out
    }

    /// Componentwise minimum of all exponent vectors (1 for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.field.num_vars()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Divides every term by `m`; panics if `m` does not divide some term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        if m.is_one() {
            return self.clone();
        }
        MultiPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.field);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c.clone() * lc_inv.clone();
            let sub = divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
            rem = rem.try_sub(&sub).ok()?;
        }
        Some(quot)
    }

    /// Coefficients with respect to `var`: entry `i` multiplies `var^i`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let deg = match self.degree_in(var) {
            Degree::Undefined => return Vec::new(),
            Degree::Finite(d) => d as usize,
        };
        let mut out = vec![Self::zero(&self.field); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            out[e].add_term(m.with_exp(var, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(field: &Arc<FieldDescriptor>, var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(field);
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.add_term(m.with_exp(var, m.exp(var) + i as u32), a.clone());
            }
        }
        out
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.field.num_vars()).filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0)).collect()
    }

    /// Structural equality of term maps (same as mathematical equality for polynomials).
    pub fn same_terms(&self, other: &Self) -> bool {
        self.terms == other.terms
    }

    pub(crate) fn fmt_into(&self, f: &mut impl fmt::Write) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_char('0');
        }
        let names = self.field.variables();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                m.fmt_with(names, f)?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> PartialEq for MultiPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.terms == other.terms
    }
}

impl<C: Scalar> Eq for MultiPoly<C> {}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_into(f)
    }
}

impl<C: Scalar> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a, C: Scalar> $trait<&'a MultiPoly<C>> for &'a MultiPoly<C> {
            type Output = MultiPoly<C>;
            /// Panics if the operands live in different fields; use the `try_` form to get an error.
            fn $method(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
                self.$try(rhs).expect("polynomial field mismatch")
            }
        }
        impl<C: Scalar> $trait for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Scalar> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_rational::BigRational;

    type F2 = Fp<2>;
    type Q = BigRational;

    #[test]
    fn freshmans_dream_char2() {
        let f = FieldDescriptor::new(2, ["x1", "x2"]).unwrap();
        let s = MultiPoly::<F2>::var(&f, 0) + MultiPoly::var(&f, 1);
        let sq = &s * &s;
        let expected = MultiPoly::var(&f, 0).pow(2) + MultiPoly::var(&f, 1).pow(2);
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "x1^2 + x2^2");
    }

    #[test]
    fn absorbing_zero_and_hand_expansion() {
        let f = FieldDescriptor::new(0, ["x1"]).unwrap();
        let x = MultiPoly::<Q>::var(&f, 0);
        assert!((&x * &MultiPoly::zero(&f)).is_zero());
        let one = MultiPoly::one(&f);
        let prod = (&x + &one) * (&x - &one);
        assert_eq!(prod.to_string(), "x1^2 - 1");
    }

    #[test]
    fn mismatched_fields_error() {
        let f = FieldDescriptor::new(0, ["x1"]).unwrap();
        let g = FieldDescriptor::new(0, ["y"]).unwrap();
        let a = MultiPoly::<Q>::var(&f, 0);
        let b = MultiPoly::<Q>::var(&g, 0);
        assert_eq!(a.try_mul(&b), Err(ArithError::FieldMismatch));
    }

    #[test]
    fn descriptor_validation() {
        assert_eq!(FieldDescriptor::new(4, ["a"]).unwrap_err(), ArithError::InvalidCharacteristic(4));
        assert_eq!(
            FieldDescriptor::new(0, ["a", "a"]).unwrap_err(),
            ArithError::DuplicateVariable("a".into())
        );
    }

    #[test]
    fn grlex_order_and_degree_sentinel() {
        let a = Monomial::from_exponents(vec![1, 0, 0]);
        let b = Monomial::from_exponents(vec![0, 1, 0]);
        let c = Monomial::from_exponents(vec![0, 0, 2]);
        assert!(a > b);
        assert!(c > a);
        let f = FieldDescriptor::new(0, ["x"]).unwrap();
        assert_eq!(MultiPoly::<Q>::zero(&f).total_degree(), Degree::Undefined);
        assert_eq!(MultiPoly::<Q>::one(&f).total_degree(), Degree::Finite(0));
    }

    #[test]
    fn exact_division() {
        let f = FieldDescriptor::new(0, ["x", "y"]).unwrap();
        let x = MultiPoly::<Q>::var(&f, 0);
        let y = MultiPoly::<Q>::var(&f, 1);
        let a = &x + &y;
        let b = &x - &y;
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!((&prod + &x).div_exact(&a), None);
    }
}
