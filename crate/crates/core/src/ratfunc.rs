//! Fractions of multivariate polynomials: elements of `F(x1, ..., xn)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::ArithError;
use crate::gcd::poly_gcd;
use crate::poly::{same_field, FieldDescriptor, Monomial, MultiPoly};
use crate::scalar::Scalar;

static GCD_THRESHOLD: AtomicUsize = AtomicUsize::new(512);

/// Term count above which fraction normalization runs a full GCD pass.
pub fn gcd_threshold() -> usize {
    GCD_THRESHOLD.load(Ordering::Relaxed)
}

pub fn set_gcd_threshold(terms: usize) {
    GCD_THRESHOLD.store(terms, Ordering::Relaxed);
}

/// `numerator / denominator` with a nonzero, leading-coefficient-one denominator.
///
/// Representations are not fully reduced; equality is by cross multiplication.
#[derive(Clone)]
pub struct RatFunc<C: Scalar> {
    num: MultiPoly<C>,
    den: MultiPoly<C>,
}

impl<C: Scalar> RatFunc<C> {
    pub fn new(num: MultiPoly<C>, den: MultiPoly<C>) -> Result<Self, ArithError> {
        num.check_same_field(&den)?;
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(num: MultiPoly<C>) -> Self {
        let den = MultiPoly::one(num.field());
        RatFunc { num, den }
    }

    pub fn zero(field: &Arc<FieldDescriptor>) -> Self {
        Self::from_poly(MultiPoly::zero(field))
    }

    pub fn one(field: &Arc<FieldDescriptor>) -> Self {
        Self::from_poly(MultiPoly::one(field))
    }

    pub fn constant(field: &Arc<FieldDescriptor>, c: C) -> Self {
        Self::from_poly(MultiPoly::constant(field, c))
    }

    pub fn var(field: &Arc<FieldDescriptor>, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(field, i))
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        self.num.field()
    }

    pub fn numerator(&self) -> &MultiPoly<C> {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Value of a constant fraction.
    pub fn constant_value(&self) -> Option<C> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n * d.inv()?)
    }

    pub fn is_one(&self) -> bool {
        self.num.same_terms(&self.den)
    }

    fn normalized(mut num: MultiPoly<C>, mut den: MultiPoly<C>) -> Self {
        if num.is_zero() {
            return Self::zero(num.field());
        }
        if den.is_one() {
            return RatFunc { num, den };
        }
        let mono = num.monomial_content().gcd(&den.monomial_content());
        if !mono.is_one() {
            num = num.div_monomial(&mono);
            den = den.div_monomial(&mono);
        }
        if num.len().max(den.len()) > gcd_threshold() {
            let g = poly_gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let lc = den.leading_coeff().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    /// Full reduction by the multivariate GCD, regardless of the threshold.
    pub fn reduced(&self) -> Self {
        let g = poly_gcd(&self.num, &self.den);
        if g.is_one() {
            return self.clone();
        }
        Self::normalized(
            self.num.div_exact(&g).expect("gcd divides"),
            self.den.div_exact(&g).expect("gcd divides"),
        )
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.num.check_same_field(&other.num)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den.same_terms(&other.den) {
            return Ok(Self::normalized(&self.num + &other.num, self.den.clone()));
        }
        let deg = |f: &Self| f.den.total_degree().finite().unwrap_or(0);
        let (small, big) = if deg(self) <= deg(other) {
            (self, other)
        } else {
            (other, self)
        };
        if !small.den.is_one() && deg(small) != deg(big) {
            if let Some(q) = big.den.div_exact(&small.den) {
                let num: MultiPoly<C> = &(&small.num * &q) + &big.num;
                return Ok(Self::normalized(num, big.den.clone()));
            }
        } else if small.den.is_one() {
            let num: MultiPoly<C> = &(&small.num * &big.den) + &big.num;
            return Ok(Self::normalized(num, big.den.clone()));
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Ok(Self::normalized(num, &self.den * &other.den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.num.check_same_field(&other.num)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field()));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(Self::from_poly(&self.num * &other.num));
        }
        Ok(Self::normalized(&self.num * &other.num, &self.den * &other.den))
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, n: u64) -> Self {
        RatFunc { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Semantic equality: `a/b == c/d` iff `a*d == c*b`.
    pub fn try_eq(&self, other: &Self) -> Result<bool, ArithError> {
        self.num.check_same_field(&other.num)?;
        if self.den.same_terms(&other.den) {
            return Ok(self.num.same_terms(&other.num));
        }
        Ok((&self.num * &other.den).same_terms(&(&other.num * &self.den)))
    }
}

/// Field-checked semantic equality of two fractions.
pub fn ratfunc_eq<C: Scalar>(f: &RatFunc<C>, g: &RatFunc<C>) -> Result<bool, ArithError> {
    f.try_eq(g)
}

impl<C: Scalar> PartialEq for RatFunc<C> {
    fn eq(&self, other: &Self) -> bool {
        same_field(self.field(), other.field()) && self.try_eq(other).unwrap_or(false)
    }
}

impl<C: Scalar> Eq for RatFunc<C> {}

impl<C: Scalar> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_into(f);
        }
        let wrap = |p: &MultiPoly<C>| {
            p.len() > 1
                || p.terms().next().is_some_and(|(m, c)| {
                    (!m.is_one() && !c.is_one()) || c.to_string().contains('/')
                })
        };
        if wrap(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        f.write_str("/")?;
        if wrap(&self.den) {
            write!(f, "({})", self.den)
        } else {
            write!(f, "{}", self.den)
        }
    }
}

impl<C: Scalar> fmt::Debug for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

macro_rules! rf_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a, C: Scalar> $trait<&'a RatFunc<C>> for &'a RatFunc<C> {
            type Output = RatFunc<C>;
            fn $method(self, rhs: &'a RatFunc<C>) -> RatFunc<C> {
                self.$try(rhs).expect("rational function field mismatch")
            }
        }
        impl<C: Scalar> $trait for RatFunc<C> {
            type Output = RatFunc<C>;
            fn $method(self, rhs: RatFunc<C>) -> RatFunc<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

rf_binop!(Add, add, try_add);
rf_binop!(Sub, sub, try_sub);
rf_binop!(Mul, mul, try_mul);

impl<C: Scalar> Neg for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: Scalar> Neg for RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        -&self
    }
}

/// Writes `f` over the subfield of p-th powers: `f = sum c_m * m` where every
/// exponent of `m` lies in `[0, p)` and every `c_m` involves only p-th powers.
pub fn pth_power_decompose<C: Scalar>(f: &RatFunc<C>) -> Result<BTreeMap<Monomial, RatFunc<C>>, ArithError> {
    let p = C::CHARACTERISTIC;
    if p == 0 {
        return Err(ArithError::NeedsPositiveCharacteristic);
    }
    let field = f.field().clone();
    // u/v = u v^(p-1) / v^p, and v^p lies in the subfield
    let (num, den) = if f.den.is_one() {
        (f.num.clone(), f.den.clone())
    } else {
        (&f.num * &f.den.pow(p - 1), f.den.pow(p))
    };
    let p32 = p as u32;
    let mut split: BTreeMap<Monomial, MultiPoly<C>> = BTreeMap::new();
    for (m, c) in num.terms() {
        let residue = Monomial::from_exponents(m.exponents().iter().map(|e| e % p32).collect());
        let rest = m.div(&residue).expect("residue divides monomial");
        split
            .entry(residue)
            .or_insert_with(|| MultiPoly::zero(&field))
            .add_term(rest, c.clone());
    }
    Ok(split
        .into_iter()
        .map(|(m, poly)| (m, RatFunc::normalized(poly, den.clone())))
        .collect())
}

/// True when every exponent in numerator and denominator is a multiple of `p`.
pub fn in_pth_power_subfield<C: Scalar>(f: &RatFunc<C>) -> bool {
    let p = C::CHARACTERISTIC as u32;
    if p == 0 {
        return false;
    }
    let ok = |poly: &MultiPoly<C>| poly.terms().all(|(m, _)| m.exponents().iter().all(|e| e % p == 0));
    ok(&f.num) && ok(&f.den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_rational::BigRational;
    use num_traits::One;

    type F2 = Fp<2>;
    type Q = BigRational;

    fn f2_field() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(2, ["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn equality_examples() {
        let f = f2_field();
        let x = |i| RatFunc::<F2>::var(&f, i);
        let a = x(1).try_div(&x(2)).unwrap();
        let b = (&x(0) * &x(1)).try_div(&(&x(0) * &x(2))).unwrap();
        assert!(ratfunc_eq(&a, &b).unwrap());
        let z1 = RatFunc::zero(&f).try_div(&x(0)).unwrap();
        let z2 = RatFunc::zero(&f).try_div(&x(1)).unwrap();
        assert!(ratfunc_eq(&z1, &z2).unwrap());
        // x2/x3 vs x3/x1: x1*x2 != x3^2
        let c = x(2).try_div(&x(0)).unwrap();
        assert!(!ratfunc_eq(&a, &c).unwrap());
    }

    #[test]
    fn denominator_is_monic() {
        let f = FieldDescriptor::new(0, ["u"]).unwrap();
        let u = MultiPoly::<Q>::var(&f, 0);
        let r = RatFunc::new(MultiPoly::one(&f), u.scale(&Q::from_i64(3))).unwrap();
        assert!(r.denominator().leading_coeff().unwrap().is_one());
        assert_eq!(r.to_string(), "(1/3)/u");
    }

    #[test]
    fn division_by_zero() {
        let f = f2_field();
        assert_eq!(RatFunc::<F2>::zero(&f).inv().unwrap_err(), ArithError::DivisionByZero);
    }

    #[test]
    fn decompose_examples() {
        let f = f2_field();
        let x = |i| RatFunc::<F2>::var(&f, i);
        let d = pth_power_decompose(&x(0)).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d[&Monomial::var(3, 0)].is_one());

        let d = pth_power_decompose(&x(0).inv().unwrap()).unwrap();
        assert_eq!(d.len(), 1);
        let expected = x(0).pow(2).inv().unwrap();
        assert_eq!(d[&Monomial::var(3, 0)], expected);

        let g = &(&x(0) * &x(1)) + &x(2).pow(2);
        let d = pth_power_decompose(&g).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d[&Monomial::from_exponents(vec![1, 1, 0])].is_one());
        assert_eq!(d[&Monomial::one(3)], x(2).pow(2));
        assert!(d.values().all(in_pth_power_subfield));
    }
}
