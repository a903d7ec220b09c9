//! Coefficient scalars: the rationals and prime fields.
//!
//! Everything above this module is generic over [`Scalar`]. The characteristic
//! is part of the type, so mixing fields of different characteristic is a
//! compile-time error rather than a runtime one.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lucas::lucas_binom;

/// An exact field element usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// 0 for the rationals, `p` for the prime field of order `p`.
    const CHARACTERISTIC: u64;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// `C(n, r)` mapped into the field (Lucas reduction in characteristic p).
    fn binomial(n: u64, r: u64) -> Self;

    /// Parses a decimal integer or `a/b` fraction literal.
    fn parse_literal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().ok()?;
                let b: BigInt = b.trim().parse().ok()?;
                Self::from_bigint(&b).inv().map(|bi| Self::from_bigint(&a) * bi)
            }
            None => s.trim().parse::<BigInt>().ok().map(|n| Self::from_bigint(&n)),
        }
    }

    /// True for scalars that render with a leading minus sign.
    fn is_negative(&self) -> bool {
        false
    }
}

impl Scalar for BigRational {
    const CHARACTERISTIC: u64 = 0;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn binomial(n: u64, r: u64) -> Self {
        if r > n {
            return Self::zero();
        }
        let r = r.min(n - r);
        let mut acc = BigInt::one();
        for i in 0..r {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        BigRational::from_integer(acc)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// The prime field of order `P`. The representative is kept in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat: a^(p-2)
            Some(self.pow(P - 2))
        }
    }

    fn from_i64(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }

    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("residue fits in u64"))
    }

    fn binomial(n: u64, r: u64) -> Self {
        Fp(lucas_binom(n, r, P))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn fp_field_ops() {
        let a = F7::new(3);
        let b = F7::new(5);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * b).value(), 1);
        assert_eq!(a.inv().unwrap() * a, F7::one());
        assert!(F7::zero().inv().is_none());
        assert_eq!(F7::from_i64(-1).value(), 6);
    }

    #[test]
    fn rational_binomial_exact() {
        assert_eq!(BigRational::binomial(10, 3), BigRational::from_i64(120));
        assert_eq!(BigRational::binomial(3, 5), BigRational::zero());
    }

    #[test]
    fn parse_fraction_literal() {
        assert_eq!(
            BigRational::parse_literal("-3/4"),
            Some(BigRational::new(BigInt::from(-3), BigInt::from(4)))
        );
        // 1/2 = 4 in F7
        assert_eq!(F7::parse_literal("1/2"), Some(F7::new(4)));
        assert_eq!(F7::parse_literal("1/7"), None);
    }
}
