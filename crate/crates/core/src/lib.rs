//! Exact arithmetic for skew polynomial rings and Hasse-Schmidt derivations.

pub mod counterexample;
pub mod error;
pub mod gcd;
pub mod hasse_schmidt;
pub mod linalg;
pub mod lucas;
pub mod maps;
pub mod ore;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod slice;

pub use num_rational::BigRational;

pub use error::ArithError;
pub use lucas::{is_prime, lucas_binom};
pub use poly::{Degree, FieldDescriptor, Monomial, MultiPoly};
pub use ratfunc::{pth_power_decompose, ratfunc_eq, RatFunc};
pub use ring::{Algebra, FunctionField, Ring, Series, TruncatedSeries};
pub use scalar::{Fp, Scalar};

/// The rationals.
pub type Q = BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

pub type PolyQ = MultiPoly<Q>;
pub type PolyF2 = MultiPoly<F2>;
pub type PolyF3 = MultiPoly<F3>;
pub type RatFuncQ = RatFunc<Q>;
pub type RatFuncF2 = RatFunc<F2>;
pub type RatFuncF3 = RatFunc<F3>;
