//! Multivariate GCD over a field by recursive primitive remainder sequences.
//!
//! Not needed for correctness anywhere (fractions compare by cross
//! multiplication); it keeps large fractions and elimination rows small.

use crate::poly::{Degree, MultiPoly};
use crate::scalar::Scalar;

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn poly_gcd<C: Scalar>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.field());
    }
    let mono = a.monomial_content().gcd(&b.monomial_content());
    let a = a.div_monomial(&mono);
    let b = b.div_monomial(&mono);
    let g = gcd_no_monomial(&a, &b);
    g.mul_monomial(&mono, &C::one()).monic()
}

fn gcd_no_monomial<C: Scalar>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.field());
    }
    if a.same_terms(b) {
        return a.monic();
    }
    let va = a.support_vars();
    let vb = b.support_vars();
    // main variable: the first one occurring in either operand
    let v = *va.iter().chain(vb.iter()).min().expect("non-constant polynomial has a variable");
    let a_has = va.contains(&v);
    let b_has = vb.contains(&v);
    match (a_has, b_has) {
        (true, false) => return poly_gcd(&content_in(a, v), b),
        (false, true) => return poly_gcd(a, &content_in(b, v)),
        _ => {}
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = poly_gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if deg(&pa, v) < deg(&pb, v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if deg(&pb, v) == 0 {
            // pb is primitive of degree 0 in v, hence a unit
            return gc.monic();
        }
        let r = pseudo_rem(&pa, &pb, v);
        if r.is_zero() {
            break;
        }
        let r = primitive_part_in(&r, v);
        pa = pb;
        pb = r;
    }
    (&gc * &primitive_part_in(&pb, v)).monic()
}

fn deg<C: Scalar>(p: &MultiPoly<C>, v: usize) -> u32 {
    match p.degree_in(v) {
        Degree::Finite(d) => d,
        Degree::Undefined => 0,
    }
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in<C: Scalar>(p: &MultiPoly<C>, v: usize) -> MultiPoly<C> {
    let coeffs = p.coefficients_in(v);
    let mut g = MultiPoly::zero(p.field());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.monic() } else { poly_gcd(&g, c) };
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in<C: Scalar>(p: &MultiPoly<C>, v: usize) -> MultiPoly<C> {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` with respect to `v`.
fn pseudo_rem<C: Scalar>(a: &MultiPoly<C>, b: &MultiPoly<C>, v: usize) -> MultiPoly<C> {
    let field = a.field().clone();
    let bc = b.coefficients_in(v);
    let db = bc.len() - 1;
    let lcb = bc[db].clone();
    let mut rc = a.coefficients_in(v);
    while rc.len() > db && !rc.is_empty() {
        let dr = rc.len() - 1;
        let lcr = rc[dr].clone();
        let shift = dr - db;
        for c in rc.iter_mut() {
            *c = &*c * &lcb;
        }
        for (i, bi) in bc.iter().enumerate() {
            let t = &lcr * bi;
            rc[i + shift] = &rc[i + shift] - &t;
        }
        debug_assert!(rc[dr].is_zero());
        while rc.last().is_some_and(|c| c.is_zero()) {
            rc.pop();
        }
    }
    MultiPoly::from_coefficients_in(&field, v, &rc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FieldDescriptor;
    use crate::scalar::Fp;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn recovers_common_factor() {
        let f = FieldDescriptor::new(0, ["x", "y", "z"]).unwrap();
        let x = MultiPoly::<Q>::var(&f, 0);
        let y = MultiPoly::<Q>::var(&f, 1);
        let z = MultiPoly::<Q>::var(&f, 2);
        let one = MultiPoly::one(&f);
        let g = &(&x * &y) + &(&z + &one);
        let a = &g * &(&x - &z);
        let b = &g * &(&(&y * &y) + &x);
        assert_eq!(poly_gcd(&a, &b), g.monic());
        assert!(poly_gcd(&(&x + &one), &(&y + &one)).is_one());
    }

    #[test]
    fn gcd_in_char_p_with_monomial_factor() {
        let f = FieldDescriptor::new(3, ["x", "y"]).unwrap();
        let x = MultiPoly::<Fp<3>>::var(&f, 0);
        let y = MultiPoly::<Fp<3>>::var(&f, 1);
        let a = &(&x * &x) * &(&x + &y);
        let b = &x * &(&(&x + &y) * &(&x + &y));
        assert_eq!(poly_gcd(&a, &b), (&x * &(&x + &y)).monic());
    }
}
