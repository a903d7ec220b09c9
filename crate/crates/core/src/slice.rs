//! Slices, the function `nu`, and zero certificates for polynomials in central elements.

use thiserror::Error;

use crate::hasse_schmidt::{kernel_membership, HsError, HsFamily};
use crate::lucas::{base_p_digits, lucas_binom};
use crate::ring::{Algebra, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error(transparent)]
    Hs(#[from] HsError),
    #[error("slice element is not central")]
    NotCentral,
    #[error("slice condition fails: d_{index}(x) = {value}")]
    SliceCondition { index: usize, value: String },
    #[error("coefficient of x^{index} is not in the kernel")]
    NonKernelResidue { index: usize },
    #[error("reduction stalled at nu = {nu}; the family is not iterative")]
    Stalled { nu: usize },
    #[error("nu(a) must be at least 1")]
    NuZero,
    #[error("binomial C({n}, {r}) vanishes mod {p}")]
    VanishingBinomial { n: usize, r: usize, p: u64 },
    #[error("need {needed} distinct central elements, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("independence check needs d_m(x) != 0 and d_(m+i)(x) = 0; violated at index {0}")]
    IndependencePrecondition(usize),
}

type Elem<F> = <<F as HsFamily>::R as Ring>::Elem;

/// `sup { m : d_m(a) != 0 }`, with `nu(a) = 0` on the kernel (including `a = 0`).
///
/// Errors when `d_N(a) != 0`, since then the truncation cannot see the top index.
pub fn nu<F: HsFamily>(fam: &F, a: &Elem<F>) -> Result<usize, HsError> {
    let ring = fam.ring();
    let comps = fam.components(a)?;
    let n = fam.truncation();
    if n > 0 && !ring.is_zero(&comps[n]) {
        return Err(HsError::TruncationExhausted { index: n });
    }
    Ok((1..=n).rev().find(|&m| !ring.is_zero(&comps[m])).unwrap_or(0))
}

/// `a = sum c_i x^i` with every `c_i` in the kernel.
#[derive(Debug, Clone)]
pub struct SliceDecomposition<E> {
    pub coefficients: Vec<E>,
    pub kernel_certificates: Vec<bool>,
}

impl<E: Clone> SliceDecomposition<E> {
    /// `sum c_i x^i` in `ring`.
    pub fn reconstruct<R: Ring<Elem = E>>(&self, ring: &R, x: &E) -> E {
        let mut acc = ring.zero();
        let mut xp = ring.one();
        for c in &self.coefficients {
            acc = ring.add(&acc, &ring.mul(c, &xp));
            xp = ring.mul(&xp, x);
        }
        acc
    }
}

/// Checks that `x` is central with `d_1(x) = 1` and `d_i(x) = 0` for `2 <= i <= N`.
pub fn check_slice<F>(fam: &F, x: &Elem<F>) -> Result<(), SliceError>
where
    F: HsFamily,
    F::R: Algebra,
{
    let ring = fam.ring();
    if !ring.is_central(x) {
        return Err(SliceError::NotCentral);
    }
    let comps = fam.components(x)?;
    for (i, c) in comps.iter().enumerate().skip(1) {
        let ok = if i == 1 { ring.equal(c, &ring.one()) } else { ring.is_zero(c) };
        if !ok {
            return Err(SliceError::SliceCondition { index: i, value: c.to_string() });
        }
    }
    Ok(())
}

/// Rewrites `a` in powers of the slice `x`: repeatedly take `m = nu(a)`,
/// `c = d_m(a)`, and replace `a` by `a - c x^m`.
pub fn slice_decompose<F>(fam: &F, a: &Elem<F>, x: &Elem<F>) -> Result<SliceDecomposition<Elem<F>>, SliceError>
where
    F: HsFamily,
    F::R: Algebra,
{
    check_slice(fam, x)?;
    let ring = fam.ring();
    let mut cur = a.clone();
    let mut m = nu(fam, &cur)?;
    let mut coefficients = vec![ring.zero(); m + 1];
    while m > 0 {
        let c = fam.component(m, &cur)?;
        cur = ring.sub(&cur, &ring.mul(&c, &ring.pow(x, m as u64)));
        coefficients[m] = c;
        let next = nu(fam, &cur)?;
        if next >= m {
            return Err(SliceError::Stalled { nu: next });
        }
        m = next;
    }
    coefficients[0] = cur;
    let mut kernel_certificates = Vec::with_capacity(coefficients.len());
    for (i, c) in coefficients.iter().enumerate() {
        if !kernel_membership(fam, c)? {
            return Err(SliceError::NonKernelResidue { index: i });
        }
        kernel_certificates.push(true);
    }
    Ok(SliceDecomposition { coefficients, kernel_certificates })
}

/// `d_(ms)(sum b_i x^i)` against `b_s d_m(x)^s`, where `s` is the top index with `b_s != 0`.
#[derive(Debug, Clone)]
pub struct IndependenceCertificate<E> {
    pub s: Option<usize>,
    pub lhs: E,
    pub rhs: E,
    pub holds: bool,
}

pub fn independence_check<F: HsFamily>(
    fam: &F,
    coeffs: &[Elem<F>],
    x: &Elem<F>,
    m: usize,
) -> Result<IndependenceCertificate<Elem<F>>, SliceError> {
    let ring = fam.ring();
    let Some(s) = (0..coeffs.len()).rev().find(|&i| !ring.is_zero(&coeffs[i])) else {
        return Ok(IndependenceCertificate { s: None, lhs: ring.zero(), rhs: ring.zero(), holds: true });
    };
    let dx = fam.components(x)?;
    if m == 0 || m > fam.truncation() || ring.is_zero(&dx[m]) {
        return Err(SliceError::IndependencePrecondition(m));
    }
    if let Some(i) = (m + 1..dx.len()).find(|&i| !ring.is_zero(&dx[i])) {
        return Err(SliceError::IndependencePrecondition(i));
    }
    let mut sum = ring.zero();
    let mut xp = ring.one();
    for b in coeffs {
        sum = ring.add(&sum, &ring.mul(b, &xp));
        xp = ring.mul(&xp, x);
    }
    let lhs = fam.component(m * s, &sum)?;
    let rhs = ring.mul(&coeffs[s], &ring.pow(&dx[m], s as u64));
    let holds = ring.equal(&lhs, &rhs);
    Ok(IndependenceCertificate { s: Some(s), lhs, rhs, holds })
}

/// Which case of the digit rule produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionBranch {
    /// `m = p^r (p s1 + s0)` with `s1 >= 1`: apply `d_(p^r s0)`, landing on `p^(r+1) s1`.
    LowDigit { r: u32, s0: u64, s1: u64 },
    /// `m = p^r s0` with `2 <= s0 < p`: apply `d_(p^r)`, landing on `p^r (s0 - 1)`.
    TopDigit { r: u32, s0: u64 },
}

#[derive(Debug, Clone)]
pub struct ReductionStep<E> {
    pub branch: ReductionBranch,
    pub applied_index: usize,
    /// `C(m, applied_index) mod p`, checked nonzero.
    pub binomial: u64,
    pub result: E,
    pub nu: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionChain<E> {
    pub start: E,
    pub start_nu: usize,
    pub steps: Vec<ReductionStep<E>>,
}

impl<E> ReductionChain<E> {
    pub fn final_nu(&self) -> usize {
        self.steps.last().map_or(self.start_nu, |s| s.nu)
    }
}

/// Lowers `nu(a)` to a power of `p` one base-p digit at a time.
pub fn nu_reduce<F: HsFamily>(fam: &F, a: &Elem<F>, p: u64) -> Result<ReductionChain<Elem<F>>, SliceError> {
    let start_nu = nu(fam, a)?;
    if start_nu == 0 {
        return Err(SliceError::NuZero);
    }
    let mut steps = Vec::new();
    let mut cur = a.clone();
    let mut m = start_nu;
    loop {
        let digits = base_p_digits(m as u64, p);
        let r = digits.iter().position(|&d| d != 0).expect("m > 0") as u32;
        let s0 = digits[r as usize];
        let s1 = (m as u64) / p.pow(r + 1);
        let (branch, index, expected) = if s1 >= 1 {
            (ReductionBranch::LowDigit { r, s0, s1 }, p.pow(r) * s0, p.pow(r + 1) * s1)
        } else if s0 >= 2 {
            (ReductionBranch::TopDigit { r, s0 }, p.pow(r), p.pow(r) * (s0 - 1))
        } else {
            break;
        };
        let (index, expected) = (index as usize, expected as usize);
        let binomial = lucas_binom(m as u64, index as u64, p);
        if binomial == 0 {
            return Err(SliceError::VanishingBinomial { n: m, r: index, p });
        }
        let b = fam.component(index, &cur)?;
        let nb = nu(fam, &b)?;
        if nb != expected || nb >= m {
            return Err(SliceError::Stalled { nu: nb });
        }
        steps.push(ReductionStep { branch, applied_index: index, binomial, result: b.clone(), nu: nb });
        cur = b;
        m = nb;
    }
    Ok(ReductionChain { start: a.clone(), start_nu, steps })
}

/// Outcome of evaluating `sum a_i z^i` at `d + 1` distinct central points.
#[derive(Debug, Clone)]
pub enum VandermondeCertificate<E> {
    /// Every evaluation vanished, and `adj(M) (M a) = det(M) a` shows each `a_i det(M) = 0`.
    AllZero { det: E },
    NonzeroWitness { point: usize, value: E, det: E },
}

impl<E> VandermondeCertificate<E> {
    pub fn is_all_zero(&self) -> bool {
        matches!(self, VandermondeCertificate::AllZero { .. })
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                if ring.is_zero(&m[0][j]) {
                    continue;
                }
                let term = ring.mul(&m[0][j], &determinant(ring, &minor(m, 0, j)));
                acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
    }
}

fn minor<E: Clone>(m: &[Vec<E>], row: usize, col: usize) -> Vec<Vec<E>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Classical adjoint: `adj[i][j] = (-1)^(i+j) det(minor(j, i))`.
pub fn adjugate<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ring.one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = determinant(ring, &minor(m, j, i));
                    if (i + j) % 2 == 0 { d } else { ring.neg(&d) }
                })
                .collect()
        })
        .collect()
}

/// Decides whether all `a_i` vanish from the values `sum a_i z_j^i` at `d + 1`
/// pairwise distinct points of a commutative domain.
pub fn vandermonde_certify<R: Ring>(
    ring: &R,
    coeffs: &[R::Elem],
    points: &[R::Elem],
) -> Result<VandermondeCertificate<R::Elem>, SliceError> {
    let needed = coeffs.len();
    if points.len() < needed {
        return Err(SliceError::InsufficientPoints { needed, got: points.len() });
    }
    let pts = &points[..needed];
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if ring.equal(&pts[i], &pts[j]) {
                return Err(SliceError::DuplicatePoints(i, j));
            }
        }
    }
    let m: Vec<Vec<R::Elem>> = pts.iter().map(|z| (0..needed).map(|i| ring.pow(z, i as u64)).collect()).collect();
    let det = determinant(ring, &m);
    let values: Vec<R::Elem> = m
        .iter()
        .map(|row| ring.sum(&row.iter().zip(coeffs).map(|(zi, a)| ring.mul(a, zi)).collect::<Vec<_>>()))
        .collect();
    if let Some(point) = values.iter().position(|v| !ring.is_zero(v)) {
        return Ok(VandermondeCertificate::NonzeroWitness { point, value: values[point].clone(), det });
    }
    let adj = adjugate(ring, &m);
    for (i, a) in coeffs.iter().enumerate() {
        let lhs = ring.sum(&adj[i].iter().zip(&values).map(|(c, v)| ring.mul(c, v)).collect::<Vec<_>>());
        debug_assert!(ring.equal(&lhs, &ring.mul(a, &det)));
        debug_assert!(ring.is_zero(&lhs));
    }
    Ok(VandermondeCertificate::AllZero { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hasse_schmidt::divided_power_jet;
    use crate::ring::FunctionField;
    use crate::{F2, Q};

    #[test]
    fn nu_examples() {
        let k = FunctionField::<Q>::with_vars(["u"]).unwrap();
        let j = divided_power_jet(&k, 0, 8);
        let u = k.var(0);
        assert_eq!(nu(&j, &u.pow(3)).unwrap(), 3);
        assert_eq!(nu(&j, &k.int(5)).unwrap(), 0);
        assert_eq!(nu(&j, &(u.pow(3) + u.clone())).unwrap(), 3);
        assert_eq!(nu(&j, &k.zero()).unwrap(), 0);
        assert!(matches!(nu(&j, &u.pow(8)), Err(HsError::TruncationExhausted { index: 8 })));
    }

    #[test]
    fn slice_examples() {
        let k = FunctionField::<Q>::with_vars(["x"]).unwrap();
        let j = divided_power_jet(&k, 0, 6);
        let x = k.var(0);
        let a = &(&x.pow(2) + &(&k.int(3) * &x)) + &k.int(5);
        let d = slice_decompose(&j, &a, &x).unwrap();
        assert_eq!(d.coefficients, vec![k.int(5), k.int(3), k.one()]);
        assert_eq!(d.reconstruct(&k, &x), a);
        let d = slice_decompose(&j, &k.int(4), &x).unwrap();
        assert_eq!(d.coefficients, vec![k.int(4)]);
        assert!(matches!(slice_decompose(&j, &a, &x.pow(2)), Err(SliceError::SliceCondition { index: 1, .. })));
    }

    #[test]
    fn independence_examples() {
        let k = FunctionField::<Q>::with_vars(["u"]).unwrap();
        let j = divided_power_jet(&k, 0, 6);
        let u = k.var(0);
        let c = independence_check(&j, &[k.one(), k.zero(), k.one()], &u, 1).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, k.one());
        let c = independence_check(&j, &[k.zero(), k.zero()], &u, 1).unwrap();
        assert!(c.holds && c.s.is_none());
    }

    #[test]
    fn nu_reduce_examples() {
        let k = FunctionField::<F2>::with_vars(["u"]).unwrap();
        let j = divided_power_jet(&k, 0, 16);
        let u = k.var(0);
        let chain = nu_reduce(&j, &u.pow(3), 2).unwrap();
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(chain.steps[0].result, u.pow(2));
        assert_eq!(chain.steps[0].applied_index, 1);
        assert!(matches!(chain.steps[0].branch, ReductionBranch::LowDigit { r: 0, s0: 1, s1: 1 }));
        let chain = nu_reduce(&j, &u.pow(4), 2).unwrap();
        assert!(chain.steps.is_empty());
        let chain = nu_reduce(&j, &u.pow(6), 2).unwrap();
        assert_eq!(chain.steps[0].applied_index, 2);
        assert_eq!(chain.final_nu(), 4);
    }

    #[test]
    fn nu_reduce_top_digit_branch() {
        let k = FunctionField::<crate::F5>::with_vars(["u"]).unwrap();
        let j = divided_power_jet(&k, 0, 24);
        let chain = nu_reduce(&j, &k.var(0).pow(3), 5).unwrap();
        let nus: Vec<usize> = chain.steps.iter().map(|s| s.nu).collect();
        assert_eq!(nus, vec![2, 1]);
        assert!(chain.steps.iter().all(|s| matches!(s.branch, ReductionBranch::TopDigit { .. })));
    }

    #[test]
    fn vandermonde_examples() {
        let q = FunctionField::<Q>::with_vars(Vec::<String>::new()).unwrap();
        let n = |v: i64| q.int(v);
        let pts = [n(0), n(1), n(2)];
        assert!(vandermonde_certify(&q, &[n(0), n(0), n(0)], &pts).unwrap().is_all_zero());
        let coeffs = [n(2), n(-3), n(1)];
        assert!(matches!(
            vandermonde_certify(&q, &coeffs, &[n(1), n(2)]),
            Err(SliceError::InsufficientPoints { needed: 3, got: 2 })
        ));
        match vandermonde_certify(&q, &coeffs, &[n(1), n(2), n(3)]).unwrap() {
            VandermondeCertificate::NonzeroWitness { point, value, det } => {
                assert_eq!(point, 2);
                assert_eq!(value, n(2));
                assert_eq!(det, n(2));
            }
            other => panic!("{other:?}"),
        }
    }
}
