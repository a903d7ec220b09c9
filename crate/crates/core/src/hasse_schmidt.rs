//! Hasse-Schmidt derivations stored as truncated jet homomorphisms.
//!
//! A family `(d_0, d_1, ..., d_N)` is represented by the algebra map
//! `G(a) = sum d_i(a) s^i mod s^(N+1)`, given by its values on generators.
//! Every `d_i(a)` is then a coefficient of `G(a)`, and the convolution
//! identity `d_n(ab) = sum d_i(a) d_(n-i)(b)` holds by construction.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::lucas::base_p_digits;
use crate::maps::DerivationSpec;
use crate::poly::Monomial;
use crate::ring::{Algebra, FunctionField, Ring, Series, SubstituteError, TruncatedSeries};
use crate::scalar::Scalar;

/// Environment variable overriding [`default_truncation`].
pub const TRUNCATION_ENV: &str = "OREKIT_TRUNCATION";

/// `max(16, p^2 + p)` unless `OREKIT_TRUNCATION` holds a positive integer.
pub fn default_truncation(p: u64) -> usize {
    if let Some(n) = std::env::var(TRUNCATION_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            return n;
        }
    }
    16.max((p * p + p) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HsError {
    #[error("jet for generator {generator} has {got} entries, truncation allows {max}")]
    JetLength { generator: usize, got: usize, max: usize },
    #[error("expected jets for {expected} generators, got {got}")]
    JetCount { expected: usize, got: usize },
    #[error("jet of generator {0} does not start with the generator itself")]
    NotIdentityAtZero(usize),
    #[error("d_{index}(a) is nonzero at the truncation bound; raise the truncation")]
    TruncationExhausted { index: usize },
    #[error("index {index} exceeds truncation {truncation}")]
    IndexOutOfRange { index: usize, truncation: usize },
    #[error("divided powers d^n/n! need n < p in characteristic {p}; truncation {truncation} is too large")]
    FactorialNotInvertible { p: u64, truncation: usize },
    #[error("iterative components need positive characteristic")]
    NeedsPositiveCharacteristic,
    #[error("expected {expected} component maps, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error(transparent)]
    Substitute(#[from] SubstituteError),
}

/// Anything that produces `[d_0(a), ..., d_N(a)]` for elements of a ring.
pub trait HsFamily {
    type R: Ring;

    fn ring(&self) -> &Self::R;

    fn truncation(&self) -> usize;

    fn components(&self, a: &<Self::R as Ring>::Elem) -> Result<Vec<<Self::R as Ring>::Elem>, HsError>;

    fn component(&self, index: usize, a: &<Self::R as Ring>::Elem) -> Result<<Self::R as Ring>::Elem, HsError> {
        if index > self.truncation() {
            return Err(HsError::IndexOutOfRange { index, truncation: self.truncation() });
        }
        Ok(self.components(a)?.swap_remove(index))
    }
}

/// A Hasse-Schmidt derivation given by generator jets.
#[derive(Clone)]
pub struct JetHom<R: Algebra> {
    algebra: R,
    truncation: usize,
    generator_jets: Vec<Vec<R::Elem>>,
}

impl<R: Algebra> fmt::Debug for JetHom<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.algebra.generator_names();
        let mut m = f.debug_map();
        for (n, jet) in names.iter().zip(&self.generator_jets) {
            m.entry(n, &Series(jet.clone()).to_string());
        }
        m.finish()
    }
}

impl<R: Algebra> JetHom<R> {
    /// One jet per generator; shorter jets are padded with zeros.
    pub fn new(algebra: R, truncation: usize, generator_jets: Vec<Vec<R::Elem>>) -> Result<Self, HsError> {
        let gens = algebra.generators();
        if generator_jets.len() != gens.len() {
            return Err(HsError::JetCount { expected: gens.len(), got: generator_jets.len() });
        }
        let mut jets = Vec::with_capacity(gens.len());
        for (i, (mut jet, g)) in generator_jets.into_iter().zip(&gens).enumerate() {
            if jet.len() > truncation + 1 {
                if jet[truncation + 1..].iter().any(|c| !algebra.is_zero(c)) {
                    return Err(HsError::JetLength { generator: i, got: jet.len(), max: truncation + 1 });
                }
                jet.truncate(truncation + 1);
            }
            if jet.is_empty() || !algebra.equal(&jet[0], g) {
                return Err(HsError::NotIdentityAtZero(i));
            }
            jet.resize(truncation + 1, algebra.zero());
            jets.push(jet);
        }
        Ok(JetHom { algebra, truncation, generator_jets: jets })
    }

    /// Jets for the listed generators; every other generator lies in the kernel.
    pub fn with_kernel_default(
        algebra: R,
        truncation: usize,
        jets: impl IntoIterator<Item = (usize, Vec<R::Elem>)>,
    ) -> Result<Self, HsError> {
        let mut all: Vec<Vec<R::Elem>> = algebra.generators().into_iter().map(|g| vec![g]).collect();
        for (i, jet) in jets {
            if i >= all.len() {
                return Err(HsError::JetCount { expected: all.len(), got: i + 1 });
            }
            all[i] = jet;
        }
        Self::new(algebra, truncation, all)
    }

    pub fn algebra(&self) -> &R {
        &self.algebra
    }

    pub fn generator_jets(&self) -> &[Vec<R::Elem>] {
        &self.generator_jets
    }

    /// Same generator jets cut down to a smaller truncation.
    pub fn truncated(&self, truncation: usize) -> Self {
        let n = truncation.min(self.truncation);
        JetHom {
            algebra: self.algebra.clone(),
            truncation: n,
            generator_jets: self.generator_jets.iter().map(|j| j[..=n].to_vec()).collect(),
        }
    }

    pub fn series_ring(&self) -> TruncatedSeries<R> {
        TruncatedSeries::new(self.algebra.clone(), self.truncation)
    }
}

impl<R: Algebra> HsFamily for JetHom<R> {
    type R = R;

    fn ring(&self) -> &R {
        &self.algebra
    }

    fn truncation(&self) -> usize {
        self.truncation
    }

    fn components(&self, a: &R::Elem) -> Result<Vec<R::Elem>, HsError> {
        Ok(jet_extend(self, a)?.0)
    }
}

/// `G(a) = sum d_i(a) s^i`, computed by substituting generator jets into the
/// truncated series ring. Denominators are inverted as truncated geometric series.
pub fn jet_extend<R: Algebra>(j: &JetHom<R>, a: &R::Elem) -> Result<Series<R::Elem>, HsError> {
    let series = j.series_ring();
    let images: Vec<Series<R::Elem>> = j.generator_jets.iter().map(|jet| Series(jet.clone())).collect();
    Ok(j.algebra.substitute(a, &series, &images)?)
}

/// Where a sampled identity first failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HsCertificate {
    Pass { checked: usize },
    Fail { sample: usize, index: usize, detail: String },
}

impl HsCertificate {
    pub fn passed(&self) -> bool {
        matches!(self, HsCertificate::Pass { .. })
    }
}

/// Checks `d_n(ab) = sum_i d_i(a) d_(n-i)(b)` for `n <= N` on each pair, and
/// `G(ab) = G(a) G(b)` in the truncated series ring.
pub fn hs_axiom_check<F: HsFamily>(
    fam: &F,
    pairs: &[(<F::R as Ring>::Elem, <F::R as Ring>::Elem)],
) -> Result<HsCertificate, HsError> {
    let ring = fam.ring();
    let n = fam.truncation();
    let series = TruncatedSeries::new(ring.clone(), n);
    for (k, (a, b)) in pairs.iter().enumerate() {
        let ga = fam.components(a)?;
        let gb = fam.components(b)?;
        let gab = fam.components(&ring.mul(a, b))?;
        for idx in 0..=n {
            let conv = ring.sum(&(0..=idx).map(|i| ring.mul(&ga[i], &gb[idx - i])).collect::<Vec<_>>());
            if !ring.equal(&gab[idx], &conv) {
                return Ok(HsCertificate::Fail {
                    sample: k,
                    index: idx,
                    detail: format!("d_{idx}(ab) = {} but the convolution gives {conv}", gab[idx]),
                });
            }
        }
        let prod = series.mul(&Series(ga), &Series(gb));
        if let Some(idx) = (0..=n).find(|&i| !ring.equal(&prod.0[i], &gab[i])) {
            return Ok(HsCertificate::Fail {
                sample: k,
                index: idx,
                detail: format!("G(ab) and G(a)G(b) differ at s^{idx}"),
            });
        }
    }
    Ok(HsCertificate::Pass { checked: pairs.len() })
}

/// Checks `d_i(d_j(a)) = C(i+j, i) d_(i+j)(a)` for all `i + j <= max_index`
/// (default: the truncation). Binomials are reduced mod p in characteristic p.
pub fn iterativity_check<F: HsFamily>(
    fam: &F,
    samples: &[<F::R as Ring>::Elem],
    max_index: Option<usize>,
) -> Result<HsCertificate, HsError> {
    let ring = fam.ring();
    let n = max_index.unwrap_or(fam.truncation()).min(fam.truncation());
    let mut checked = 0;
    for (k, a) in samples.iter().enumerate() {
        let da = fam.components(a)?;
        for j in 0..=n {
            let ddj = fam.components(&da[j])?;
            for i in 0..=(n - j) {
                let c = <F::R as Ring>::Scalar::binomial((i + j) as u64, i as u64);
                let rhs = ring.scale(&da[i + j], c);
                if !ring.equal(&ddj[i], &rhs) {
                    return Ok(HsCertificate::Fail {
                        sample: k,
                        index: i + j,
                        detail: format!("d_{i}(d_{j}(a)) = {} but C({},{i}) d_{}(a) = {rhs}", ddj[i], i + j, i + j),
                    });
                }
                checked += 1;
            }
        }
    }
    Ok(HsCertificate::Pass { checked })
}

/// `Delta_i^n(t^m) = C(m_i, n) t^(m - n e_i)`, or `None` when it vanishes.
pub fn divided_power_delta<C: Scalar>(i: usize, n: u32, m: &Monomial) -> Option<(C, Monomial)> {
    let mi = m.exp(i);
    if mi < n {
        return None;
    }
    let c = C::binomial(mi as u64, n as u64);
    if c.is_zero() {
        return None;
    }
    Some((c, m.with_exp(i, mi - n)))
}

/// Divided powers in variable `var`: `G(t_var) = t_var + s`, all other generators fixed.
pub fn divided_power_jet<C: Scalar>(field: &FunctionField<C>, var: usize, truncation: usize) -> JetHom<FunctionField<C>> {
    let g = field.var(var);
    JetHom::with_kernel_default(field.clone(), truncation, [(var, vec![g, field.one()])])
        .expect("variable index in range")
}

/// `d_n = delta^n / n!` on generators.
///
/// In characteristic `p` this is only defined for truncations below `p`.
pub fn canonical_from_derivation<C: Scalar>(
    d: &DerivationSpec<C>,
    truncation: usize,
) -> Result<JetHom<FunctionField<C>>, HsError> {
    let p = C::CHARACTERISTIC;
    if p != 0 && truncation as u64 >= p {
        return Err(HsError::FactorialNotInvertible { p, truncation });
    }
    let field = FunctionField::new(d.field().clone()).expect("descriptor matches scalar");
    let mut jets = Vec::new();
    for g in field.generators() {
        let mut jet = vec![g.clone()];
        let mut cur = g;
        let mut fact = C::one();
        for n in 1..=truncation {
            cur = d.apply(&cur).expect("same field");
            fact = fact * C::from_i64(n as i64);
            jet.push(cur.scale(&fact.inv().expect("n! invertible")));
        }
        jets.push(jet);
    }
    JetHom::new(field, truncation, jets)
}

/// Values of the components `d_1, d_p, d_(p^2), ...` on generators.
///
/// `components[j][g] = d_(p^j)(g)`.
#[derive(Clone)]
pub struct IterativeHSSpec<R: Algebra> {
    algebra: R,
    p: u64,
    components: Vec<Vec<R::Elem>>,
}

impl<R: Algebra> IterativeHSSpec<R> {
    pub fn new(algebra: R, components: Vec<Vec<R::Elem>>) -> Result<Self, HsError> {
        let p = R::Scalar::CHARACTERISTIC;
        if p == 0 {
            return Err(HsError::NeedsPositiveCharacteristic);
        }
        let ng = algebra.generators().len();
        if let Some(bad) = components.iter().find(|c| c.len() != ng) {
            return Err(HsError::ComponentCount { expected: ng, got: bad.len() });
        }
        Ok(IterativeHSSpec { algebra, p, components })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Largest index whose base-p digits only use the supplied components.
    pub fn max_index(&self) -> usize {
        (self.p.pow(self.components.len() as u32) - 1) as usize
    }

    /// Generator jets up to `truncation`, filled in by increasing index.
    ///
    /// An index `i` that is not a power of `p` only uses components `d_(p^s)`
    /// with `p^s < i`, so the jet built so far suffices to apply them.
    pub fn reconstruct(&self, truncation: usize) -> Result<JetHom<R>, HsError> {
        if truncation > self.max_index() {
            return Err(HsError::IndexOutOfRange { index: truncation, truncation: self.max_index() });
        }
        let gens = self.algebra.generators();
        let mut jets: Vec<Vec<R::Elem>> = gens.iter().map(|g| vec![g.clone()]).collect();
        for i in 1..=truncation {
            let digits = base_p_digits(i as u64, self.p);
            let single = digits.iter().filter(|&&d| d != 0).count() == 1 && digits.last() == Some(&1);
            if single {
                let j = digits.len() - 1;
                for (g, jet) in jets.iter_mut().enumerate() {
                    jet.push(self.components[j][g].clone());
                }
                continue;
            }
            let partial = JetHom::new(self.algebra.clone(), i - 1, jets.clone())?;
            let next: Vec<R::Elem> = gens
                .iter()
                .map(|g| digit_formula(&partial, self.p, &digits, g))
                .collect::<Result<_, _>>()?;
            for (jet, v) in jets.iter_mut().zip(next) {
                jet.push(v);
            }
        }
        JetHom::new(self.algebra.clone(), truncation, jets)
    }
}

/// `(d_1)^(i_0) (d_p)^(i_1) ... (d_(p^r))^(i_r) / (i_0! i_1! ... i_r!)` applied to `a`.
fn digit_formula<F: HsFamily>(
    fam: &F,
    p: u64,
    digits: &[u64],
    a: &<F::R as Ring>::Elem,
) -> Result<<F::R as Ring>::Elem, HsError> {
    let ring = fam.ring();
    let mut cur = a.clone();
    let mut denom = <F::R as Ring>::Scalar::one();
    for (pos, &d) in digits.iter().enumerate().rev() {
        let idx = p.pow(pos as u32) as usize;
        for k in 1..=d {
            cur = fam.component(idx, &cur)?;
            denom = denom * <F::R as Ring>::Scalar::from_i64(k as i64);
        }
    }
    Ok(ring.scale(&cur, denom.inv().expect("digit factorials are units")))
}

/// `d_i(a)` from the components by the digit formula.
pub fn iterative_from_components<R: Algebra>(
    spec: &IterativeHSSpec<R>,
    i: usize,
    a: &R::Elem,
) -> Result<R::Elem, HsError> {
    if i == 0 {
        return Ok(a.clone());
    }
    let jet = spec.reconstruct(i)?;
    digit_formula(&jet, spec.p, &base_p_digits(i as u64, spec.p), a)
}

/// The family `mu_j(a) = [s^j] e_z(G(lift(a)))` on a smaller algebra `S`.
///
/// `lift` gives each generator of `S` as an element of the jet's algebra;
/// `eval` gives the image in `S` of each generator of the jet's algebra,
/// sending the specialized variables to the chosen central values.
#[derive(Clone)]
pub struct SpecializedFamily<R: Algebra, S: Algebra<Scalar = R::Scalar>> {
    jet: JetHom<R>,
    target: S,
    lift: Vec<R::Elem>,
    eval: Vec<S::Elem>,
}

impl<R: Algebra, S: Algebra<Scalar = R::Scalar>> SpecializedFamily<R, S> {
    /// Jets of `S`'s generators under the specialized family.
    pub fn to_jet(&self) -> Result<JetHom<S>, HsError> {
        let jets = self.target.generators().iter().map(|g| self.components(g)).collect::<Result<_, _>>()?;
        JetHom::new(self.target.clone(), self.jet.truncation, jets)
    }
}

impl<R: Algebra, S: Algebra<Scalar = R::Scalar>> HsFamily for SpecializedFamily<R, S> {
    type R = S;

    fn ring(&self) -> &S {
        &self.target
    }

    fn truncation(&self) -> usize {
        self.jet.truncation
    }

    fn components(&self, a: &S::Elem) -> Result<Vec<S::Elem>, HsError> {
        let lifted = self.target.substitute(a, self.jet.algebra(), &self.lift)?;
        let g = jet_extend(&self.jet, &lifted)?;
        g.0.iter()
            .map(|c| Ok(self.jet.algebra().substitute(c, &self.target, &self.eval)?))
            .collect()
    }
}

/// Specializes central variables of the jet's algebra; see [`SpecializedFamily`].
pub fn specialize_at_central<R: Algebra, S: Algebra<Scalar = R::Scalar>>(
    j: &JetHom<R>,
    target: &S,
    lift: Vec<R::Elem>,
    eval: Vec<S::Elem>,
) -> Result<SpecializedFamily<R, S>, HsError> {
    let expected = j.algebra().generators().len();
    if eval.len() != expected {
        return Err(SubstituteError::ImageCount { expected, got: eval.len() }.into());
    }
    let expected = target.generators().len();
    if lift.len() != expected {
        return Err(SubstituteError::ImageCount { expected, got: lift.len() }.into());
    }
    Ok(SpecializedFamily { jet: j.clone(), target: target.clone(), lift, eval })
}

/// True iff `d_i(a) = 0` for `1 <= i <= N` (relative to the truncation).
pub fn kernel_membership<F: HsFamily>(fam: &F, a: &<F::R as Ring>::Elem) -> Result<bool, HsError> {
    let ring = fam.ring();
    Ok(fam.components(a)?.iter().skip(1).all(|c| ring.is_zero(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FieldDescriptor;
    use crate::ratfunc::RatFunc;
    use crate::{F2, F3, Q};

    fn qu() -> FunctionField<Q> {
        FunctionField::with_vars(["u"]).unwrap()
    }

    #[test]
    fn jet_extend_examples() {
        let k = qu();
        let j = divided_power_jet(&k, 0, 4);
        let u = k.var(0);
        let g = jet_extend(&j, &(&u * &u)).unwrap();
        assert_eq!(g.0, vec![&u * &u, &k.int(2) * &u, k.one(), k.zero(), k.zero()]);
        let g = jet_extend(&j, &k.int(7)).unwrap();
        assert_eq!(g.0, vec![k.int(7), k.zero(), k.zero(), k.zero(), k.zero()]);
        let g = jet_extend(&j, &u.inv().unwrap()).unwrap();
        assert_eq!(g.0[1], -&u.pow(2).inv().unwrap());
        assert_eq!(g.0[2], u.pow(3).inv().unwrap());
    }

    #[test]
    fn tampered_family_is_caught() {
        struct Tampered(JetHom<FunctionField<Q>>);
        impl HsFamily for Tampered {
            type R = FunctionField<Q>;
            fn ring(&self) -> &Self::R {
                self.0.algebra()
            }
            fn truncation(&self) -> usize {
                self.0.truncation
            }
            fn components(&self, a: &RatFunc<Q>) -> Result<Vec<RatFunc<Q>>, HsError> {
                let mut c = self.0.components(a)?;
                let u = self.0.algebra().var(0);
                if *a == &u * &u {
                    c[1] = &c[1] + &self.0.algebra().one();
                }
                Ok(c)
            }
        }
        let k = qu();
        let u = k.var(0);
        let t = Tampered(divided_power_jet(&k, 0, 4));
        match hs_axiom_check(&t, &[(u.clone(), u.clone())]).unwrap() {
            HsCertificate::Fail { sample, index, .. } => assert_eq!((sample, index), (0, 1)),
            other => panic!("{other:?}"),
        }
        assert!(hs_axiom_check(&t.0, &[(u.clone(), u.clone()), (u.clone(), k.one())]).unwrap().passed());
    }

    #[test]
    fn iterativity_examples() {
        let f2 = FunctionField::<F2>::with_vars(["t1"]).unwrap();
        let t1 = f2.var(0);
        let j = divided_power_jet(&f2, 0, 16);
        let samples = [t1.pow(9) + t1.pow(3), t1.pow(16)];
        assert!(iterativity_check(&j, &samples, Some(16)).unwrap().passed());

        let k = qu();
        let u = k.var(0);
        let canon = canonical_from_derivation(&DerivationSpec::partial(k.descriptor(), 0), 8).unwrap();
        assert!(iterativity_check(&canon, &[u.pow(5)], None).unwrap().passed());
        assert_eq!(canon.component(2, &u.pow(3)).unwrap(), &k.int(3) * &u);
        assert_eq!(canon.component(2, &u).unwrap(), k.zero());

        let bad = JetHom::new(k.clone(), 4, vec![vec![u.clone(), u.clone(), k.one()]]).unwrap();
        assert!(!iterativity_check(&bad, &[u.clone()], None).unwrap().passed());
    }

    #[test]
    fn divided_power_formula() {
        let m = Monomial::from_exponents(vec![3, 1]);
        assert_eq!(divided_power_delta::<Q>(0, 2, &m), Some((Q::from_integer(3.into()), Monomial::from_exponents(vec![1, 1]))));
        assert_eq!(divided_power_delta::<F2>(0, 2, &m), Some((F2::new(1), Monomial::from_exponents(vec![1, 1]))));
        assert_eq!(divided_power_delta::<Q>(0, 3, &Monomial::from_exponents(vec![2, 0])), None);
    }

    #[test]
    fn canonical_rejects_large_truncation_in_char_p() {
        let f = FieldDescriptor::new(2, ["x1"]).unwrap();
        let d = DerivationSpec::<F2>::partial(&f, 0);
        assert!(matches!(canonical_from_derivation(&d, 2), Err(HsError::FactorialNotInvertible { .. })));
        assert!(canonical_from_derivation(&d, 1).is_ok());
    }

    #[test]
    fn reconstruction_matches_divided_powers() {
        let f3 = FunctionField::<F3>::with_vars(["t1"]).unwrap();
        let t1 = f3.var(0);
        let comps = vec![vec![f3.one()], vec![f3.zero()], vec![f3.zero()]];
        let spec = IterativeHSSpec::new(f3.clone(), comps).unwrap();
        let v = iterative_from_components(&spec, 5, &t1.pow(5)).unwrap();
        assert_eq!(v, f3.one());
        let dp = divided_power_jet(&f3, 0, 9);
        let rebuilt = spec.reconstruct(9).unwrap();
        for e in 0..=9 {
            assert_eq!(rebuilt.components(&t1.pow(e)).unwrap(), dp.components(&t1.pow(e)).unwrap());
        }
    }

    #[test]
    fn specialization_example() {
        let big = FunctionField::<Q>::with_vars(["u", "x"]).unwrap();
        let small = qu();
        let (u, x) = (big.var(0), big.var(1));
        let j = JetHom::new(big.clone(), 4, vec![vec![u.clone(), x.clone()], vec![x.clone()]]).unwrap();
        let at = |z: i64| specialize_at_central(&j, &small, vec![u.clone()], vec![small.var(0), small.int(z)]).unwrap();
        let mu = at(2);
        assert_eq!(mu.component(1, &small.var(0)).unwrap(), small.int(2));
        assert_eq!(mu.component(0, &small.var(0).pow(3)).unwrap(), small.var(0).pow(3));
        let mu0 = at(0);
        assert!(kernel_membership(&mu0, &small.var(0)).unwrap());
        let pairs = [(small.var(0), small.var(0).pow(2))];
        assert!(hs_axiom_check(&mu, &pairs).unwrap().passed());
    }

    #[test]
    fn default_truncation_formula() {
        if std::env::var(TRUNCATION_ENV).is_err() {
            assert_eq!(default_truncation(2), 16);
            assert_eq!(default_truncation(5), 30);
        }
    }
}
