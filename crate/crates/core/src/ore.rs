//! Ore extensions `K[x; sigma, delta]` and their central polynomial extensions
//! `K[x; sigma, delta][t1, ..., td]`.
//!
//! Elements are kept in the normal form `sum c * x^m * t^e` with coefficients
//! on the left. Multiplication moves coefficients leftwards across `x` one
//! power at a time using `x * c = sigma(c) x + delta(c)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::ArithError;
use crate::linalg::{EchelonBasis, SparseVec};
use crate::maps::{AutomorphismSpec, DerivationSpec, MapError};
use crate::poly::{same_field, Degree, FieldDescriptor, Monomial, MultiPoly};
use crate::ratfunc::{pth_power_decompose, RatFunc};
use crate::ring::{eval_poly, Algebra, Ring, SubstituteError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OreError {
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("name `{0}` is used twice in the ring description")]
    NameClash(String),
    #[error("sigma and delta are both nontrivial; sigma-derivations are not supported")]
    SigmaDerivationUnsupported,
    #[error("twisting data is defined over a different coefficient field")]
    FieldMismatch,
    #[error("homomorphism has no image for generator `{0}`")]
    UnmappedGenerator(String),
    #[error("generator image does not live in the target ring")]
    ImageRing,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("witness `{label}` failed: image is {image}, expected {expected}")]
    WitnessFailed { label: String, image: String, expected: String },
    #[error("operation requires positive characteristic")]
    NeedsPositiveCharacteristic,
    #[error("operation requires sigma = id and no central variables")]
    Unsupported,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl From<SubstituteError> for OreError {
    fn from(e: SubstituteError) -> Self {
        match e {
            SubstituteError::ImageCount { .. } => OreError::ImageRing,
            SubstituteError::NotInvertible => OreError::NotInvertible,
            SubstituteError::Arith(a) => OreError::Arith(a),
        }
    }
}

/// Shape of `R[x; sigma, delta][t1..td]` over the coefficient field `K`.
pub struct OreRingDescriptor<C: Scalar> {
    coefficients: Arc<FieldDescriptor>,
    skew_var: String,
    sigma: Option<AutomorphismSpec<C>>,
    delta: Option<DerivationSpec<C>>,
    central_vars: Vec<String>,
}

/// Shared handle to an Ore ring description.
pub struct OreRing<C: Scalar>(Arc<OreRingDescriptor<C>>);

impl<C: Scalar> Clone for OreRing<C> {
    fn clone(&self) -> Self {
        OreRing(self.0.clone())
    }
}

impl<C: Scalar> fmt::Debug for OreRing<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreRing({}[{}", self.0.coefficients.variables().join(","), self.0.skew_var)?;
        if self.0.sigma.is_some() {
            write!(f, "; sigma")?;
        }
        if self.0.delta.is_some() {
            write!(f, "; delta")?;
        }
        write!(f, "]")?;
        if !self.0.central_vars.is_empty() {
            write!(f, "[{}]", self.0.central_vars.join(","))?;
        }
        write!(f, ")")
    }
}

/// One of the ring generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Coefficient(usize),
    Skew,
    Central(usize),
}

impl<C: Scalar> OreRing<C> {
    /// `sigma = None` means the identity, `delta = None` the zero map.
    pub fn new(
        coefficients: &Arc<FieldDescriptor>,
        skew_var: &str,
        sigma: Option<AutomorphismSpec<C>>,
        delta: Option<DerivationSpec<C>>,
        central_vars: &[&str],
    ) -> Result<Self, OreError> {
        if coefficients.characteristic() != C::CHARACTERISTIC {
            return Err(ArithError::CharacteristicMismatch {
                declared: coefficients.characteristic(),
                scalar: C::CHARACTERISTIC,
            }
            .into());
        }
        let mut names: Vec<&str> = coefficients.variables().iter().map(String::as_str).collect();
        names.push(skew_var);
        names.extend_from_slice(central_vars);
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(OreError::NameClash(n.to_string()));
            }
        }
        let sigma = sigma.filter(|s| !s.is_identity());
        let delta = delta.filter(|d| !d.is_zero());
        if sigma.as_ref().is_some_and(|s| !same_field(s.field(), coefficients))
            || delta.as_ref().is_some_and(|d| !same_field(d.field(), coefficients))
        {
            return Err(OreError::FieldMismatch);
        }
        if sigma.is_some() && delta.is_some() {
            return Err(OreError::SigmaDerivationUnsupported);
        }
        Ok(OreRing(Arc::new(OreRingDescriptor {
            coefficients: coefficients.clone(),
            skew_var: skew_var.to_string(),
            sigma,
            delta,
            central_vars: central_vars.iter().map(|s| s.to_string()).collect(),
        })))
    }

    pub fn coefficients(&self) -> &Arc<FieldDescriptor> {
        &self.0.coefficients
    }

    pub fn skew_var(&self) -> &str {
        &self.0.skew_var
    }

    pub fn central_vars(&self) -> &[String] {
        &self.0.central_vars
    }

    pub fn sigma(&self) -> Option<&AutomorphismSpec<C>> {
        self.0.sigma.as_ref()
    }

    pub fn delta(&self) -> Option<&DerivationSpec<C>> {
        self.0.delta.as_ref()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn check(&self, other: &Self) -> Result<(), OreError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(OreError::RingMismatch)
        }
    }

    pub fn zero(&self) -> OreElement<C> {
        OreElement { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> OreElement<C> {
        self.coeff(RatFunc::one(&self.0.coefficients))
    }

    pub fn int(&self, n: i64) -> OreElement<C> {
        self.coeff(RatFunc::constant(&self.0.coefficients, C::from_i64(n)))
    }

    /// Embeds a coefficient-field element.
    pub fn coeff(&self, c: RatFunc<C>) -> OreElement<C> {
        self.monomial(c, 0, &vec![0; self.0.central_vars.len()])
    }

    /// `c * x^skew * t^central`.
    pub fn monomial(&self, c: RatFunc<C>, skew: u32, central: &[u32]) -> OreElement<C> {
        let mut e = self.zero();
        if !c.is_zero() {
            e.terms.insert(OreMonomial { skew, central: central.to_vec() }, c);
        }
        e
    }

    pub fn coeff_var(&self, i: usize) -> OreElement<C> {
        self.coeff(RatFunc::var(&self.0.coefficients, i))
    }

    /// The skew variable `x`.
    pub fn skew(&self) -> OreElement<C> {
        let one = RatFunc::one(&self.0.coefficients);
        self.monomial(one, 1, &vec![0; self.0.central_vars.len()])
    }

    pub fn central(&self, i: usize) -> OreElement<C> {
        let mut e = vec![0; self.0.central_vars.len()];
        e[i] = 1;
        self.monomial(RatFunc::one(&self.0.coefficients), 0, &e)
    }

    pub fn generator(&self, g: Generator) -> OreElement<C> {
        match g {
            Generator::Coefficient(i) => self.coeff_var(i),
            Generator::Skew => self.skew(),
            Generator::Central(i) => self.central(i),
        }
    }

    pub fn generator_name(&self, g: Generator) -> String {
        match g {
            Generator::Coefficient(i) => self.0.coefficients.variables()[i].clone(),
            Generator::Skew => self.0.skew_var.clone(),
            Generator::Central(i) => self.0.central_vars[i].clone(),
        }
    }

    /// Coefficient generators, then the skew variable, then the central variables.
    pub fn generating_set(&self) -> Vec<Generator> {
        let mut g: Vec<Generator> = (0..self.0.coefficients.num_vars()).map(Generator::Coefficient).collect();
        g.push(Generator::Skew);
        g.extend((0..self.0.central_vars.len()).map(Generator::Central));
        g
    }

    pub fn lookup_generator(&self, name: &str) -> Option<Generator> {
        self.generating_set().into_iter().find(|g| self.generator_name(*g) == name)
    }

    fn is_trivial_coefficient(&self, c: &RatFunc<C>) -> bool {
        (self.0.sigma.is_none() && self.0.delta.is_none()) || c.constant_value().is_some()
    }

    /// `x^m * c` for every `m <= max_m`: entry `[m][j]` multiplies `x^j`.
    fn left_powers(&self, c: &RatFunc<C>, max_m: u32) -> Vec<Vec<RatFunc<C>>> {
        let mut levels = Vec::with_capacity(max_m as usize + 1);
        levels.push(vec![c.clone()]);
        for _ in 0..max_m {
            let prev: &Vec<RatFunc<C>> = levels.last().unwrap();
            let mut next = vec![RatFunc::zero(&self.0.coefficients); prev.len() + 1];
            for (j, cj) in prev.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let s = match &self.0.sigma {
                    Some(sig) => sig.apply(cj).expect("coefficient field"),
                    None => cj.clone(),
                };
                next[j + 1] = &next[j + 1] + &s;
                if let Some(d) = &self.0.delta {
                    let dc = d.apply(cj).expect("coefficient field");
                    if !dc.is_zero() {
                        next[j] = &next[j] + &dc;
                    }
                }
            }
            while next.len() > 1 && next.last().is_some_and(RatFunc::is_zero) {
                next.pop();
            }
            levels.push(next);
        }
        levels
    }
}

/// Exponent of `x` together with the exponents of the central variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OreMonomial {
    pub skew: u32,
    pub central: Vec<u32>,
}

impl OreMonomial {
    fn mul(&self, skew: u32, other: &OreMonomial) -> OreMonomial {
        OreMonomial {
            skew,
            central: self.central.iter().zip(&other.central).map(|(a, b)| a + b).collect(),
        }
    }

    fn is_one(&self) -> bool {
        self.skew == 0 && self.central.iter().all(|&e| e == 0)
    }
}

/// An element `sum c * x^m * t^e` of an Ore ring, coefficients on the left.
#[derive(Clone)]
pub struct OreElement<C: Scalar> {
    ring: OreRing<C>,
    terms: BTreeMap<OreMonomial, RatFunc<C>>,
}

impl<C: Scalar> OreElement<C> {
    pub fn ring(&self) -> &OreRing<C> {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OreMonomial, &RatFunc<C>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in the skew variable.
    pub fn skew_degree(&self) -> Degree {
        self.terms.keys().map(|m| m.skew).max().map_or(Degree::Undefined, Degree::Finite)
    }

    pub fn coefficient(&self, skew: u32, central: &[u32]) -> RatFunc<C> {
        self.terms
            .get(&OreMonomial { skew, central: central.to_vec() })
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.ring.coefficients()))
    }

    /// The coefficient-field element this is, if it has no `x` or `t` part.
    pub fn as_coefficient(&self) -> Option<RatFunc<C>> {
        match self.terms.len() {
            0 => Some(RatFunc::zero(self.ring.coefficients())),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: OreMonomial, c: RatFunc<C>) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, OreError> {
        self.ring.check(&other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, OreError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        OreElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// The noncommutative product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, OreError> {
        ore_mul(self, other)
    }

    /// Left multiplication by a coefficient.
    pub fn scale_left(&self, c: &RatFunc<C>) -> Self {
        let mut out = self.ring.zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), c * a);
        }
        out
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = ore_mul(&acc, &base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = ore_mul(&base, &base).expect("same ring");
            }
        }
        acc
    }

    /// Semantic equality (coefficients compared by cross multiplication).
    pub fn try_eq(&self, other: &Self) -> Result<bool, OreError> {
        self.ring.check(&other.ring)?;
        if self.terms.len() != other.terms.len() {
            return Ok(false);
        }
        Ok(self.terms.iter().zip(&other.terms).all(|((ma, ca), (mb, cb))| ma == mb && ca == cb))
    }

    fn fmt_monomial(&self, m: &OreMonomial, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut dyn fmt::Write, name: &str, e: u32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(name)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            Ok(())
        };
        put(f, &self.ring.0.skew_var, m.skew)?;
        for (i, &e) in m.central.iter().enumerate() {
            put(f, &self.ring.0.central_vars[i], e)?;
        }
        Ok(())
    }
}

impl<C: Scalar> PartialEq for OreElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

impl<C: Scalar> fmt::Display for OreElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut cs = c.to_string();
            let neg = cs.starts_with('-') && c.is_polynomial() && c.numerator().len() == 1;
            if neg {
                cs.remove(0);
            }
            if k == 0 {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&cs)?;
                continue;
            }
            if cs != "1" {
                let simple = c.is_polynomial() && c.numerator().len() == 1;
                if simple {
                    write!(f, "{cs}*")?;
                } else {
                    write!(f, "({cs})*")?;
                }
            }
            self.fmt_monomial(m, f)?;
        }
        Ok(())
    }
}

use std::fmt::Write as _;

impl<C: Scalar> fmt::Debug for OreElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreElement({self})")
    }
}

/// Product in `K[x; sigma, delta][t]`.
pub fn ore_mul<C: Scalar>(a: &OreElement<C>, b: &OreElement<C>) -> Result<OreElement<C>, OreError> {
    a.ring.check(&b.ring)?;
    let ring = &a.ring;
    let mut out = ring.zero();
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    let max_m = a.terms.keys().map(|m| m.skew).max().unwrap_or(0);
    for (mb, cb) in &b.terms {
        if ring.is_trivial_coefficient(cb) {
            for (ma, ca) in &a.terms {
                out.add_term(ma.mul(ma.skew + mb.skew, mb), ca * cb);
            }
            continue;
        }
        let levels = ring.left_powers(cb, max_m);
        for (ma, ca) in &a.terms {
            for (j, c) in levels[ma.skew as usize].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out.add_term(ma.mul(j as u32 + mb.skew, mb), ca * c);
            }
        }
    }
    Ok(out)
}

/// `ab - ba`.
pub fn commutator<C: Scalar>(a: &OreElement<C>, b: &OreElement<C>) -> Result<OreElement<C>, OreError> {
    ore_mul(a, b)?.try_sub(&ore_mul(b, a)?)
}

/// Result of a centrality test against a list of generators.
#[derive(Debug, Clone, PartialEq)]
pub enum CentralityCertificate<C: Scalar> {
    Central,
    NotCentral { generator: Generator, name: String, commutator: OreElement<C> },
}

impl<C: Scalar> CentralityCertificate<C> {
    pub fn is_central(&self) -> bool {
        matches!(self, CentralityCertificate::Central)
    }
}

/// Central iff the commutator with every listed generator vanishes.
///
/// With a generating list this is centrality in the whole ring.
pub fn is_central<C: Scalar>(
    a: &OreElement<C>,
    witnesses: &[Generator],
) -> Result<CentralityCertificate<C>, OreError> {
    for &g in witnesses {
        let ge = a.ring.generator(g);
        let c = commutator(a, &ge)?;
        if !c.is_zero() {
            return Ok(CentralityCertificate::NotCentral {
                generator: g,
                name: a.ring.generator_name(g),
                commutator: c,
            });
        }
    }
    Ok(CentralityCertificate::Central)
}

impl<C: Scalar> Ring for OreRing<C> {
    type Scalar = C;
    type Elem = OreElement<C>;

    fn zero(&self) -> OreElement<C> {
        OreRing::zero(self)
    }
    fn one(&self) -> OreElement<C> {
        OreRing::one(self)
    }
    fn from_scalar(&self, c: C) -> OreElement<C> {
        self.coeff(RatFunc::constant(&self.0.coefficients, c))
    }
    fn add(&self, a: &OreElement<C>, b: &OreElement<C>) -> OreElement<C> {
        a.try_add(b).expect("same ring")
    }
    fn neg(&self, a: &OreElement<C>) -> OreElement<C> {
        a.neg()
    }
    fn sub(&self, a: &OreElement<C>, b: &OreElement<C>) -> OreElement<C> {
        a.try_sub(b).expect("same ring")
    }
    fn mul(&self, a: &OreElement<C>, b: &OreElement<C>) -> OreElement<C> {
        ore_mul(a, b).expect("same ring")
    }
    fn is_zero(&self, a: &OreElement<C>) -> bool {
        a.is_zero()
    }
    fn equal(&self, a: &OreElement<C>, b: &OreElement<C>) -> bool {
        a == b
    }
    fn unit_inverse(&self, a: &OreElement<C>) -> Option<OreElement<C>> {
        let c = a.as_coefficient()?;
        Some(self.coeff(c.inv().ok()?))
    }
    fn pow(&self, a: &OreElement<C>, n: u64) -> OreElement<C> {
        a.pow(n)
    }
}

impl<C: Scalar> Algebra for OreRing<C> {
    fn generators(&self) -> Vec<OreElement<C>> {
        self.generating_set().into_iter().map(|g| self.generator(g)).collect()
    }

    fn generator_names(&self) -> Vec<String> {
        self.generating_set().into_iter().map(|g| self.generator_name(g)).collect()
    }

    /// Images are ordered as [`OreRing::generating_set`].
    fn substitute<T: Ring<Scalar = C>>(
        &self,
        a: &OreElement<C>,
        target: &T,
        images: &[T::Elem],
    ) -> Result<T::Elem, SubstituteError> {
        let nc = self.0.coefficients.num_vars();
        let nt = self.0.central_vars.len();
        if images.len() != nc + 1 + nt {
            return Err(SubstituteError::ImageCount { expected: nc + 1 + nt, got: images.len() });
        }
        let coeff_imgs = &images[..nc];
        let skew_img = &images[nc];
        let central_imgs = &images[nc + 1..];
        let mut skew_pows = vec![target.one()];
        let mut central_pows: Vec<Vec<T::Elem>> = (0..nt).map(|_| vec![target.one()]).collect();
        let mut acc = target.zero();
        for (m, c) in &a.terms {
            let num = eval_poly(c.numerator(), target, coeff_imgs)?;
            let mut term = if c.is_polynomial() {
                num
            } else {
                let den = eval_poly(c.denominator(), target, coeff_imgs)?;
                let inv = target.unit_inverse(&den).ok_or(SubstituteError::NotInvertible)?;
                target.mul(&num, &inv)
            };
            while skew_pows.len() <= m.skew as usize {
                let next = target.mul(skew_pows.last().unwrap(), skew_img);
                skew_pows.push(next);
            }
            term = target.mul(&term, &skew_pows[m.skew as usize]);
            for (i, &e) in m.central.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while central_pows[i].len() <= e as usize {
                    let next = target.mul(central_pows[i].last().unwrap(), &central_imgs[i]);
                    central_pows[i].push(next);
                }
                term = target.mul(&term, &central_pows[i][e as usize]);
            }
            acc = target.add(&acc, &term);
        }
        Ok(acc)
    }

    fn is_central(&self, a: &OreElement<C>) -> bool {
        is_central(a, &self.generating_set()).map(|c| c.is_central()).unwrap_or(false)
    }
}

#[derive(Clone)]
enum CoeffMode<C: Scalar> {
    /// Same coefficient field, every generator fixed.
    Identity,
    /// Every coefficient image is a coefficient of the target.
    FieldMap(Vec<RatFunc<C>>),
    General,
}

/// A ring homomorphism between Ore rings, given on generators.
#[derive(Clone)]
pub struct RingHomSpec<C: Scalar> {
    source: OreRing<C>,
    target: OreRing<C>,
    coeff_images: Vec<OreElement<C>>,
    skew_image: OreElement<C>,
    central_images: Vec<OreElement<C>>,
    mode: CoeffMode<C>,
}

impl<C: Scalar> RingHomSpec<C> {
    pub fn new(
        source: &OreRing<C>,
        target: &OreRing<C>,
        coeff_images: Vec<OreElement<C>>,
        skew_image: OreElement<C>,
        central_images: Vec<OreElement<C>>,
    ) -> Result<Self, OreError> {
        let nc = source.coefficients().num_vars();
        if coeff_images.len() != nc {
            let missing = coeff_images.len().min(nc);
            return Err(OreError::UnmappedGenerator(
                source.generator_name(Generator::Coefficient(missing)),
            ));
        }
        if central_images.len() != source.central_vars().len() {
            let missing = central_images.len().min(source.central_vars().len());
            return Err(OreError::UnmappedGenerator(source.generator_name(Generator::Central(missing))));
        }
        let all = coeff_images.iter().chain(std::iter::once(&skew_image)).chain(central_images.iter());
        for img in all {
            if !img.ring.same_ring(target) {
                return Err(OreError::ImageRing);
            }
        }
        let scalars: Option<Vec<RatFunc<C>>> = coeff_images.iter().map(OreElement::as_coefficient).collect();
        let mode = match scalars {
            Some(imgs) => {
                let identity = same_field(source.coefficients(), target.coefficients())
                    && imgs.iter().enumerate().all(|(i, g)| *g == RatFunc::var(target.coefficients(), i));
                if identity {
                    CoeffMode::Identity
                } else {
                    CoeffMode::FieldMap(imgs)
                }
            }
            None => CoeffMode::General,
        };
        Ok(RingHomSpec { source: source.clone(), target: target.clone(), coeff_images, skew_image, central_images, mode })
    }

    /// Fixes the (shared) coefficient field; only `x` and the central variables move.
    pub fn fixing_coefficients(
        source: &OreRing<C>,
        target: &OreRing<C>,
        skew_image: OreElement<C>,
        central_images: Vec<OreElement<C>>,
    ) -> Result<Self, OreError> {
        if !same_field(source.coefficients(), target.coefficients()) {
            return Err(OreError::FieldMismatch);
        }
        let coeff_images = (0..source.coefficients().num_vars()).map(|i| target.coeff_var(i)).collect();
        Self::new(source, target, coeff_images, skew_image, central_images)
    }

    pub fn source(&self) -> &OreRing<C> {
        &self.source
    }

    pub fn target(&self) -> &OreRing<C> {
        &self.target
    }

    pub fn image_of(&self, g: Generator) -> &OreElement<C> {
        match g {
            Generator::Coefficient(i) => &self.coeff_images[i],
            Generator::Skew => &self.skew_image,
            Generator::Central(i) => &self.central_images[i],
        }
    }

    fn map_coefficient(&self, c: &RatFunc<C>) -> Result<OreElement<C>, OreError> {
        match &self.mode {
            CoeffMode::Identity => Ok(self.target.coeff(c.clone())),
            CoeffMode::FieldMap(imgs) => {
                let f = crate::maps::substitute_field(c, self.target.coefficients(), imgs)?;
                Ok(self.target.coeff(f))
            }
            CoeffMode::General => {
                let num = eval_poly(c.numerator(), &self.target, &self.coeff_images)?;
                if c.is_polynomial() {
                    return Ok(num);
                }
                let den = eval_poly(c.denominator(), &self.target, &self.coeff_images)?;
                let inv = self.target.unit_inverse(&den).ok_or(OreError::NotInvertible)?;
                Ok(ore_mul(&num, &inv)?)
            }
        }
    }
}

/// Evaluates `h(a)`, expanding each monomial left to right in the target.
pub fn hom_apply<C: Scalar>(h: &RingHomSpec<C>, a: &OreElement<C>) -> Result<OreElement<C>, OreError> {
    h.source.check(&a.ring)?;
    let mut skew_pows = vec![h.target.one()];
    let mut central_pows: Vec<Vec<OreElement<C>>> = h.central_images.iter().map(|_| vec![h.target.one()]).collect();
    let mut acc = h.target.zero();
    for (m, c) in &a.terms {
        let mut term = h.map_coefficient(c)?;
        while skew_pows.len() <= m.skew as usize {
            let next = ore_mul(skew_pows.last().unwrap(), &h.skew_image)?;
            skew_pows.push(next);
        }
        if m.skew > 0 {
            term = ore_mul(&term, &skew_pows[m.skew as usize])?;
        }
        for (i, &e) in m.central.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while central_pows[i].len() <= e as usize {
                let next = ore_mul(central_pows[i].last().unwrap(), &h.central_images[i])?;
                central_pows[i].push(next);
            }
            term = ore_mul(&term, &central_pows[i][e as usize])?;
        }
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

/// Outcome of checking the defining relations of the source against `h`.
#[derive(Debug, Clone, PartialEq)]
pub enum HomCertificate<C: Scalar> {
    Consistent,
    Violated { relation: String, lhs: OreElement<C>, rhs: OreElement<C> },
}

impl<C: Scalar> HomCertificate<C> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, HomCertificate::Consistent)
    }
}

/// Checks that the generator images satisfy every defining relation of the source:
/// `h(x) h(a) - h(sigma(a)) h(x) = h(delta(a))` for coefficient generators `a`,
/// coefficient images commute pairwise, and central variables map to central elements.
pub fn hom_check<C: Scalar>(h: &RingHomSpec<C>) -> Result<HomCertificate<C>, OreError> {
    let src = &h.source;
    let kf = src.coefficients();
    let hx = &h.skew_image;
    let x_name = src.skew_var().to_string();
    for i in 0..kf.num_vars() {
        let alpha = RatFunc::var(kf, i);
        let name = &kf.variables()[i];
        let h_alpha = &h.coeff_images[i];
        let sigma_alpha = match src.sigma() {
            Some(s) => s.apply(&alpha)?,
            None => alpha.clone(),
        };
        let delta_alpha = match src.delta() {
            Some(d) => d.apply(&alpha)?,
            None => RatFunc::zero(kf),
        };
        let h_sigma = h.map_coefficient(&sigma_alpha)?;
        let lhs = ore_mul(hx, h_alpha)?.try_sub(&ore_mul(&h_sigma, hx)?)?;
        let rhs = h.map_coefficient(&delta_alpha)?;
        if !lhs.try_eq(&rhs)? {
            let relation = if src.sigma().is_some() {
                format!("h({x_name})h({name}) - h(sigma({name}))h({x_name}) = h(delta({name}))")
            } else {
                format!("[h({x_name}), h({name})] = h(delta({name}))")
            };
            return Ok(HomCertificate::Violated { relation, lhs, rhs });
        }
    }
    for i in 0..kf.num_vars() {
        for j in (i + 1)..kf.num_vars() {
            let c = commutator(&h.coeff_images[i], &h.coeff_images[j])?;
            if !c.is_zero() {
                return Ok(HomCertificate::Violated {
                    relation: format!("[h({}), h({})] = 0", kf.variables()[i], kf.variables()[j]),
                    lhs: c,
                    rhs: h.target.zero(),
                });
            }
        }
    }
    let gens = h.target.generating_set();
    for (i, img) in h.central_images.iter().enumerate() {
        if let CentralityCertificate::NotCentral { name, commutator, .. } = is_central(img, &gens)? {
            return Ok(HomCertificate::Violated {
                relation: format!("h({}) central: [h({}), {}] = 0", src.central_vars()[i], src.central_vars()[i], name),
                lhs: commutator,
                rhs: h.target.zero(),
            });
        }
    }
    Ok(HomCertificate::Consistent)
}

/// A claimed preimage: `h(preimage)` should equal `target`.
#[derive(Debug, Clone)]
pub struct WitnessClaim<C: Scalar> {
    pub label: String,
    pub target: OreElement<C>,
    pub preimage: OreElement<C>,
}

/// Verified preimage, with the recomputed image.
#[derive(Debug, Clone)]
pub struct VerifiedWitness<C: Scalar> {
    pub label: String,
    pub preimage: OreElement<C>,
    pub image: OreElement<C>,
}

/// Verifies each claimed preimage by evaluation; fails on the first mismatch.
pub fn surjectivity_witnesses<C: Scalar>(
    h: &RingHomSpec<C>,
    claims: &[WitnessClaim<C>],
) -> Result<Vec<VerifiedWitness<C>>, OreError> {
    claims
        .iter()
        .map(|claim| {
            let image = hom_apply(h, &claim.preimage)?;
            if !image.try_eq(&claim.target)? {
                return Err(OreError::WitnessFailed {
                    label: claim.label.clone(),
                    image: image.to_string(),
                    expected: claim.target.to_string(),
                });
            }
            Ok(VerifiedWitness { label: claim.label.clone(), preimage: claim.preimage.clone(), image })
        })
        .collect()
}

/// Coordinates of `a` over the subfield of p-th powers, keyed by
/// `(skew degree, residue monomial)`.
pub fn pth_power_coordinates<C: Scalar>(
    a: &OreElement<C>,
) -> Result<SparseVec<(u32, Monomial), C>, OreError> {
    let mut v = SparseVec::new();
    for (m, c) in &a.terms {
        for (b, coord) in pth_power_decompose(c)? {
            v.insert((m.skew, b), coord);
        }
    }
    Ok(v)
}

/// Dimensions over the p-th-power subfield `k` of `F_0 <= F_1 <= ... <= F_{n_max}`,
/// where `F_n` is spanned by products of basis monomials of `K` over `k` and at
/// most `n` copies of the skew variable.
///
/// Uses `F_n = F_{n-1} + F_{n-1} * x * K`, valid because `k` is central.
pub fn filtration_dims<C: Scalar>(ring: &OreRing<C>, n_max: usize) -> Result<Vec<usize>, OreError> {
    let p = C::CHARACTERISTIC;
    if p == 0 {
        return Err(OreError::NeedsPositiveCharacteristic);
    }
    if ring.sigma().is_some() || !ring.central_vars().is_empty() {
        return Err(OreError::Unsupported);
    }
    let kf = ring.coefficients();
    let nv = kf.num_vars();
    let mut basis_monomials = vec![Monomial::one(nv)];
    for i in 0..nv {
        basis_monomials = basis_monomials
            .into_iter()
            .flat_map(|m| (0..p as u32).map(move |e| m.with_exp(i, e)))
            .collect();
    }
    let letters: Vec<OreElement<C>> = basis_monomials
        .iter()
        .map(|m| ring.coeff(RatFunc::from_poly(MultiPoly::monomial(kf, m.clone(), C::one()))))
        .collect();
    let mut echelon = EchelonBasis::new();
    let mut spanning: Vec<OreElement<C>> = Vec::new();
    for b in &letters {
        if echelon.insert(pth_power_coordinates(b)?) {
            spanning.push(b.clone());
        }
    }
    let mut dims = vec![echelon.rank()];
    let x = ring.skew();
    for _ in 0..n_max {
        let mut fresh = Vec::new();
        for f in &spanning {
            let fx = ore_mul(f, &x)?;
            for b in &letters {
                let w = ore_mul(&fx, b)?;
                if echelon.insert(pth_power_coordinates(&w)?) {
                    fresh.push(w);
                }
            }
        }
        spanning.extend(fresh);
        dims.push(echelon.rank());
    }
    Ok(dims)
}
