//! Script evaluation. Each scalar field gets its own environment; names are
//! routed to the environment of the field they were defined over.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use orekit::hasse_schmidt::{
    default_truncation, hs_axiom_check, jet_extend, iterativity_check, kernel_membership, HsCertificate, JetHom,
};
use orekit::maps::{compose_power, derivation_equal_on_generators, AutomorphismSpec, DerivationPower, DerivationSpec};
use orekit::ore::{
    hom_check, hom_apply, is_central, surjectivity_witnesses, CentralityCertificate, Generator, HomCertificate,
    OreElement, OreRing, RingHomSpec, WitnessClaim,
};
use orekit::report::{CheckRecord, Status, VerificationReport};
use orekit::ring::SubstituteError;
use orekit::slice::nu;
use orekit::{Algebra, FieldDescriptor, Fp, FunctionField, RatFunc, Ring, Scalar, Series, TruncatedSeries, Q};

use crate::script::{Assertion, Expr, Line, Script, Stmt};

type Res<T> = Result<T, String>;

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Scalar field names accepted by `field` statements.
pub const SCALARS: [&str; 7] = ["Q", "F2", "F3", "F5", "F7", "F11", "F13"];

/// An element of a function field or of an Ore ring.
#[derive(Clone, PartialEq)]
pub enum Val<C: Scalar> {
    Field(RatFunc<C>),
    Ore(OreElement<C>),
}

impl<C: Scalar> fmt::Display for Val<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Field(a) => write!(f, "{a}"),
            Val::Ore(a) => write!(f, "{a}"),
        }
    }
}

impl<C: Scalar> fmt::Debug for Val<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Scalar> Val<C> {
    fn field(&self) -> &RatFunc<C> {
        match self {
            Val::Field(a) => a,
            Val::Ore(_) => panic!("expected a field element"),
        }
    }

    fn ore(&self) -> &OreElement<C> {
        match self {
            Val::Ore(a) => a,
            Val::Field(_) => panic!("expected an Ore ring element"),
        }
    }
}

/// A ring a script can compute in.
#[derive(Clone, Debug)]
pub enum Ambient<C: Scalar> {
    Field(FunctionField<C>),
    Ore(OreRing<C>),
}

impl<C: Scalar> Ambient<C> {
    fn embed(&self, c: RatFunc<C>) -> Val<C> {
        match self {
            Ambient::Field(_) => Val::Field(c),
            Ambient::Ore(r) => Val::Ore(r.coeff(c)),
        }
    }

    fn generator_named(&self, name: &str) -> Option<Val<C>> {
        match self {
            Ambient::Field(k) => k.var_named(name).map(Val::Field),
            Ambient::Ore(r) => r.lookup_generator(name).map(|g| Val::Ore(r.generator(g))),
        }
    }
}

impl<C: Scalar> Ring for Ambient<C> {
    type Scalar = C;
    type Elem = Val<C>;

    fn zero(&self) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.zero()),
            Ambient::Ore(r) => Val::Ore(Ring::zero(r)),
        }
    }
    fn one(&self) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.one()),
            Ambient::Ore(r) => Val::Ore(Ring::one(r)),
        }
    }
    fn from_scalar(&self, c: C) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.from_scalar(c)),
            Ambient::Ore(r) => Val::Ore(r.from_scalar(c)),
        }
    }
    fn add(&self, a: &Val<C>, b: &Val<C>) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.add(a.field(), b.field())),
            Ambient::Ore(r) => Val::Ore(r.add(a.ore(), b.ore())),
        }
    }
    fn neg(&self, a: &Val<C>) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.neg(a.field())),
            Ambient::Ore(r) => Val::Ore(r.neg(a.ore())),
        }
    }
    fn mul(&self, a: &Val<C>, b: &Val<C>) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.mul(a.field(), b.field())),
            Ambient::Ore(r) => Val::Ore(r.mul(a.ore(), b.ore())),
        }
    }
    fn is_zero(&self, a: &Val<C>) -> bool {
        match self {
            Ambient::Field(k) => k.is_zero(a.field()),
            Ambient::Ore(r) => r.is_zero(a.ore()),
        }
    }
    fn equal(&self, a: &Val<C>, b: &Val<C>) -> bool {
        match self {
            Ambient::Field(k) => k.equal(a.field(), b.field()),
            Ambient::Ore(r) => r.equal(a.ore(), b.ore()),
        }
    }
    fn unit_inverse(&self, a: &Val<C>) -> Option<Val<C>> {
        match self {
            Ambient::Field(k) => k.unit_inverse(a.field()).map(Val::Field),
            Ambient::Ore(r) => r.unit_inverse(a.ore()).map(Val::Ore),
        }
    }
    fn pow(&self, a: &Val<C>, n: u64) -> Val<C> {
        match self {
            Ambient::Field(k) => Val::Field(k.pow(a.field(), n)),
            Ambient::Ore(r) => Val::Ore(r.pow(a.ore(), n)),
        }
    }
}

impl<C: Scalar> Algebra for Ambient<C> {
    fn generators(&self) -> Vec<Val<C>> {
        match self {
            Ambient::Field(k) => k.generators().into_iter().map(Val::Field).collect(),
            Ambient::Ore(r) => r.generators().into_iter().map(Val::Ore).collect(),
        }
    }

    fn generator_names(&self) -> Vec<String> {
        match self {
            Ambient::Field(k) => k.generator_names(),
            Ambient::Ore(r) => r.generator_names(),
        }
    }

    fn substitute<T: Ring<Scalar = C>>(&self, a: &Val<C>, target: &T, images: &[T::Elem]) -> Result<T::Elem, SubstituteError> {
        match self {
            Ambient::Field(k) => k.substitute(a.field(), target, images),
            Ambient::Ore(r) => r.substitute(a.ore(), target, images),
        }
    }

    fn is_central(&self, a: &Val<C>) -> bool {
        match self {
            Ambient::Field(_) => true,
            Ambient::Ore(r) => r.is_central(a.ore()),
        }
    }
}

/// Evaluates `e` in `ring`, resolving names and calls through the closures.
pub fn eval<T: Ring>(
    ring: &T,
    e: &Expr,
    ident: &dyn Fn(&str) -> Res<T::Elem>,
    call: &dyn Fn(&str, &Expr) -> Res<T::Elem>,
) -> Res<T::Elem> {
    let go = |x: &Expr| eval(ring, x, ident, call);
    Ok(match e {
        Expr::Num(s) => {
            ring.from_scalar(T::Scalar::parse_literal(s).ok_or_else(|| format!("bad number `{s}`"))?)
        }
        Expr::Ident(n) => ident(n)?,
        Expr::Neg(a) => ring.neg(&go(a)?),
        Expr::Add(a, b) => ring.add(&go(a)?, &go(b)?),
        Expr::Sub(a, b) => ring.sub(&go(a)?, &go(b)?),
        Expr::Mul(a, b) => ring.mul(&go(a)?, &go(b)?),
        Expr::Div(a, b) => {
            let d = go(b)?;
            let inv = ring.unit_inverse(&d).ok_or_else(|| format!("cannot divide by {d}"))?;
            ring.mul(&go(a)?, &inv)
        }
        Expr::Pow(a, n) => ring.pow(&go(a)?, *n),
        Expr::Commutator(a, b) => {
            let (a, b) = (go(a)?, go(b)?);
            ring.sub(&ring.mul(&a, &b), &ring.mul(&b, &a))
        }
        Expr::Call(f, a) => call(f, a)?,
    })
}

/// What one statement produced.
#[derive(Debug, Clone, Default)]
pub struct Step {
    pub record: Option<CheckRecord>,
    pub output: Option<String>,
}

trait Environment {
    fn exec(&mut self, stmt: &Stmt) -> Res<Step>;
}

enum Kind {
    Derivation,
    Automorphism,
    Ring,
    Element,
    Jet,
    Hom,
}

struct Env<C: Scalar> {
    derivations: HashMap<String, (String, DerivationPower<C>)>,
    automorphisms: HashMap<String, (String, AutomorphismSpec<C>)>,
    rings: HashMap<String, Ambient<C>>,
    /// Coefficient field name of each ring (a field is its own).
    ring_field: HashMap<String, String>,
    elements: HashMap<String, (String, Val<C>)>,
    jets: HashMap<String, (String, JetHom<Ambient<C>>)>,
    homs: HashMap<String, (String, String, RingHomSpec<C>)>,
}

fn pass(witness: Option<String>) -> Step {
    Step { record: Some(CheckRecord { name: String::new(), status: Status::Pass, witness, elapsed_ms: 0 }), output: None }
}

fn fail(witness: String) -> Step {
    Step { record: Some(CheckRecord { name: String::new(), status: Status::Fail, witness: Some(witness), elapsed_ms: 0 }), output: None }
}

fn verdict(ok: bool, witness: String) -> Step {
    if ok {
        pass(Some(witness))
    } else {
        fail(witness)
    }
}

impl<C: Scalar> Env<C> {
    fn new() -> Self {
        Env {
            derivations: HashMap::new(),
            automorphisms: HashMap::new(),
            rings: HashMap::new(),
            ring_field: HashMap::new(),
            elements: HashMap::new(),
            jets: HashMap::new(),
            homs: HashMap::new(),
        }
    }

    fn kind(&self, name: &str) -> Option<Kind> {
        if self.derivations.contains_key(name) {
            Some(Kind::Derivation)
        } else if self.automorphisms.contains_key(name) {
            Some(Kind::Automorphism)
        } else if self.rings.contains_key(name) {
            Some(Kind::Ring)
        } else if self.elements.contains_key(name) {
            Some(Kind::Element)
        } else if self.jets.contains_key(name) {
            Some(Kind::Jet)
        } else if self.homs.contains_key(name) {
            Some(Kind::Hom)
        } else {
            None
        }
    }

    fn ring(&self, name: &str) -> Res<&Ambient<C>> {
        self.rings.get(name).ok_or_else(|| format!("`{name}` is not a ring"))
    }

    fn field(&self, name: &str) -> Res<FunctionField<C>> {
        match self.ring(name)? {
            Ambient::Field(k) => Ok(k.clone()),
            Ambient::Ore(_) => Err(format!("`{name}` is not a field")),
        }
    }

    fn ore(&self, name: &str) -> Res<OreRing<C>> {
        match self.ring(name)? {
            Ambient::Ore(r) => Ok(r.clone()),
            Ambient::Field(_) => Err(format!("`{name}` is not an Ore ring")),
        }
    }

    /// Generators of the ring first, then elements of the ring or its coefficient field.
    fn eval_in(&self, ring_name: &str, e: &Expr) -> Res<Val<C>> {
        let ring = self.ring(ring_name)?;
        let field_name = &self.ring_field[ring_name];
        let ident = |n: &str| -> Res<Val<C>> {
            if let Some(v) = ring.generator_named(n) {
                return Ok(v);
            }
            match self.elements.get(n) {
                Some((r, v)) if r == ring_name => Ok(v.clone()),
                Some((r, v)) if r == field_name => Ok(ring.embed(v.field().clone())),
                Some((r, _)) => Err(format!("`{n}` lives in `{r}`, not `{ring_name}`")),
                None => Err(format!("`{n}` is not a generator of `{ring_name}` or a known element")),
            }
        };
        let call = |f: &str, arg: &Expr| -> Res<Val<C>> {
            if let Some((k, d)) = self.derivations.get(f) {
                self.check_field(f, k, field_name)?;
                let a = self.eval_in(k, arg)?;
                return Ok(ring.embed(d.apply(a.field()).map_err(err)?));
            }
            if let Some((k, s)) = self.automorphisms.get(f) {
                self.check_field(f, k, field_name)?;
                let a = self.eval_in(k, arg)?;
                return Ok(ring.embed(s.apply(a.field()).map_err(err)?));
            }
            if let Some((src, tgt, h)) = self.homs.get(f) {
                if tgt != ring_name {
                    return Err(format!("`{f}` maps into `{tgt}`, not `{ring_name}`"));
                }
                let a = self.eval_in(src, arg)?;
                return Ok(Val::Ore(hom_apply(h, a.ore()).map_err(err)?));
            }
            Err(format!("`{f}` is not a derivation, automorphism or homomorphism"))
        };
        eval(ring, e, &ident, &call)
    }

    fn check_field(&self, map: &str, map_field: &str, field: &str) -> Res<()> {
        if map_field == field {
            Ok(())
        } else {
            Err(format!("`{map}` acts on `{map_field}`, not `{field}`"))
        }
    }

    fn field_images(&self, k: &FunctionField<C>, field: &str, images: &[(String, Expr)], default: impl Fn(usize) -> RatFunc<C>) -> Res<Vec<RatFunc<C>>> {
        let vars = k.descriptor().variables();
        for (g, _) in images {
            if !vars.contains(g) {
                return Err(format!("`{g}` is not a variable of `{field}`"));
            }
        }
        (0..vars.len())
            .map(|i| match images.iter().find(|(g, _)| *g == vars[i]) {
                Some((_, e)) => Ok(self.eval_in(field, e)?.field().clone()),
                None => Ok(default(i)),
            })
            .collect()
    }

    fn jet(&self, name: &str) -> Res<&(String, JetHom<Ambient<C>>)> {
        self.jets.get(name).ok_or_else(|| format!("`{name}` is not a jet"))
    }

    fn define(&mut self, stmt: &Stmt) -> Res<Step> {
        match stmt {
            Stmt::Field { name, vars, .. } => {
                let desc = FieldDescriptor::new(C::CHARACTERISTIC, vars.iter().cloned()).map_err(err)?;
                let k = FunctionField::new(desc).map_err(err)?;
                self.rings.insert(name.clone(), Ambient::Field(k));
                self.ring_field.insert(name.clone(), name.clone());
            }
            Stmt::Derivation { name, field, images } => {
                let k = self.field(field)?;
                let imgs = self.field_images(&k, field, images, |_| k.zero())?;
                let d = DerivationSpec::new(k.descriptor(), imgs).map_err(err)?;
                self.derivations.insert(name.clone(), (field.clone(), compose_power(&d, 1)));
            }
            Stmt::DerivationPower { name, base, exponent } => {
                let (k, d) = self.derivations.get(base).ok_or_else(|| format!("`{base}` is not a derivation"))?;
                let d = d.as_derivation().ok_or_else(|| format!("`{base}` is itself a power; raise the base derivation instead"))?;
                let entry = (k.clone(), compose_power(&d, *exponent));
                self.derivations.insert(name.clone(), entry);
            }
            Stmt::Automorphism { name, field, images } => {
                let k = self.field(field)?;
                let imgs = self.field_images(&k, field, images, |i| k.var(i))?;
                let s = AutomorphismSpec::new(k.descriptor(), imgs, None).map_err(err)?;
                self.automorphisms.insert(name.clone(), (field.clone(), s));
            }
            Stmt::Ring { name, field, skew, sigma, delta, central } => {
                let k = self.field(field)?;
                let sigma = match sigma {
                    Some(s) => {
                        let (kf, s) = self.automorphisms.get(s).ok_or_else(|| format!("`{s}` is not an automorphism"))?;
                        self.check_field("sigma", kf, field)?;
                        Some(s.clone())
                    }
                    None => None,
                };
                let delta = match delta {
                    Some(d) => {
                        let (kf, dp) = self.derivations.get(d).ok_or_else(|| format!("`{d}` is not a derivation"))?;
                        self.check_field("delta", kf, field)?;
                        Some(dp.as_derivation().ok_or_else(|| format!("`{d}` is not a derivation"))?)
                    }
                    None => None,
                };
                let central: Vec<&str> = central.iter().map(String::as_str).collect();
                let r = OreRing::new(k.descriptor(), skew, sigma, delta, &central).map_err(err)?;
                self.rings.insert(name.clone(), Ambient::Ore(r));
                self.ring_field.insert(name.clone(), field.clone());
            }
            Stmt::Element { name, expr, ring } => {
                let v = self.eval_in(ring, expr)?;
                self.elements.insert(name.clone(), (ring.clone(), v));
            }
            Stmt::Jet { name, ring, series, truncation, images } => {
                let amb = self.ring(ring)?.clone();
                let n = truncation.unwrap_or_else(|| match C::CHARACTERISTIC {
                    0 => 16,
                    p => default_truncation(p),
                });
                let sr = TruncatedSeries::new(amb.clone(), n);
                let names = amb.generator_names();
                let mut jets = Vec::new();
                for (g, e) in images {
                    let idx = names.iter().position(|x| x == g).ok_or_else(|| format!("`{g}` is not a generator of `{ring}`"))?;
                    let ident = |v: &str| -> Res<Series<Val<C>>> {
                        if v == series {
                            Ok(sr.variable())
                        } else {
                            Ok(sr.constant(self.eval_in(ring, &Expr::Ident(v.to_string()))?))
                        }
                    };
                    let call = |f: &str, arg: &Expr| -> Res<Series<Val<C>>> {
                        Ok(sr.constant(self.eval_in(ring, &Expr::Call(f.to_string(), Box::new(arg.clone())))?))
                    };
                    jets.push((idx, eval(&sr, e, &ident, &call)?.0));
                }
                let j = JetHom::with_kernel_default(amb, n, jets).map_err(err)?;
                self.jets.insert(name.clone(), (ring.clone(), j));
            }
            Stmt::Hom { name, source, target, images } => {
                let (src, tgt) = (self.ore(source)?, self.ore(target)?);
                let gens = src.generating_set();
                for (g, _) in images {
                    if src.lookup_generator(g).is_none() {
                        return Err(format!("`{g}` is not a generator of `{source}`"));
                    }
                }
                let same_coeffs = self.ring_field[source] == self.ring_field[target];
                let mut imgs = Vec::with_capacity(gens.len());
                for g in gens {
                    let gname = src.generator_name(g);
                    let img = match images.iter().find(|(x, _)| *x == gname) {
                        Some((_, e)) => self.eval_in(target, e)?.ore().clone(),
                        None => match g {
                            Generator::Coefficient(i) if same_coeffs => tgt.coeff_var(i),
                            _ => return Err(format!("no image given for `{gname}`")),
                        },
                    };
                    imgs.push(img);
                }
                let nc = src.coefficients().num_vars();
                let central = imgs.split_off(nc + 1);
                let skew = imgs.pop().expect("skew image");
                let h = RingHomSpec::new(&src, &tgt, imgs, skew, central).map_err(err)?;
                self.homs.insert(name.clone(), (source.clone(), target.clone(), h));
            }
            Stmt::Assert(_) | Stmt::Show { .. } => unreachable!(),
        }
        Ok(Step::default())
    }

    fn assert(&self, a: &Assertion) -> Res<Step> {
        Ok(match a {
            Assertion::Central { expr, ring } => match self.eval_in(ring, expr)? {
                Val::Field(_) => pass(None),
                Val::Ore(v) => match is_central(&v, &v.ring().generating_set()).map_err(err)? {
                    CentralityCertificate::Central => pass(None),
                    CentralityCertificate::NotCentral { name, commutator, .. } => {
                        fail(format!("[{v}, {name}] = {commutator}"))
                    }
                },
            },
            Assertion::Equal { lhs, rhs, ring } | Assertion::NotEqual { lhs, rhs, ring } => {
                let amb = self.ring(ring)?;
                let (l, r) = (self.eval_in(ring, lhs)?, self.eval_in(ring, rhs)?);
                let eq = amb.equal(&l, &r);
                let want = matches!(a, Assertion::Equal { .. });
                if eq == want {
                    pass(None)
                } else {
                    fail(format!("lhs = {l}, rhs = {r}"))
                }
            }
            Assertion::Zero { expr, ring } => {
                let v = self.eval_in(ring, expr)?;
                verdict(self.ring(ring)?.is_zero(&v), format!("value = {v}"))
            }
            Assertion::DerivationsEqual { lhs, rhs } => {
                let get = |n: &str| {
                    let (_, d) = self.derivations.get(n).ok_or_else(|| format!("`{n}` is not a derivation"))?;
                    d.as_derivation().ok_or_else(|| format!("`{n}` is not a derivation, so generator images do not determine it"))
                };
                let (l, r) = (get(lhs)?, get(rhs)?);
                if derivation_equal_on_generators(&l, &r).map_err(err)? {
                    pass(None)
                } else {
                    let names = l.field().variables();
                    let i = (0..names.len()).find(|&i| l.image(i) != r.image(i)).expect("some image differs");
                    fail(format!("{lhs}({0}) = {1}, {rhs}({0}) = {2}", names[i], l.image(i), r.image(i)))
                }
            }
            Assertion::Hom { hom } => {
                let (_, _, h) = self.homs.get(hom).ok_or_else(|| format!("`{hom}` is not a homomorphism"))?;
                match hom_check(h).map_err(err)? {
                    HomCertificate::Consistent => pass(None),
                    HomCertificate::Violated { relation, lhs, rhs } => fail(format!("{relation}: {lhs} != {rhs}")),
                }
            }
            Assertion::Preimage { hom, source, target } => {
                let (src, tgt, h) = self.homs.get(hom).ok_or_else(|| format!("`{hom}` is not a homomorphism"))?;
                let pre = self.eval_in(src, source)?.ore().clone();
                let want = self.eval_in(tgt, target)?.ore().clone();
                let claim = WitnessClaim { label: target.to_string(), target: want, preimage: pre };
                match surjectivity_witnesses(h, &[claim]) {
                    Ok(v) => pass(Some(format!("{hom}({source}) = {}", v[0].image))),
                    Err(e) => fail(e.to_string()),
                }
            }
            Assertion::Kernel { jet, expr } => {
                let (ring, j) = self.jet(jet)?;
                let v = self.eval_in(ring, expr)?;
                if kernel_membership(j, &v).map_err(err)? {
                    pass(None)
                } else {
                    fail(format!("{jet}({expr}) = {}", jet_extend(j, &v).map_err(err)?))
                }
            }
            Assertion::HsAxiom { jet, lhs, rhs } => {
                let (ring, j) = self.jet(jet)?;
                let pair = (self.eval_in(ring, lhs)?, self.eval_in(ring, rhs)?);
                cert(hs_axiom_check(j, &[pair]).map_err(err)?)
            }
            Assertion::Iterative { jet, expr } => {
                let (ring, j) = self.jet(jet)?;
                let v = self.eval_in(ring, expr)?;
                cert(iterativity_check(j, &[v], None).map_err(err)?)
            }
            Assertion::Nu { jet, expr, value } => {
                let (ring, j) = self.jet(jet)?;
                let v = self.eval_in(ring, expr)?;
                let got = nu(j, &v).map_err(err)?;
                verdict(got == *value, format!("nu = {got}"))
            }
        })
    }
}

fn cert(c: HsCertificate) -> Step {
    match c {
        HsCertificate::Pass { checked } => pass(Some(format!("checked {checked}"))),
        HsCertificate::Fail { index, detail, .. } => fail(format!("index {index}: {detail}")),
    }
}

impl<C: Scalar> Environment for Env<C> {
    fn exec(&mut self, stmt: &Stmt) -> Res<Step> {
        match stmt {
            Stmt::Assert(a) => self.assert(a),
            Stmt::Show { expr, ring } => {
                let v = self.eval_in(ring, expr)?;
                Ok(Step { record: None, output: Some(v.to_string()) })
            }
            _ => {
                if let Some(n) = stmt.defines() {
                    if self.kind(n).is_some() {
                        return Err(format!("`{n}` is already defined"));
                    }
                }
                self.define(stmt)
            }
        }
    }
}

fn new_env(scalar: &str) -> Option<Box<dyn Environment>> {
    Some(match scalar {
        "Q" => Box::new(Env::<Q>::new()),
        "F2" => Box::new(Env::<Fp<2>>::new()),
        "F3" => Box::new(Env::<Fp<3>>::new()),
        "F5" => Box::new(Env::<Fp<5>>::new()),
        "F7" => Box::new(Env::<Fp<7>>::new()),
        "F11" => Box::new(Env::<Fp<11>>::new()),
        "F13" => Box::new(Env::<Fp<13>>::new()),
        _ => return None,
    })
}

/// Runs statements one at a time, keeping definitions between calls.
#[derive(Default)]
pub struct Interpreter {
    envs: HashMap<String, Box<dyn Environment>>,
    /// Scalar field of every defined name.
    scalar_of: HashMap<String, String>,
}

impl Interpreter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Names defined so far.
    pub fn defined(&self) -> impl Iterator<Item = &String> {
        self.scalar_of.keys()
    }

    fn scalar_for(&self, stmt: &Stmt) -> Res<String> {
        if let Stmt::Field { scalar, .. } = stmt {
            return if SCALARS.contains(&scalar.as_str()) {
                Ok(scalar.clone())
            } else {
                Err(format!("unknown scalar field `{scalar}`; expected one of {}", SCALARS.join(", ")))
            };
        }
        let mut found: Option<&String> = None;
        for r in stmt.references() {
            let s = self.scalar_of.get(r).ok_or_else(|| format!("undefined name `{r}`"))?;
            match found {
                Some(f) if f != s => return Err(format!("statement mixes {f} and {s}")),
                _ => found = Some(s),
            }
        }
        found.cloned().ok_or_else(|| "statement refers to nothing".to_string())
    }

    /// Executes one statement. Assertions and runtime failures produce a
    /// record named after the line; definitions that succeed produce none.
    pub fn exec(&mut self, line: &Line) -> Step {
        let name = format!("line {}: {}", line.number, line.stmt);
        let start = Instant::now();
        let result = self.scalar_for(&line.stmt).and_then(|scalar| {
            let env = self.envs.entry(scalar.clone()).or_insert_with(|| new_env(&scalar).expect("checked scalar"));
            let step = env.exec(&line.stmt)?;
            if let Some(n) = line.stmt.defines() {
                self.scalar_of.insert(n.to_string(), scalar);
            }
            Ok(step)
        });
        let mut step = result.unwrap_or_else(|e| fail(format!("error: {e}")));
        if let Some(r) = &mut step.record {
            r.name = name;
            r.elapsed_ms = start.elapsed().as_millis() as u64;
        }
        step
    }
}

/// Everything a script run produced.
#[derive(Debug, Clone)]
pub struct ScriptRun {
    pub report: VerificationReport,
    /// Values printed by `show`, with their line numbers.
    pub output: Vec<(usize, String)>,
}

/// Runs a parsed script from a fresh interpreter.
pub fn run_script(script: &Script) -> ScriptRun {
    let mut interp = Interpreter::new();
    let mut records = Vec::new();
    let mut output = Vec::new();
    for line in &script.lines {
        let step = interp.exec(line);
        records.extend(step.record);
        if let Some(o) = step.output {
            output.push((line.number, o));
        }
    }
    ScriptRun { report: VerificationReport::new(None, records), output }
}
