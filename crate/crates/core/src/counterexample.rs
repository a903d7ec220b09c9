//! The cancellation counterexample `A = K[x; delta]`, `B = K[x'; delta^p]` with
//! `A[t] = B[t']` but `A != B`, and the checks that certify it.

use std::sync::Arc;

use thiserror::Error;

use crate::hasse_schmidt::{default_truncation, HsError, JetHom};
use crate::lucas::is_prime;
use crate::maps::{compose_power, derivation_equal_on_generators, DerivationSpec, MapError};
use crate::ore::{
    filtration_dims, hom_apply, hom_check, is_central, ore_mul, surjectivity_witnesses, CentralityCertificate,
    HomCertificate, OreElement, OreError, OreRing, RingHomSpec, WitnessClaim,
};
use crate::poly::FieldDescriptor;
use crate::ratfunc::{ratfunc_eq, RatFunc};
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::slice::{slice_decompose, SliceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CxError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is not compiled in; supported primes are 2, 3, 5, 7, 11, 13")]
    UnsupportedPrime(u64),
    #[error("the counterexample needs positive characteristic")]
    NeedsPositiveCharacteristic,
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Hs(#[from] HsError),
    #[error(transparent)]
    Slice(#[from] SliceError),
}

/// `K = F_p(x_1, ..., x_(p^2-1))`, `delta(x_i) = x_(i+1)` cyclically, `delta' = delta^p`,
/// `A = K[x; delta][t]`, `B = K[x'; delta'][t']` and the map `Phi: A[t] -> B[t']`.
#[derive(Clone)]
pub struct CounterexampleInstance<C: Scalar> {
    pub p: u64,
    pub field: Arc<FieldDescriptor>,
    pub delta: DerivationSpec<C>,
    pub delta_prime: DerivationSpec<C>,
    pub a: OreRing<C>,
    pub b: OreRing<C>,
    pub phi: RingHomSpec<C>,
    pub z: OreElement<C>,
    pub z_prime: OreElement<C>,
}

/// The cyclic shift `x_i -> x_(i+1)` on `n` variables named `x1..xn`.
pub fn cyclic_shift<C: Scalar>(n: usize) -> Result<DerivationSpec<C>, CxError> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let field = FieldDescriptor::for_scalar::<C, _>(names).map_err(MapError::from)?;
    let images = (0..n).map(|i| RatFunc::var(&field, (i + 1) % n)).collect();
    Ok(DerivationSpec::new(&field, images)?)
}

pub fn build_instance<C: Scalar>() -> Result<CounterexampleInstance<C>, CxError> {
    let p = C::CHARACTERISTIC;
    if p == 0 {
        return Err(CxError::NeedsPositiveCharacteristic);
    }
    let delta = cyclic_shift::<C>((p * p - 1) as usize)?;
    let delta_prime = compose_power(&delta, p).as_derivation().expect("p-th power is a derivation");
    build_with(delta, delta_prime)
}

/// Same construction with `delta' = delta`; `A` and `B` are then isomorphic.
pub fn build_control_instance<C: Scalar>() -> Result<CounterexampleInstance<C>, CxError> {
    let p = C::CHARACTERISTIC;
    if p == 0 {
        return Err(CxError::NeedsPositiveCharacteristic);
    }
    let delta = cyclic_shift::<C>((p * p - 1) as usize)?;
    build_with(delta.clone(), delta)
}

fn build_with<C: Scalar>(
    delta: DerivationSpec<C>,
    delta_prime: DerivationSpec<C>,
) -> Result<CounterexampleInstance<C>, CxError> {
    let p = C::CHARACTERISTIC;
    let field = delta.field().clone();
    let a = OreRing::new(&field, "x", None, Some(delta.clone()), &["t"])?;
    let b = OreRing::new(&field, "x'", None, Some(delta_prime.clone()), &["t'"])?;
    let (x, xp, tp) = (a.skew(), b.skew(), b.central(0));
    let phi_x = xp.pow(p).try_add(&tp)?;
    let phi_t = xp.pow(p * p).try_sub(&xp)?.try_add(&tp.pow(p))?;
    let phi = RingHomSpec::fixing_coefficients(&a, &b, phi_x, vec![phi_t])?;
    let z = x.pow(p * p).try_sub(&x)?;
    let z_prime = xp.pow(p * p).try_sub(&xp)?;
    Ok(CounterexampleInstance { p, field, delta, delta_prime, a, b, phi, z, z_prime })
}

/// A named verification outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub witness: String,
}

impl CheckOutcome {
    fn new(passed: bool, witness: impl Into<String>) -> Self {
        CheckOutcome { passed, witness: witness.into() }
    }
}

fn var_name<C: Scalar>(inst: &CounterexampleInstance<C>, i: usize) -> &str {
    &inst.field.variables()[i]
}

impl<C: Scalar> CounterexampleInstance<C> {
    pub fn num_vars(&self) -> usize {
        self.field.num_vars()
    }

    /// `delta^(p^2) = delta`, `delta'^(p^2) = delta'` and `delta^(p^3) = delta^p` on generators.
    pub fn verify_delta_periodicity(&self) -> Result<CheckOutcome, CxError> {
        let p = self.p;
        let d_p2 = compose_power(&self.delta, p * p).as_derivation().expect("p-power");
        let dp_p2 = compose_power(&self.delta_prime, p * p).as_derivation().expect("p-power");
        let d_p3 = compose_power(&self.delta, p * p * p).as_derivation().expect("p-power");
        let ok1 = derivation_equal_on_generators(&d_p2, &self.delta)?;
        let ok2 = derivation_equal_on_generators(&dp_p2, &self.delta_prime)?;
        let ok3 = derivation_equal_on_generators(&d_p3, &self.delta_prime)?;
        let witness = format!(
            "delta^{}(x1) = {}, delta(x1) = {}; delta'^{}(x1) = {}, delta'(x1) = {}; delta^{}(x1) = {}",
            p * p,
            d_p2.image(0),
            self.delta.image(0),
            p * p,
            dp_p2.image(0),
            self.delta_prime.image(0),
            p * p * p,
            d_p3.image(0)
        );
        Ok(CheckOutcome::new(ok1 && ok2 && ok3, witness))
    }

    /// `x * x1 = x1 * x + delta(x1)` in `A`.
    pub fn verify_multiplication_rule(&self) -> Result<CheckOutcome, CxError> {
        let (x, x1) = (self.a.skew(), self.a.coeff_var(0));
        let lhs = ore_mul(&x, &x1)?;
        let rhs = ore_mul(&x1, &x)?.try_add(&self.a.coeff(self.delta.image(0).clone()))?;
        Ok(CheckOutcome::new(lhs.try_eq(&rhs)?, format!("x*x1 = {lhs}")))
    }

    fn centrality(&self, e: &OreElement<C>, label: &str) -> Result<CheckOutcome, CxError> {
        let ring = e.ring();
        Ok(match is_central(e, &ring.generating_set())? {
            CentralityCertificate::Central => {
                CheckOutcome::new(true, format!("[{label}, g] = 0 for every generator g"))
            }
            CentralityCertificate::NotCentral { name, commutator, .. } => {
                CheckOutcome::new(false, format!("[{label}, {name}] = {commutator}"))
            }
        })
    }

    pub fn verify_centrality_z(&self) -> Result<CheckOutcome, CxError> {
        self.centrality(&self.z, "z")
    }

    pub fn verify_centrality_z_prime(&self) -> Result<CheckOutcome, CxError> {
        self.centrality(&self.z_prime, "z'")
    }

    pub fn verify_centrality_phi_t(&self) -> Result<CheckOutcome, CxError> {
        self.centrality(self.phi.image_of(crate::ore::Generator::Central(0)), "Phi(t)")
    }

    /// All three centrality claims together.
    pub fn verify_centrality(&self) -> Result<CheckOutcome, CxError> {
        let parts = [self.verify_centrality_z()?, self.verify_centrality_z_prime()?, self.verify_centrality_phi_t()?];
        let passed = parts.iter().all(|c| c.passed);
        let witness = parts.iter().map(|c| c.witness.as_str()).collect::<Vec<_>>().join("; ");
        Ok(CheckOutcome::new(passed, witness))
    }

    pub fn verify_phi_homomorphism(&self) -> Result<CheckOutcome, CxError> {
        Ok(match hom_check(&self.phi)? {
            HomCertificate::Consistent => {
                CheckOutcome::new(true, "[Phi(x), a] = delta(a) for a in x1..; Phi(t) central")
            }
            HomCertificate::Violated { relation, lhs, rhs } => {
                CheckOutcome::new(false, format!("{relation}: {lhs} != {rhs}"))
            }
        })
    }

    /// `Phi(z) = z'^p + t'^(p^2) - t'` and `Phi(t) = z' + t'^p`.
    pub fn verify_phi_expansion(&self) -> Result<CheckOutcome, CxError> {
        let p = self.p;
        let tp = self.b.central(0);
        let phi_z = hom_apply(&self.phi, &self.z)?;
        let expected = self.z_prime.pow(p).try_add(&tp.pow(p * p))?.try_sub(&tp)?;
        let phi_t = hom_apply(&self.phi, &self.a.central(0))?;
        let expected_t = self.z_prime.try_add(&tp.pow(p))?;
        let ok = phi_z.try_eq(&expected)? && phi_t.try_eq(&expected_t)?;
        Ok(CheckOutcome::new(ok, format!("Phi(z) = (z')^{p} + t'^{} - t'; Phi(t) = z' + t'^{p}", p * p)))
    }

    /// Preimage claims in the order `t'`, `z'`, `x'^p`, `x'`, then `x_1..x_n`.
    pub fn surjectivity_claims(&self) -> Result<Vec<WitnessClaim<C>>, CxError> {
        let p = self.p;
        let (x, t) = (self.a.skew(), self.a.central(0));
        let (xp, tp) = (self.b.skew(), self.b.central(0));
        let w = self.z.try_sub(&t.pow(p))?;
        let w_p = w.pow(p);
        let z_pre = t.try_add(&w_p)?;
        let xpp_pre = x.try_add(&w)?;
        let x_pre = xpp_pre.pow(p).try_sub(&z_pre)?;
        let mut claims = vec![
            WitnessClaim { label: "t'".into(), target: tp, preimage: w.neg() },
            WitnessClaim { label: "z'".into(), target: self.z_prime.clone(), preimage: z_pre },
            WitnessClaim { label: format!("(x')^{p}"), target: xp.pow(p), preimage: xpp_pre },
            WitnessClaim { label: "x'".into(), target: xp, preimage: x_pre },
        ];
        for i in 0..self.num_vars() {
            claims.push(WitnessClaim {
                label: var_name(self, i).to_string(),
                target: self.b.coeff_var(i),
                preimage: self.a.coeff_var(i),
            });
        }
        Ok(claims)
    }

    pub fn verify_surjectivity(&self) -> Result<CheckOutcome, CxError> {
        let claims = self.surjectivity_claims()?;
        let labels: Vec<String> = claims.iter().map(|c| c.label.clone()).collect();
        Ok(match surjectivity_witnesses(&self.phi, &claims) {
            Ok(_) => CheckOutcome::new(true, format!("preimages verified for {}", labels.join(", "))),
            Err(OreError::WitnessFailed { label, image, expected }) => {
                CheckOutcome::new(false, format!("Phi(preimage of {label}) = {image}, expected {expected}"))
            }
            Err(e) => return Err(e.into()),
        })
    }

    /// `(a - b)^p = a^p - b^p` on all pairs of generators, so `x_i` is the only
    /// p-th root of `x_i^p` in `K`.
    pub fn verify_frobenius_rigidity(&self) -> Result<CheckOutcome, CxError> {
        let n = self.num_vars();
        let p = self.p;
        let mut count = 0;
        for i in 0..n {
            let a = RatFunc::<C>::var(&self.field, i);
            for j in 0..n {
                let b = RatFunc::<C>::var(&self.field, j);
                let lhs = (&a - &b).pow(p);
                let rhs = &a.pow(p) - &b.pow(p);
                if !ratfunc_eq(&lhs, &rhs).map_err(MapError::from)? {
                    return Ok(CheckOutcome::new(false, format!("({} - {})^{p} != difference of powers", var_name(self, i), var_name(self, j))));
                }
                count += 1;
            }
        }
        Ok(CheckOutcome::new(true, format!("(a - b)^{p} = a^{p} - b^{p} on {count} generator pairs")))
    }

    /// The degree-one ansatz `Psi(x) = alpha x' + beta`, `Psi|K = id`, forces
    /// `alpha = delta(g) / delta'(g)` for every generator `g`; two unequal
    /// ratios are the obstruction.
    pub fn ansatz_obstruction(&self) -> Result<Option<Obstruction<C>>, CxError> {
        let ratio = |i: usize| -> Result<Option<RatFunc<C>>, CxError> {
            let den = self.delta_prime.image(i);
            if den.is_zero() {
                return Ok(None);
            }
            Ok(Some(self.delta.image(i).try_div(den).map_err(MapError::from)?))
        };
        let n = self.num_vars();
        let ratios: Vec<Option<RatFunc<C>>> = (0..n).map(ratio).collect::<Result<_, _>>()?;
        for i in 0..n {
            for j in (i + 1)..n {
                let (Some(ai), Some(aj)) = (&ratios[i], &ratios[j]) else { continue };
                if !ratfunc_eq(ai, aj).map_err(MapError::from)? {
                    let lhs = self.delta.image(i) * self.delta_prime.image(j);
                    let rhs = self.delta.image(j) * self.delta_prime.image(i);
                    let psi = RingHomSpec::fixing_coefficients(
                        &self.a,
                        &self.b,
                        ore_mul(&self.b.coeff(ai.clone()), &self.b.skew())?,
                        vec![self.b.central(0)],
                    )?;
                    let ansatz_rejected = !hom_check(&psi)?.is_consistent();
                    return Ok(Some(Obstruction { i, j, alpha_i: ai.clone(), alpha_j: aj.clone(), lhs, rhs, ansatz_rejected }));
                }
            }
        }
        Ok(None)
    }

    pub fn verify_not_isomorphic(&self) -> Result<CheckOutcome, CxError> {
        Ok(match self.ansatz_obstruction()? {
            Some(o) => CheckOutcome::new(
                o.ansatz_rejected,
                format!(
                    "alpha = {} from {} and alpha = {} from {}; {} != {}",
                    o.alpha_i,
                    var_name(self, o.i),
                    o.alpha_j,
                    var_name(self, o.j),
                    o.lhs,
                    o.rhs
                ),
            ),
            None => CheckOutcome::new(false, "no obstruction: alpha is consistent across generators"),
        })
    }

    /// Dimensions over `k` of the filtration of `K[x; delta]` by degree in `x`.
    pub fn verify_filtration(&self, n_max: usize) -> Result<CheckOutcome, CxError> {
        let plain = OreRing::new(&self.field, "x", None, Some(self.delta.clone()), &[])?;
        let dims = filtration_dims(&plain, n_max)?;
        let base = self.p.pow(self.num_vars() as u32) as usize;
        let expected: Vec<usize> = (0..=n_max).map(|n| base * (n + 1)).collect();
        Ok(CheckOutcome::new(dims == expected, format!("dims {dims:?}, expected {expected:?}")))
    }

    /// Slice decomposition of `t^p + z` in powers of `t` under the divided
    /// powers in `t`: coefficients `z, 0, ..., 0, 1`.
    pub fn verify_t_slice(&self, truncation: usize) -> Result<CheckOutcome, CxError> {
        let p = self.p;
        let jet = t_divided_powers(&self.a, truncation)?;
        let t = self.a.central(0);
        let a = t.pow(p).try_add(&self.z)?;
        let d = slice_decompose(&jet, &a, &t)?;
        let mut expected = vec![self.a.zero(); p as usize + 1];
        expected[0] = self.z.clone();
        expected[p as usize] = self.a.one();
        let ok = d.coefficients.len() == expected.len()
            && d.coefficients.iter().zip(&expected).all(|(c, e)| c == e)
            && self.a.equal(&d.reconstruct(&self.a, &t), &a);
        Ok(CheckOutcome::new(ok, format!("t^{p} + z = sum c_i t^i with c = [z, 0, ..., 1] (N = {truncation})")))
    }

    pub fn default_truncation(&self) -> usize {
        default_truncation(self.p)
    }
}

/// Divided powers in the first central variable of `ring`; everything else is a constant.
pub fn t_divided_powers<C: Scalar>(ring: &OreRing<C>, truncation: usize) -> Result<JetHom<OreRing<C>>, HsError> {
    let idx = ring.coefficients().num_vars() + 1;
    let t = ring.central(0);
    JetHom::with_kernel_default(ring.clone(), truncation, [(idx, vec![t, ring.one()])])
}

/// Two generators giving different values of `alpha`.
#[derive(Debug, Clone)]
pub struct Obstruction<C: Scalar> {
    pub i: usize,
    pub j: usize,
    pub alpha_i: RatFunc<C>,
    pub alpha_j: RatFunc<C>,
    /// `delta(x_i) delta'(x_j)`
    pub lhs: RatFunc<C>,
    /// `delta(x_j) delta'(x_i)`
    pub rhs: RatFunc<C>,
    /// `x -> alpha_i x'` fails the homomorphism check.
    pub ansatz_rejected: bool,
}

pub fn check_prime(p: u64) -> Result<(), CxError> {
    if !is_prime(p) {
        return Err(CxError::NotPrime(p));
    }
    Ok(())
}
