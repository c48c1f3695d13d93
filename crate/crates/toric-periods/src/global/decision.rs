//! The global decision: character compatibility, the root-number condition
//! at every place and the central L-values.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hecke::{GlobalHeckeCharacter, HeckeCharacterJson, LocalComponent};
use super::quadratic::{place_decomposition, validate_d, Decomposition, Place};
use super::reciprocity::{rational_symbol, Rational, Targets};
use crate::characters::{presentation, KCharacter, MultiplicativeCharacter, NormOneCharacter, Rot};
use crate::dichotomy::local::archimedean_sign_vector;
use crate::dichotomy::{character_compatibility, epsilon_vector, k_over_base, CharacterData, SplittingData};
use crate::error::{Error, Result};
use crate::etale::{ArchComponent, BaseQuadratic, EtaleAlgebra, EtaleSetting, QuadKind, QuadraticEtale, QuadraticExtension, TraceZeroDelta};
use crate::padic::arith::{prime_divisors, primes_up_to, split_p};

/// |L(1/2)| at or below this counts as zero.
pub const L_VALUE_TOLERANCE: f64 = 1e-8;
/// Number of good places checked.
pub const GOOD_SAMPLE: usize = 20;
/// Good places are drawn from the primes below this bound.
pub const GOOD_SAMPLE_BOUND: u64 = 500;

/// d, E = Q^n, the splitting character mu and delta = t sqrt d.
#[derive(Clone, Debug)]
pub struct GlobalSetup {
    pub d: i128,
    pub n: usize,
    pub mu: GlobalHeckeCharacter,
    pub delta_t: i128,
}

impl GlobalSetup {
    pub fn new(d: i128, n: usize, mu: GlobalHeckeCharacter, delta_t: i128) -> Result<Self> {
        validate_d(d)?;
        if n == 0 {
            return Err(Error::InvalidInput("E needs at least one component".into()));
        }
        if delta_t == 0 {
            return Err(Error::InvalidInput("delta must be nonzero".into()));
        }
        if mu.d != d {
            return Err(Error::FieldMismatch);
        }
        if !mu.is_conjugate_symplectic()? {
            return Err(Error::SplittingCharacterInvalid);
        }
        Ok(GlobalSetup { d, n, mu, delta_t })
    }
}

/// alpha_j and beta as characters of K^x A_Q^x \ A_K^x (alpha o j), lambda
/// in E^x and the central values L(1/2, alpha_j o j * mu^{-1}).
#[derive(Clone, Debug)]
pub struct DecisionInput {
    pub setup: GlobalSetup,
    pub alphas: Vec<GlobalHeckeCharacter>,
    pub beta: GlobalHeckeCharacter,
    pub lambda: Vec<Rational>,
    pub l_values: Option<Vec<Complex64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub place: Place,
    pub decomposition: Decomposition,
    pub omega: Vec<i32>,
    pub epsilon: Vec<i32>,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    pub compatibility: bool,
    pub root_numbers: bool,
    pub l_values: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub conditions: Conditions,
    pub places: Vec<PlaceReport>,
    pub sampled_good_places: Vec<Place>,
    pub l_values: Vec<[f64; 2]>,
    pub verdict: bool,
}

#[derive(Clone, Debug)]
pub struct DecisionOptions {
    pub tolerance: f64,
    pub seed: u64,
    /// Evaluate missing L-values numerically (needs the `lvalue` feature).
    pub compute_l_values: bool,
}

impl Default for DecisionOptions {
    fn default() -> Self {
        DecisionOptions { tolerance: L_VALUE_TOLERANCE, seed: 0, compute_l_values: false }
    }
}

fn check_characters(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], beta: &GlobalHeckeCharacter) -> Result<()> {
    if alphas.len() != setup.n {
        return Err(Error::InvalidInput("one alpha per component of E is required".into()));
    }
    for (i, c) in alphas.iter().chain(std::iter::once(beta)).enumerate() {
        if c.d != setup.d {
            return Err(Error::FieldMismatch);
        }
        if c.restriction_exponent()? != Some(0) {
            let name = if i < alphas.len() { format!("alpha_{i}") } else { "beta".into() };
            return Err(Error::InvalidCharacter(format!("{name} is not trivial on the ideles of Q")));
        }
    }
    Ok(())
}

/// Primes dividing d, the moduli, t and lambda, then infinity.
pub fn bad_set(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], beta: &GlobalHeckeCharacter, lambda: &[Rational]) -> Vec<Place> {
    let mut primes: Vec<u64> = prime_divisors(setup.d);
    primes.extend(prime_divisors(setup.delta_t));
    for c in alphas.iter().chain([beta, &setup.mu]) {
        primes.extend(prime_divisors(c.modulus));
    }
    for l in lambda {
        primes.extend(prime_divisors(*l.numer()));
        primes.extend(prime_divisors(*l.denom()));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    out
}

/// A character of K_p^x moved to L = K (x) Q_p through K -> L.
fn transport(chi: &MultiplicativeCharacter, quad: &QuadraticEtale) -> Result<NormOneCharacter> {
    match &quad.kind {
        QuadKind::Field { l, from_k, .. } => {
            let pres = presentation(l, chi.level() * from_k.ramification())?;
            Ok(NormOneCharacter::Field(MultiplicativeCharacter::from_fn(pres, |g| chi.rotation_of(&from_k.pull(g)?))?))
        }
        QuadKind::Split { .. } => Ok(NormOneCharacter::Split(chi.clone())),
    }
}

/// The local setting E_v = Q_p^n over K_p with the local characters.
struct LocalInstance {
    setting: EtaleSetting,
    alphas: Vec<NormOneCharacter>,
    beta: NormOneCharacter,
    splitting: SplittingData,
}

fn field_or_units(c: &LocalComponent) -> Result<(QuadraticExtension, MultiplicativeCharacter, bool)> {
    match c {
        LocalComponent::Field { k, chi, .. } => Ok((k.clone(), chi.clone(), false)),
        LocalComponent::Split { k, first, .. } => Ok((k.clone(), first.clone(), true)),
        LocalComponent::Archimedean { .. } => Err(Error::InvalidInput("archimedean place".into())),
    }
}

/// At split places the characters keep only their unit parts, which is all
/// the compatibility test there needs.
fn local_instance(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], beta: &GlobalHeckeCharacter, p: u64) -> Result<LocalInstance> {
    let place = Place::Finite(p);
    let (k, mu, split) = field_or_units(&setup.mu.localize(place)?)?;
    let base = k.base.clone();
    let setting = EtaleSetting::new(
        EtaleAlgebra::local(&base, vec![base.clone(); setup.n])?,
        BaseQuadratic::Local(k.clone()),
    )?;
    let mut local_alphas = Vec::new();
    for (a, quad) in alphas.iter().zip(&setting.quads) {
        let (_, chi, _) = field_or_units(&a.localize(place)?)?;
        local_alphas.push(transport(&chi, quad)?);
    }
    let (_, b, _) = field_or_units(&beta.localize(place)?)?;
    let beta = transport(&b, &k_over_base(&k)?)?;
    let mu = if split { KCharacter::Split(mu) } else { KCharacter::Field(mu) };
    Ok(LocalInstance { setting, alphas: local_alphas, beta, splitting: SplittingData::from_mu(mu) })
}

fn rotation_sign(r: Rot, component: usize) -> Result<i32> {
    if *r.numer() == 0 {
        Ok(1)
    } else if r == Rot::new(1, 2) {
        Ok(-1)
    } else {
        let x = *r.numer() as f64 / *r.denom() as f64;
        Err(Error::NotASign { component, imag: (2.0 * std::f64::consts::PI * x).sin() })
    }
}

/// epsilon(1/2, alpha_j o j * mu^{-1}, psi_delta) per component at a place,
/// with the split convention +1.
pub fn epsilon_at(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], place: Place) -> Result<Vec<i32>> {
    let decomposition = place_decomposition(place, setup.d);
    match place {
        Place::Infinite => {
            let ks: Vec<i64> = alphas.iter().map(|a| a.infinity_type / 2).collect();
            let comps = vec![ArchComponent::Real; setup.n];
            Ok(archimedean_sign_vector(&comps, &ks, setup.mu.infinity_type, setup.delta_t.signum() as i32).signs)
        }
        _ if decomposition == Decomposition::Split => Ok(vec![1; setup.n]),
        Place::Finite(2) => {
            // unramified characters, psi_delta of level v_2(t)
            let (v, _) = split_p(setup.delta_t, 2);
            let mu2 = setup.mu.rational_ideal_rotation(2)?;
            alphas
                .iter()
                .enumerate()
                .map(|(j, a)| rotation_sign(crate::characters::mult::frac((a.rational_ideal_rotation(2)? - mu2) * v as i64), j))
                .collect()
        }
        Place::Finite(p) => {
            let inst = local_instance(setup, alphas, &setup.mu, p)?;
            let data = CharacterData::Local {
                alphas: inst.alphas,
                beta: inst.beta,
                splitting: inst.splitting,
                delta: TraceZeroDelta { t: setup.delta_t },
            };
            Ok(epsilon_vector(&inst.setting, &data)?.signs)
        }
    }
}

/// (lambda_j, d)_v per component.
pub fn omega_at(d: i128, lambda: &[Rational], place: Place) -> Result<Vec<i32>> {
    lambda.iter().map(|&l| rational_symbol(place, l, Rational::from_integer(d))).collect()
}

pub fn place_report(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], lambda: &[Rational], place: Place) -> Result<PlaceReport> {
    let omega = omega_at(setup.d, lambda, place)?;
    let epsilon = epsilon_at(setup, alphas, place)?;
    let satisfied = omega == epsilon;
    Ok(PlaceReport { place, decomposition: place_decomposition(place, setup.d), omega, epsilon, satisfied })
}

/// Condition (1): beta = alpha|_{K^1} (the splitting twist is trivial for
/// chi_W = chi_V^{1/n} = mu), tested at infinity and at every prime of a
/// modulus; elsewhere all characters are unramified and h(K) = 1 makes the
/// unit parts decide.
pub fn global_compatibility(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], beta: &GlobalHeckeCharacter) -> Result<bool> {
    if beta.infinity_type != alphas.iter().map(|a| a.infinity_type).sum::<i64>() {
        return Ok(false);
    }
    let mut primes: Vec<u64> = Vec::new();
    for c in alphas.iter().chain([beta, &setup.mu]) {
        primes.extend(prime_divisors(c.modulus));
    }
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let inst = local_instance(setup, alphas, beta, p)?;
        if !character_compatibility(&inst.setting, &inst.alphas, &inst.beta, &inst.splitting)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Epsilon targets at the places of the bad set that do not depend on
/// lambda; with them find_lambda produces a lambda meeting condition (2).
pub fn epsilon_targets(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], beta: &GlobalHeckeCharacter) -> Result<Vec<Targets>> {
    let mut out = vec![Targets::new(); setup.n];
    for place in bad_set(setup, alphas, beta, &[]) {
        for (j, e) in epsilon_at(setup, alphas, place)?.into_iter().enumerate() {
            out[j].insert(place, e);
        }
    }
    Ok(out)
}

/// Good places checked, drawn from the seed.
pub fn sample_good_places(bad: &[Place], seed: u64) -> Vec<Place> {
    let mut pool: Vec<Place> =
        primes_up_to(GOOD_SAMPLE_BOUND).into_iter().map(Place::Finite).filter(|v| !bad.contains(v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(GOOD_SAMPLE);
    pool.sort_unstable();
    pool
}

/// Checks the sampled good places against the root-number condition.
pub fn check_good_places(setup: &GlobalSetup, alphas: &[GlobalHeckeCharacter], lambda: &[Rational], places: &[Place]) -> Result<()> {
    for &v in places {
        if !place_report(setup, alphas, lambda, v)?.satisfied {
            return Err(Error::BadSetIncomplete { place: v.to_string() });
        }
    }
    Ok(())
}

fn l_values(input: &DecisionInput, options: &DecisionOptions) -> Result<Vec<Complex64>> {
    if let Some(v) = &input.l_values {
        if v.len() != input.setup.n {
            return Err(Error::InvalidInput("one L-value per component is required".into()));
        }
        return Ok(v.clone());
    }
    if options.compute_l_values {
        return computed_l_values(input);
    }
    Err(Error::LValueMissing { component: 0 })
}

#[cfg(feature = "lvalue")]
fn computed_l_values(input: &DecisionInput) -> Result<Vec<Complex64>> {
    let mu_inv = input.setup.mu.inv()?;
    input
        .alphas
        .iter()
        .map(|a| super::lvalue::l_value_half(&a.mul(&mu_inv)?, super::lvalue::DEFAULT_PRECISION))
        .collect()
}

#[cfg(not(feature = "lvalue"))]
fn computed_l_values(_input: &DecisionInput) -> Result<Vec<Complex64>> {
    Err(Error::Unsupported("built without the lvalue feature".into()))
}

/// The verdict with the full per-place table.
pub fn global_decision(input: &DecisionInput, options: &DecisionOptions) -> Result<DecisionReport> {
    let setup = &input.setup;
    check_characters(setup, &input.alphas, &input.beta)?;
    if input.lambda.len() != setup.n || input.lambda.iter().any(|l| *l.numer() == 0) {
        return Err(Error::InvalidInput("lambda needs one nonzero entry per component".into()));
    }
    let compatibility = global_compatibility(setup, &input.alphas, &input.beta)?;
    let bad = bad_set(setup, &input.alphas, &input.beta, &input.lambda);
    let places = bad
        .iter()
        .map(|&v| place_report(setup, &input.alphas, &input.lambda, v))
        .collect::<Result<Vec<_>>>()?;
    let sampled = sample_good_places(&bad, options.seed);
    check_good_places(setup, &input.alphas, &input.lambda, &sampled)?;
    let values = l_values(input, options)?;
    let root_numbers = places.iter().all(|r| r.satisfied);
    let nonzero = values.iter().all(|z| z.norm() > options.tolerance);
    Ok(DecisionReport {
        conditions: Conditions { compatibility, root_numbers, l_values: nonzero },
        places,
        sampled_good_places: sampled,
        l_values: values.iter().map(|z| [z.re, z.im]).collect(),
        verdict: compatibility && root_numbers && nonzero,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSetupJson {
    pub d: i64,
    pub n: usize,
    pub mu: HeckeCharacterJson,
    #[serde(default = "one")]
    pub delta_t: i64,
}

fn one() -> i64 {
    1
}

impl GlobalSetupJson {
    pub fn build(&self) -> Result<GlobalSetup> {
        let d = self.d as i128;
        GlobalSetup::new(d, self.n, self.mu.build(d)?, self.delta_t as i128)
    }
}

/// Rationals are strings "a" or "a/b".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i128 = a.trim().parse().map_err(|_| bad())?;
            let b: i128 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionInputJson {
    pub setup: GlobalSetupJson,
    pub alphas: Vec<HeckeCharacterJson>,
    pub beta: HeckeCharacterJson,
    pub lambda: Vec<String>,
    #[serde(default)]
    pub l_values: Option<Vec<[f64; 2]>>,
}

impl DecisionInputJson {
    pub fn build(&self) -> Result<DecisionInput> {
        let setup = self.setup.build()?;
        let d = setup.d;
        Ok(DecisionInput {
            alphas: self.alphas.iter().map(|a| a.build(d)).collect::<Result<_>>()?,
            beta: self.beta.build(d)?,
            lambda: self.lambda.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            l_values: self.l_values.as_ref().map(|v| v.iter().map(|z| Complex64::new(z[0], z[1])).collect()),
            setup,
        })
    }
}
