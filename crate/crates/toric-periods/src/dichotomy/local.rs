//! Character compatibility, the Hom-space dimension, the theta-lift
//! character and the sum over hermitian spaces and embedding classes.

use serde::Serialize;

use crate::characters::{
    epsilon_sign_vector, pull_back_norm, presentation, CharacterJson, KCharacter, MultiplicativeCharacter,
    NormOneCharacter, Rot,
};
use crate::characters::{archimedean_epsilon, embed_rational};
use crate::error::{Error, Result};
use crate::etale::{
    ArchComponent, EtaleAlgebra, EtaleSetting, HermitianClass, Lambda, LambdaClass, QuadKind, QuadraticEtale,
    QuadraticExtension, SignVector, TraceZeroDelta,
};
use crate::padic::{LocalElement, Subfield};

/// The splitting characters (chi_W, chi_V) with chi_V = chi_1^n.  On the
/// L-side the splitting character of V_{E, lambda} is chi_1 o N_{L/K}.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingData {
    pub chi_w: KCharacter,
    pub chi_1: KCharacter,
}

impl SplittingData {
    /// (mu, mu^n).
    pub fn from_mu(mu: KCharacter) -> Self {
        SplittingData { chi_w: mu.clone(), chi_1: mu }
    }
}

/// Characters of a local instance: alpha on L^1 (per component), beta on
/// K^1 (as a norm-one character of K over Q_p), the splitting data and delta.
/// At the real place characters are integer exponents: alpha_j(z) = z^k on
/// U(1) (or (z/|z|)^k on C^x for a complex component), beta(z) = z^b, and
/// chi(z) = (z/|z|)^m on C^x with m odd; `delta_sign` is the sign of delta/i.
#[derive(Clone, Debug, PartialEq)]
pub enum CharacterData {
    Local { alphas: Vec<NormOneCharacter>, beta: NormOneCharacter, splitting: SplittingData, delta: TraceZeroDelta },
    Archimedean { alphas: Vec<i64>, beta: i64, chi_w: i64, chi_1: i64, delta_sign: i32 },
}

#[derive(Clone, Debug)]
pub struct DichotomyInput {
    pub setting: EtaleSetting,
    pub lambda: Lambda,
    pub v: HermitianClass,
    pub data: CharacterData,
}

/// The theta lift of alpha: per-component characters of L^1.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftedCharacter {
    Local(Vec<NormOneCharacter>),
    Archimedean(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyResult {
    pub hom_dimension: u8,
    pub compatibility: bool,
    pub omega: SignVector,
    pub epsilon: SignVector,
    pub lifted_character: Option<LiftedCharacter>,
}

/// JSON view of a norm-one character: the character on L^x (or on F_j^x for
/// split components).
#[derive(Clone, Debug, Serialize)]
pub struct NormOneJson {
    pub split: bool,
    pub character: CharacterJson,
}

pub fn norm_one_json(a: &NormOneCharacter) -> NormOneJson {
    NormOneJson { split: matches!(a, NormOneCharacter::Split(_)), character: a.base_change().to_json() }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum LiftJson {
    Local(Vec<NormOneJson>),
    Archimedean(Vec<i64>),
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyResultJson {
    pub hom_dimension: u8,
    pub compatibility: bool,
    pub omega: Vec<i32>,
    pub epsilon: Vec<i32>,
    pub split: Vec<bool>,
    pub lifted_character: Option<LiftJson>,
}

impl DichotomyResult {
    pub fn to_json(&self) -> DichotomyResultJson {
        DichotomyResultJson {
            hom_dimension: self.hom_dimension,
            compatibility: self.compatibility,
            omega: self.omega.signs.clone(),
            epsilon: self.epsilon.signs.clone(),
            split: self.omega.split.clone(),
            lifted_character: self.lifted_character.as_ref().map(|l| match l {
                LiftedCharacter::Local(v) => LiftJson::Local(v.iter().map(norm_one_json).collect()),
                LiftedCharacter::Archimedean(v) => LiftJson::Archimedean(v.clone()),
            }),
        }
    }
}

fn local_k(setting: &EtaleSetting) -> Result<&QuadraticExtension> {
    setting.k_local().ok_or_else(|| Error::InvalidInput("local characters over an archimedean setting".into()))
}

/// K itself as a quadratic algebra over the base, for characters of K^1.
pub fn k_over_base(k: &QuadraticExtension) -> Result<QuadraticEtale> {
    QuadraticEtale::new(&k.base, k)
}

fn check_splitting(k: &QuadraticExtension, s: &SplittingData) -> Result<()> {
    if !s.chi_w.restricts_to_omega(k, 1)? || !s.chi_1.restricts_to_omega(k, 1)? {
        return Err(Error::SplittingCharacterInvalid);
    }
    Ok(())
}

fn check_arch_splitting(chi_w: i64, chi_1: i64) -> Result<()> {
    if chi_w.rem_euclid(2) != 1 || chi_1.rem_euclid(2) != 1 {
        return Err(Error::SplittingCharacterInvalid);
    }
    Ok(())
}

/// alpha_j o j evaluated at the image of x in L_j, for x in K^x.
fn alpha_on_k(k: &QuadraticExtension, quad: &QuadraticEtale, alpha: &NormOneCharacter, x: &LocalElement) -> Result<Rot> {
    match (&quad.kind, alpha) {
        (QuadKind::Field { from_k, .. }, NormOneCharacter::Field(a)) => a.rotation_of(&from_k.push(x)),
        (QuadKind::Split { from_k: Some(emb), .. }, NormOneCharacter::Split(a)) => {
            Ok(a.rotation_of(&emb.push(x))? - a.rotation_of(&emb.push(&k.conj(x)))?)
        }
        _ => Err(Error::InvalidCharacter("character shape does not match the component".into())),
    }
}

fn embedding_ramification(quad: &QuadraticEtale) -> u32 {
    match &quad.kind {
        QuadKind::Field { from_k, .. } => from_k.ramification(),
        QuadKind::Split { from_k: Some(emb), .. } => emb.ramification(),
        QuadKind::Split { from_k: None, .. } => quad.over.e as u32,
    }
}

/// alpha|_{K^1} o j_F as a character of K^x (or of Q_p^x when K splits),
/// presented at least at `min_level`.
pub fn alpha_restriction(setting: &EtaleSetting, alphas: &[NormOneCharacter], min_level: u32) -> Result<NormOneCharacter> {
    let k = local_k(setting)?;
    if alphas.len() != setting.quads.len() {
        return Err(Error::InvalidInput("one norm-one character per component is required".into()));
    }
    let mut level = min_level.max(1);
    for (a, q) in alphas.iter().zip(&setting.quads) {
        level = level.max(a.level().div_ceil(embedding_ramification(q)));
    }
    match k.field() {
        Some(kf) => {
            let pres = presentation(kf, level)?;
            Ok(NormOneCharacter::Field(MultiplicativeCharacter::from_fn(pres, |g| {
                let mut r = Rot::from_integer(0);
                for (a, q) in alphas.iter().zip(&setting.quads) {
                    r += alpha_on_k(k, q, a, g)?;
                }
                Ok(r)
            })?))
        }
        None => {
            let pres = presentation(&k.base, level)?;
            Ok(NormOneCharacter::Split(MultiplicativeCharacter::from_fn(pres, |g| {
                let mut r = Rot::from_integer(0);
                for (a, q) in alphas.iter().zip(&setting.quads) {
                    r += a.base_change().rotation_of(&embed_rational(&q.over, g))?;
                }
                Ok(r)
            })?))
        }
    }
}

/// (chi_W^{-n} chi_V) o j_F^{-1} * alpha|_{K^1}, as a character of K^1.
pub fn required_beta(
    setting: &EtaleSetting,
    alphas: &[NormOneCharacter],
    splitting: &SplittingData,
) -> Result<NormOneCharacter> {
    let k = local_k(setting)?;
    check_splitting(k, splitting)?;
    for (a, q) in alphas.iter().zip(&setting.quads) {
        a.validate(q)?;
    }
    let n = setting.n() as i64;
    let twist = splitting.chi_1.mul(&splitting.chi_w.inv())?.pow(n);
    let restriction = alpha_restriction(setting, alphas, twist.level())?;
    match (twist, restriction) {
        (KCharacter::Field(t), NormOneCharacter::Field(r)) => Ok(NormOneCharacter::Field(r.mul(&t)?)),
        (KCharacter::Split(t), NormOneCharacter::Split(r)) => Ok(NormOneCharacter::Split(r.mul(&t)?)),
        _ => Err(Error::SplittingCharacterInvalid),
    }
}

/// Whether beta equals (chi_W^{-n} chi_V) o j_F^{-1} * alpha|_{K^1}.
pub fn character_compatibility(
    setting: &EtaleSetting,
    alphas: &[NormOneCharacter],
    beta: &NormOneCharacter,
    splitting: &SplittingData,
) -> Result<bool> {
    let k = local_k(setting)?;
    beta.validate(&k_over_base(k)?)?;
    let req = required_beta(setting, alphas, splitting)?;
    let (a, b) = (req.base_change(), beta.base_change());
    let level = a.level().max(b.level());
    Ok(a.at_level(level)? == b.at_level(level)?)
}

/// Exponent of the required beta at the real place: beta(z) = z^b with
/// 2b = n (m_1 - m_W) + sum_j 2 k_j.
fn arch_required_twice_beta(n: usize, alphas: &[i64], chi_w: i64, chi_1: i64) -> i64 {
    n as i64 * (chi_1 - chi_w) + 2 * alphas.iter().sum::<i64>()
}

/// Epsilon sign vector at the real place.
pub fn archimedean_sign_vector(components: &[ArchComponent], alphas: &[i64], chi_w: i64, delta_sign: i32) -> SignVector {
    let signs = components
        .iter()
        .zip(alphas)
        .map(|(c, &k)| match c {
            ArchComponent::Real => archimedean_epsilon(2 * k - chi_w, delta_sign),
            ArchComponent::Complex => 1,
        })
        .collect();
    SignVector { signs, split: components.iter().map(|c| *c == ArchComponent::Complex).collect() }
}

/// The sign vector of the root numbers entering the criterion.
pub fn epsilon_vector(setting: &EtaleSetting, data: &CharacterData) -> Result<SignVector> {
    match (data, &setting.algebra) {
        (CharacterData::Local { alphas, splitting, delta, .. }, _) => {
            let k = local_k(setting)?;
            check_splitting(k, splitting)?;
            epsilon_sign_vector(setting, alphas, &splitting.chi_w, delta)
        }
        (CharacterData::Archimedean { alphas, chi_w, chi_1, delta_sign, .. }, EtaleAlgebra::Archimedean { components }) => {
            check_arch_splitting(*chi_w, *chi_1)?;
            if alphas.len() != components.len() {
                return Err(Error::InvalidInput("one exponent per component is required".into()));
            }
            Ok(archimedean_sign_vector(components, alphas, *chi_w, *delta_sign))
        }
        _ => Err(Error::InvalidInput("archimedean characters over a local setting".into())),
    }
}

fn compatibility(setting: &EtaleSetting, data: &CharacterData) -> Result<bool> {
    match data {
        CharacterData::Local { alphas, beta, splitting, .. } => {
            character_compatibility(setting, alphas, beta, splitting)
        }
        CharacterData::Archimedean { alphas, beta, chi_w, chi_1, .. } => {
            check_arch_splitting(*chi_w, *chi_1)?;
            Ok(2 * beta == arch_required_twice_beta(setting.n(), alphas, *chi_w, *chi_1))
        }
    }
}

/// ((chi_1 / chi_W) o N_{L/K}) o j_E^{-1} * alpha, per component; fails with
/// LiftVanishes when omega(lambda) differs from the epsilon vector.
pub fn theta_lift_character(setting: &EtaleSetting, lambda: &Lambda, data: &CharacterData) -> Result<LiftedCharacter> {
    let omega = setting.omega(lambda)?;
    let eps = epsilon_vector(setting, data)?;
    if omega.signs != eps.signs {
        return Err(Error::LiftVanishes);
    }
    lift_formula(setting, data)
}

fn lift_formula(setting: &EtaleSetting, data: &CharacterData) -> Result<LiftedCharacter> {
    match data {
        CharacterData::Local { alphas, splitting, .. } => {
            let k = local_k(setting)?;
            let mut out = Vec::new();
            for (a, q) in alphas.iter().zip(&setting.quads) {
                out.push(lift_component(k, q, a, splitting)?);
            }
            Ok(LiftedCharacter::Local(out))
        }
        CharacterData::Archimedean { alphas, chi_w, chi_1, .. } => {
            let EtaleAlgebra::Archimedean { components } = &setting.algebra else {
                return Err(Error::InvalidInput("archimedean characters over a local setting".into()));
            };
            Ok(LiftedCharacter::Archimedean(
                components
                    .iter()
                    .zip(alphas)
                    .map(|(c, &k)| match c {
                        ArchComponent::Real => k + (chi_1 - chi_w) / 2,
                        ArchComponent::Complex => k + (chi_1 - chi_w),
                    })
                    .collect(),
            ))
        }
    }
}

fn lift_component(
    k: &QuadraticExtension,
    quad: &QuadraticEtale,
    alpha: &NormOneCharacter,
    s: &SplittingData,
) -> Result<NormOneCharacter> {
    match (&quad.kind, alpha, &s.chi_w, &s.chi_1) {
        (QuadKind::Field { .. }, NormOneCharacter::Field(a), KCharacter::Field(cw), KCharacter::Field(c1)) => {
            let twist = pull_back_norm(c1, quad)?.mul(&pull_back_norm(cw, quad)?.inv())?;
            Ok(NormOneCharacter::Field(a.mul(&twist)?))
        }
        (QuadKind::Split { from_k: Some(emb), .. }, NormOneCharacter::Split(a), KCharacter::Field(cw), KCharacter::Field(c1)) => {
            // (y1, y2) -> c(N(y)) = c'(y1 / y2) with c' = c o iota^{-1} on F_j = iota(K)
            let c = c1.mul(&cw.inv())?;
            let level = a.level().max(c.level() * emb.ramification());
            let pres = presentation(&quad.over, level)?;
            let twist = MultiplicativeCharacter::from_fn(pres, |g| c.rotation_of(&emb.pull(g)?))?;
            Ok(NormOneCharacter::Split(a.mul(&twist)?))
        }
        (QuadKind::Split { from_k: None, .. }, NormOneCharacter::Split(a), KCharacter::Split(cw), KCharacter::Split(c1)) => {
            let c = c1.mul(&cw.inv())?;
            let level = a.level().max(c.level() * quad.over.e as u32);
            let pres = presentation(&quad.over, level)?;
            let twist = MultiplicativeCharacter::from_fn(pres, |g| {
                let (nm, _) = g.norm_and_trace(Subfield::Base)?;
                c.rotation_of(&LocalElement::new(&k.base, vec![nm.coeffs[0]], nm.prec))
            })?;
            Ok(NormOneCharacter::Split(a.mul(&twist)?))
        }
        _ => Err(Error::InvalidCharacter("character shape does not match the component".into())),
    }
}

/// dim Hom = 1 iff the characters are compatible and omega(lambda) equals the
/// epsilon vector.
pub fn local_hom_dimension(input: &DichotomyInput) -> Result<DichotomyResult> {
    if !input.setting.realizes(&input.lambda, &input.v)? {
        return Err(Error::InvalidInput("V_{E,lambda} is not isomorphic to V".into()));
    }
    let compatibility = compatibility(&input.setting, &input.data)?;
    let omega = input.setting.omega(&input.lambda)?;
    let epsilon = epsilon_vector(&input.setting, &input.data)?;
    let holds = omega.signs == epsilon.signs;
    let lifted_character = if holds { Some(lift_formula(&input.setting, &input.data)?) } else { None };
    Ok(DichotomyResult {
        hom_dimension: u8::from(compatibility && holds),
        compatibility,
        omega,
        epsilon,
        lifted_character,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BreakdownRow {
    #[serde(rename = "V_class")]
    pub v_class: HermitianClass,
    pub lambda_class: Vec<String>,
    pub omega: Vec<i32>,
    pub epsilon: Vec<i32>,
    pub dim: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumReport {
    pub total: u32,
    pub compatibility: bool,
    pub rows: Vec<BreakdownRow>,
    pub support: Option<BreakdownRow>,
}

/// Sum of dim Hom over all hermitian spaces V and all lambda-classes
/// realizing V.
pub fn sum_check(setting: &EtaleSetting, data: &CharacterData) -> Result<SumReport> {
    let compatibility = compatibility(setting, data)?;
    let epsilon = epsilon_vector(setting, data)?;
    let mut rows = Vec::new();
    for v in setting.classify() {
        for LambdaClass { lambda, labels } in setting.embedding_classes(&v)? {
            let omega = setting.omega(&lambda)?;
            let dim = u8::from(compatibility && omega.signs == epsilon.signs);
            rows.push(BreakdownRow { v_class: v, lambda_class: labels, omega: omega.signs, epsilon: epsilon.signs.clone(), dim });
        }
    }
    let total = rows.iter().map(|r| r.dim as u32).sum();
    let support = if total == 1 { rows.iter().find(|r| r.dim == 1).cloned() } else { None };
    Ok(SumReport { total, compatibility, rows, support })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::corpus;

    #[test]
    fn corpus_sum_is_zero_or_one() {
        let cases = corpus::generate(&[5], true, 4, 7).unwrap();
        for c in &cases {
            let r = sum_check(&c.setting, &c.data).unwrap();
            assert!(r.total <= 1, "{}", c.label);
            assert_eq!(r.total == 1, r.compatibility, "{}", c.label);
        }
    }
}
