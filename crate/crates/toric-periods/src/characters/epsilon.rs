//! Tate local epsilon factors: Gauss sums at finite places, the closed form
//! on C^x, and the per-component sign vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::additive::{psi_delta_l, AdditiveCharacter};
use super::mult::{frac, presentation, rot_value, MultiplicativeCharacter, Rot};
use super::toric::{KCharacter, NormOneCharacter};
use crate::error::{Error, Result};
use crate::etale::{EtaleSetting, QuadKind, QuadraticEtale, QuadraticExtension, SignVector, TraceZeroDelta};

/// Largest number of Gauss-sum terms evaluated by default.
pub const MAX_GAUSS_TERMS: i128 = 200_000;

/// Imaginary parts above this are reported as a failed sign.
pub const SIGN_TOLERANCE: f64 = 1e-6;

/// epsilon(1/2, chi, psi) with gamma = pi^{a(chi) + n(psi)}:
/// chi(pi)^{n} when chi is unramified, otherwise
/// q^{-a/2} sum_{u in (O/pi^a)^x} chi^{-1}(u / gamma) psi(u / gamma).
pub fn tate_epsilon(chi: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<Complex64> {
    if chi.field() != &psi.field {
        return Err(Error::FieldMismatch);
    }
    let a = chi.conductor()?;
    let n = psi.level;
    let r_pi = chi.rotations[0];
    if a == 0 {
        return Ok(rot_value(frac(r_pi * n)));
    }
    let s = a as i64 + n;
    if s < 1 {
        return Err(Error::Unsupported("additive character of negative level".into()));
    }
    let chi_a = chi.at_level(a)?;
    let pres = chi_a.pres.clone();
    if pres.group_order() > MAX_GAUSS_TERMS {
        return Err(Error::Unsupported(format!("Gauss sum with {} terms", pres.group_order())));
    }
    let field = chi.field();
    // psi(u / pi^s) is linear in the coefficients of u
    let basis_rots: Vec<Rot> = (0..field.degree())
        .map(|idx| {
            let b = crate::padic::LocalElement::monomial(field, idx / field.f, idx % field.f);
            psi.rotation_div(&b, s as u32)
        })
        .collect::<Result<_>>()?;
    let orders = pres.orders();
    let gens = pres.generators();
    let tors = &orders[1..];
    let mut idx = vec![0i128; tors.len()];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let mut ex = vec![0i128];
        ex.extend(&idx);
        let mut u = crate::padic::LocalElement::one(field);
        for (g, &e) in gens[1..].iter().zip(&idx) {
            u = u.mul(&g.pow(e as u128))?;
        }
        let mut r = -chi_a.rotation_of_log(&ex);
        for (c, br) in u.coeffs.iter().zip(&basis_rots) {
            let m = *br.denom() as i128;
            r += *br * Rot::from_integer(c.rem_euclid(m) as i64);
        }
        total += rot_value(frac(r));
        let mut k = 0;
        loop {
            if k == idx.len() {
                let q = field.residue_size() as f64;
                let norm = q.powf(-(a as f64) / 2.0);
                return Ok(rot_value(frac(r_pi * s)) * total * norm);
            }
            idx[k] += 1;
            if idx[k] < tors[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// epsilon for chi(z) = (z / |z|)^n on C^x and psi(z) = psi_inf(tr(delta z)),
/// psi_inf(x) = e^{-2 pi i x}, where delta / i has sign `delta_sign`.
pub fn archimedean_epsilon(n: i64, delta_sign: i32) -> i32 {
    let s = if n.rem_euclid(2) == 1 { delta_sign } else { 1 };
    if n < 0 && n.rem_euclid(2) == 1 {
        -s
    } else {
        s
    }
}

/// Reported epsilon value: {value: [re, im], sign}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonValue {
    pub value: [f64; 2],
    pub sign: Option<i32>,
}

impl EpsilonValue {
    pub fn new(z: Complex64) -> Self {
        let sign = (z.im.abs() <= SIGN_TOLERANCE).then_some(if z.re >= 0.0 { 1 } else { -1 });
        EpsilonValue { value: [z.re, z.im], sign }
    }
}

/// chi o N_{L/K} on a field component L.
pub fn pull_back_norm(chi: &MultiplicativeCharacter, quad: &QuadraticEtale) -> Result<MultiplicativeCharacter> {
    match &quad.kind {
        QuadKind::Field { l, from_k, .. } => {
            let pres = presentation(l, chi.level() * from_k.ramification())?;
            MultiplicativeCharacter::from_fn(pres, |g| chi.rotation_of(&quad.norm_to_k(g)?))
        }
        QuadKind::Split { .. } => Err(Error::Unsupported("split component".into())),
    }
}

/// The character of L_j^x whose epsilon factor enters the sign vector:
/// base_change(alpha) * (chi o N_{L/K})^{-1}.
pub fn component_character(
    alpha: &NormOneCharacter,
    chi: &MultiplicativeCharacter,
    quad: &QuadraticEtale,
) -> Result<MultiplicativeCharacter> {
    let a = alpha.base_change();
    a.mul(&pull_back_norm(chi, quad)?.inv())
}

/// Complex epsilon values per component (1 on split components).
pub fn epsilon_values(
    setting: &EtaleSetting,
    alphas: &[NormOneCharacter],
    chi: &KCharacter,
    delta: &TraceZeroDelta,
) -> Result<Vec<Complex64>> {
    let k = setting.k_local().ok_or_else(|| Error::Unsupported("archimedean setting".into()))?;
    if alphas.len() != setting.quads.len() {
        return Err(Error::InvalidInput("one norm-one character per component is required".into()));
    }
    if !chi.restricts_to_omega(k, 1)? && !chi.restricts_to_omega(k, 0)? {
        return Err(Error::SplittingCharacterInvalid);
    }
    let mut out = Vec::new();
    for (quad, alpha) in setting.quads.iter().zip(alphas) {
        alpha.validate(quad)?;
        out.push(component_epsilon(k, quad, alpha, chi, delta)?);
    }
    Ok(out)
}

fn component_epsilon(
    k: &QuadraticExtension,
    quad: &QuadraticEtale,
    alpha: &NormOneCharacter,
    chi: &KCharacter,
    delta: &TraceZeroDelta,
) -> Result<Complex64> {
    match (&quad.kind, chi) {
        (QuadKind::Split { .. }, _) => Ok(Complex64::new(1.0, 0.0)),
        (QuadKind::Field { .. }, KCharacter::Field(c)) => {
            let x = component_character(alpha, c, quad)?;
            tate_epsilon(&x, &psi_delta_l(k, quad, delta)?)
        }
        (QuadKind::Field { .. }, KCharacter::Split(_)) => Err(Error::FieldMismatch),
    }
}

/// Signs of epsilon(alpha_j o j * chi^{-1} o N_{L_j/K}, psi_delta o tr) per
/// component.
pub fn epsilon_sign_vector(
    setting: &EtaleSetting,
    alphas: &[NormOneCharacter],
    chi: &KCharacter,
    delta: &TraceZeroDelta,
) -> Result<SignVector> {
    let values = epsilon_values(setting, alphas, chi, delta)?;
    let mut signs = Vec::new();
    for (j, z) in values.iter().enumerate() {
        if z.im.abs() > SIGN_TOLERANCE {
            return Err(Error::NotASign { component: j, imag: z.im });
        }
        signs.push(if z.re >= 0.0 { 1 } else { -1 });
    }
    Ok(SignVector { signs, split: setting.split_mask() })
}
