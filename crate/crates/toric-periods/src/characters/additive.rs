//! Additive characters x -> psi_p(tr(delta x)) with psi_p(x) = e^{2 pi i {x}_p}.

use num_complex::Complex64;

use super::mult::{rot_value, Rot};
use crate::error::{Error, Result};
use crate::etale::{QuadKind, QuadraticEtale, QuadraticExtension, TraceZeroDelta};
use crate::padic::{LocalElement, LocalField};

/// psi(x) = psi_p(tr_{M/Q_p}(delta x)).  `level` is the largest n with psi
/// trivial on pi^{-n} O_M.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditiveCharacter {
    pub field: LocalField,
    pub delta: LocalElement,
    pub level: i64,
}

impl AdditiveCharacter {
    pub fn new(delta: LocalElement) -> Result<Self> {
        let v = delta
            .valuation()
            .ok_or_else(|| Error::PrecisionExhausted("additive twist is indistinguishable from 0".into()))?;
        // tame different: pi^{e-1}
        let level = v as i64 + delta.field.e as i64 - 1;
        Ok(AdditiveCharacter { field: delta.field.clone(), delta, level })
    }

    /// The standard character psi_p of Q_p or psi_p o tr on M.
    pub fn standard(field: &LocalField) -> Self {
        Self::new(LocalElement::one(field)).expect("1 is nonzero")
    }

    /// x -> psi(a x).
    pub fn twist(&self, a: &LocalElement) -> Result<Self> {
        Self::new(self.delta.mul(a)?)
    }

    /// psi(y / pi^s) as a rotation number, for integral y.
    pub fn rotation_div(&self, y: &LocalElement, s: u32) -> Result<Rot> {
        let e = self.field.e as u32;
        let t = s.div_ceil(e);
        let z = self.delta.mul(y)?.scale(self.field.pow_p(t)).div_pi_pow(s)?;
        let (tr, digits) = z.trace_qp();
        if digits < t {
            return Err(Error::PrecisionExhausted(format!("trace known to p^{digits}, need p^{t}")));
        }
        let m = self.field.pow_p(t);
        Ok(Rot::new((tr % m) as i64, m as i64))
    }

    pub fn value_div(&self, y: &LocalElement, s: u32) -> Result<Complex64> {
        Ok(rot_value(self.rotation_div(y, s)?))
    }

    /// Whether psi is trivial on pi^{-s} O, checked on the basis monomials.
    pub fn trivial_on(&self, s: u32) -> Result<bool> {
        for i in 0..self.field.e {
            for j in 0..self.field.f {
                let b = LocalElement::monomial(&self.field, i, j);
                if *self.rotation_div(&b, s)?.numer() != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// psi_delta(x) = psi(tr_{K/F}(delta x)) on a field K.
pub fn psi_delta_k(k: &QuadraticExtension, delta: &TraceZeroDelta) -> Result<AdditiveCharacter> {
    AdditiveCharacter::new(delta.in_field(k)?)
}

/// psi_delta o tr_{L/K} on a field component L of the quadratic etale algebra.
pub fn psi_delta_l(k: &QuadraticExtension, quad: &QuadraticEtale, delta: &TraceZeroDelta) -> Result<AdditiveCharacter> {
    match &quad.kind {
        QuadKind::Field { from_k, .. } => AdditiveCharacter::new(from_k.push(&delta.in_field(k)?)),
        QuadKind::Split { .. } => Err(Error::Unsupported("split component".into())),
    }
}
