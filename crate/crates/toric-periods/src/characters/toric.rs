//! Characters of the norm-one groups L_j^1 and of K^x.

use super::mult::{enumerate_characters, frac, presentation, Constraint, MultiplicativeCharacter, Rot};
use crate::error::{Error, Result};
use crate::etale::{QuadKind, QuadraticEtale, QuadraticExtension};
use crate::padic::{qp, LocalElement, LocalField};

/// A character alpha of L^1.  For a field L it is stored as alpha o j on
/// L^x, j(x) = x / conj(x), which is trivial on F_j^x.  For L = F_j x F_j
/// the first coordinate identifies L^1 with F_j^x.
#[derive(Clone, Debug, PartialEq)]
pub enum NormOneCharacter {
    Field(MultiplicativeCharacter),
    Split(MultiplicativeCharacter),
}

/// Generators of the image of F_j^x in L^x / (1 + pi_L^k).
pub fn over_generators(quad: &QuadraticEtale, level: u32) -> Result<Vec<LocalElement>> {
    match &quad.kind {
        QuadKind::Field { from_over, .. } => {
            let sub_level = level.div_ceil(from_over.ramification()).max(1);
            let pres = presentation(&quad.over, sub_level)?;
            Ok(pres.generators().iter().map(|g| from_over.push(g)).collect())
        }
        QuadKind::Split { .. } => Err(Error::Unsupported("split component".into())),
    }
}

impl NormOneCharacter {
    pub fn trivial(quad: &QuadraticEtale, level: u32) -> Result<Self> {
        match &quad.kind {
            QuadKind::Field { l, .. } => Ok(NormOneCharacter::Field(MultiplicativeCharacter::trivial(l, level)?)),
            QuadKind::Split { .. } => Ok(NormOneCharacter::Split(MultiplicativeCharacter::trivial(&quad.over, level)?)),
        }
    }

    /// Checks the stored character against the component it lives on.
    pub fn validate(&self, quad: &QuadraticEtale) -> Result<()> {
        match (self, &quad.kind) {
            (NormOneCharacter::Field(a), QuadKind::Field { l, .. }) => {
                if a.field() != l {
                    return Err(Error::FieldMismatch);
                }
                for g in over_generators(quad, a.level())? {
                    if *a.rotation_of(&g)?.numer() != 0 {
                        return Err(Error::InvalidCharacter("not trivial on the image of F_j^x".into()));
                    }
                }
                Ok(())
            }
            (NormOneCharacter::Split(a), QuadKind::Split { .. }) => {
                if *a.field() != quad.over {
                    return Err(Error::FieldMismatch);
                }
                Ok(())
            }
            _ => Err(Error::InvalidCharacter("character shape does not match the component".into())),
        }
    }

    /// alpha o j on L^x; for split L the character (y1, y2) -> a(y1 / y2)
    /// is represented by a.
    pub fn base_change(&self) -> &MultiplicativeCharacter {
        match self {
            NormOneCharacter::Field(a) | NormOneCharacter::Split(a) => a,
        }
    }

    pub fn level(&self) -> u32 {
        self.base_change().level()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (NormOneCharacter::Field(a), NormOneCharacter::Field(b)) => Ok(NormOneCharacter::Field(a.mul(b)?)),
            (NormOneCharacter::Split(a), NormOneCharacter::Split(b)) => Ok(NormOneCharacter::Split(a.mul(b)?)),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn inv(&self) -> Self {
        match self {
            NormOneCharacter::Field(a) => NormOneCharacter::Field(a.inv()),
            NormOneCharacter::Split(a) => NormOneCharacter::Split(a.inv()),
        }
    }
}

/// All characters of L^1 whose base change has level at most `level`.
/// For split L these are the characters of F_j^x with trivial value on
/// the uniformizer replaced by every value in `split_pi`.
pub fn enumerate_norm_one(quad: &QuadraticEtale, level: u32, split_pi: &[Rot]) -> Result<Vec<NormOneCharacter>> {
    match &quad.kind {
        QuadKind::Field { l, .. } => {
            let pres = presentation(l, level)?;
            let cons: Vec<Constraint> = over_generators(quad, level)?
                .into_iter()
                .map(|g| Constraint { element: g, rotation: Rot::from_integer(0) })
                .collect();
            Ok(enumerate_characters(&pres, &cons, &[])?.into_iter().map(NormOneCharacter::Field).collect())
        }
        QuadKind::Split { .. } => {
            let pres = presentation(&quad.over, level)?;
            Ok(enumerate_characters(&pres, &[], split_pi)?.into_iter().map(NormOneCharacter::Split).collect())
        }
    }
}

/// A character of K^x.  For split K = Q_p x Q_p, `Split(c)` is
/// (a, b) -> c(a / b).
#[derive(Clone, Debug, PartialEq)]
pub enum KCharacter {
    Field(MultiplicativeCharacter),
    Split(MultiplicativeCharacter),
}

impl KCharacter {
    pub fn level(&self) -> u32 {
        match self {
            KCharacter::Field(c) | KCharacter::Split(c) => c.level(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (KCharacter::Field(a), KCharacter::Field(b)) => Ok(KCharacter::Field(a.mul(b)?)),
            (KCharacter::Split(a), KCharacter::Split(b)) => Ok(KCharacter::Split(a.mul(b)?)),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn pow(&self, n: i64) -> Self {
        match self {
            KCharacter::Field(a) => KCharacter::Field(a.pow(n)),
            KCharacter::Split(a) => KCharacter::Split(a.pow(n)),
        }
    }

    /// Whether the restriction to Q_p^x is omega_{K/F}^n.
    pub fn restricts_to_omega(&self, k: &QuadraticExtension, n: usize) -> Result<bool> {
        match (self, &k.kind) {
            (KCharacter::Split(c), _) if k.is_split() => {
                if c.field().p != k.p() || !c.field().is_qp() {
                    return Err(Error::FieldMismatch);
                }
                Ok(true)
            }
            (KCharacter::Field(c), _) if !k.is_split() => {
                let kf = k.field().expect("field");
                if c.field() != kf {
                    return Err(Error::FieldMismatch);
                }
                let q = qp(k.p(), k.base.digits)?;
                let pres = presentation(&q, c.level().div_ceil(kf.e as u32).max(1))?;
                for g in pres.generators() {
                    let w = k.omega(&g)?;
                    let target = if w == -1 && n % 2 == 1 { Rot::new(1, 2) } else { Rot::from_integer(0) };
                    let r = c.rotation_of(&embed_rational(kf, &g))?;
                    if frac(r - target) != Rot::from_integer(0) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::InvalidCharacter("character shape does not match K".into())),
        }
    }
}

/// An element of Q_p inside a field extending it.
pub fn embed_rational(kf: &LocalField, x: &LocalElement) -> LocalElement {
    let mut c = vec![0i128; kf.degree()];
    c[0] = x.coeffs[0];
    LocalElement::new(kf, c, x.prec * kf.e as u32)
}

/// All characters of K^x at `level` restricting to omega^n on Q_p^x.  For
/// split K these are (a, b) -> c(a / b) for every c at that level with
/// c(p) in `split_pi`.
pub fn enumerate_splitting(k: &QuadraticExtension, n: usize, level: u32, split_pi: &[Rot]) -> Result<Vec<KCharacter>> {
    match k.field() {
        Some(kf) => {
            let pres = presentation(kf, level)?;
            let q = qp(k.p(), k.base.digits)?;
            let sub = presentation(&q, level.div_ceil(kf.e as u32).max(1))?;
            let mut cons = Vec::new();
            for g in sub.generators() {
                let w = k.omega(&g)?;
                let target = if w == -1 && n % 2 == 1 { Rot::new(1, 2) } else { Rot::from_integer(0) };
                cons.push(Constraint { element: embed_rational(kf, &g), rotation: target });
            }
            Ok(enumerate_characters(&pres, &cons, &[])?.into_iter().map(KCharacter::Field).collect())
        }
        None => {
            let pres = presentation(&k.base, level)?;
            Ok(enumerate_characters(&pres, &[], split_pi)?.into_iter().map(KCharacter::Split).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_local_field;

    #[test]
    fn norm_one_characters_are_conjugate_dual() {
        let k = QuadraticExtension::new(5, 2, 6).unwrap();
        let f = make_local_field(5, 1, &[vec![-5], vec![0], vec![1]], 12).unwrap();
        let quad = QuadraticEtale::new(&f, &k).unwrap();
        let all = enumerate_norm_one(&quad, 2, &[]).unwrap();
        assert!(all.len() > 1);
        for a in &all {
            a.validate(&quad).unwrap();
            assert!(a.base_change().is_conjugate_dual(|x| quad.conj(x)).unwrap());
        }
    }

    #[test]
    fn non_dual_character_is_detected() {
        let k = QuadraticExtension::new(7, 3, 6).unwrap();
        let kf = k.field().unwrap().clone();
        let chi = MultiplicativeCharacter::new(
            presentation(&kf, 1).unwrap(),
            vec![Rot::from_integer(0), Rot::new(1, 48)],
        )
        .unwrap();
        assert!(!chi.is_conjugate_dual(|x| Ok(k.conj(x))).unwrap());
    }

    #[test]
    fn splitting_characters_restrict_to_omega() {
        for d in [3i128, 7, 21] {
            let k = QuadraticExtension::new(7, d, 6).unwrap();
            let all = enumerate_splitting(&k, 1, 1, &[]).unwrap();
            assert!(!all.is_empty());
            for c in &all {
                assert!(c.restricts_to_omega(&k, 1).unwrap());
            }
            let even = enumerate_splitting(&k, 2, 1, &[]).unwrap();
            assert!(even.iter().all(|c| c.restricts_to_omega(&k, 2).unwrap()));
        }
    }
}
