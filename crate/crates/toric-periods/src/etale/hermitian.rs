//! One-dimensional hermitian spaces over L = K (x) E: discriminants, the
//! omega sign vector, classification of hermitian spaces and the classes of
//! admissible embeddings.

use serde::{Deserialize, Serialize};

use super::algebra::{disc_etale, norm_e_f, ArchComponent, Discriminant, EtaleAlgebra, Lambda, NormValue};
use super::quad::{QuadraticEtale, QuadraticExtension};
use crate::error::{Error, Result};
use crate::padic::{square_class, LocalElement, SquareClass};

/// The quadratic algebra K over the base: a p-adic one, or C over R.
#[derive(Clone, Debug)]
pub enum BaseQuadratic {
    Local(QuadraticExtension),
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitianInvariant {
    DiscSign(i32),
    Trivial,
    Signature(usize, usize),
}

/// Isomorphism class of a non-degenerate hermitian space over K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HermitianClassJson", into = "HermitianClassJson")]
pub struct HermitianClass {
    pub n: usize,
    pub invariant: HermitianInvariant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HermitianClassJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    disc_sign: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<[usize; 2]>,
}

impl TryFrom<HermitianClassJson> for HermitianClass {
    type Error = String;
    fn try_from(j: HermitianClassJson) -> std::result::Result<Self, String> {
        let invariant = match (j.disc_sign, j.signature) {
            (Some(s), None) if s == 1 || s == -1 => HermitianInvariant::DiscSign(s),
            (None, Some([r, s])) if r + s == j.n => HermitianInvariant::Signature(r, s),
            (None, None) => HermitianInvariant::Trivial,
            _ => return Err("expected disc_sign = +-1 or a signature summing to n".into()),
        };
        if j.n == 0 {
            return Err("dimension must be positive".into());
        }
        Ok(HermitianClass { n: j.n, invariant })
    }
}

impl From<HermitianClass> for HermitianClassJson {
    fn from(h: HermitianClass) -> Self {
        let (disc_sign, signature) = match h.invariant {
            HermitianInvariant::DiscSign(s) => (Some(s), None),
            HermitianInvariant::Trivial => (None, None),
            HermitianInvariant::Signature(r, s) => (None, Some([r, s])),
        };
        HermitianClassJson { n: h.n, disc_sign, signature }
    }
}

/// Per-component signs, with split components marked (and forced to +1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector {
    pub signs: Vec<i32>,
    pub split: Vec<bool>,
}

impl SignVector {
    pub fn mul(&self, other: &SignVector) -> SignVector {
        SignVector {
            signs: self.signs.iter().zip(&other.signs).map(|(a, b)| a * b).collect(),
            split: self.split.clone(),
        }
    }
}

/// disc V_{E, lambda} and, when K is a field, its sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscInfo {
    pub class: Discriminant,
    pub sign: Option<i32>,
}

/// A class in E^x / N_{L/E}(L^x), with the square-class labels of its
/// representative (None for archimedean components).
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaClass {
    pub lambda: Lambda,
    pub labels: Vec<String>,
}

/// E together with K and the structures L_j = K (x) F_j.
#[derive(Clone, Debug)]
pub struct EtaleSetting {
    pub algebra: EtaleAlgebra,
    pub k: BaseQuadratic,
    pub quads: Vec<QuadraticEtale>,
}

impl EtaleSetting {
    pub fn new(algebra: EtaleAlgebra, k: BaseQuadratic) -> Result<Self> {
        let quads = match (&algebra, &k) {
            (EtaleAlgebra::Local { components, .. }, BaseQuadratic::Local(kq)) => components
                .iter()
                .map(|c| QuadraticEtale::new(c, kq))
                .collect::<Result<Vec<_>>>()?,
            (EtaleAlgebra::Archimedean { .. }, BaseQuadratic::Complex) => Vec::new(),
            _ => return Err(Error::InvalidInput("algebra and K live over different bases".into())),
        };
        Ok(EtaleSetting { algebra, k, quads })
    }

    pub fn n(&self) -> usize {
        self.algebra.degree()
    }

    pub fn k_local(&self) -> Option<&QuadraticExtension> {
        match &self.k {
            BaseQuadratic::Local(k) => Some(k),
            BaseQuadratic::Complex => None,
        }
    }

    /// Whether each L_j splits.
    pub fn split_mask(&self) -> Vec<bool> {
        match &self.algebra {
            EtaleAlgebra::Local { .. } => self.quads.iter().map(|q| q.is_split()).collect(),
            EtaleAlgebra::Archimedean { components } => {
                components.iter().map(|c| *c == ArchComponent::Complex).collect()
            }
        }
    }

    /// All hermitian spaces of dimension n over K.
    pub fn classify(&self) -> Vec<HermitianClass> {
        classify_hermitian_spaces(self.n(), &self.k)
    }

    /// disc V_{E,lambda} = N_{E/F}(lambda) disc_F(E).
    pub fn disc_hermitian(&self, lambda: &Lambda) -> Result<DiscInfo> {
        let disc = disc_etale(&self.algebra)?;
        match (norm_e_f(&self.algebra, lambda)?, disc) {
            (NormValue::Local(nm), Discriminant::Class(c)) => {
                let class = square_class(&nm)?.mul(c);
                let k = self.k_local().expect("local algebra has a local K");
                let sign = if k.is_split() {
                    None
                } else {
                    let rep = class.representative(&nm.field);
                    Some(k.omega(&rep)?)
                };
                Ok(DiscInfo { class: Discriminant::Class(class), sign })
            }
            (NormValue::Sign(s), Discriminant::Sign(t)) => {
                Ok(DiscInfo { class: Discriminant::Sign(s * t), sign: Some(s * t) })
            }
            _ => unreachable!("norm and discriminant come from the same algebra"),
        }
    }

    /// omega_{L/E}(lambda).
    pub fn omega(&self, lambda: &Lambda) -> Result<SignVector> {
        let split = self.split_mask();
        let signs = match (&self.algebra, lambda) {
            (EtaleAlgebra::Local { .. }, Lambda::Local(l)) => {
                let k = self.k_local().expect("local algebra has a local K");
                if l.len() != self.quads.len() {
                    return Err(Error::InvalidInput("lambda has the wrong number of components".into()));
                }
                l.iter()
                    .zip(&self.quads)
                    .map(|(x, q)| q.norm_class_indicator(x, k.d0))
                    .collect::<Result<Vec<_>>>()?
            }
            (EtaleAlgebra::Archimedean { components }, Lambda::Archimedean(s)) => {
                if s.len() != components.len() {
                    return Err(Error::InvalidInput("lambda has the wrong number of components".into()));
                }
                s.iter()
                    .zip(components)
                    .map(|(&x, c)| if *c == ArchComponent::Real && x < 0 { -1 } else { 1 })
                    .collect()
            }
            _ => return Err(Error::InvalidInput("lambda does not match the algebra".into())),
        };
        Ok(SignVector { signs, split })
    }

    /// Representatives of E^x / N_{L/E}(L^x), built from {1, u_j, pi_j, u_j pi_j}
    /// with the first component varying slowest.
    pub fn lambda_classes(&self) -> Result<Vec<LambdaClass>> {
        let per_component: Vec<Vec<(String, ComponentRep)>> = match &self.algebra {
            EtaleAlgebra::Local { components, .. } => {
                let k = self.k_local().expect("local algebra has a local K");
                let mut out = Vec::new();
                for (c, q) in components.iter().zip(&self.quads) {
                    let one = ("1".to_string(), ComponentRep::Local(LocalElement::one(c)));
                    if q.is_split() {
                        out.push(vec![one]);
                        continue;
                    }
                    let mut reps = vec![one];
                    for class in [SquareClass::U, SquareClass::Pi, SquareClass::UPi] {
                        let r = class.representative(c);
                        if q.norm_class_indicator(&r, k.d0)? == -1 {
                            reps.push((class_label(class).to_string(), ComponentRep::Local(r)));
                            break;
                        }
                    }
                    out.push(reps);
                }
                out
            }
            EtaleAlgebra::Archimedean { components } => components
                .iter()
                .map(|c| match c {
                    ArchComponent::Real => vec![
                        ("+".to_string(), ComponentRep::Sign(1)),
                        ("-".to_string(), ComponentRep::Sign(-1)),
                    ],
                    ArchComponent::Complex => vec![("1".to_string(), ComponentRep::Sign(1))],
                })
                .collect(),
        };
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for reps in &per_component {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    (0..reps.len()).map(move |i| {
                        let mut v = prefix.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        Ok(combos
            .into_iter()
            .map(|idx| {
                let labels = idx.iter().zip(&per_component).map(|(&i, r)| r[i].0.clone()).collect();
                let reps: Vec<&ComponentRep> = idx.iter().zip(&per_component).map(|(&i, r)| &r[i].1).collect();
                let lambda = match reps.first() {
                    Some(ComponentRep::Local(_)) => Lambda::Local(
                        reps.iter()
                            .map(|r| match r {
                                ComponentRep::Local(x) => x.clone(),
                                ComponentRep::Sign(_) => unreachable!(),
                            })
                            .collect(),
                    ),
                    _ => Lambda::Archimedean(
                        reps.iter()
                            .map(|r| match r {
                                ComponentRep::Sign(s) => *s,
                                ComponentRep::Local(_) => unreachable!(),
                            })
                            .collect(),
                    ),
                };
                LambdaClass { lambda, labels }
            })
            .collect())
    }

    /// Whether V_{E,lambda} is isomorphic to V.
    pub fn realizes(&self, lambda: &Lambda, v: &HermitianClass) -> Result<bool> {
        if v.n != self.n() {
            return Err(Error::DimensionMismatch { space: v.n, algebra: self.n() });
        }
        Ok(match v.invariant {
            HermitianInvariant::Trivial => self.k_local().is_some_and(|k| k.is_split()),
            HermitianInvariant::DiscSign(s) => self.disc_hermitian(lambda)?.sign == Some(s),
            HermitianInvariant::Signature(_, s) => {
                let EtaleAlgebra::Archimedean { components } = &self.algebra else {
                    return Ok(false);
                };
                let Lambda::Archimedean(signs) = lambda else {
                    return Ok(false);
                };
                let neg = signs
                    .iter()
                    .zip(components)
                    .map(|(&x, c)| match c {
                        ArchComponent::Real => usize::from(x < 0),
                        ArchComponent::Complex => 1,
                    })
                    .sum::<usize>();
                neg == s
            }
        })
    }

    /// The lambda-classes whose hermitian space is isomorphic to V.
    pub fn embedding_classes(&self, v: &HermitianClass) -> Result<Vec<LambdaClass>> {
        if v.n != self.n() {
            return Err(Error::DimensionMismatch { space: v.n, algebra: self.n() });
        }
        let mut out = Vec::new();
        for c in self.lambda_classes()? {
            if self.realizes(&c.lambda, v)? {
                out.push(c);
            }
        }
        Ok(out)
    }
}

enum ComponentRep {
    Local(LocalElement),
    Sign(i32),
}

pub fn class_label(c: SquareClass) -> &'static str {
    match c {
        SquareClass::One => "1",
        SquareClass::U => "u",
        SquareClass::Pi => "pi",
        SquareClass::UPi => "u_pi",
    }
}

pub fn classify_hermitian_spaces(n: usize, k: &BaseQuadratic) -> Vec<HermitianClass> {
    match k {
        BaseQuadratic::Local(k) if k.is_split() => {
            vec![HermitianClass { n, invariant: HermitianInvariant::Trivial }]
        }
        BaseQuadratic::Local(_) => vec![
            HermitianClass { n, invariant: HermitianInvariant::DiscSign(1) },
            HermitianClass { n, invariant: HermitianInvariant::DiscSign(-1) },
        ],
        BaseQuadratic::Complex => {
            (0..=n).map(|s| HermitianClass { n, invariant: HermitianInvariant::Signature(n - s, s) }).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::qp;

    fn setting(p: i128, d: i128, m: usize) -> EtaleSetting {
        let base = qp(p, 6).unwrap();
        let e = EtaleAlgebra::local(&base, vec![base.clone(); m]).unwrap();
        let k = QuadraticExtension::new(p, d, 6).unwrap();
        EtaleSetting::new(e, BaseQuadratic::Local(k)).unwrap()
    }

    #[test]
    fn omega_of_five_over_inert_quadratic() {
        let s = setting(5, 2, 1);
        let q5 = qp(5, 6).unwrap();
        let l = Lambda::Local(vec![LocalElement::from_int(&q5, 5)]);
        assert_eq!(s.omega(&l).unwrap().signs, vec![-1]);
    }

    #[test]
    fn disc_of_product_with_lambda() {
        // (-10, 2)_5 with E = Q_5 x Q_5, lambda = (5, 2)
        let s = setting(5, 2, 2);
        let q5 = qp(5, 6).unwrap();
        let l = Lambda::Local(vec![LocalElement::from_int(&q5, 5), LocalElement::from_int(&q5, 2)]);
        let info = s.disc_hermitian(&l).unwrap();
        let expected = crate::padic::hilbert_symbol_rational(5, -10, 2).unwrap();
        assert_eq!(info.sign, Some(expected));
    }

    #[test]
    fn partition_of_classes() {
        let s = setting(7, 3, 2);
        let all = s.lambda_classes().unwrap();
        assert_eq!(all.len(), 4);
        let total: usize = s.classify().iter().map(|v| s.embedding_classes(v).unwrap().len()).sum();
        assert_eq!(total, 4);
        assert!(s.classify().iter().all(|v| s.embedding_classes(v).unwrap().len() == 2));
    }

    #[test]
    fn archimedean_classes() {
        let e = EtaleAlgebra::archimedean(vec![ArchComponent::Real, ArchComponent::Real]).unwrap();
        let s = EtaleSetting::new(e, BaseQuadratic::Complex).unwrap();
        assert_eq!(s.classify().len(), 3);
        let v = HermitianClass { n: 2, invariant: HermitianInvariant::Signature(2, 0) };
        let c = s.embedding_classes(&v).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].lambda, Lambda::Archimedean(vec![1, 1]));
    }

    #[test]
    fn hermitian_class_json() {
        let h = HermitianClass { n: 2, invariant: HermitianInvariant::DiscSign(-1) };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"n":2,"disc_sign":-1}"#);
        let back: HermitianClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<HermitianClass>(r#"{"n":2,"signature":[1,2]}"#).is_err());
    }
}
