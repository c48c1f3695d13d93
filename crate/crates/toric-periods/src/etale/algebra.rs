//! Etale algebras E = prod F_j over Q_p or over R, the trace-form
//! discriminant, and the norm N_{E/F}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::arith::rem;
use crate::padic::element::determinant;
use crate::padic::{square_class, LocalElement, LocalField, SquareClass, Subfield};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchComponent {
    Real,
    Complex,
}

#[derive(Clone, Debug)]
pub enum EtaleAlgebra {
    Local { base: LocalField, components: Vec<LocalField> },
    Archimedean { components: Vec<ArchComponent> },
}

impl EtaleAlgebra {
    pub fn local(base: &LocalField, components: Vec<LocalField>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("etale algebra needs a component".into()));
        }
        if !base.is_qp() {
            return Err(Error::Unsupported("base field must be Q_p".into()));
        }
        if components.iter().any(|c| c.p != base.p) {
            return Err(Error::FieldMismatch);
        }
        Ok(EtaleAlgebra::Local { base: base.clone(), components })
    }

    pub fn archimedean(components: Vec<ArchComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("etale algebra needs a component".into()));
        }
        Ok(EtaleAlgebra::Archimedean { components })
    }

    pub fn degree(&self) -> usize {
        match self {
            EtaleAlgebra::Local { components, .. } => components.iter().map(|c| c.degree()).sum(),
            EtaleAlgebra::Archimedean { components } => components
                .iter()
                .map(|c| match c {
                    ArchComponent::Real => 1,
                    ArchComponent::Complex => 2,
                })
                .sum(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            EtaleAlgebra::Local { components, .. } => components.len(),
            EtaleAlgebra::Archimedean { components } => components.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// lambda in E^x: elements of the components, or signs of the real
/// components (complex entries are ignored and stored as +1).
#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    Local(Vec<LocalElement>),
    Archimedean(Vec<i32>),
}

/// A class in F^x / (F^x)^2, or a sign over R.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discriminant {
    Class(SquareClass),
    Sign(i32),
}

/// Moves an element of some copy of Q_p into `base`.
pub fn to_base(x: &LocalElement, base: &LocalField) -> LocalElement {
    LocalElement::new(base, vec![x.coeffs[0]], x.prec.min(base.precision))
}

/// det(tr_{M/Q_p}(b_i b_k)) as an element of `base`.
pub fn gram_det(basis: &[LocalElement], weight: &LocalElement, base: &LocalField) -> Result<LocalElement> {
    let n = basis.len();
    let mut digits = base.digits;
    let mut entries = vec![vec![0i128; n]; n];
    for i in 0..n {
        for k in 0..n {
            let (t, prec) = weight.mul(&basis[i])?.mul(&basis[k])?.trace_qp();
            digits = digits.min(prec);
            entries[i][k] = t;
        }
    }
    let m = base.p.pow(digits);
    let det = determinant(
        n,
        &|i, k| rem(entries[i][k], m),
        1i128,
        &|a, b| (a + b) % m,
        &|a, b| a * b % m,
        &|a| rem(-a, m),
    );
    Ok(LocalElement::new(base, vec![det], digits))
}

/// The basis monomials theta^j pi^i of a field.
pub fn standard_basis(field: &LocalField) -> Vec<LocalElement> {
    (0..field.e).flat_map(|i| (0..field.f).map(move |j| LocalElement::monomial(field, i, j))).collect()
}

fn sign_power(n: usize) -> i128 {
    if (n * (n.saturating_sub(1)) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// disc_F(E) = (-1)^{n(n-1)/2} det(tr_{E/F}(e_i e_k)).
pub fn disc_etale(e: &EtaleAlgebra) -> Result<Discriminant> {
    let n = e.degree();
    match e {
        EtaleAlgebra::Local { base, components } => {
            let mut acc = LocalElement::from_int(base, sign_power(n));
            for c in components {
                let det = gram_det(&standard_basis(c), &LocalElement::one(c), base)?;
                if det.is_zero() {
                    return Err(Error::PrecisionExhausted("trace form determinant vanishes".into()));
                }
                acc = acc.mul(&det)?;
            }
            Ok(Discriminant::Class(square_class(&acc)?))
        }
        EtaleAlgebra::Archimedean { components } => {
            // a complex component has Gram matrix diag(2, -2) in the basis (1, i)
            let c = components.iter().filter(|&&c| c == ArchComponent::Complex).count();
            let sign = sign_power(n) * if c % 2 == 1 { -1 } else { 1 };
            Ok(Discriminant::Sign(sign as i32))
        }
    }
}

/// N_{M/Q_p}(x) as an element of `base`.
pub fn norm_to_base(x: &LocalElement, base: &LocalField) -> Result<LocalElement> {
    let (n, _) = x.norm_and_trace(Subfield::Base)?;
    Ok(to_base(&n, base))
}

/// N_{E/F}(lambda): an element of Q_p, or a sign over R.
pub fn norm_e_f(e: &EtaleAlgebra, lambda: &Lambda) -> Result<NormValue> {
    match (e, lambda) {
        (EtaleAlgebra::Local { base, components }, Lambda::Local(l)) => {
            if l.len() != components.len() {
                return Err(Error::InvalidInput("lambda has the wrong number of components".into()));
            }
            let mut acc = LocalElement::one(base);
            for (x, c) in l.iter().zip(components) {
                if x.field != *c {
                    return Err(Error::FieldMismatch);
                }
                acc = acc.mul(&norm_to_base(x, base)?)?;
            }
            Ok(NormValue::Local(acc))
        }
        (EtaleAlgebra::Archimedean { components }, Lambda::Archimedean(s)) => {
            if s.len() != components.len() {
                return Err(Error::InvalidInput("lambda has the wrong number of components".into()));
            }
            let neg = s
                .iter()
                .zip(components)
                .filter(|(&x, &c)| c == ArchComponent::Real && x < 0)
                .count();
            Ok(NormValue::Sign(if neg % 2 == 1 { -1 } else { 1 }))
        }
        _ => Err(Error::InvalidInput("lambda does not match the algebra".into())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    Local(LocalElement),
    Sign(i32),
}
