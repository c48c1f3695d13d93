//! Quadratic extensions K = Q_p(sqrt d) and L = K (x) F_j for components F_j
//! of degree at most 2 over Q_p.
//!
//! Every field here has the shape Q_p(theta, pi) with theta^2 = u_p (when
//! f = 2) and pi^2 = c for an integer c of valuation 1 (when e = 2), so all
//! automorphisms act on the basis monomials by signs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::arith::{inv_mod, legendre, rem, smallest_nonresidue, split_p, sqrt_mod_pk};
use crate::padic::{hilbert_symbol, make_local_field, qp, LocalElement, LocalField, SquareClass};

/// Square class in Q_p of a nonzero integer.
pub fn rational_class(p: i128, n: i128) -> SquareClass {
    let (v, w) = split_p(n, p);
    SquareClass::from_bits(legendre(w, p) == -1, v % 2 == 1)
}

/// Rejects fields outside the sign-automorphism shape.
pub fn check_sign_shape(field: &LocalField) -> Result<()> {
    if field.f > 2 || field.e > 2 {
        return Err(Error::Unsupported(format!(
            "component of degree {} over Q_p; only degree <= 2 is handled",
            field.e * field.f
        )));
    }
    let c0 = &field.eisenstein[0];
    if c0[1..].iter().any(|&x| x != 0) {
        return Err(Error::Unsupported("Eisenstein constant must be rational".into()));
    }
    if field.e == 2 && field.eisenstein[1].iter().any(|&x| x != 0) {
        return Err(Error::Unsupported("Eisenstein polynomial must be x^2 - c".into()));
    }
    Ok(())
}

/// theta^2 as an integer, if f = 2.
fn theta_square(field: &LocalField) -> Option<i128> {
    (field.f == 2).then(|| smallest_nonresidue(field.p))
}

/// pi^2 (e = 2) or pi (e = 1) as a signed integer.
fn pi_constant(field: &LocalField) -> i128 {
    let c = rem(-field.eisenstein[0][0], field.modulus);
    if c > field.modulus / 2 {
        c - field.modulus
    } else {
        c
    }
}

/// A square root of the integer y inside `field`, of the form r theta^a pi^b
/// with r in Z_p; None when y is not a square there.
pub fn sqrt_in(field: &LocalField, y: i128) -> Option<LocalElement> {
    let p = field.p;
    let (vy, w) = split_p(y, p);
    let digits = field.digits;
    let m = field.modulus;
    for a in 0..field.f {
        for b in 0..field.e {
            if (vy as usize) < b || (vy as usize - b) % 2 == 1 {
                continue;
            }
            let mut denom = 1i128;
            if a == 1 {
                denom = denom * theta_square(field).unwrap() % m;
            }
            if b == 1 {
                let (_, cu) = split_p(pi_constant(field), p);
                denom = rem(denom * cu, m);
            }
            let wu = rem(w * inv_mod(denom, m).unwrap(), m);
            if legendre(wu, p) != 1 {
                continue;
            }
            let half = (vy as usize - b) / 2;
            if half as u32 >= digits {
                continue;
            }
            let r = rem(sqrt_mod_pk(wu, p, digits).unwrap() * p.pow(half as u32), m);
            let mut coeffs = vec![0i128; field.degree()];
            coeffs[b * field.f + a] = r;
            return Some(LocalElement::new(field, coeffs, field.precision));
        }
    }
    None
}

/// An automorphism theta -> s_theta theta, pi -> s_pi pi.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignAutomorphism {
    pub theta: i128,
    pub pi: i128,
}

impl SignAutomorphism {
    pub const IDENTITY: SignAutomorphism = SignAutomorphism { theta: 1, pi: 1 };

    /// All sign automorphisms of the field.
    pub fn all(field: &LocalField) -> Vec<SignAutomorphism> {
        let mut out = Vec::new();
        for &pi in if field.e == 2 { &[1, -1][..] } else { &[1][..] } {
            for &theta in if field.f == 2 { &[1, -1][..] } else { &[1][..] } {
                out.push(SignAutomorphism { theta, pi });
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn apply(&self, x: &LocalElement) -> LocalElement {
        let f = x.field.f;
        let coeffs = x
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let (i, j) = (idx / f, idx % f);
                let s = self.theta.pow(j as u32) * self.pi.pow(i as u32);
                c * s
            })
            .collect();
        LocalElement::new(&x.field, coeffs, x.prec)
    }
}

/// An embedding of a sign-shaped field into another, sending each basis
/// monomial to a unit multiple of a basis monomial.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    pub sub: LocalField,
    pub host: LocalField,
    /// For each basis monomial of `sub`: (host index, unit coefficient).
    images: Vec<(usize, i128)>,
    /// e(host) / e(sub).
    ramification: u32,
}

impl SubfieldEmbedding {
    /// `theta_image` and `pi_image` are the images of the generators of `sub`
    /// (ignored when the corresponding degree is 1).
    pub fn new(
        sub: &LocalField,
        host: &LocalField,
        theta_image: Option<&LocalElement>,
        pi_image: Option<&LocalElement>,
    ) -> Result<Self> {
        let one = LocalElement::one(host);
        let th = theta_image.cloned().unwrap_or_else(|| one.clone());
        let pi = pi_image.cloned().unwrap_or_else(|| one.clone());
        let mut images = Vec::new();
        for i in 0..sub.e {
            for j in 0..sub.f {
                let img = th.pow(j as u128).mul(&pi.pow(i as u128))?;
                let nonzero: Vec<usize> = (0..host.degree()).filter(|&k| img.coeffs[k] != 0).collect();
                if nonzero.len() != 1 {
                    return Err(Error::Unsupported("embedding image is not a monomial".into()));
                }
                images.push((nonzero[0], img.coeffs[nonzero[0]]));
            }
        }
        if !host.e.is_multiple_of(sub.e) {
            return Err(Error::Unsupported("ramification indices do not divide".into()));
        }
        Ok(SubfieldEmbedding {
            sub: sub.clone(),
            host: host.clone(),
            images,
            ramification: (host.e / sub.e) as u32,
        })
    }

    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    pub fn push(&self, x: &LocalElement) -> LocalElement {
        let mut coeffs = vec![0i128; self.host.degree()];
        for (s, &(idx, c)) in self.images.iter().enumerate() {
            coeffs[idx] = rem(x.coeffs[s] % self.host.modulus * c, self.host.modulus);
        }
        LocalElement::new(&self.host, coeffs, x.prec * self.ramification)
    }

    /// Preimage of an element known to lie in the image.
    pub fn pull(&self, y: &LocalElement) -> Result<LocalElement> {
        let prec = y.prec / self.ramification;
        let mut coeffs = vec![0i128; self.sub.degree()];
        for (s, &(idx, c)) in self.images.iter().enumerate() {
            let ci = inv_mod(c, self.host.modulus).ok_or(Error::DivisionByNearZero)?;
            coeffs[s] = rem(y.coeffs[idx] * ci, self.host.modulus) % self.sub.modulus;
        }
        let x = LocalElement::new(&self.sub, coeffs, prec);
        let back = self.push(&x);
        let y_cut = LocalElement::new(&self.host, y.coeffs.clone(), back.prec);
        if back != y_cut {
            return Err(Error::InvalidInput("element does not lie in the subfield".into()));
        }
        Ok(x)
    }
}

/// The quadratic etale algebra K = Q_p[x]/(x^2 - d) over F = Q_p.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub base: LocalField,
    pub d: i128,
    /// Canonical representative of the class of d: 1, u_p, p or u_p p.
    pub d0: i128,
    pub kind: ExtensionKind,
}

#[derive(Clone, Debug)]
pub enum ExtensionKind {
    Field { field: LocalField, sqrt_d0: LocalElement },
    /// sqrt(d) in Z_p (as an element of the base field).
    Split { sqrt_d: LocalElement },
}

impl QuadraticExtension {
    /// K over Q_p at p-adic precision `digits`.
    pub fn new(p: i128, d: i128, digits: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("d must be nonzero".into()));
        }
        let base = qp(p, digits)?;
        let u = smallest_nonresidue(p);
        let d0 = match rational_class(p, d) {
            SquareClass::One => 1,
            SquareClass::U => u,
            SquareClass::Pi => p,
            SquareClass::UPi => u * p,
        };
        let kind = if d0 == 1 {
            let sqrt_d = sqrt_in(&base, d).ok_or(Error::PrecisionExhausted("sqrt(d) in Q_p".into()))?;
            ExtensionKind::Split { sqrt_d }
        } else {
            let field = if d0 == u {
                make_local_field(p, 2, &[vec![-p], vec![1]], digits)?
            } else {
                make_local_field(p, 1, &[vec![-d0], vec![0], vec![1]], 2 * digits)?
            };
            let sqrt_d0 = sqrt_in(&field, d0).expect("generator squares to d0");
            ExtensionKind::Field { field, sqrt_d0 }
        };
        Ok(QuadraticExtension { base, d, d0, kind })
    }

    pub fn p(&self) -> i128 {
        self.base.p
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, ExtensionKind::Split { .. })
    }

    pub fn field(&self) -> Option<&LocalField> {
        match &self.kind {
            ExtensionKind::Field { field, .. } => Some(field),
            ExtensionKind::Split { .. } => None,
        }
    }

    /// sqrt(d / d0) in Z_p, as an integer modulo p^digits.
    pub fn cofactor(&self) -> i128 {
        let p = self.p();
        let m = self.base.modulus;
        let (v, w) = split_p(self.d, p);
        let (v0, w0) = split_p(self.d0, p);
        let ratio = rem(w * inv_mod(w0, m).expect("unit"), m);
        let r = sqrt_mod_pk(ratio, p, self.base.digits).expect("d / d0 is a square");
        rem(r * p.pow((v - v0) / 2), m)
    }

    /// Complex conjugation on K.
    pub fn conj(&self, x: &LocalElement) -> LocalElement {
        match &self.kind {
            ExtensionKind::Field { field, .. } => {
                let s = if field.f == 2 {
                    SignAutomorphism { theta: -1, pi: 1 }
                } else {
                    SignAutomorphism { theta: 1, pi: -1 }
                };
                s.apply(x)
            }
            ExtensionKind::Split { .. } => x.clone(),
        }
    }

    /// The Q_p-integer n as an element of K.
    pub fn from_int(&self, n: i128) -> Result<LocalElement> {
        Ok(LocalElement::from_int(self.field().ok_or(Error::Unsupported("K is split".into()))?, n))
    }

    /// omega_{K/F}(x) for x in Q_p: the Hilbert symbol (x, d).
    pub fn omega(&self, x: &LocalElement) -> Result<i32> {
        if self.is_split() {
            return Ok(1);
        }
        hilbert_symbol(x, &LocalElement::from_int(&x.field, self.d0))
    }
}

/// The trace-zero element delta = t sqrt(d) of K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceZeroDelta {
    pub t: i128,
}

impl TraceZeroDelta {
    /// delta as an element of the field K.
    pub fn in_field(&self, k: &QuadraticExtension) -> Result<LocalElement> {
        match &k.kind {
            ExtensionKind::Field { sqrt_d0, .. } => Ok(sqrt_d0.scale(self.t * k.cofactor())),
            ExtensionKind::Split { .. } => Err(Error::Unsupported("K is split".into())),
        }
    }

    /// delta as the pair (t s, -t s) of Q_p x Q_p when K splits, s = sqrt(d).
    pub fn in_split(&self, k: &QuadraticExtension) -> Result<(LocalElement, LocalElement)> {
        match &k.kind {
            ExtensionKind::Split { sqrt_d } => {
                let a = sqrt_d.scale(self.t);
                Ok((a.clone(), a.neg()))
            }
            ExtensionKind::Field { .. } => Err(Error::Unsupported("K is a field".into())),
        }
    }
}

/// L_j = K (x) F_j for one component F_j.
#[derive(Clone, Debug)]
pub struct QuadraticEtale {
    pub over: LocalField,
    pub kind: QuadKind,
}

#[derive(Clone, Debug)]
pub enum QuadKind {
    Field {
        l: LocalField,
        /// The involution of L over F_j.
        sigma: SignAutomorphism,
        /// Generator of Gal(L/K), identity when F_j = Q_p.
        tau: SignAutomorphism,
        from_over: SubfieldEmbedding,
        from_k: SubfieldEmbedding,
    },
    /// L_j = F_j x F_j.  `sqrt_d` is a square root of d0 in F_j; `from_k`
    /// embeds K into F_j by sending sqrt(d0) to it (absent when K splits).
    Split { sqrt_d: LocalElement, from_k: Option<SubfieldEmbedding> },
}

impl QuadraticEtale {
    pub fn new(over: &LocalField, k: &QuadraticExtension) -> Result<Self> {
        check_sign_shape(over)?;
        if over.p != k.p() {
            return Err(Error::FieldMismatch);
        }
        let kfield = match &k.kind {
            ExtensionKind::Split { sqrt_d } => {
                let mut c = vec![0i128; over.degree()];
                c[0] = sqrt_d.coeffs[0];
                let sqrt_d = LocalElement::new(over, c, over.precision);
                return Ok(QuadraticEtale { over: over.clone(), kind: QuadKind::Split { sqrt_d, from_k: None } });
            }
            ExtensionKind::Field { field, .. } => field,
        };
        let gen_of = |host: &LocalField, f: &LocalField| -> (Option<LocalElement>, Option<LocalElement>) {
            let th = theta_square(f).map(|u| sqrt_in(host, u).expect("u is a square in the host"));
            let pi = (f.e == 2).then(|| sqrt_in(host, pi_constant(f)).expect("c is a square in the host"));
            (th, pi)
        };
        if let Some(s) = sqrt_in(over, k.d0) {
            let (th, pi) = if kfield.f == 2 { (Some(s.clone()), None) } else { (None, Some(s.clone())) };
            let from_k = SubfieldEmbedding::new(kfield, over, th.as_ref(), pi.as_ref())?;
            return Ok(QuadraticEtale { over: over.clone(), kind: QuadKind::Split { sqrt_d: s, from_k: Some(from_k) } });
        }
        let p = over.p;
        let mut classes = vec![rational_class(p, k.d0)];
        if over.f == 2 {
            classes.push(SquareClass::U);
        }
        if over.e == 2 {
            classes.push(rational_class(p, pi_constant(over)));
        }
        let mut span = vec![SquareClass::One];
        for c in &classes {
            let extra: Vec<SquareClass> = span.iter().map(|s| s.mul(*c)).collect();
            for s in extra {
                if !span.contains(&s) {
                    span.push(s);
                }
            }
        }
        let f_l = if span.contains(&SquareClass::U) { 2 } else { 1 };
        let e_l = if span.iter().any(|s| s.bits().1) { 2 } else { 1 };
        let c_l = if over.e == 2 { pi_constant(over) } else { k.d0 };
        let digits = over.digits;
        let eis = if e_l == 2 { vec![vec![-c_l], vec![0], vec![1]] } else { vec![vec![-p], vec![1]] };
        let l = make_local_field(p, f_l, &eis, digits * e_l as u32)?;
        let (th, pi) = gen_of(&l, over);
        let from_over = SubfieldEmbedding::new(over, &l, th.as_ref(), pi.as_ref())?;
        let sqrt_d = sqrt_in(&l, k.d0).expect("d0 is a square in L");
        let (kth, kpi) = if kfield.f == 2 { (Some(sqrt_d.clone()), None) } else { (None, Some(sqrt_d.clone())) };
        let from_k = SubfieldEmbedding::new(kfield, &l, kth.as_ref(), kpi.as_ref())?;
        let over_gens: Vec<LocalElement> = th.into_iter().chain(pi).collect();
        let autos = SignAutomorphism::all(&l);
        let sigma = *autos
            .iter()
            .find(|s| s.apply(&sqrt_d) == sqrt_d.neg() && over_gens.iter().all(|g| s.apply(g) == *g))
            .ok_or_else(|| Error::Unsupported("no involution over F_j".into()))?;
        let tau = autos
            .iter()
            .copied()
            .find(|s| !s.is_identity() && s.apply(&sqrt_d) == sqrt_d)
            .unwrap_or(SignAutomorphism::IDENTITY);
        Ok(QuadraticEtale { over: over.clone(), kind: QuadKind::Field { l, sigma, tau, from_over, from_k } })
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, QuadKind::Split { .. })
    }

    /// omega_{L/F_j}(x): +1 iff x is a norm from L.
    pub fn norm_class_indicator(&self, x: &LocalElement, d0: i128) -> Result<i32> {
        match &self.kind {
            QuadKind::Split { .. } => Ok(1),
            QuadKind::Field { .. } => hilbert_symbol(x, &LocalElement::from_int(&x.field, d0)),
        }
    }

    pub fn field(&self) -> Option<&LocalField> {
        match &self.kind {
            QuadKind::Field { l, .. } => Some(l),
            QuadKind::Split { .. } => None,
        }
    }

    /// N_{L/F_j}(x) = x sigma(x), for L a field.
    pub fn norm_to_over(&self, x: &LocalElement) -> Result<LocalElement> {
        match &self.kind {
            QuadKind::Field { sigma, from_over, .. } => from_over.pull(&x.mul(&sigma.apply(x))?),
            QuadKind::Split { .. } => Err(Error::Unsupported("split component".into())),
        }
    }

    /// N_{L/K}(x) for L a field.
    pub fn norm_to_k(&self, x: &LocalElement) -> Result<LocalElement> {
        match &self.kind {
            QuadKind::Field { tau, from_k, .. } => {
                let n = if tau.is_identity() { x.clone() } else { x.mul(&tau.apply(x))? };
                from_k.pull(&n)
            }
            QuadKind::Split { .. } => Err(Error::Unsupported("split component".into())),
        }
    }

    /// The involution of L over F_j.
    pub fn conj(&self, x: &LocalElement) -> Result<LocalElement> {
        match &self.kind {
            QuadKind::Field { sigma, .. } => Ok(sigma.apply(x)),
            QuadKind::Split { .. } => Err(Error::Unsupported("split component".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: i128, f: usize, c: i128, e: usize, n: u32) -> LocalField {
        let eis = if e == 2 { vec![vec![-c], vec![0], vec![1]] } else { vec![vec![-c], vec![1]] };
        make_local_field(p, f, &eis, n).unwrap()
    }

    #[test]
    fn split_and_field_shapes() {
        let k = QuadraticExtension::new(5, 2, 6).unwrap();
        assert!(!k.is_split());
        let f_sqrt2 = field(5, 2, 5, 1, 6);
        assert!(QuadraticEtale::new(&f_sqrt2, &k).unwrap().is_split());
        let f_sqrt5 = field(5, 1, 5, 2, 12);
        let q = QuadraticEtale::new(&f_sqrt5, &k).unwrap();
        assert!(!q.is_split());
        let l = q.field().unwrap();
        assert_eq!((l.e, l.f), (2, 2));
    }

    #[test]
    fn involutions_fix_the_right_subfields() {
        let p = 7;
        let k = QuadraticExtension::new(p, 7, 5).unwrap();
        let f = field(p, 2, p, 1, 5);
        let q = QuadraticEtale::new(&f, &k).unwrap();
        let QuadKind::Field { l, sigma, tau, from_over, from_k } = &q.kind else { panic!() };
        let x = LocalElement::new(&f, vec![3, 5], 5);
        assert_eq!(sigma.apply(&from_over.push(&x)), from_over.push(&x));
        let kf = k.field().unwrap();
        let y = LocalElement::new(kf, vec![2, 9], 10);
        assert_eq!(tau.apply(&from_k.push(&y)), from_k.push(&y));
        let z = LocalElement::new(l, vec![1, 2, 3, 4], l.precision);
        let n = q.norm_to_over(&z).unwrap();
        assert_eq!(from_over.push(&n), z.mul(&sigma.apply(&z)).unwrap());
    }

    #[test]
    fn square_roots_of_integers() {
        let f = field(5, 2, 5, 2, 8);
        for y in [2, 3, 5, 10, 15, -1, 50] {
            let r = sqrt_in(&f, y).unwrap();
            assert_eq!(r.mul(&r).unwrap(), LocalElement::from_int(&f, y));
        }
        let q5 = qp(5, 6).unwrap();
        assert!(sqrt_in(&q5, 2).is_none());
        assert!(sqrt_in(&q5, 5).is_none());
    }

    #[test]
    fn norm_indicator_example() {
        let k = QuadraticExtension::new(5, 2, 6).unwrap();
        let q5 = qp(5, 6).unwrap();
        let q = QuadraticEtale::new(&q5, &k).unwrap();
        assert_eq!(q.norm_class_indicator(&LocalElement::from_int(&q5, 5), k.d0).unwrap(), -1);
        assert_eq!(q.norm_class_indicator(&LocalElement::from_int(&q5, 2), k.d0).unwrap(), 1);
    }
}
