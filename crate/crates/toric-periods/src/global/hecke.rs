//! Hecke characters of K = Q(sqrt d) with odd rational modulus m: a
//! character of (O_K / m)^x, stored prime by prime as characters of the
//! local unit groups, and an infinity type w for (z / |z|)^w.
//!
//! The ideal character is chi((alpha)) = [chi_inf(alpha) chi_m(alpha)]^{-1}
//! for alpha prime to m.  At an inert or ramified place the value on the
//! uniformizer is a root of unity, computed from a global generator of the
//! prime.  At a split place it is in general not, and is carried as a
//! floating rotation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadratic::{place_decomposition, prime_element, unit_generator, validate_d, Decomposition, OkElement, Place};
use crate::characters::mult::{frac, generator_names, ImageJson};
use crate::characters::{parse_rotation, presentation, KCharacter, MultiplicativeCharacter, Rot};
use crate::error::{Error, Result};
use crate::etale::{ExtensionKind, QuadraticExtension, TraceZeroDelta};
use crate::padic::arith::{factor, inv_mod, primes_up_to, rem};
use crate::padic::{LocalElement, LocalField};

/// Tolerance for comparing floating rotations.
pub const PHASE_TOLERANCE: f64 = 1e-9;

/// p-adic digits used for K_p: as many as fit, at most 10.
pub fn local_digits(p: u64) -> u32 {
    let mut d = 0;
    let mut m: i128 = 1;
    while d < 10 {
        match m.checked_mul(p as i128) {
            Some(x) if x < (1i128 << 62) => {
                m = x;
                d += 1;
            }
            _ => break,
        }
    }
    d
}

/// K_p at the digits fixed for p.
pub fn completion(p: u64, d: i128) -> Result<QuadraticExtension> {
    if p == 2 {
        return Err(Error::PrimeTwoUnsupported);
    }
    QuadraticExtension::new(p as i128, d, local_digits(p))
}

/// The image of an integer of K in the field K_p.
pub fn embed_field(k: &QuadraticExtension, x: OkElement) -> Result<LocalElement> {
    let kf = k.field().ok_or_else(|| Error::Unsupported("K_p is split".into()))?;
    let sqrt_d = TraceZeroDelta { t: 1 }.in_field(k)?;
    let half = LocalElement::from_int(kf, 2).inv()?;
    let (x2, y2) = x.doubled_coordinates();
    LocalElement::from_int(kf, x2).add(&sqrt_d.scale(y2))?.mul(&half)
}

/// The images of an integer of K under sqrt d -> s and sqrt d -> -s in Q_p.
pub fn embed_split(k: &QuadraticExtension, x: OkElement) -> Result<(LocalElement, LocalElement)> {
    let ExtensionKind::Split { sqrt_d } = &k.kind else {
        return Err(Error::Unsupported("K_p is a field".into()));
    };
    let half = LocalElement::from_int(&k.base, 2).inv()?;
    let (x2, y2) = x.doubled_coordinates();
    let c = LocalElement::from_int(&k.base, x2);
    let s = sqrt_d.scale(y2);
    Ok((c.add(&s)?.mul(&half)?, c.sub(&s)?.mul(&half)?))
}

/// An integer of K congruent to a local element of K_p modulo p^exp.
fn field_residue(k: &QuadraticExtension, x: &LocalElement, pk: i128) -> Result<OkElement> {
    let kf = k.field().expect("field");
    let sqrt_d = TraceZeroDelta { t: 1 }.in_field(k)?;
    let half = LocalElement::from_int(kf, 2).inv()?;
    let c = k.conj(x);
    let re = x.add(&c)?.mul(&half)?;
    let im = x.sub(&c)?.mul(&half)?.div(&sqrt_d)?;
    let (re, im) = (rem(re.coeffs[0], pk), rem(im.coeffs[0], pk));
    Ok(OkElement { a: rem(re - im, pk), b: rem(2 * im, pk) })
}

/// An integer of K whose images in Q_p x Q_p are (x1, x2) modulo p^exp.
fn split_residue(k: &QuadraticExtension, x1: &LocalElement, x2: &LocalElement, pk: i128) -> Result<OkElement> {
    let ExtensionKind::Split { sqrt_d } = &k.kind else {
        unreachable!("split completion")
    };
    let half = LocalElement::from_int(&k.base, 2).inv()?;
    let re = x1.add(x2)?.mul(&half)?;
    let im = x1.sub(x2)?.mul(&half)?.mul(&sqrt_d.inv()?)?;
    let (re, im) = (rem(re.coeffs[0], pk), rem(im.coeffs[0], pk));
    Ok(OkElement { a: rem(re - im, pk), b: rem(2 * im, pk) })
}

/// Lift of a residue mod p^k to O_K / m that is 1 modulo m / p^k.
fn crt_lift(x: OkElement, pk: i128, m: i128) -> OkElement {
    let other = m / pk;
    let inv = inv_mod(pk, other).unwrap_or(0);
    let lift = |r: i128, target: i128| rem(r + pk * rem((target - r) * inv, other.max(1)), m);
    OkElement { a: lift(x.a, 1), b: lift(x.b, 0) }
}

/// Characters of the units of K_p modulo the part of m at p, trivial on
/// the uniformizer.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitCharacter {
    Field(MultiplicativeCharacter),
    /// Characters of Z_p^x through sqrt d -> s and sqrt d -> -s.
    Split(MultiplicativeCharacter, MultiplicativeCharacter),
}

#[derive(Clone, Debug)]
pub struct PrimeComponent {
    pub p: u64,
    /// Exponent of p in m.
    pub exponent: u32,
    pub k: QuadraticExtension,
    pub units: UnitCharacter,
}

impl PrimeComponent {
    /// Level of the local unit characters.
    pub fn level(&self) -> u32 {
        match &self.units {
            UnitCharacter::Field(c) => self.exponent * c.field().e as u32,
            UnitCharacter::Split(..) => self.exponent,
        }
    }

    fn trivial(p: u64, exponent: u32, d: i128) -> Result<Self> {
        let k = completion(p, d)?;
        let units = match k.field() {
            Some(kf) => UnitCharacter::Field(MultiplicativeCharacter::trivial(kf, exponent * kf.e as u32)?),
            None => {
                let t = MultiplicativeCharacter::trivial(&k.base, exponent)?;
                UnitCharacter::Split(t.clone(), t)
            }
        };
        Ok(PrimeComponent { p, exponent, k, units })
    }

    /// chi at the image of x, for x prime to p (the uniformizer contributes 0).
    pub fn rotation(&self, x: OkElement) -> Result<Rot> {
        match &self.units {
            UnitCharacter::Field(c) => c.rotation_of(&embed_field(&self.k, x)?),
            UnitCharacter::Split(a, b) => {
                let (x1, x2) = embed_split(&self.k, x)?;
                Ok(frac(a.rotation_of(&x1)? + b.rotation_of(&x2)?))
            }
        }
    }

    fn at_exponent(&self, exponent: u32) -> Result<Self> {
        let scale = |c: &MultiplicativeCharacter, e: u32| c.at_level(exponent * e);
        let units = match &self.units {
            UnitCharacter::Field(c) => UnitCharacter::Field(scale(c, c.field().e as u32)?),
            UnitCharacter::Split(a, b) => UnitCharacter::Split(scale(a, 1)?, scale(b, 1)?),
        };
        Ok(PrimeComponent { p: self.p, exponent, k: self.k.clone(), units })
    }
}

/// Rotation of x / |x| for the integers whose argument is a rational
/// multiple of a full turn.
fn exact_arg(x: OkElement, d: i128) -> Option<Rot> {
    let (x2, y2) = x.doubled_coordinates();
    match (x2.signum(), y2.signum()) {
        (1, 0) => Some(Rot::from_integer(0)),
        (-1, 0) => Some(Rot::new(1, 2)),
        (0, 1) => Some(Rot::new(1, 4)),
        (0, -1) => Some(Rot::new(3, 4)),
        _ => {
            let (u, r) = unit_generator(d);
            let mut y = u;
            let mut acc = r;
            for _ in 0..6 {
                if y == x {
                    return Some(frac(acc));
                }
                y = y.mul(u, d);
                acc += r;
            }
            None
        }
    }
}

fn float_arg(x: OkElement, d: i128) -> f64 {
    let z = x.to_complex(d);
    z.im.atan2(z.re) / (2.0 * PI)
}

pub(crate) fn rot_f64(r: Rot) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn frac_f64(x: f64) -> f64 {
    x - x.floor()
}

/// Local data of a Hecke character at one place.
#[derive(Clone, Debug)]
pub enum LocalComponent {
    /// chi(z) = (z / |z|)^exponent on C^x.
    Archimedean { exponent: i64 },
    /// K_p a field: the full character of K_p^x.
    Field { p: u64, decomposition: Decomposition, k: QuadraticExtension, chi: MultiplicativeCharacter },
    /// K_p = Q_p x Q_p: unit characters and the rotations of the values at
    /// (p, 1) and (1, p).
    Split {
        p: u64,
        k: QuadraticExtension,
        first: MultiplicativeCharacter,
        second: MultiplicativeCharacter,
        first_pi: f64,
        second_pi: f64,
    },
}

impl LocalComponent {
    /// The local character as a character of K_p^x when it is exact: at
    /// field places, and at split places with (p, 1) and (1, p) sent to
    /// mutually inverse roots of unity of small order.
    pub fn k_character(&self) -> Result<KCharacter> {
        match self {
            LocalComponent::Field { chi, .. } => Ok(KCharacter::Field(chi.clone())),
            _ => Err(Error::Unsupported("split or archimedean place".into())),
        }
    }

    /// The unit part at a split place as a character (a, b) -> c(a / b),
    /// valid when the second character is the inverse of the first on units.
    pub fn split_unit_character(&self) -> Result<MultiplicativeCharacter> {
        match self {
            LocalComponent::Split { first, .. } => Ok(first.clone()),
            _ => Err(Error::Unsupported("not a split place".into())),
        }
    }
}

/// A Hecke character of K with odd modulus m and infinity type w.
#[derive(Clone, Debug)]
pub struct GlobalHeckeCharacter {
    pub d: i128,
    pub modulus: i128,
    pub infinity_type: i64,
    pub components: Vec<PrimeComponent>,
}

fn check_modulus(m: i128) -> Result<()> {
    if m <= 0 {
        return Err(Error::InvalidInput("modulus must be a positive integer".into()));
    }
    if m % 2 == 0 {
        return Err(Error::EvenPlaceRamifiedCharacter);
    }
    Ok(())
}

impl GlobalHeckeCharacter {
    /// Validates the components against m and checks that the value on
    /// principal ideals does not depend on the generator.
    pub fn new(d: i128, modulus: i128, infinity_type: i64, mut components: Vec<PrimeComponent>) -> Result<Self> {
        validate_d(d)?;
        check_modulus(modulus)?;
        components.sort_by_key(|c| c.p);
        let primes = factor(modulus);
        if primes.len() != components.len() {
            return Err(Error::InvalidCharacter("one component per prime of the modulus is required".into()));
        }
        for ((p, e), c) in primes.iter().zip(&components) {
            if *p != c.p || *e != c.exponent {
                return Err(Error::InvalidCharacter(format!("component at {} does not match the modulus", c.p)));
            }
            let ok = match &c.units {
                UnitCharacter::Field(x) => x.level() == c.level() && Some(x.field()) == c.k.field(),
                UnitCharacter::Split(a, b) => {
                    a.level() == c.level() && b.level() == c.level() && *a.field() == c.k.base && *b.field() == c.k.base
                }
            };
            if !ok {
                return Err(Error::InvalidCharacter(format!("component at {} has the wrong level or field", c.p)));
            }
        }
        let chi = GlobalHeckeCharacter { d, modulus, infinity_type, components };
        let (u, r) = unit_generator(d);
        let total = chi.unit_rotation(u)? + r * infinity_type;
        if !total.is_integer() {
            return Err(Error::InvalidCharacter("value on (alpha) depends on the generator".into()));
        }
        Ok(chi)
    }

    pub fn trivial(d: i128) -> Result<Self> {
        Self::new(d, 1, 0, Vec::new())
    }

    /// The character with chi_m(x) = f(x) for x prime to m, where f is
    /// supplied on integers of K (and must be a character of (O_K / m)^x).
    pub fn from_residue_fn(d: i128, modulus: i128, infinity_type: i64, f: impl Fn(OkElement) -> Rot) -> Result<Self> {
        validate_d(d)?;
        check_modulus(modulus)?;
        let mut comps = Vec::new();
        for (p, e) in factor(modulus) {
            let pk = (p as i128).pow(e);
            let k = completion(p, d)?;
            let units = match k.field() {
                Some(kf) => {
                    let pres = presentation(kf, e * kf.e as u32)?;
                    let mut rots = vec![Rot::from_integer(0)];
                    for g in &pres.generators()[1..] {
                        rots.push(f(crt_lift(field_residue(&k, g, pk)?, pk, modulus)));
                    }
                    UnitCharacter::Field(MultiplicativeCharacter::new(pres, rots)?)
                }
                None => {
                    let pres = presentation(&k.base, e)?;
                    let one = LocalElement::one(&k.base);
                    let mut first = vec![Rot::from_integer(0)];
                    let mut second = vec![Rot::from_integer(0)];
                    for g in &pres.generators()[1..] {
                        first.push(f(crt_lift(split_residue(&k, g, &one, pk)?, pk, modulus)));
                        second.push(f(crt_lift(split_residue(&k, &one, g, pk)?, pk, modulus)));
                    }
                    UnitCharacter::Split(
                        MultiplicativeCharacter::new(pres.clone(), first)?,
                        MultiplicativeCharacter::new(pres, second)?,
                    )
                }
            };
            comps.push(PrimeComponent { p, exponent: e, k, units });
        }
        Self::new(d, modulus, infinity_type, comps)
    }

    pub fn component(&self, p: u64) -> Option<&PrimeComponent> {
        self.components.iter().find(|c| c.p == p)
    }

    /// chi_m(x) for x prime to m.
    pub fn unit_rotation(&self, x: OkElement) -> Result<Rot> {
        self.rotation_away(x, None)
    }

    fn rotation_away(&self, x: OkElement, skip: Option<u64>) -> Result<Rot> {
        let mut r = Rot::from_integer(0);
        for c in &self.components {
            if Some(c.p) != skip {
                r += c.rotation(x)?;
            }
        }
        Ok(frac(r))
    }

    /// chi((x)) for x prime to m, as a rotation.
    pub fn ideal_rotation(&self, x: OkElement) -> Result<f64> {
        let inf = match exact_arg(x, self.d) {
            Some(r) => rot_f64(frac(r * self.infinity_type)),
            None => self.infinity_type as f64 * float_arg(x, self.d),
        };
        Ok(frac_f64(-inf - rot_f64(self.unit_rotation(x)?)))
    }

    /// chi((n)) for a rational integer n prime to m.
    pub fn rational_ideal_rotation(&self, n: i128) -> Result<Rot> {
        let inf = if n < 0 { Rot::new(self.infinity_type, 2) } else { Rot::from_integer(0) };
        Ok(frac(-inf - self.unit_rotation(OkElement::int(n))?))
    }

    /// The local character at a place.
    pub fn localize(&self, place: Place) -> Result<LocalComponent> {
        let p = match place {
            Place::Infinite => return Ok(LocalComponent::Archimedean { exponent: self.infinity_type }),
            Place::Finite(p) => p,
        };
        let comp = match self.component(p) {
            Some(c) => c.clone(),
            None => PrimeComponent::trivial(p, 1, self.d)?,
        };
        let decomposition = place_decomposition(place, self.d);
        match &comp.units {
            UnitCharacter::Field(units) => {
                let kf = comp.k.field().expect("field");
                let g = if decomposition == Decomposition::Ramified { OkElement::sqrt_d() } else { OkElement::int(p as i128) };
                let arg = exact_arg(g, self.d).expect("rational or purely imaginary");
                let at_g = -(arg * self.infinity_type) - self.rotation_away(g, Some(p))?;
                let pi = LocalElement::uniformizer(kf);
                let u = pi.div(&embed_field(&comp.k, g)?)?;
                let at_pi = at_g + units.rotation_of(&u)?;
                let mut rots = units.rotations.clone();
                rots[0] = frac(at_pi);
                let chi = MultiplicativeCharacter::new(units.pres.clone(), rots)?;
                Ok(LocalComponent::Field { p, decomposition, k: comp.k.clone(), chi })
            }
            UnitCharacter::Split(first, second) => {
                let ExtensionKind::Split { sqrt_d } = &comp.k.kind else { unreachable!("split completion") };
                let s = rem(sqrt_d.coeffs[0], p as i128);
                let pp = prime_element(p as i128, self.d, s)?;
                let pb = pp.conj();
                let away = |x: OkElement| -> Result<f64> {
                    Ok(self.infinity_type as f64 * float_arg(x, self.d) + rot_f64(self.rotation_away(x, Some(p))?))
                };
                let (pp1, pp2) = embed_split(&comp.k, pp)?;
                let (pb1, pb2) = embed_split(&comp.k, pb)?;
                let first_pi = -away(pp)? - rot_f64(second.rotation_of(&pp2)?) + rot_f64(first.rotation_of(&pb1)?);
                let second_pi = -away(pb)? - rot_f64(first.rotation_of(&pb1)?) + rot_f64(second.rotation_of(&pp2)?);
                debug_assert!(pp1.valuation() != Some(0) && pb2.valuation() != Some(0));
                Ok(LocalComponent::Split {
                    p,
                    k: comp.k.clone(),
                    first: first.clone(),
                    second: second.clone(),
                    first_pi: frac_f64(first_pi),
                    second_pi: frac_f64(second_pi),
                })
            }
        }
    }

    /// Exponent of p in the conductor of the local character(s) at p.
    pub fn local_conductor(&self, p: u64) -> Result<u32> {
        match self.component(p) {
            None => Ok(0),
            Some(c) => match &c.units {
                UnitCharacter::Field(u) => u.conductor(),
                UnitCharacter::Split(a, b) => Ok(a.conductor()? + b.conductor()?),
            },
        }
    }

    /// Norm of the conductor.
    pub fn conductor_norm(&self) -> Result<i128> {
        let mut n: i128 = 1;
        for c in &self.components {
            let a = self.local_conductor(c.p)?;
            let q = match &c.units {
                UnitCharacter::Field(u) => u.field().residue_size(),
                UnitCharacter::Split(..) => c.p as i128,
            };
            n *= q.pow(a);
        }
        Ok(n)
    }

    /// chi o sigma for the nontrivial automorphism sigma of K.
    pub fn conj(&self) -> Result<Self> {
        let mut comps = Vec::new();
        for c in &self.components {
            let units = match &c.units {
                UnitCharacter::Field(u) => UnitCharacter::Field(MultiplicativeCharacter::from_fn(u.pres.clone(), |g| {
                    u.rotation_of(&c.k.conj(g))
                })?),
                UnitCharacter::Split(a, b) => UnitCharacter::Split(b.clone(), a.clone()),
            };
            comps.push(PrimeComponent { units, ..c.clone() });
        }
        Self::new(self.d, self.modulus, -self.infinity_type, comps)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::FieldMismatch);
        }
        let modulus = num_integer::Integer::lcm(&self.modulus, &other.modulus);
        let mut comps = Vec::new();
        for (p, e) in factor(modulus) {
            let a = match self.component(p) {
                Some(c) => c.at_exponent(e)?,
                None => PrimeComponent::trivial(p, e, self.d)?,
            };
            let b = match other.component(p) {
                Some(c) => c.at_exponent(e)?,
                None => PrimeComponent::trivial(p, e, self.d)?,
            };
            let units = match (&a.units, &b.units) {
                (UnitCharacter::Field(x), UnitCharacter::Field(y)) => UnitCharacter::Field(x.mul(y)?),
                (UnitCharacter::Split(x1, x2), UnitCharacter::Split(y1, y2)) => {
                    UnitCharacter::Split(x1.mul(y1)?, x2.mul(y2)?)
                }
                _ => return Err(Error::FieldMismatch),
            };
            comps.push(PrimeComponent { units, ..a });
        }
        Self::new(self.d, modulus, self.infinity_type + other.infinity_type, comps)
    }

    pub fn inv(&self) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|c| {
                let units = match &c.units {
                    UnitCharacter::Field(u) => UnitCharacter::Field(u.inv()),
                    UnitCharacter::Split(a, b) => UnitCharacter::Split(a.inv(), b.inv()),
                };
                PrimeComponent { units, ..c.clone() }
            })
            .collect();
        Self::new(self.d, self.modulus, -self.infinity_type, comps)
    }

    /// The e in {0, 1} with chi restricted to the ideles of Q equal to
    /// omega_{K/Q}^e, checked at infinity, at every prime dividing m d and
    /// at the unramified primes below 30; None when neither holds.
    pub fn restriction_exponent(&self) -> Result<Option<u8>> {
        for e in [0u8, 1] {
            if self.restricts_to(e)? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    pub fn is_conjugate_symplectic(&self) -> Result<bool> {
        Ok(self.restriction_exponent()? == Some(1))
    }

    fn restricts_to(&self, e: u8) -> Result<bool> {
        if self.infinity_type.rem_euclid(2) != e as i64 {
            return Ok(false);
        }
        let mut bad: Vec<u64> = factor(self.modulus).into_iter().map(|(p, _)| p).collect();
        bad.extend(factor(-self.d).into_iter().map(|(p, _)| p));
        bad.sort_unstable();
        bad.dedup();
        for &p in &bad {
            match self.localize(Place::Finite(p))? {
                LocalComponent::Field { k, chi, .. } => {
                    if !KCharacter::Field(chi).restricts_to_omega(&k, e as usize)? {
                        return Ok(false);
                    }
                }
                LocalComponent::Split { first, second, first_pi, second_pi, .. } => {
                    if !first.mul(&second)?.is_trivial() {
                        return Ok(false);
                    }
                    let s = frac_f64(first_pi + second_pi);
                    if s.min(1.0 - s) > PHASE_TOLERANCE {
                        return Ok(false);
                    }
                }
                LocalComponent::Archimedean { .. } => unreachable!("finite place"),
            }
        }
        for p in primes_up_to(30) {
            if bad.contains(&p) {
                continue;
            }
            let target = match place_decomposition(Place::Finite(p), self.d) {
                Decomposition::Inert if e == 1 => Rot::new(1, 2),
                _ => Rot::from_integer(0),
            };
            if self.rational_ideal_rotation(p as i128)? != target {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> HeckeCharacterJson {
        let images = |c: &MultiplicativeCharacter| -> Vec<ImageJson> {
            generator_names(&c.pres)
                .into_iter()
                .zip(&c.rotations)
                .skip(1)
                .filter(|(_, r)| *r.numer() != 0)
                .map(|(generator, r)| ImageJson { generator, rotation: r.to_string() })
                .collect()
        };
        HeckeCharacterJson {
            modulus: self.modulus.to_string(),
            infinity_type: self.infinity_type,
            components: self
                .components
                .iter()
                .map(|c| match &c.units {
                    UnitCharacter::Field(u) => {
                        PrimeComponentJson { prime: c.p.to_string(), images: images(u), conjugate_images: Vec::new() }
                    }
                    UnitCharacter::Split(a, b) => {
                        PrimeComponentJson { prime: c.p.to_string(), images: images(a), conjugate_images: images(b) }
                    }
                })
                .collect(),
        }
    }
}

/// {modulus, infinity_type, components: [{prime, images, conjugate_images}]}.
/// Images name the unit generators (zeta, eta1, ...) of the presentation of
/// K_p at level exponent * e; at split primes `images` is the character
/// through sqrt d -> s and `conjugate_images` the one through -s.  Missing
/// generators and primes are trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeckeCharacterJson {
    pub modulus: String,
    pub infinity_type: i64,
    #[serde(default)]
    pub components: Vec<PrimeComponentJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeComponentJson {
    pub prime: String,
    #[serde(default)]
    pub images: Vec<ImageJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugate_images: Vec<ImageJson>,
}

fn build_units(field: &LocalField, level: u32, images: &[ImageJson]) -> Result<MultiplicativeCharacter> {
    let pres = presentation(field, level)?;
    let names = generator_names(&pres);
    let mut rots = vec![Rot::from_integer(0); names.len()];
    for img in images {
        let i = names
            .iter()
            .skip(1)
            .position(|n| *n == img.generator)
            .ok_or_else(|| Error::InvalidCharacter(format!("unknown unit generator {:?}", img.generator)))?;
        rots[i + 1] = parse_rotation(&img.rotation)?;
    }
    MultiplicativeCharacter::new(pres, rots)
}

impl HeckeCharacterJson {
    pub fn build(&self, d: i128) -> Result<GlobalHeckeCharacter> {
        validate_d(d)?;
        let modulus: i128 =
            self.modulus.trim().parse().map_err(|_| Error::InvalidInput(format!("bad modulus {:?}", self.modulus)))?;
        check_modulus(modulus)?;
        let primes = factor(modulus);
        for c in &self.components {
            let p: u64 = c.prime.trim().parse().map_err(|_| Error::InvalidInput(format!("bad prime {:?}", c.prime)))?;
            if !primes.iter().any(|(q, _)| *q == p) {
                return Err(Error::InvalidCharacter(format!("prime {p} does not divide the modulus")));
            }
        }
        let mut comps = Vec::new();
        for (p, e) in primes {
            let k = completion(p, d)?;
            let given = self.components.iter().find(|c| c.prime.trim() == p.to_string());
            let (imgs, conj_imgs) = given.map(|c| (&c.images[..], &c.conjugate_images[..])).unwrap_or((&[], &[]));
            let units = match k.field() {
                Some(kf) => {
                    if !conj_imgs.is_empty() {
                        return Err(Error::InvalidCharacter(format!("{p} is not split: no conjugate_images")));
                    }
                    UnitCharacter::Field(build_units(kf, e * kf.e as u32, imgs)?)
                }
                None => UnitCharacter::Split(build_units(&k.base, e, imgs)?, build_units(&k.base, e, conj_imgs)?),
            };
            comps.push(PrimeComponent { p, exponent: e, k, units });
        }
        GlobalHeckeCharacter::new(d, modulus, self.infinity_type, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::legendre;

    /// The Legendre symbol of x modulo sqrt(-7), infinity type 1.
    pub(crate) fn seven_character(w: i64) -> GlobalHeckeCharacter {
        GlobalHeckeCharacter::from_residue_fn(-7, 7, w, |x| {
            let (x2, _) = x.doubled_coordinates();
            // x = x2 / 2 mod sqrt(-7)
            if legendre(rem(x2 * 4, 7), 7) == 1 {
                Rot::from_integer(0)
            } else {
                Rot::new(1, 2)
            }
        })
        .unwrap()
    }

    #[test]
    fn residue_lifts_round_trip() {
        let k = completion(3, -7).unwrap();
        let x = OkElement { a: 2, b: 5 };
        let y = field_residue(&k, &embed_field(&k, x).unwrap(), 27).unwrap();
        assert_eq!(y, x.reduce(27));
        let k = completion(11, -7).unwrap();
        let (x1, x2) = embed_split(&k, x).unwrap();
        assert_eq!(split_residue(&k, &x1, &x2, 121).unwrap(), x.reduce(121));
        let k = completion(7, -7).unwrap();
        let y = field_residue(&k, &embed_field(&k, x).unwrap(), 49).unwrap();
        assert_eq!(y, x.reduce(49));
    }

    #[test]
    fn seven_character_is_conjugate_symplectic() {
        let chi = seven_character(1);
        assert!(chi.is_conjugate_symplectic().unwrap());
        assert!(chi.conj().unwrap().is_conjugate_symplectic().unwrap());
        assert_eq!(chi.local_conductor(7).unwrap(), 1);
        assert_eq!(chi.conductor_norm().unwrap(), 7);
        // even infinity type breaks unit invariance
        assert!(GlobalHeckeCharacter::from_residue_fn(-7, 7, 2, |x| {
            let (x2, _) = x.doubled_coordinates();
            if legendre(rem(x2 * 4, 7), 7) == 1 { Rot::from_integer(0) } else { Rot::new(1, 2) }
        })
        .is_err());
    }

    #[test]
    fn split_localizations_are_inverse() {
        let chi = seven_character(1);
        for p in [11u64, 23, 29] {
            let LocalComponent::Split { first, second, first_pi, second_pi, .. } = chi.localize(Place::Finite(p)).unwrap()
            else {
                panic!("{p} splits")
            };
            assert!(first.mul(&second).unwrap().is_trivial());
            let s = frac_f64(first_pi + second_pi);
            assert!(s.min(1.0 - s) < 1e-9);
        }
    }

    #[test]
    fn inert_value_is_ideal_value() {
        let chi = seven_character(1);
        let LocalComponent::Field { chi: local, decomposition, .. } = chi.localize(Place::Finite(3)).unwrap() else {
            panic!("3 is inert")
        };
        assert_eq!(decomposition, Decomposition::Inert);
        assert_eq!(local.rotations[0], chi.rational_ideal_rotation(3).unwrap());
        assert_eq!(local.rotations[0], Rot::new(1, 2));
    }

    #[test]
    fn even_modulus_is_rejected() {
        assert_eq!(
            GlobalHeckeCharacter::from_residue_fn(-7, 14, 1, |_| Rot::from_integer(0)).unwrap_err(),
            Error::EvenPlaceRamifiedCharacter
        );
    }

    #[test]
    fn json_round_trip() {
        let chi = seven_character(1);
        let j = chi.to_json();
        let back = j.build(-7).unwrap();
        assert_eq!(back.to_json(), j);
        assert_eq!(back.ideal_rotation(OkElement { a: 2, b: 1 }).unwrap(), chi.ideal_rotation(OkElement { a: 2, b: 1 }).unwrap());
    }
}
