//! Characters of M^x / (1 + pi^k) given by rotation numbers in Q/Z on the
//! generators of a unit presentation.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etale::SubfieldEmbedding;
use crate::padic::{FieldDescriptor, LocalElement, LocalField, UnitPresentation};

pub type Rot = Ratio<i64>;

/// Representative of r mod 1 in [0, 1).
pub fn frac(r: Rot) -> Rot {
    r - r.floor()
}

pub fn rot_value(r: Rot) -> Complex64 {
    let x = *r.numer() as f64 / *r.denom() as f64;
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

type PresentationKey = (String, u32);

fn cache() -> &'static Mutex<HashMap<PresentationKey, Arc<UnitPresentation>>> {
    static CACHE: OnceLock<Mutex<HashMap<PresentationKey, Arc<UnitPresentation>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The unit presentation of `field` at `level`, shared between callers.
pub fn presentation(field: &LocalField, level: u32) -> Result<Arc<UnitPresentation>> {
    let key = (serde_json::to_string(&field.descriptor()).expect("descriptor serializes"), level);
    if let Some(p) = cache().lock().expect("cache lock").get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(UnitPresentation::new(field, level)?);
    cache().lock().expect("cache lock").insert(key, p.clone());
    Ok(p)
}

#[derive(Clone, Debug)]
pub struct MultiplicativeCharacter {
    pub pres: Arc<UnitPresentation>,
    /// Rotation numbers on (pi, zeta, eta_1, ...), each in [0, 1).
    pub rotations: Vec<Rot>,
}

impl PartialEq for MultiplicativeCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.pres.field == other.pres.field
            && self.pres.level == other.pres.level
            && self.rotations == other.rotations
    }
}

impl MultiplicativeCharacter {
    pub fn new(pres: Arc<UnitPresentation>, rotations: Vec<Rot>) -> Result<Self> {
        if rotations.len() != pres.rank() {
            return Err(Error::InvalidCharacter(format!(
                "expected {} rotations, got {}",
                pres.rank(),
                rotations.len()
            )));
        }
        for (r, &o) in rotations.iter().zip(&pres.orders()) {
            if o > 0 && !(*r * o as i64).is_integer() {
                return Err(Error::InvalidCharacter(format!("rotation {r} does not respect order {o}")));
            }
        }
        Ok(MultiplicativeCharacter { pres, rotations: rotations.into_iter().map(frac).collect() })
    }

    pub fn trivial(field: &LocalField, level: u32) -> Result<Self> {
        let pres = presentation(field, level)?;
        let n = pres.rank();
        Self::new(pres, vec![Rot::from_integer(0); n])
    }

    /// The character with the given rotation on each presentation generator.
    pub fn from_fn(pres: Arc<UnitPresentation>, f: impl Fn(&LocalElement) -> Result<Rot>) -> Result<Self> {
        let rots = pres.generators().iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(pres, rots)
    }

    pub fn field(&self) -> &LocalField {
        &self.pres.field
    }

    pub fn level(&self) -> u32 {
        self.pres.level
    }

    pub fn rotation_of_log(&self, ex: &[i128]) -> Rot {
        let mut acc = Rot::from_integer(0);
        for (e, r) in ex.iter().zip(&self.rotations) {
            let o = *r.denom() as i128;
            acc += *r * Rot::from_integer(e.rem_euclid(o.max(1)) as i64);
        }
        frac(acc)
    }

    /// chi(x) as a rotation number.
    pub fn rotation_of(&self, x: &LocalElement) -> Result<Rot> {
        Ok(self.rotation_of_log(&self.pres.discrete_log(x)?))
    }

    pub fn value(&self, x: &LocalElement) -> Result<Complex64> {
        Ok(rot_value(self.rotation_of(x)?))
    }

    pub fn is_trivial(&self) -> bool {
        self.rotations.iter().all(|r| *r.numer() == 0)
    }

    /// The same character presented at another level; lowering requires the
    /// conductor to fit.
    pub fn at_level(&self, level: u32) -> Result<Self> {
        if level == self.level() {
            return Ok(self.clone());
        }
        if level < self.level() && self.conductor()? > level {
            return Err(Error::LevelMismatch);
        }
        let pres = presentation(self.field(), level)?;
        Self::from_fn(pres, |g| self.rotation_of(g))
    }

    /// Least a with chi trivial on 1 + pi^a.
    pub fn conductor(&self) -> Result<u32> {
        for a in 0..self.level() {
            let gens = self.pres.filtration_generators(a)?;
            let mut trivial = true;
            for g in &gens {
                if *self.rotation_of(g)?.numer() != 0 {
                    trivial = false;
                    break;
                }
            }
            if trivial {
                return Ok(a);
            }
        }
        Ok(self.level())
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let k = self.level().max(other.level());
        Ok((self.at_level(k)?, other.at_level(k)?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let rots = a.rotations.iter().zip(&b.rotations).map(|(x, y)| x + y).collect();
        Self::new(a.pres.clone(), rots)
    }

    pub fn pow(&self, n: i64) -> Self {
        let rots = self.rotations.iter().map(|r| frac(*r * n)).collect();
        MultiplicativeCharacter { pres: self.pres.clone(), rotations: rots }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// chi(conj x) chi(x) = 1 on every generator.
    pub fn is_conjugate_dual(&self, conj: impl Fn(&LocalElement) -> Result<LocalElement>) -> Result<bool> {
        for g in self.pres.generators() {
            let s = self.rotation_of(&g)? + self.rotation_of(&conj(&g)?)?;
            if *frac(s).numer() != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to a subfield through an embedding.
    pub fn restrict(&self, emb: &SubfieldEmbedding) -> Result<Self> {
        if emb.host != *self.field() {
            return Err(Error::FieldMismatch);
        }
        let level = self.level().div_ceil(emb.ramification()).max(1);
        let pres = presentation(&emb.sub, level)?;
        Self::from_fn(pres, |g| self.rotation_of(&emb.push(g)))
    }

    pub fn to_json(&self) -> CharacterJson {
        let names = generator_names(&self.pres);
        CharacterJson {
            domain_field: self.field().descriptor(),
            level: self.level(),
            images: names
                .into_iter()
                .zip(&self.rotations)
                .map(|(generator, r)| ImageJson { generator, rotation: r.to_string() })
                .collect(),
        }
    }
}

/// Names of the presentation generators: pi, zeta, eta1, eta2, ...
pub fn generator_names(pres: &UnitPresentation) -> Vec<String> {
    let mut v = vec!["pi".to_string(), "zeta".to_string()];
    v.extend((1..=pres.etas.len()).map(|i| format!("eta{i}")));
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageJson {
    pub generator: String,
    pub rotation: String,
}

/// {domain_field, level, images: [{generator, rotation: "a/b"}]}; missing
/// generators have rotation 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterJson {
    pub domain_field: FieldDescriptor,
    pub level: u32,
    pub images: Vec<ImageJson>,
}

pub fn parse_rotation(s: &str) -> Result<Rot> {
    let bad = || Error::InvalidCharacter(format!("not a rotation number: {s:?}"));
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Rot::new(a, b)
        }
        None => Rot::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(frac(r))
}

impl CharacterJson {
    /// Builds the character on `field`, which must match the descriptor.
    pub fn build(&self, field: &LocalField) -> Result<MultiplicativeCharacter> {
        if self.domain_field.build()? != *field {
            return Err(Error::FieldMismatch);
        }
        let pres = presentation(field, self.level)?;
        let names = generator_names(&pres);
        let mut rots = vec![Rot::from_integer(0); names.len()];
        for img in &self.images {
            let i = names
                .iter()
                .position(|n| *n == img.generator)
                .ok_or_else(|| Error::InvalidCharacter(format!("unknown generator {:?}", img.generator)))?;
            rots[i] = parse_rotation(&img.rotation)?;
        }
        MultiplicativeCharacter::new(pres, rots)
    }
}

/// A constraint chi(element) = rotation.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub element: LocalElement,
    pub rotation: Rot,
}

/// All characters at the presentation's level satisfying the constraints.
/// The rotation on pi is solved from constraints that involve pi; when none
/// does, every value in `free_pi` is used.
pub fn enumerate_characters(
    pres: &Arc<UnitPresentation>,
    constraints: &[Constraint],
    free_pi: &[Rot],
) -> Result<Vec<MultiplicativeCharacter>> {
    let logs: Vec<(Vec<i128>, Rot)> = constraints
        .iter()
        .map(|c| Ok((pres.discrete_log(&c.element)?, c.rotation)))
        .collect::<Result<_>>()?;
    let orders = pres.orders();
    let torsion = &orders[1..];
    let mut out = Vec::new();
    let mut idx = vec![0i64; torsion.len()];
    loop {
        let tors: Vec<Rot> = idx.iter().zip(torsion).map(|(&i, &o)| Rot::new(i, o as i64)).collect();
        let partial = |ex: &[i128]| -> Rot {
            let mut acc = Rot::from_integer(0);
            for (e, r) in ex[1..].iter().zip(&tors) {
                acc += *r * Rot::from_integer(e.rem_euclid(*r.denom() as i128) as i64);
            }
            acc
        };
        let candidates: Vec<Rot> = match logs.iter().find(|(ex, _)| ex[0] != 0) {
            Some((ex, target)) => {
                let v = ex[0] as i64;
                let rhs = frac(*target - partial(ex));
                (0..v).map(|k| frac((rhs + k) / v)).collect()
            }
            None => free_pi.to_vec(),
        };
        for r0 in candidates {
            let ok = logs.iter().all(|(ex, target)| {
                let total = partial(ex) + r0 * Rot::from_integer(ex[0] as i64);
                *frac(total - *target).numer() == 0
            });
            if ok {
                let mut rots = vec![r0];
                rots.extend(tors.iter().copied());
                out.push(MultiplicativeCharacter::new(pres.clone(), rots)?);
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < torsion[k] as i64 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// gcd helper for rotation denominators.
pub fn lcm_denominators(rots: &[Rot]) -> i64 {
    rots.iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::qp;

    #[test]
    fn legendre_character_has_conductor_one() {
        let q5 = qp(5, 6).unwrap();
        let pres = presentation(&q5, 3).unwrap();
        let chi = MultiplicativeCharacter::new(
            pres.clone(),
            vec![Rot::from_integer(0), Rot::new(1, 2), Rot::from_integer(0)],
        )
        .unwrap();
        assert_eq!(chi.conductor().unwrap(), 1);
        for a in 1..25 {
            if a % 5 == 0 {
                continue;
            }
            let leg = crate::padic::arith::legendre(a, 5);
            let r = chi.rotation_of(&LocalElement::from_int(&q5, a)).unwrap();
            assert_eq!(r == Rot::new(1, 2), leg == -1);
        }
        let unr = MultiplicativeCharacter::new(pres, vec![Rot::new(1, 3), Rot::from_integer(0), Rot::from_integer(0)])
            .unwrap();
        assert_eq!(unr.conductor().unwrap(), 0);
    }

    #[test]
    fn level_changes_preserve_values() {
        let q7 = qp(7, 8).unwrap();
        let pres = presentation(&q7, 2).unwrap();
        let chi = MultiplicativeCharacter::new(pres, vec![Rot::new(1, 5), Rot::new(1, 3), Rot::new(2, 7)]).unwrap();
        let up = chi.at_level(4).unwrap();
        for a in [2, 3, 10, 48, 99, 7 * 3] {
            let x = LocalElement::from_int(&q7, a);
            assert_eq!(chi.rotation_of(&x).unwrap(), up.rotation_of(&x).unwrap());
        }
        assert_eq!(up.conductor().unwrap(), 2);
        assert_eq!(up.at_level(2).unwrap(), chi);
    }

    #[test]
    fn enumeration_counts() {
        let q5 = qp(5, 6).unwrap();
        let pres = presentation(&q5, 2).unwrap();
        let all = enumerate_characters(&pres, &[], &[Rot::from_integer(0)]).unwrap();
        assert_eq!(all.len() as i128, pres.group_order());
        let c = Constraint { element: LocalElement::from_int(&q5, 5), rotation: Rot::new(1, 2) };
        let with_pi = enumerate_characters(&pres, &[c], &[]).unwrap();
        assert_eq!(with_pi.len(), all.len());
        assert!(with_pi.iter().all(|x| x.rotations[0] == Rot::new(1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let q5 = qp(5, 6).unwrap();
        let chi = MultiplicativeCharacter::new(
            presentation(&q5, 2).unwrap(),
            vec![Rot::new(1, 4), Rot::new(3, 4), Rot::new(2, 5)],
        )
        .unwrap();
        let j = chi.to_json();
        assert_eq!(j.build(&q5).unwrap(), chi);
        assert!(parse_rotation("1/0").is_err());
    }
}
