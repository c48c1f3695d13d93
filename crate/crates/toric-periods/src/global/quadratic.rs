//! K = Q(sqrt d) for the imaginary quadratic fields of class number one:
//! integers a + b w with w = (1 + sqrt d) / 2, places and their
//! decomposition in K.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::arith::{is_prime, legendre, rem};

/// The d with d = 1 mod 4 and K = Q(sqrt d) imaginary of class number one.
pub const CLASS_NUMBER_ONE: [i128; 7] = [-3, -7, -11, -19, -43, -67, -163];

pub fn validate_d(d: i128) -> Result<()> {
    if CLASS_NUMBER_ONE.contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("d = {d} is not one of {CLASS_NUMBER_ONE:?}")))
    }
}

/// a + b w in O_K, w = (1 + sqrt d) / 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OkElement {
    pub a: i128,
    pub b: i128,
}

impl OkElement {
    pub const ONE: OkElement = OkElement { a: 1, b: 0 };

    pub fn int(n: i128) -> Self {
        OkElement { a: n, b: 0 }
    }

    /// sqrt d = -1 + 2 w.
    pub fn sqrt_d() -> Self {
        OkElement { a: -1, b: 2 }
    }

    pub fn mul(self, o: Self, d: i128) -> Self {
        let c = (d - 1) / 4;
        OkElement { a: self.a * o.a + self.b * o.b * c, b: self.a * o.b + self.b * o.a + self.b * o.b }
    }

    pub fn conj(self) -> Self {
        OkElement { a: self.a + self.b, b: -self.b }
    }

    pub fn norm(self, d: i128) -> i128 {
        self.a * self.a + self.a * self.b + self.b * self.b * (1 - d) / 4
    }

    /// Image under the embedding with sqrt d = i sqrt|d|.
    pub fn to_complex(self, d: i128) -> Complex64 {
        let s = ((-d) as f64).sqrt();
        Complex64::new(self.a as f64 + self.b as f64 / 2.0, self.b as f64 * s / 2.0)
    }

    /// (x, y) with self = x + y sqrt d, both halved: returns (2x, 2y).
    pub fn doubled_coordinates(self) -> (i128, i128) {
        (2 * self.a + self.b, self.b)
    }

    /// Element from x + y sqrt d given as 2x, 2y of equal parity.
    pub fn from_doubled(x2: i128, y2: i128) -> Self {
        OkElement { a: (x2 - y2) / 2, b: y2 }
    }

    pub fn reduce(self, m: i128) -> Self {
        OkElement { a: rem(self.a, m), b: rem(self.b, m) }
    }
}

/// Generator of the unit group modulo nothing: -1, or w when d = -3.
pub fn unit_generator(d: i128) -> (OkElement, num_rational::Ratio<i64>) {
    if d == -3 {
        (OkElement { a: 0, b: 1 }, num_rational::Ratio::new(1, 6))
    } else {
        (OkElement::int(-1), num_rational::Ratio::new(1, 2))
    }
}

/// An element of norm p with first coordinate of its p-adic image divisible
/// by p under sqrt d -> s; `s` is a square root of d modulo p.
pub fn prime_element(p: i128, d: i128, s: i128) -> Result<OkElement> {
    let bound = 2 * ((4 * p / -d) as f64).sqrt() as i128 + 2;
    for b in 0..=bound {
        for sign in [1i128, -1] {
            let b = sign * b;
            for a in -2 * p..=2 * p {
                let x = OkElement { a, b };
                if x.norm(d) != p {
                    continue;
                }
                // a + b (1 + s) / 2 = 0 mod p
                let (x2, y2) = x.doubled_coordinates();
                if rem(x2 + y2 * s, p) == 0 {
                    return Ok(x);
                }
            }
        }
    }
    Err(Error::InvalidInput(format!("{p} is not a norm from O_K")))
}

/// A place of Q: a prime or the real place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "\u{221e}" => Ok(Place::Infinite),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::InvalidInput(format!("not a place: {s:?}")))?;
                if !is_prime(p) {
                    return Err(Error::NotPrime(p as i128));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

impl From<Place> for String {
    fn from(p: Place) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Place {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposition {
    Split,
    Inert,
    Ramified,
    /// C over R.
    Complex,
}

/// Behaviour of a place of Q in K = Q(sqrt d), d < 0 and d = 1 mod 4.
pub fn place_decomposition(place: Place, d: i128) -> Decomposition {
    match place {
        Place::Infinite => Decomposition::Complex,
        Place::Finite(2) => {
            if rem(d, 8) == 1 {
                Decomposition::Split
            } else {
                Decomposition::Inert
            }
        }
        Place::Finite(p) => match legendre(d, p as i128) {
            0 => Decomposition::Ramified,
            1 => Decomposition::Split,
            _ => Decomposition::Inert,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_of_minus_seven() {
        assert_eq!(place_decomposition(Place::Finite(2), -7), Decomposition::Split);
        assert_eq!(place_decomposition(Place::Finite(7), -7), Decomposition::Ramified);
        assert_eq!(place_decomposition(Place::Finite(3), -7), Decomposition::Inert);
        assert_eq!(place_decomposition(Place::Finite(11), -7), Decomposition::Split);
        assert_eq!(place_decomposition(Place::Infinite, -7), Decomposition::Complex);
        assert_eq!(place_decomposition(Place::Finite(2), -3), Decomposition::Inert);
    }

    #[test]
    fn arithmetic_matches_complex_embedding() {
        let d = -19;
        let x = OkElement { a: 3, b: -2 };
        let y = OkElement { a: -1, b: 5 };
        let z = x.mul(y, d).to_complex(d);
        let w = x.to_complex(d) * y.to_complex(d);
        assert!((z - w).norm() < 1e-9);
        assert_eq!(x.norm(d) as f64, x.to_complex(d).norm_sqr().round());
        assert_eq!(OkElement::sqrt_d().mul(OkElement::sqrt_d(), d), OkElement::int(d));
        assert_eq!(x.mul(x.conj(), d), OkElement::int(x.norm(d)));
    }

    #[test]
    fn split_primes_have_prime_elements() {
        let x = prime_element(11, -7, 2).unwrap();
        assert_eq!(x.norm(-7), 11);
        let (x2, y2) = x.doubled_coordinates();
        assert_eq!(rem(x2 + 2 * y2, 11), 0);
    }

    #[test]
    fn places_round_trip() {
        for s in ["7", "inf"] {
            let p: Place = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("9".parse::<Place>().is_err());
        assert!(Place::Finite(163) < Place::Infinite);
    }
}
