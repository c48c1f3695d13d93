//! Square classes and Hilbert symbols in odd residue characteristic, plus the
//! closed-form rational symbols at 2 and at the real place.

use serde::{Deserialize, Serialize};

use super::arith::{rem, split_p};
use super::element::LocalElement;
use super::field::{qp, LocalField};
use crate::error::{Error, Result};

/// Label of a class in M^x / (M^x)^2 = {1, u, pi, u pi}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "pi")]
    Pi,
    #[serde(rename = "u_pi")]
    UPi,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi];

    pub fn from_bits(nonsquare_unit: bool, odd_valuation: bool) -> Self {
        match (nonsquare_unit, odd_valuation) {
            (false, false) => SquareClass::One,
            (true, false) => SquareClass::U,
            (false, true) => SquareClass::Pi,
            (true, true) => SquareClass::UPi,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            SquareClass::One => (false, false),
            SquareClass::U => (true, false),
            SquareClass::Pi => (false, true),
            SquareClass::UPi => (true, true),
        }
    }

    pub fn mul(self, other: SquareClass) -> SquareClass {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        SquareClass::from_bits(a ^ c, b ^ d)
    }

    /// The canonical representative 1, u, pi or u * pi.
    pub fn representative(self, field: &LocalField) -> LocalElement {
        let u = LocalElement::from_residue(field, &field.nonsquare);
        let pi = LocalElement::uniformizer(field);
        let one = LocalElement::one(field);
        let (nu, np) = self.bits();
        let a = if nu { u } else { one.clone() };
        let b = if np { pi } else { one };
        a.mul(&b).expect("same field")
    }
}

pub fn square_class(x: &LocalElement) -> Result<SquareClass> {
    let (v, unit) = x.unit_part()?;
    if unit.prec == 0 {
        return Err(Error::PrecisionExhausted("unit part has no known digits".into()));
    }
    let chi = x.field.residue.quadratic_character(&unit.residue());
    Ok(SquareClass::from_bits(chi == -1, v % 2 == 1))
}

pub fn is_square(x: &LocalElement) -> Result<bool> {
    Ok(square_class(x)? == SquareClass::One)
}

/// Tame symbol: the quadratic residue character of
/// (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)}.
pub fn hilbert_symbol(a: &LocalElement, b: &LocalElement) -> Result<i32> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let res = &a.field.residue;
    let (va, ua) = a.unit_part()?;
    let (vb, ub) = b.unit_part()?;
    if ua.prec == 0 || ub.prec == 0 {
        return Err(Error::PrecisionExhausted("unit part has no known digits".into()));
    }
    let ra = ua.residue();
    let rb_inv = res.inv(&ub.residue()).ok_or(Error::DivisionByNearZero)?;
    let mut t = res.mul(&res.pow(&ra, vb as u128), &res.pow(&rb_inv, va as u128));
    if (va * vb) % 2 == 1 {
        t = res.neg(&t);
    }
    Ok(res.quadratic_character(&t))
}

/// Hilbert symbol of two nonzero integers over Q_p for any prime p,
/// including the closed form at p = 2.
pub fn hilbert_symbol_rational(p: i128, a: i128, b: i128) -> Result<i32> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("Hilbert symbol of zero".into()));
    }
    if p == 2 {
        return Ok(hilbert_symbol_two(a, b));
    }
    let (va, _) = split_p(a, p);
    let (vb, _) = split_p(b, p);
    let field = qp(p, va.max(vb) + 2)?;
    hilbert_symbol(&LocalElement::from_int(&field, a), &LocalElement::from_int(&field, b))
}

/// (a, b)_2 = (-1)^{eps(u)eps(v) + alpha omega(v) + beta omega(u)} for
/// a = 2^alpha u, b = 2^beta v.
pub fn hilbert_symbol_two(a: i128, b: i128) -> i32 {
    let (alpha, u) = split_p(a, 2);
    let (beta, v) = split_p(b, 2);
    let eps = |x: i128| rem((x - 1) / 2, 2);
    let omega = |x: i128| rem((x * x - 1) / 8, 2);
    let e = eps(u) * eps(v) + alpha as i128 * omega(v) + beta as i128 * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// (a, b) over R: -1 iff both are negative.
pub fn hilbert_symbol_real(a: i128, b: i128) -> i32 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}
