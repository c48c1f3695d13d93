//! The identity q(b) = b delta, where
//! q(b) = (j(1 + b delta) - j(1 - b delta)) / (j(1 + b delta) + j(1 - b delta) + 2)
//! and j(x) = x / conj(x).

use super::quad::{ExtensionKind, QuadraticExtension, TraceZeroDelta};
use crate::error::{Error, Result};
use crate::padic::LocalElement;

/// Value of q(b) in K, for b in Q_p given as an element of K's copy of Q_p
/// (an integer).  Split K is handled coordinatewise on K = Q_p x Q_p.
pub fn q_delta(k: &QuadraticExtension, delta: &TraceZeroDelta, b: i128) -> Result<QValue> {
    match &k.kind {
        ExtensionKind::Field { field, .. } => {
            let bd = delta.in_field(k)?.mul(&LocalElement::from_int(field, b))?;
            let one = LocalElement::one(field);
            let a = one.add(&bd)?;
            let c = one.sub(&bd)?;
            if !a.is_unit() || !c.is_unit() {
                return Err(Error::PrecisionExhausted("1 +- b delta is not a unit".into()));
            }
            let j = |x: &LocalElement| x.mul(&k.conj(x).inv()?);
            let (ja, jc) = (j(&a)?, j(&c)?);
            let num = ja.sub(&jc)?;
            let den = ja.add(&jc)?.add(&LocalElement::from_int(field, 2))?;
            if !den.is_unit() {
                return Err(Error::PrecisionExhausted("denominator is not a unit".into()));
            }
            Ok(QValue::Field(num.mul(&den.inv()?)?))
        }
        ExtensionKind::Split { .. } => {
            let (d1, d2) = delta.in_split(k)?;
            let base = &d1.field;
            let bb = LocalElement::from_int(base, b);
            let (x1, x2) = (d1.mul(&bb)?, d2.mul(&bb)?);
            let one = LocalElement::one(base);
            let a = (one.add(&x1)?, one.add(&x2)?);
            let c = (one.sub(&x1)?, one.sub(&x2)?);
            for t in [&a.0, &a.1, &c.0, &c.1] {
                if !t.is_unit() {
                    return Err(Error::PrecisionExhausted("1 +- b delta is not a unit".into()));
                }
            }
            // conj swaps the coordinates
            let j = |x: &(LocalElement, LocalElement)| -> Result<(LocalElement, LocalElement)> {
                Ok((x.0.mul(&x.1.inv()?)?, x.1.mul(&x.0.inv()?)?))
            };
            let (ja, jc) = (j(&a)?, j(&c)?);
            let two = LocalElement::from_int(base, 2);
            let mut out = Vec::new();
            for (p, q) in [(&ja.0, &jc.0), (&ja.1, &jc.1)] {
                let den = p.add(q)?.add(&two)?;
                if !den.is_unit() {
                    return Err(Error::PrecisionExhausted("denominator is not a unit".into()));
                }
                out.push(p.sub(q)?.mul(&den.inv()?)?);
            }
            let second = out.pop().unwrap();
            Ok(QValue::Split(out.pop().unwrap(), second))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QValue {
    Field(LocalElement),
    Split(LocalElement, LocalElement),
}

/// b delta in the same representation as `q_delta`.
pub fn b_delta(k: &QuadraticExtension, delta: &TraceZeroDelta, b: i128) -> Result<QValue> {
    match &k.kind {
        ExtensionKind::Field { field, .. } => {
            Ok(QValue::Field(delta.in_field(k)?.mul(&LocalElement::from_int(field, b))?))
        }
        ExtensionKind::Split { .. } => {
            let (d1, d2) = delta.in_split(k)?;
            let bb = LocalElement::from_int(&d1.field, b);
            Ok(QValue::Split(d1.mul(&bb)?, d2.mul(&bb)?))
        }
    }
}

/// Evaluates q(b) and checks it against b delta.
pub fn q_delta_selftest(k: &QuadraticExtension, delta: &TraceZeroDelta, b: i128) -> Result<QValue> {
    let q = q_delta(k, delta, b)?;
    if q != b_delta(k, delta, b)? {
        return Err(Error::PrecisionExhausted("q(b) differs from b delta".into()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        let k = QuadraticExtension::new(5, 2, 6).unwrap();
        let q = q_delta_selftest(&k, &TraceZeroDelta { t: 1 }, 0).unwrap();
        let QValue::Field(x) = q else { panic!() };
        assert!(x.is_zero());
    }

    #[test]
    fn identity_in_each_shape() {
        for (p, d) in [(5, 2), (5, 5), (7, -7), (5, -1)] {
            let k = QuadraticExtension::new(p, d, 6).unwrap();
            for b in [1, 3, 7, 25, 126] {
                // 1 - b^2 delta^2 must be a unit
                if (b * b * 9 * d - 1) % p == 0 {
                    continue;
                }
                q_delta_selftest(&k, &TraceZeroDelta { t: 3 }, b).unwrap();
            }
        }
    }

    #[test]
    fn excluded_locus_is_an_error() {
        // d = 4 splits over Q_5, delta = (2, -2); b = 3 gives 1 + 6 = 7 a unit,
        // b with 2b = -1 mod 5^6 makes 1 + b delta vanish
        let k = QuadraticExtension::new(5, 4, 6).unwrap();
        let b = (5i128.pow(6) - 1) / 2;
        assert!(matches!(
            q_delta(&k, &TraceZeroDelta { t: 1 }, b),
            Err(Error::PrecisionExhausted(_))
        ));
    }
}
