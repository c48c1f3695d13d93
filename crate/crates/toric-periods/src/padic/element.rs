//! Elements of the ring of integers of a tower, with absolute precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::arith::{ceil_div, rem};
use super::field::{make_local_field, parse_int, qp, Coeffs, LocalField};
use super::residue::Res;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct LocalElement {
    pub field: LocalField,
    pub coeffs: Coeffs,
    /// Known modulo pi^prec; prec <= N.
    pub prec: u32,
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod pi^{}", self.coeffs, self.prec)
    }
}

impl PartialEq for LocalElement {
    /// Equality at the common precision of both operands.
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field {
            return false;
        }
        let prec = self.prec.min(other.prec);
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        self.field.raw_reduce(&mut a, prec);
        self.field.raw_reduce(&mut b, prec);
        a == b
    }
}

/// Which step of the tower a norm or trace descends to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subfield {
    Base,
    Unramified,
    Full,
}

impl LocalElement {
    pub fn new(field: &LocalField, mut coeffs: Coeffs, prec: u32) -> Self {
        let prec = prec.min(field.precision);
        coeffs.resize(field.degree(), 0);
        for c in coeffs.iter_mut() {
            *c = rem(*c, field.modulus);
        }
        field.raw_reduce(&mut coeffs, prec);
        LocalElement { field: field.clone(), coeffs, prec }
    }

    pub fn from_int(field: &LocalField, n: i128) -> Self {
        let mut c = vec![0i128; field.degree()];
        c[0] = n;
        Self::new(field, c, field.precision)
    }

    pub fn zero(field: &LocalField) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &LocalField) -> Self {
        Self::from_int(field, 1)
    }

    /// theta^j pi^i.
    pub fn monomial(field: &LocalField, i: usize, j: usize) -> Self {
        let mut c = vec![0i128; field.degree()];
        c[i * field.f + j] = 1;
        Self::new(field, c, field.precision)
    }

    /// The uniformizer: the root of the Eisenstein polynomial.
    pub fn uniformizer(field: &LocalField) -> Self {
        if field.e > 1 {
            Self::monomial(field, 1, 0)
        } else {
            let c: Coeffs = field.eisenstein[0].iter().map(|&x| rem(-x, field.modulus)).collect();
            Self::new(field, c, field.precision)
        }
    }

    pub fn from_residue(field: &LocalField, r: &Res) -> Self {
        Self::new(field, field.raw_from_residue(r), field.precision)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Valuation, or None (the bottom value) when indistinguishable from 0.
    pub fn valuation(&self) -> Option<u32> {
        self.field.raw_valuation(&self.coeffs, self.prec)
    }

    fn val_or_prec(&self) -> u32 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.field, self.field.raw_add(&self.coeffs, &other.coeffs), self.prec.min(other.prec)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.field, self.field.raw_sub(&self.coeffs, &other.coeffs), self.prec.min(other.prec)))
    }

    pub fn neg(&self) -> Self {
        let z = vec![0i128; self.field.degree()];
        Self::new(&self.field, self.field.raw_sub(&z, &self.coeffs), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = (self.prec + other.val_or_prec()).min(other.prec + self.val_or_prec());
        Ok(Self::new(&self.field, self.field.raw_mul(&self.coeffs, &other.coeffs), prec))
    }

    pub fn scale(&self, n: i128) -> Self {
        let (v, _) = if n == 0 { (0, 0) } else { super::arith::split_p(n, self.field.p) };
        let prec = if n == 0 { self.field.precision } else { self.prec + v * self.field.e as u32 };
        Self::new(&self.field, self.field.raw_scale(&self.coeffs, n), prec)
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).expect("same field");
            }
        }
        acc
    }

    /// Inverse of a unit, by residue inversion and Newton iteration.
    pub fn inv(&self) -> Result<Self> {
        match self.valuation() {
            None => Err(Error::DivisionByNearZero),
            Some(0) => {
                let r = self.field.residue.inv(&self.residue()).ok_or(Error::DivisionByNearZero)?;
                let mut y = Self::from_residue(&self.field, &r);
                let two = Self::from_int(&self.field, 2);
                let mut correct = 1;
                while correct < self.prec {
                    let t = two.sub(&self.mul(&y)?)?;
                    y = y.mul(&t)?;
                    y.prec = self.field.precision;
                    correct *= 2;
                }
                y.prec = self.prec;
                Ok(Self::new(&self.field, y.coeffs, self.prec))
            }
            Some(v) => Err(Error::Unsupported(format!(
                "inverse of an element of valuation {v} is not integral; use div"
            ))),
        }
    }

    /// Exact division by pi^k of an element of valuation >= k; loses k digits.
    pub fn div_pi_pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.val_or_prec() < k {
            return Err(Error::DivisionByNearZero);
        }
        let mut c = self.coeffs.clone();
        for _ in 0..k {
            c = self.field.raw_div_pi(&c);
        }
        Ok(Self::new(&self.field, c, self.prec.saturating_sub(k)))
    }

    /// (valuation, unit part) with self = pi^v * unit.
    pub fn unit_part(&self) -> Result<(u32, Self)> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::PrecisionExhausted("element is indistinguishable from 0".into()))?;
        Ok((v, self.div_pi_pow(v)?))
    }

    /// x / y for v(x) >= v(y).
    pub fn div(&self, y: &Self) -> Result<Self> {
        self.check(y)?;
        let vy = y.valuation().ok_or(Error::DivisionByNearZero)?;
        let (_, uy) = y.unit_part()?;
        let x = self.div_pi_pow(vy)?;
        x.mul(&uy.inv()?)
    }

    pub fn residue(&self) -> Res {
        self.field.raw_residue(&self.coeffs)
    }

    /// Trace to Q_p as an integer modulo p^t, t = ceil(prec / e).
    pub fn trace_qp(&self) -> (i128, u32) {
        let t = ceil_div(self.prec as i64, self.field.e as i64) as u32;
        let m = self.field.pow_p(t.min(self.field.digits));
        (rem(self.field.raw_trace(&self.coeffs), m), t)
    }

    /// Norm and trace down to a step of the tower, as elements of that step
    /// (a field at p-adic precision ceil(N / e)).
    pub fn norm_and_trace(&self, down_to: Subfield) -> Result<(LocalElement, LocalElement)> {
        let fld = &self.field;
        let digits_prec = ceil_div(self.prec as i64, fld.e as i64) as u32;
        match down_to {
            Subfield::Full => Ok((self.clone(), self.clone())),
            Subfield::Unramified => {
                let u = make_local_field(fld.p, fld.f, &[vec![-fld.p], vec![1]], fld.digits)?;
                let (n, t) = self.over_unramified();
                Ok((
                    LocalElement::new(&u, n, digits_prec.max(1)),
                    LocalElement::new(&u, t, digits_prec.max(1)),
                ))
            }
            Subfield::Base => {
                let q = qp(fld.p, fld.digits)?;
                let (nu, _) = self.over_unramified();
                let norm = unram_norm(fld, &nu);
                let tr = fld.raw_trace(&self.coeffs);
                Ok((
                    LocalElement::new(&q, vec![norm], digits_prec.max(1)),
                    LocalElement::new(&q, vec![tr], digits_prec.max(1)),
                ))
            }
        }
    }

    /// Norm and trace from the full field to the unramified step, as
    /// unramified coefficient vectors.
    fn over_unramified(&self) -> (Vec<i128>, Vec<i128>) {
        let fld = &self.field;
        let (e, f) = (fld.e, fld.f);
        // Column k of the matrix is x * pi^k written in the basis pi^i.
        let cols: Vec<Coeffs> = (0..e)
            .map(|k| {
                let mut m = vec![0i128; e * f];
                m[k * f] = 1;
                fld.raw_mul(&self.coeffs, &m)
            })
            .collect();
        let entry = |i: usize, k: usize| cols[k][i * f..(i + 1) * f].to_vec();
        let mut tr = vec![0i128; f];
        for i in 0..e {
            tr = tr.iter().zip(entry(i, i)).map(|(a, b)| (a + b) % fld.modulus).collect();
        }
        let mut one = vec![0i128; f];
        one[0] = 1;
        let n = determinant(
            e,
            &entry,
            one,
            &|a, b| a.iter().zip(b).map(|(x, y)| (x + y) % fld.modulus).collect(),
            &|a, b| fld.unram_mul(a, b),
            &|a| a.iter().map(|x| rem(-x, fld.modulus)).collect(),
        );
        (n, tr)
    }

    pub fn to_json(&self, field_id: &str) -> ElementJson {
        ElementJson {
            field_id: field_id.to_string(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// Norm from the unramified step to Q_p.
fn unram_norm(fld: &LocalField, a: &[i128]) -> i128 {
    let f = fld.f;
    let cols: Vec<Vec<i128>> = (0..f)
        .map(|k| {
            let mut m = vec![0i128; f];
            m[k] = 1;
            fld.unram_mul(a, &m)
        })
        .collect();
    let entry = |i: usize, k: usize| cols[k][i];
    determinant(
        f,
        &entry,
        1i128,
        &|a: &i128, b: &i128| (a + b) % fld.modulus,
        &|a: &i128, b: &i128| a * b % fld.modulus,
        &|a: &i128| rem(-a, fld.modulus),
    )
}

/// Determinant over a commutative ring by Laplace expansion memoised on the
/// set of used columns.
pub fn determinant<T: Clone>(
    n: usize,
    entry: &dyn Fn(usize, usize) -> T,
    one: T,
    add: &dyn Fn(&T, &T) -> T,
    mul: &dyn Fn(&T, &T) -> T,
    neg: &dyn Fn(&T) -> T,
) -> T {
    let full = (1usize << n) - 1;
    let mut memo: Vec<Option<T>> = vec![None; 1 << n];
    memo[full] = Some(one);
    // memo[used] = det of rows popcount(used).. over the unused columns.
    for used in (0..full).rev() {
        let r = (used as u32).count_ones() as usize;
        let mut acc: Option<T> = None;
        let mut sign_pos = true;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            if let Some(sub) = &memo[used | (1 << c)] {
                let mut term = mul(&entry(r, c), sub);
                if !sign_pos {
                    term = neg(&term);
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => add(&a, &term),
                });
            }
            sign_pos = !sign_pos;
        }
        memo[used] = acc;
    }
    memo[0].clone().expect("non-empty matrix")
}

/// JSON form of an element: {field_id, coeffs}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub field_id: String,
    pub coeffs: Vec<String>,
}

impl ElementJson {
    pub fn build(&self, field: &LocalField) -> Result<LocalElement> {
        if self.coeffs.len() > field.degree() {
            return Err(Error::InvalidInput(format!(
                "element has {} coefficients, field degree is {}",
                self.coeffs.len(),
                field.degree()
            )));
        }
        let c = self.coeffs.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>>>()?;
        Ok(LocalElement::new(field, c, field.precision))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::field::make_local_field;

    #[test]
    fn inverse_of_two_in_q5() {
        let k = qp(5, 4).unwrap();
        let inv = LocalElement::from_int(&k, 2).inv().unwrap();
        assert_eq!(inv.coeffs[0], 313);
    }

    #[test]
    fn uniformizer_valuation() {
        let k = make_local_field(5, 1, &[vec![-5], vec![0], vec![1]], 6).unwrap();
        let pi = LocalElement::uniformizer(&k);
        let u = LocalElement::from_int(&k, 3);
        assert_eq!(pi.mul(&u).unwrap().valuation(), Some(1));
        assert_eq!(LocalElement::from_int(&k, 5).valuation(), Some(2));
        assert_eq!(pi.mul(&pi).unwrap(), LocalElement::from_int(&k, 5));
    }

    #[test]
    fn norms_and_traces() {
        let k = make_local_field(3, 2, &[vec![-3], vec![1]], 6).unwrap();
        let (n, t) = LocalElement::from_int(&k, 3).norm_and_trace(Subfield::Base).unwrap();
        assert_eq!(n.coeffs[0], 9);
        assert_eq!(t.coeffs[0], 6);
        let r = make_local_field(5, 1, &[vec![-10], vec![0], vec![1]], 6).unwrap();
        let pi = LocalElement::uniformizer(&r);
        let (n, t) = pi.norm_and_trace(Subfield::Base).unwrap();
        assert_eq!(n.coeffs[0], rem(-10, 125));
        assert_eq!(t.coeffs[0], 0);
    }

    #[test]
    fn division_by_uniformizer_powers() {
        let k = make_local_field(7, 2, &[vec![-7], vec![0], vec![1]], 8).unwrap();
        let pi = LocalElement::uniformizer(&k);
        let x = LocalElement::new(&k, vec![3, 1, 2, 5], 8);
        let y = x.mul(&pi.pow(3)).unwrap();
        let back = y.div_pi_pow(3).unwrap();
        assert_eq!(back, x);
        assert_eq!(back.prec, 5);
    }
}
