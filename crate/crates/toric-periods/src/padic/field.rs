//! Two-step towers over Q_p: an unramified step of degree f followed by an
//! Eisenstein step of degree e.  Elements of the ring of integers are stored
//! in the basis theta^j pi^i (i < e, j < f) with coefficients modulo p^M,
//! M = ceil(N / e).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::arith::{ceil_div, is_prime, rem, smallest_nonresidue};
use super::residue::{is_irreducible, Res, ResidueField};
use crate::error::{Error, Result};

pub type Coeffs = Vec<i128>;

#[derive(Debug)]
pub struct FieldData {
    pub p: i128,
    pub f: usize,
    pub e: usize,
    /// Precision N in powers of the uniformizer.
    pub precision: u32,
    /// p-adic digits carried by each coefficient.
    pub digits: u32,
    pub modulus: i128,
    /// Monic modulus of the unramified step, low degree first.
    pub unram: Vec<i128>,
    /// Monic Eisenstein polynomial, low degree first; each coefficient is an
    /// element of the unramified subfield given by f integers.
    pub eisenstein: Vec<Vec<i128>>,
    pub residue: ResidueField,
    /// Canonical non-square of the residue field: the first in index order,
    /// which for f = 1 is the smallest positive non-residue.
    pub nonsquare: Res,
    p_over_pi: Coeffs,
    basis_traces: Vec<i128>,
}

#[derive(Clone)]
pub struct LocalField(pub(crate) Arc<FieldData>);

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.unram == other.0.unram
                && self.0.eisenstein == other.0.eisenstein
                && self.0.precision == other.0.precision)
    }
}
impl Eq for LocalField {}

impl fmt::Debug for LocalField {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "LocalField(p={}, f={}, e={}, N={}, eis={:?})",
            self.0.p, self.0.f, self.0.e, self.0.precision, self.0.eisenstein
        )
    }
}

impl std::ops::Deref for LocalField {
    type Target = FieldData;
    fn deref(&self) -> &FieldData {
        &self.0
    }
}

/// The unramified modulus used for degree f: x for f = 1, x^2 - u for f = 2
/// (u the smallest non-residue), otherwise the first irreducible polynomial in
/// index order.
pub fn unramified_modulus(p: i128, f: usize) -> Vec<i128> {
    match f {
        1 => vec![0, 1],
        2 => vec![-smallest_nonresidue(p), 0, 1],
        _ => {
            let count = p.pow(f as u32);
            for idx in 0..count {
                let mut g = vec![0i128; f + 1];
                let mut t = idx;
                for c in g.iter_mut().take(f) {
                    *c = t % p;
                    t /= p;
                }
                g[f] = 1;
                if g[0] != 0 && is_irreducible(&g, p) {
                    return g;
                }
            }
            unreachable!("irreducible polynomials exist in every degree")
        }
    }
}

/// Builds and validates a local field.  `eisenstein` lists the coefficients,
/// low degree first, each an element of the unramified subfield (a plain
/// integer is a one-entry vector).
pub fn make_local_field(
    p: i128,
    f: usize,
    eisenstein: &[Vec<i128>],
    precision: u32,
) -> Result<LocalField> {
    if p == 2 {
        return Err(Error::PrimeTwoUnsupported);
    }
    if p < 2 || !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::InvalidInput("unramified degree must be positive".into()));
    }
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    if eisenstein.len() < 2 {
        return Err(Error::NotEisenstein("degree must be at least 1".into()));
    }
    let e = eisenstein.len() - 1;
    let mut eis: Vec<Vec<i128>> = Vec::with_capacity(e + 1);
    for c in eisenstein {
        if c.len() > f {
            return Err(Error::NotEisenstein(format!(
                "coefficient {c:?} has more than f = {f} entries"
            )));
        }
        let mut v = c.clone();
        v.resize(f, 0);
        eis.push(v);
    }
    let mut one = vec![0i128; f];
    one[0] = 1;
    if eis[e] != one {
        return Err(Error::NotEisenstein("polynomial must be monic".into()));
    }
    for c in &eis[..e] {
        if c.iter().any(|x| x % p != 0) {
            return Err(Error::NotEisenstein(format!("coefficient {c:?} is not divisible by p")));
        }
    }
    let w0: Vec<i128> = eis[0].iter().map(|x| x / p).collect();
    if w0.iter().all(|x| x % p == 0) {
        return Err(Error::NotEisenstein("constant term is divisible by p^2".into()));
    }
    let digits = ceil_div(precision as i64, e as i64) as u32;
    let mut modulus: i128 = 1;
    for _ in 0..digits {
        modulus = modulus.checked_mul(p).ok_or(Error::PrecisionTooLarge)?;
    }
    if modulus >= (1i128 << 62) {
        return Err(Error::PrecisionTooLarge);
    }
    let unram = unramified_modulus(p, f);
    let residue = ResidueField::new(p, unram.clone());
    let nonsquare = residue.nonsquare();
    let mut data = FieldData {
        p,
        f,
        e,
        precision,
        digits,
        modulus,
        unram,
        eisenstein: eis.iter().map(|c| c.iter().map(|&x| rem(x, modulus)).collect()).collect(),
        residue,
        nonsquare,
        p_over_pi: Vec::new(),
        basis_traces: Vec::new(),
    };
    // p / pi = -w0^{-1} (pi^{e-1} + h_{e-1} pi^{e-2} + ... + h_1) / p * p, with h_i = p * (h_i / p).
    let w0_red: Vec<i128> = w0.iter().map(|&x| rem(x, modulus)).collect();
    let w0_inv = data.unram_inv(&w0_red).expect("w0 is a unit");
    let mut bracket = vec![0i128; e * f];
    bracket[(e - 1) * f] = 1;
    for i in 1..e {
        for j in 0..f {
            bracket[(i - 1) * f + j] = rem(bracket[(i - 1) * f + j] + eis[i][j], modulus);
        }
    }
    let mut scale = vec![0i128; e * f];
    for j in 0..f {
        scale[j] = rem(-w0_inv[j], modulus);
    }
    data.p_over_pi = data.raw_mul(&scale, &bracket);
    data.basis_traces = (0..e * f)
        .map(|b| {
            let mut mono = vec![0i128; e * f];
            mono[b] = 1;
            let mut t = 0i128;
            for k in 0..e * f {
                let mut basis = vec![0i128; e * f];
                basis[k] = 1;
                t += data.raw_mul(&mono, &basis)[k];
            }
            rem(t, modulus)
        })
        .collect();
    Ok(LocalField(Arc::new(data)))
}

/// Q_p at precision N.
pub fn qp(p: i128, precision: u32) -> Result<LocalField> {
    make_local_field(p, 1, &[vec![-p], vec![1]], precision)
}

impl FieldData {
    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    pub fn residue_size(&self) -> i128 {
        self.residue.size()
    }

    pub fn unram_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let f = self.f;
        let m = self.modulus;
        if f == 1 {
            return vec![a[0] * b[0] % m];
        }
        let mut prod = vec![0i128; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % m;
            }
        }
        for d in (f..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                for k in 0..f {
                    prod[d - f + k] = rem(prod[d - f + k] - c * self.unram[k], m);
                }
            }
        }
        prod.truncate(f);
        prod
    }

    /// Inverse of a unit of the unramified ring modulo p^M.
    pub fn unram_inv(&self, a: &[i128]) -> Option<Vec<i128>> {
        let r: Res = a.iter().map(|&x| rem(x, self.p)).collect();
        let r_inv = self.residue.inv(&r)?;
        let mut y: Vec<i128> = r_inv;
        // Newton: y <- y (2 - a y); doubles the number of correct digits.
        let mut correct = 1;
        while correct < self.digits {
            let ay = self.unram_mul(a, &y);
            let mut two_minus = ay.iter().map(|&x| rem(-x, self.modulus)).collect::<Vec<_>>();
            two_minus[0] = rem(two_minus[0] + 2, self.modulus);
            y = self.unram_mul(&y, &two_minus);
            correct *= 2;
        }
        Some(y)
    }

    pub fn raw_add(&self, a: &[i128], b: &[i128]) -> Coeffs {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    pub fn raw_sub(&self, a: &[i128], b: &[i128]) -> Coeffs {
        a.iter().zip(b).map(|(x, y)| rem(x - y, self.modulus)).collect()
    }

    pub fn raw_scale(&self, a: &[i128], s: i128) -> Coeffs {
        let s = rem(s, self.modulus);
        a.iter().map(|x| x * s % self.modulus).collect()
    }

    pub fn raw_mul(&self, a: &[i128], b: &[i128]) -> Coeffs {
        let (e, f) = (self.e, self.f);
        if e == 1 {
            return self.unram_mul(a, b);
        }
        let mut prod: Vec<Vec<i128>> = vec![vec![0; f]; 2 * e - 1];
        for i in 0..e {
            let ai = &a[i * f..(i + 1) * f];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for k in 0..e {
                let bk = &b[k * f..(k + 1) * f];
                if bk.iter().all(|&x| x == 0) {
                    continue;
                }
                let t = self.unram_mul(ai, bk);
                for j in 0..f {
                    prod[i + k][j] = (prod[i + k][j] + t[j]) % self.modulus;
                }
            }
        }
        for t in (e..2 * e - 1).rev() {
            let top = std::mem::take(&mut prod[t]);
            if top.iter().all(|&x| x == 0) {
                continue;
            }
            for i in 0..e {
                let s = self.unram_mul(&top, &self.eisenstein[i]);
                let slot = &mut prod[t - e + i];
                for j in 0..f {
                    slot[j] = rem(slot[j] - s[j], self.modulus);
                }
            }
        }
        prod.truncate(e);
        prod.into_iter().flatten().collect()
    }

    /// Canonical reduction modulo pi^prec.
    pub fn raw_reduce(&self, a: &mut [i128], prec: u32) {
        let (e, f) = (self.e as i64, self.f);
        for i in 0..self.e {
            let need = ceil_div(prec as i64 - i as i64, e).max(0) as u32;
            let m = self.p.pow(need.min(self.digits));
            for j in 0..f {
                a[i * f + j] = rem(a[i * f + j], m);
            }
        }
    }

    /// Valuation in powers of pi, or None when the element vanishes mod pi^prec.
    pub fn raw_valuation(&self, a: &[i128], prec: u32) -> Option<u32> {
        let mut best: Option<u32> = None;
        for i in 0..self.e {
            for j in 0..self.f {
                let c = a[i * self.f + j];
                if c == 0 {
                    continue;
                }
                let (v, _) = super::arith::split_p(c, self.p);
                let val = self.e as u32 * v + i as u32;
                best = Some(best.map_or(val, |b: u32| b.min(val)));
            }
        }
        best.filter(|&v| v < prec)
    }

    /// Exact division by pi of an element of positive valuation.
    pub fn raw_div_pi(&self, a: &[i128]) -> Coeffs {
        let (e, f) = (self.e, self.f);
        let mut out = vec![0i128; e * f];
        for i in 1..e {
            for j in 0..f {
                out[(i - 1) * f + j] = a[i * f + j];
            }
        }
        let mut c0 = vec![0i128; e * f];
        for j in 0..f {
            debug_assert!(a[j] % self.p == 0);
            c0[j] = a[j] / self.p;
        }
        let extra = self.raw_mul(&c0, &self.p_over_pi);
        self.raw_add(&out, &extra)
    }

    /// Trace to Q_p modulo p^M.
    pub fn raw_trace(&self, a: &[i128]) -> i128 {
        let mut t = 0i128;
        for (c, tr) in a.iter().zip(&self.basis_traces) {
            t = (t + c * tr) % self.modulus;
        }
        t
    }

    pub fn basis_trace(&self, index: usize) -> i128 {
        self.basis_traces[index]
    }

    /// Residue of a coefficient vector in F_q (the pi^0 coefficient mod p).
    pub fn raw_residue(&self, a: &[i128]) -> Res {
        a[..self.f].iter().map(|&x| rem(x, self.p)).collect()
    }

    pub fn raw_from_residue(&self, r: &Res) -> Coeffs {
        let mut v = vec![0i128; self.degree()];
        v[..self.f].copy_from_slice(r);
        v
    }

    pub fn pow_p(&self, k: u32) -> i128 {
        self.p.pow(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Integer(String),
    Unramified(Vec<String>),
}

/// JSON form {p, f, eisenstein, precision}; integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescriptor {
    pub p: String,
    pub f: String,
    pub eisenstein: Vec<CoeffJson>,
    pub precision: String,
}

pub fn parse_int(s: &str) -> Result<i128> {
    s.trim()
        .parse::<i128>()
        .map_err(|_| Error::InvalidInput(format!("not a decimal integer: {s:?}")))
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<LocalField> {
        let p = parse_int(&self.p)?;
        let f = parse_int(&self.f)?;
        let n = parse_int(&self.precision)?;
        if !(1..=64).contains(&f) || !(1..=4096).contains(&n) {
            return Err(Error::InvalidInput("f or precision out of range".into()));
        }
        let mut eis = Vec::new();
        for c in &self.eisenstein {
            eis.push(match c {
                CoeffJson::Integer(s) => vec![parse_int(s)?],
                CoeffJson::Unramified(v) => v.iter().map(|s| parse_int(s)).collect::<Result<_>>()?,
            });
        }
        make_local_field(p, f as usize, &eis, n as u32)
    }
}

impl LocalField {
    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p.to_string(),
            f: self.f.to_string(),
            eisenstein: self
                .eisenstein
                .iter()
                .map(|c| {
                    let c: Vec<i128> = c
                        .iter()
                        .map(|&x| if x > self.modulus / 2 { x - self.modulus } else { x })
                        .collect();
                    if c[1..].iter().all(|&x| x == 0) {
                        CoeffJson::Integer(c[0].to_string())
                    } else {
                        CoeffJson::Unramified(c.iter().map(|x| x.to_string()).collect())
                    }
                })
                .collect(),
            precision: self.precision.to_string(),
        }
    }

    /// Same tower at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<LocalField> {
        let eis: Vec<Vec<i128>> = self
            .eisenstein
            .iter()
            .map(|c| c.iter().map(|&x| if x > self.modulus / 2 { x - self.modulus } else { x }).collect())
            .collect();
        make_local_field(self.p, self.f, &eis, precision)
    }

    pub fn is_qp(&self) -> bool {
        self.e == 1 && self.f == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert_eq!(qp(2, 4).unwrap_err(), Error::PrimeTwoUnsupported);
        assert_eq!(qp(9, 4).unwrap_err(), Error::NotPrime(9));
        let bad = make_local_field(5, 1, &[vec![25], vec![1]], 4);
        assert!(matches!(bad, Err(Error::NotEisenstein(_))));
        let bad = make_local_field(5, 1, &[vec![5], vec![1], vec![1]], 4);
        assert!(matches!(bad, Err(Error::NotEisenstein(_))));
    }

    #[test]
    fn residue_sizes() {
        let k = make_local_field(3, 2, &[vec![-3], vec![1]], 6).unwrap();
        assert_eq!(k.residue_size(), 9);
        let r = make_local_field(5, 1, &[vec![-5], vec![0], vec![1]], 6).unwrap();
        assert_eq!((r.e, r.f, r.digits), (2, 1, 3));
    }

    #[test]
    fn descriptor_round_trip() {
        let k = make_local_field(7, 2, &[vec![-7], vec![0], vec![1]], 8).unwrap();
        let d = k.descriptor();
        let json = serde_json::to_string(&d).unwrap();
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), k);
    }
}
