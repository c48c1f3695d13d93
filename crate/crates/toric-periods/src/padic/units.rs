//! Presentation of M^x / (1 + pi^k) by a uniformizer, a Teichmuller generator
//! and independent principal-unit generators, with discrete logarithms.

use std::collections::HashMap;

use serde::Serialize;

use super::arith::rem;
use super::element::LocalElement;
use super::field::LocalField;
use super::residue::Res;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogMethod {
    /// Residue logs from a full table (q - 1 < 10^4).
    Table,
    BabyStepGiantStep,
}

#[derive(Clone, Debug)]
pub struct UnitPresentation {
    pub field: LocalField,
    pub level: u32,
    pub zeta: LocalElement,
    pub zeta_residue: Res,
    pub etas: Vec<LocalElement>,
    pub eta_orders: Vec<i128>,
    pub log_method: LogMethod,
    over: Vec<LocalElement>,
    over_inv: Vec<LocalElement>,
    /// Change of coordinates from over-generator exponents to eta exponents.
    v: Vec<Vec<i128>>,
    /// Columns of `v` that carry an eta (invariant factor > 1).
    kept: Vec<usize>,
    table: HashMap<i128, i128>,
}

impl UnitPresentation {
    pub fn new(field: &LocalField, level: u32) -> Result<Self> {
        if level == 0 || level >= field.precision {
            return Err(Error::LevelExceedsPrecision { level, precision: field.precision });
        }
        let res = &field.residue;
        let q = res.size();
        let gamma = res.generator();
        let mut zeta = LocalElement::from_residue(field, &gamma);
        for _ in 0..field.precision {
            zeta = zeta.pow(q as u128);
        }
        let (log_method, table) = if q - 1 < 10_000 {
            let mut t = HashMap::new();
            let mut cur = res.one();
            for a in 0..q - 1 {
                t.insert(res.index(&cur), a);
                cur = res.mul(&cur, &gamma);
            }
            (LogMethod::Table, t)
        } else {
            (LogMethod::BabyStepGiantStep, HashMap::new())
        };
        let mut over = Vec::new();
        for i in 1..level as usize {
            for j in 0..field.f {
                let g = LocalElement::one(field).add(&monomial_at(field, i, j))?;
                over.push(g);
            }
        }
        let over_inv = over.iter().map(|g| g.inv()).collect::<Result<Vec<_>>>()?;
        let mut pres = UnitPresentation {
            field: field.clone(),
            level,
            zeta,
            zeta_residue: gamma,
            etas: Vec::new(),
            eta_orders: Vec::new(),
            log_method,
            over,
            over_inv,
            v: Vec::new(),
            kept: Vec::new(),
            table,
        };
        let r = pres.over.len();
        let p = field.p;
        let mut rel = Vec::with_capacity(r);
        for t in 0..r {
            let gp = pres.over[t].pow(p as u128);
            let lg = pres.over_log(&gp)?;
            let mut row: Vec<i128> = lg.iter().map(|x| -x).collect();
            row[t] += p;
            rel.push(row);
        }
        let (diag, v, vinv) = smith(rel);
        let exponent = diag.iter().copied().max().unwrap_or(1).max(1);
        for (t, &d) in diag.iter().enumerate() {
            if d > 1 {
                let mut eta = LocalElement::one(field);
                for s in 0..r {
                    let ex = rem(vinv[t][s], exponent);
                    if ex != 0 {
                        eta = eta.mul(&pres.over[s].pow(ex as u128))?;
                    }
                }
                pres.etas.push(eta);
                pres.eta_orders.push(d);
                pres.kept.push(t);
            }
        }
        pres.v = v;
        Ok(pres)
    }

    fn residue_log(&self, r: &Res) -> Result<i128> {
        let res = &self.field.residue;
        match self.log_method {
            LogMethod::Table => self
                .table
                .get(&res.index(r))
                .copied()
                .ok_or_else(|| Error::LogFailure("residue not in table".into())),
            LogMethod::BabyStepGiantStep => res
                .log(&self.zeta_residue, r)
                .ok_or_else(|| Error::LogFailure("baby-step giant-step found no log".into())),
        }
    }

    /// Exponents of the over-complete generators 1 + theta^j pi^i for a
    /// principal unit, by successive approximation.
    fn over_log(&self, y: &LocalElement) -> Result<Vec<i128>> {
        let f = self.field.f;
        let mut y = y.clone();
        let mut ex = vec![0i128; self.over.len()];
        let one = LocalElement::one(&self.field);
        for i in 1..self.level as usize {
            let z = y.sub(&one)?;
            let c = match z.valuation() {
                Some(v) if (v as usize) < i => {
                    return Err(Error::LogFailure(format!("not congruent to 1 mod pi^{i}")))
                }
                Some(v) if v as usize == i => z.div_pi_pow(i as u32)?.residue(),
                _ => continue,
            };
            for (j, &cj) in c.iter().enumerate() {
                if cj != 0 {
                    let t = (i - 1) * f + j;
                    y = y.mul(&self.over_inv[t].pow(cj as u128))?;
                    ex[t] += cj;
                }
            }
        }
        let z = y.sub(&one)?;
        if z.valuation().is_some_and(|v| v < self.level) {
            return Err(Error::LogFailure("residual unit outside 1 + pi^k".into()));
        }
        Ok(ex)
    }

    pub fn group_order(&self) -> i128 {
        (self.field.residue_size() - 1) * self.eta_orders.iter().product::<i128>()
    }

    /// Number of generators including the uniformizer.
    pub fn rank(&self) -> usize {
        2 + self.etas.len()
    }

    /// Generator orders; 0 marks the uniformizer (infinite order).
    pub fn orders(&self) -> Vec<i128> {
        let mut o = vec![0, self.field.residue_size() - 1];
        o.extend(&self.eta_orders);
        o
    }

    pub fn generators(&self) -> Vec<LocalElement> {
        let mut g = vec![LocalElement::uniformizer(&self.field), self.zeta.clone()];
        g.extend(self.etas.iter().cloned());
        g
    }

    /// Exponent vector (v, a, b_1, ..) with x = pi^v zeta^a prod eta_i^b_i
    /// modulo 1 + pi^k.
    pub fn discrete_log(&self, x: &LocalElement) -> Result<Vec<i128>> {
        if x.field != self.field {
            return Err(Error::FieldMismatch);
        }
        let (v, u) = x.unit_part()?;
        if u.prec < self.level {
            return Err(Error::PrecisionExhausted(format!(
                "unit part known to pi^{} below level {}",
                u.prec, self.level
            )));
        }
        self.unit_log(v as i128, &u)
    }

    fn unit_log(&self, v: i128, u: &LocalElement) -> Result<Vec<i128>> {
        let q = self.field.residue_size();
        let a = self.residue_log(&u.residue())?;
        let za = self.zeta.pow(rem(q - 1 - a, q - 1) as u128);
        let y = u.mul(&za)?;
        let x_over = self.over_log(&y)?;
        let mut out = vec![v, a];
        for (k, &col) in self.kept.iter().enumerate() {
            let mut s = 0i128;
            for (t, xo) in x_over.iter().enumerate() {
                s += xo * self.v[t][col];
            }
            out.push(rem(s, self.eta_orders[k]));
        }
        Ok(out)
    }

    /// Discrete log of the unit part only (the uniformizer exponent is 0).
    pub fn unit_discrete_log(&self, u: &LocalElement) -> Result<Vec<i128>> {
        if !u.is_unit() {
            return Err(Error::InvalidInput("expected a unit".into()));
        }
        self.unit_log(0, u)
    }

    /// pi^v zeta^a prod eta^b; negative v is rejected.
    pub fn recombine(&self, ex: &[i128]) -> Result<LocalElement> {
        if ex.len() != self.rank() || ex[0] < 0 {
            return Err(Error::InvalidInput("bad exponent vector".into()));
        }
        let q = self.field.residue_size();
        let mut x = LocalElement::uniformizer(&self.field).pow(ex[0] as u128);
        x = x.mul(&self.zeta.pow(rem(ex[1], q - 1) as u128))?;
        for (k, eta) in self.etas.iter().enumerate() {
            x = x.mul(&eta.pow(rem(ex[2 + k], self.eta_orders[k]) as u128))?;
        }
        Ok(x)
    }

    /// Whether two elements agree in M^x / (1 + pi^k).
    pub fn same_class(&self, x: &LocalElement, y: &LocalElement) -> Result<bool> {
        let (vx, ux) = x.unit_part()?;
        let (vy, uy) = y.unit_part()?;
        if vx != vy {
            return Ok(false);
        }
        let r = ux.mul(&uy.inv()?)?.sub(&LocalElement::one(&self.field))?;
        Ok(r.valuation().is_none_or(|v| v >= self.level))
    }

    /// Generators of 1 + pi^a modulo 1 + pi^k (a >= 1), or of the unit group
    /// for a = 0.
    pub fn filtration_generators(&self, a: u32) -> Result<Vec<LocalElement>> {
        let mut gens = Vec::new();
        if a == 0 {
            gens.push(self.zeta.clone());
        }
        for i in a.max(1)..self.level {
            for j in 0..self.field.f {
                gens.push(LocalElement::one(&self.field).add(&monomial_at(&self.field, i as usize, j))?);
            }
        }
        Ok(gens)
    }
}

/// theta^j pi^i for arbitrary i, as an element.
pub fn monomial_at(field: &LocalField, i: usize, j: usize) -> LocalElement {
    let pi = LocalElement::uniformizer(field);
    let theta = LocalElement::monomial(field, 0, j);
    theta.mul(&pi.pow(i as u128)).expect("same field")
}

/// Smith normal form of a square integer matrix whose rows generate a
/// lattice.  Returns (diagonal, V, V^{-1}) with U A V = diag.
pub fn smith(mut a: Vec<Vec<i128>>) -> (Vec<i128>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = a.len();
    let ident = |n: usize| -> Vec<Vec<i128>> {
        (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
    };
    let mut v = ident(n);
    let mut vinv = ident(n);
    let mut diag = vec![0i128; n];
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                for row in v.iter_mut() {
                    row.swap(t, bj);
                }
                vinv.swap(t, bj);
            }
            let piv = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let qo = a[i][t] / piv;
                if qo != 0 {
                    for j in 0..n {
                        a[i][j] -= qo * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let qo = a[t][j] / piv;
                if qo != 0 {
                    for row in a.iter_mut() {
                        row[j] -= qo * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= qo * row[t];
                    }
                    for k in 0..n {
                        vinv[t][k] += qo * vinv[j][k];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut bad_row = None;
            'outer: for i in t + 1..n {
                for j in t + 1..n {
                    if a[i][j] % piv != 0 {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    for j in 0..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag[t] = a[t][t].abs();
    }
    (diag, v, vinv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::field::{make_local_field, qp};

    #[test]
    fn q3_level_three() {
        let k = qp(3, 6).unwrap();
        let pres = UnitPresentation::new(&k, 3).unwrap();
        assert_eq!(pres.orders(), vec![0, 2, 9]);
        assert_eq!(pres.group_order(), 18);
    }

    #[test]
    fn q5_level_one_is_cyclic() {
        let k = qp(5, 4).unwrap();
        let pres = UnitPresentation::new(&k, 1).unwrap();
        assert_eq!(pres.orders(), vec![0, 4]);
        assert_eq!(pres.zeta.pow(4), LocalElement::one(&k));
        assert_ne!(pres.zeta.pow(2), LocalElement::one(&k));
    }

    #[test]
    fn round_trip_in_ramified_unramified_tower() {
        let k = make_local_field(3, 2, &[vec![-3], vec![0], vec![1]], 10).unwrap();
        let pres = UnitPresentation::new(&k, 4).unwrap();
        assert_eq!(pres.group_order(), 8 * 9i128.pow(3));
        let x = LocalElement::new(&k, vec![2, 1, 1, 2], 10);
        let lg = pres.discrete_log(&x).unwrap();
        let back = pres.recombine(&lg).unwrap();
        assert!(pres.same_class(&x, &back).unwrap());
    }

    #[test]
    fn level_must_be_below_precision() {
        let k = qp(5, 4).unwrap();
        assert!(matches!(UnitPresentation::new(&k, 4), Err(Error::LevelExceedsPrecision { .. })));
    }

    #[test]
    fn smith_form() {
        let (d, _, _) = smith(vec![vec![3, -1], vec![0, 3]]);
        let mut d = d;
        d.sort();
        assert_eq!(d, vec![1, 9]);
    }
}
