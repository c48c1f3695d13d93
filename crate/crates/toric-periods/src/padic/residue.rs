//! The residue field F_q = F_p[x]/(g), elements as coefficient vectors.

use super::arith::{inv_mod, rem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub p: i128,
    pub f: usize,
    /// Monic modulus, low degree first, length f + 1.
    pub modulus: Vec<i128>,
}

pub type Res = Vec<i128>;

impl ResidueField {
    pub fn new(p: i128, modulus: Vec<i128>) -> Self {
        let f = modulus.len() - 1;
        let modulus = modulus.into_iter().map(|c| rem(c, p)).collect();
        ResidueField { p, f, modulus }
    }

    pub fn size(&self) -> i128 {
        self.p.pow(self.f as u32)
    }

    pub fn zero(&self) -> Res {
        vec![0; self.f]
    }

    pub fn one(&self) -> Res {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn is_zero(&self, a: &Res) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Index in 0..q: sum of c_j p^j.  Fixes the enumeration order.
    pub fn index(&self, a: &Res) -> i128 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, mut n: i128) -> Res {
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = n % self.p;
            n /= self.p;
        }
        v
    }

    pub fn from_int(&self, n: i128) -> Res {
        let mut v = self.zero();
        v[0] = rem(n, self.p);
        v
    }

    pub fn add(&self, a: &Res, b: &Res) -> Res {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &Res) -> Res {
        a.iter().map(|x| rem(-x, self.p)).collect()
    }

    pub fn mul(&self, a: &Res, b: &Res) -> Res {
        let f = self.f;
        let mut prod = vec![0i128; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for d in (f..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                for k in 0..f {
                    prod[d - f + k] = rem(prod[d - f + k] - c * self.modulus[k], self.p);
                }
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn pow(&self, a: &Res, mut e: u128) -> Res {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Res) -> Option<Res> {
        if self.is_zero(a) {
            return None;
        }
        if self.f == 1 {
            return Some(vec![inv_mod(a[0], self.p)?]);
        }
        Some(self.pow(a, (self.size() - 2) as u128))
    }

    /// Quadratic character x^{(q-1)/2}, as +1 / -1.
    pub fn quadratic_character(&self, a: &Res) -> i32 {
        let r = self.pow(a, ((self.size() - 1) / 2) as u128);
        if r == self.one() {
            1
        } else {
            -1
        }
    }

    pub fn order(&self, a: &Res) -> i128 {
        let n = self.size() - 1;
        let mut ord = n;
        for (l, _) in super::arith::factor(n) {
            let l = l as i128;
            while ord % l == 0 && self.pow(a, (ord / l) as u128) == self.one() {
                ord /= l;
            }
        }
        ord
    }

    /// Smallest element (in index order) generating F_q^x.
    pub fn generator(&self) -> Res {
        let n = self.size() - 1;
        (1..self.size())
            .map(|i| self.from_index(i))
            .find(|a| self.order(a) == n)
            .expect("finite field has a generator")
    }

    /// Smallest element (in index order) that is not a square.
    pub fn nonsquare(&self) -> Res {
        (1..self.size())
            .map(|i| self.from_index(i))
            .find(|a| self.quadratic_character(a) == -1)
            .expect("odd finite field has a non-square")
    }

    /// Discrete log of `a` to base `g` (a generator), baby-step giant-step.
    pub fn log(&self, g: &Res, a: &Res) -> Option<i128> {
        let n = self.size() - 1;
        let m = (n as f64).sqrt().ceil() as i128;
        let mut table = std::collections::HashMap::new();
        let mut cur = self.one();
        for j in 0..m {
            table.entry(self.index(&cur)).or_insert(j);
            cur = self.mul(&cur, g);
        }
        let giant = self.inv(&self.pow(g, m as u128))?;
        let mut y = a.clone();
        for i in 0..=m {
            if let Some(j) = table.get(&self.index(&y)) {
                return Some(rem(i * m + j, n));
            }
            y = self.mul(&y, &giant);
        }
        None
    }
}

/// Whether the monic polynomial `g` (low degree first) is irreducible mod p,
/// by trial division against every monic polynomial of degree <= deg/2.
pub fn is_irreducible(g: &[i128], p: i128) -> bool {
    let n = g.len() - 1;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut h = vec![0i128; d + 1];
            let mut t = idx;
            for c in h.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            h[d] = 1;
            if poly_rem(g, &h, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[i128], b: &[i128], p: i128) -> Vec<i128> {
    let mut r: Vec<i128> = a.iter().map(|&c| rem(c, p)).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = rem(r[shift + k] - c * bk, p);
        }
        r.pop();
    }
    r
}
