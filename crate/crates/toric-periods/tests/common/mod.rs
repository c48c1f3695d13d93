//! Brute-force oracles shared by the integration tests.  None of them calls
//! the closed formulas they are compared against.

#![allow(dead_code)]

use std::collections::HashSet;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use toric_periods::padic::{make_local_field, qp, LocalElement, LocalField};

pub const DIGITS: u32 = 6;
/// Enough room for products of several discriminants and norms.
pub const WIDE_DIGITS: u32 = 12;

/// Q_p, its unramified quadratic extension and Q_p(sqrt p).
pub fn test_fields(p: i128, digits: u32) -> Vec<(&'static str, LocalField)> {
    vec![
        ("Q_p", qp(p, digits).unwrap()),
        ("unramified", make_local_field(p, 2, &[vec![-p], vec![1]], digits).unwrap()),
        ("ramified", make_local_field(p, 1, &[vec![-p], vec![0], vec![1]], 2 * digits).unwrap()),
    ]
}

/// Indices of the nonzero squares of the residue field.
pub fn residue_squares(field: &LocalField) -> HashSet<i128> {
    let r = &field.residue;
    (1..r.size())
        .map(|i| {
            let x = r.from_index(i);
            r.index(&r.mul(&x, &x))
        })
        .collect()
}

/// x = pi^v u with v even and u a square mod pi (Hensel, p odd).
pub fn is_nonzero_square(x: &LocalElement, squares: &HashSet<i128>) -> bool {
    match x.unit_part() {
        Ok((v, u)) => v % 2 == 0 && squares.contains(&x.field.residue.index(&u.residue())),
        Err(_) => false,
    }
}

/// (nonsquare unit part, odd valuation) of x.
pub fn square_class_bits(x: &LocalElement, squares: &HashSet<i128>) -> (bool, bool) {
    let (v, u) = x.unit_part().expect("nonzero");
    (!squares.contains(&x.field.residue.index(&u.residue())), v % 2 == 1)
}

/// All r0 + r1 pi with r0, r1 running over residue representatives.
pub fn integers_mod_pi2(field: &LocalField) -> Vec<LocalElement> {
    let q = field.residue_size();
    let pi = LocalElement::uniformizer(field);
    let reps: Vec<LocalElement> =
        (0..q).map(|i| LocalElement::from_residue(field, &field.residue.from_index(i))).collect();
    let mut out = Vec::new();
    for r0 in &reps {
        for r1 in &reps {
            out.push(r0.add(&r1.mul(&pi).unwrap()).unwrap());
        }
    }
    out
}

/// Whether a x^2 + b y^2 = z^2 has a nontrivial solution, by search: after
/// scaling, either z = 0, or x = 1 or y = 1 with the other coordinate
/// integral, and t mod pi^2 fixes the square class of a + b t^2 whenever
/// -b/a is not a square.
pub fn hilbert_by_search(a: &LocalElement, b: &LocalElement, ts: &[LocalElement], squares: &HashSet<i128>) -> i32 {
    // -b/a and -ab differ by the square a^2
    let neg_ratio = b.neg().mul(a).unwrap();
    if is_nonzero_square(&neg_ratio, squares) {
        return 1;
    }
    for t in ts {
        let t2 = t.mul(t).unwrap();
        let v1 = a.add(&b.mul(&t2).unwrap()).unwrap();
        let v2 = a.mul(&t2).unwrap().add(b).unwrap();
        if is_nonzero_square(&v1, squares) || is_nonzero_square(&v2, squares) {
            return 1;
        }
    }
    -1
}

/// Determinant over Q_p by elimination with a pivot of least valuation.
pub fn padic_det(mut m: Vec<Vec<LocalElement>>) -> LocalElement {
    let n = m.len();
    let field = m[0][0].field.clone();
    let mut det = LocalElement::one(&field);
    for c in 0..n {
        let pivot = (c..n)
            .filter(|&r| !m[r][c].is_zero())
            .min_by_key(|&r| m[r][c].valuation().unwrap())
            .expect("nonsingular");
        if pivot != c {
            m.swap(pivot, c);
            det = det.neg();
        }
        det = det.mul(&m[c][c]).unwrap();
        for r in c + 1..n {
            let f = m[r][c].div(&m[c][c]).unwrap();
            for k in c..n {
                let s = f.mul(&m[c][k]).unwrap();
                m[r][k] = m[r][k].sub(&s).unwrap();
            }
        }
    }
    det
}

/// F-basis pi^i theta^j of a component.
pub fn basis(field: &LocalField) -> Vec<LocalElement> {
    let mut out = Vec::new();
    for i in 0..field.e {
        for j in 0..field.f {
            out.push(LocalElement::monomial(field, i, j));
        }
    }
    out
}

/// det (tr_{E/Q_p}(lambda e_i e_k)) over the union of the component bases.
pub fn gram_determinant(base: &LocalField, components: &[LocalField], lambda: &[LocalElement]) -> LocalElement {
    let n: usize = components.iter().map(|c| c.degree()).sum();
    let zero = LocalElement::zero(base);
    let mut m = vec![vec![zero; n]; n];
    let mut offset = 0;
    for (field, l) in components.iter().zip(lambda) {
        let b = basis(field);
        for (i, x) in b.iter().enumerate() {
            for (k, y) in b.iter().enumerate() {
                let (tr, _) = l.mul(x).unwrap().mul(y).unwrap().trace_qp();
                m[offset + i][offset + k] = LocalElement::from_int(base, tr);
            }
        }
        offset += b.len();
    }
    padic_det(m)
}

/// A random nonzero element pi^k u with small random coordinates.
pub fn random_element(field: &LocalField, rng: &mut ChaCha8Rng, max_val: u32) -> LocalElement {
    loop {
        let coeffs: Vec<i128> = (0..field.degree()).map(|_| rng.gen_range(0..field.p * field.p)).collect();
        let x = LocalElement::new(field, coeffs, field.precision);
        if x.is_unit() {
            let k = rng.gen_range(0..=max_val);
            return x.mul(&LocalElement::uniformizer(field).pow(k as u128)).unwrap();
        }
    }
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == p - 1 {
        -1
    } else {
        r
    }
}

/// sum_x (x/p) e^{2 pi i x / p}.
pub fn quadratic_gauss_sum(p: i64) -> Complex64 {
    (1..p)
        .map(|x| legendre(x, p) as f64 * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x as f64 / p as f64))
        .sum()
}
