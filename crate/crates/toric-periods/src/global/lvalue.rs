//! Central values L(1/2, chi) of conjugate-symplectic Hecke characters by the
//! approximate functional equation.
//!
//! Lambda(s) = Q^{s/2} (2 pi)^{-s} Gamma(s + |w|/2) L(s) with Q = |d| N(f)
//! satisfies Lambda(s) = W Lambda(1 - s), and
//! L(1/2) = sum a_n n^{-1/2} V(2 pi n / (X sqrt Q)) + W sum a_n n^{-1/2} V(2 pi n X / sqrt Q)
//! with V(y) = Gamma(M, y) / Gamma(M), M = (|w| + 1) / 2, for every X > 0.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::hecke::{rot_f64, GlobalHeckeCharacter, LocalComponent};
use super::quadratic::{place_decomposition, prime_element, Decomposition, OkElement, Place};
use crate::characters::{archimedean_epsilon, psi_delta_k, tate_epsilon};
use crate::error::{Error, Result};
use crate::etale::TraceZeroDelta;
use crate::padic::arith::{prime_divisors, primes_up_to, rem, sqrt_mod_pk};

pub const DEFAULT_PRECISION: f64 = 1e-6;
/// The two smoothing cutoffs.
pub const CUTOFFS: [f64; 2] = [1.0, 1.3];
/// V(y) is below e^{-TAIL} (up to a polynomial factor) past the truncation.
const TAIL: f64 = 45.0;

fn unit(r: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// Gamma(M, y) / Gamma(M) for integer M >= 1.
fn smoothing(m: u32, y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..m {
        term *= y / k as f64;
        sum += term;
    }
    (-y).exp() * sum
}

/// (norm exponent, chi(P)) for the prime ideals P over p where chi is unramified.
fn euler_data(chi: &GlobalHeckeCharacter, p: u64) -> Result<Vec<(u32, Complex64)>> {
    let pi = p as i128;
    let d = chi.d;
    if chi.modulus % pi == 0 {
        return Ok(match chi.localize(Place::Finite(p))? {
            LocalComponent::Field { chi: c, decomposition, .. } => {
                if c.conductor()? > 0 {
                    Vec::new()
                } else {
                    let f = if decomposition == Decomposition::Inert { 2 } else { 1 };
                    vec![(f, unit(rot_f64(c.rotations[0])))]
                }
            }
            LocalComponent::Split { first, second, first_pi, second_pi, .. } => {
                let mut out = Vec::new();
                if first.conductor()? == 0 {
                    out.push((1, unit(first_pi)));
                }
                if second.conductor()? == 0 {
                    out.push((1, unit(second_pi)));
                }
                out
            }
            LocalComponent::Archimedean { .. } => unreachable!("finite place"),
        });
    }
    Ok(match place_decomposition(Place::Finite(p), d) {
        Decomposition::Inert => vec![(2, unit(rot_f64(chi.rational_ideal_rotation(pi)?)))],
        Decomposition::Ramified => vec![(1, unit(chi.ideal_rotation(OkElement::sqrt_d())?))],
        Decomposition::Split => {
            let s = if p == 2 { 1 } else { sqrt_mod_pk(rem(d, pi), pi, 1).expect("d is a square mod a split prime") };
            let x = prime_element(pi, d, s)?;
            vec![(1, unit(chi.ideal_rotation(x)?)), (1, unit(chi.ideal_rotation(x.conj())?))]
        }
        Decomposition::Complex => unreachable!("finite place"),
    })
}

/// a_n = sum over ideals of norm n of chi, for n <= n_max.
pub fn coefficients(chi: &GlobalHeckeCharacter, n_max: usize) -> Result<Vec<Complex64>> {
    let mut a = vec![Complex64::new(0.0, 0.0); n_max + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for p in primes_up_to(n_max as u64) {
        let p = p as usize;
        let mut kmax = 0;
        let mut q = 1usize;
        while q <= n_max / p {
            q *= p;
            kmax += 1;
        }
        // local series sum_k a_{p^k} T^k as a product over the prime ideals
        let mut series = vec![Complex64::new(0.0, 0.0); kmax + 1];
        series[0] = Complex64::new(1.0, 0.0);
        for (f, v) in euler_data(chi, p as u64)? {
            let f = f as usize;
            for k in f..=kmax {
                let prev = series[k - f];
                series[k] += v * prev;
            }
        }
        // multiply the local series into the table
        for n in (1..=n_max).rev() {
            if a[n] == Complex64::new(0.0, 0.0) || n % p == 0 {
                continue;
            }
            let mut m = n * p;
            let mut k = 1;
            while m <= n_max {
                a[m] = a[n] * series[k];
                m *= p;
                k += 1;
            }
        }
    }
    Ok(a)
}

/// W as the product of the local epsilon factors for psi_(sqrt d); split
/// places and places unramified for both chi and psi contribute 1.
pub fn root_number(chi: &GlobalHeckeCharacter) -> Result<Complex64> {
    let mut w = Complex64::new(archimedean_epsilon(chi.infinity_type, 1) as f64, 0.0);
    let mut primes = prime_divisors(chi.d);
    primes.extend(prime_divisors(chi.modulus));
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        if let LocalComponent::Field { k, chi: c, .. } = chi.localize(Place::Finite(p))? {
            w *= tate_epsilon(&c, &psi_delta_k(&k, &TraceZeroDelta { t: 1 })?)?;
        }
    }
    Ok(w)
}

fn smoothed_sum(a: &[Complex64], m: u32, scale: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (n, an) in a.iter().enumerate().skip(1) {
        let y = scale * n as f64;
        if y > TAIL + 2.0 * m as f64 {
            break;
        }
        s += an * (smoothing(m, y) / (n as f64).sqrt());
    }
    s
}

/// L(1/2, chi) evaluated with each cutoff in CUTOFFS.
pub fn central_values(chi: &GlobalHeckeCharacter) -> Result<Vec<Complex64>> {
    if !chi.is_conjugate_symplectic()? {
        return Err(Error::NotSelfDual("the character does not restrict to omega_{K/Q} on the ideles of Q".into()));
    }
    let m = chi.infinity_type.unsigned_abs().div_ceil(2) as u32;
    let sqrt_q = ((-chi.d) as f64 * chi.conductor_norm()? as f64).sqrt();
    let w = root_number(chi)?;
    let x_max = CUTOFFS.iter().cloned().fold(1.0, f64::max);
    let n_max = ((TAIL + 2.0 * m as f64) * x_max * sqrt_q / (2.0 * PI)).ceil() as usize + 1;
    let a = coefficients(chi, n_max)?;
    let dual: Vec<Complex64> = a.iter().map(|z| z.conj()).collect();
    Ok(CUTOFFS
        .iter()
        .map(|&x| smoothed_sum(&a, m, 2.0 * PI / (x * sqrt_q)) + w * smoothed_sum(&dual, m, 2.0 * PI * x / sqrt_q))
        .collect())
}

/// L(1/2, chi) for a conjugate-symplectic chi; the cutoffs must agree
/// within `precision`.
pub fn l_value_half(chi: &GlobalHeckeCharacter, precision: f64) -> Result<Complex64> {
    let values = central_values(chi)?;
    let diff = (values[0] - values[1]).norm();
    if diff > precision {
        return Err(Error::ConvergenceFailure { diff });
    }
    Ok(values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::Rot;
    use crate::padic::arith::legendre;

    fn mu7(w: i64) -> GlobalHeckeCharacter {
        GlobalHeckeCharacter::from_residue_fn(-7, 7, w, |x| {
            let (x2, _) = x.doubled_coordinates();
            if legendre(rem(x2 * 4, 7), 7) == 1 {
                Rot::from_integer(0)
            } else {
                Rot::new(1, 2)
            }
        })
        .unwrap()
    }

    #[test]
    fn smoothing_is_the_incomplete_gamma_ratio() {
        assert!((smoothing(1, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
        assert!((smoothing(2, 1.5) - 2.5 * (-1.5f64).exp()).abs() < 1e-15);
        assert_eq!(smoothing(3, 0.0), 1.0);
    }

    #[test]
    fn coefficients_count_ideals() {
        // with chi trivial a_n is the number of ideals of norm n
        let a = coefficients(&GlobalHeckeCharacter::trivial(-7).unwrap(), 30).unwrap();
        let brute = |n: i128| -> f64 {
            // ideals are principal: count elements of norm n up to the units +-1
            let mut c = 0;
            for x in -12i128..=12 {
                for y in -12i128..=12 {
                    if (OkElement { a: x, b: y }).norm(-7) == n {
                        c += 1;
                    }
                }
            }
            c as f64 / 2.0
        };
        for n in 1..=30 {
            assert!((a[n as usize].re - brute(n)).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn root_number_is_a_sign() {
        for w in [1, -1, 3, -3] {
            let r = root_number(&mu7(w)).unwrap();
            assert!(r.im.abs() < 1e-9 && (r.re.abs() - 1.0).abs() < 1e-9, "{r}");
        }
    }

    #[test]
    fn matches_the_elliptic_curve_of_conductor_49() {
        // L(E, 1) for y^2 + xy = x^3 - x^2 - 2x - 1, which has CM by Q(sqrt -7)
        let v = l_value_half(&mu7(1), 1e-9).unwrap();
        assert!((v.re - 0.966_655_852_808_4).abs() < 1e-9, "{v}");
    }

    #[test]
    fn conjugation_leaves_the_value() {
        let chi = mu7(1);
        let a = l_value_half(&chi, DEFAULT_PRECISION).unwrap();
        let b = l_value_half(&chi.conj().unwrap(), DEFAULT_PRECISION).unwrap();
        assert!((a - b).norm() < 1e-6);
        assert!(a.im.abs() < 1e-6);
    }

    #[test]
    fn non_self_dual_is_rejected() {
        let err = l_value_half(&GlobalHeckeCharacter::trivial(-7).unwrap(), DEFAULT_PRECISION).unwrap_err();
        assert!(matches!(err, Error::NotSelfDual(_)));
    }

    fn quadratic_at_three() -> GlobalHeckeCharacter {
        GlobalHeckeCharacter::from_residue_fn(-7, 3, 0, |x| {
            if legendre(rem(x.norm(-7), 3), 3) == 1 {
                Rot::from_integer(0)
            } else {
                Rot::new(1, 2)
            }
        })
        .unwrap()
    }

    #[test]
    fn cutoffs_agree_on_several_characters() {
        let twist = quadratic_at_three();
        let chars = [mu7(1), mu7(-1), mu7(3), mu7(-3), mu7(1).mul(&twist).unwrap(), mu7(3).mul(&twist).unwrap()];
        for chi in &chars {
            let v = l_value_half(chi, 1e-9).unwrap();
            assert!(v.im.abs() < 1e-6);
            if root_number(chi).unwrap().re < 0.0 {
                assert!(v.norm() < 1e-9);
            }
        }
    }
}
