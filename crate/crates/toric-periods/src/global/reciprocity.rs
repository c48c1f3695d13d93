//! Hilbert symbols (lambda, d)_v over all places of Q, the product formula
//! and the search for lambda with prescribed local symbols.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use super::quadratic::{place_decomposition, Decomposition, Place};
use crate::error::{Error, Result};
use crate::padic::arith::{prime_divisors, primes_up_to};
use crate::padic::hilbert::{hilbert_symbol_real, hilbert_symbol_two};
use crate::padic::hilbert_symbol_rational;

pub type Rational = Ratio<i128>;

/// Most primes beyond the forced ones tried in a lambda.
pub const MAX_EXTRA_PRIMES: usize = 4;

/// (a, b)_v for nonzero rationals; odd places go through the p-adic core.
pub fn rational_symbol(place: Place, a: Rational, b: Rational) -> Result<i32> {
    if *a.numer() == 0 || *b.numer() == 0 {
        return Err(Error::InvalidInput("Hilbert symbol of zero".into()));
    }
    // x / y and x y differ by a square
    let (a, b) = (a.numer() * a.denom(), b.numer() * b.denom());
    match place {
        Place::Infinite => Ok(hilbert_symbol_real(a, b)),
        Place::Finite(2) => Ok(hilbert_symbol_two(a, b)),
        Place::Finite(p) => hilbert_symbol_rational(p as i128, a, b),
    }
}

/// The places where (a, b)_v can differ from 1: infinity, 2 and the primes
/// dividing a b.
pub fn relevant_places(a: Rational, b: Rational) -> Vec<Place> {
    let mut primes: Vec<u64> = Vec::new();
    for x in [*a.numer(), *a.denom(), *b.numer(), *b.denom()] {
        primes.extend(prime_divisors(x));
    }
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentProduct {
    pub lambda: String,
    /// The places with symbol -1.
    pub flips: Vec<Place>,
    pub product: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductFormulaReport {
    pub components: Vec<ComponentProduct>,
    pub holds: bool,
}

/// prod_v (lambda_j, d)_v per component.
pub fn product_formula_check(lambdas: &[Rational], d: i128) -> Result<ProductFormulaReport> {
    let dd = Rational::from_integer(d);
    let mut components = Vec::new();
    for &l in lambdas {
        let mut flips = Vec::new();
        for v in relevant_places(l, dd) {
            if rational_symbol(v, l, dd)? == -1 {
                flips.push(v);
            }
        }
        let product = if flips.len() % 2 == 0 { 1 } else { -1 };
        components.push(ComponentProduct { lambda: l.to_string(), flips, product });
    }
    let holds = components.iter().all(|c| c.product == 1);
    Ok(ProductFormulaReport { components, holds })
}

/// Target local symbols for one component: place -> +1 / -1, +1 elsewhere.
pub type Targets = BTreeMap<Place, i32>;

fn matches(lambda: i128, d: i128, targets: &Targets) -> Result<bool> {
    let l = Rational::from_integer(lambda);
    let dd = Rational::from_integer(d);
    let mut places = relevant_places(l, dd);
    places.extend(targets.keys().copied());
    places.sort_unstable();
    places.dedup();
    for v in places {
        if rational_symbol(v, l, dd)? != *targets.get(&v).unwrap_or(&1) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subsets_up_to(pool: &[u64], size: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<u64>)> = vec![(0, Vec::new())];
    for _ in 0..size {
        let mut next = Vec::new();
        for (start, s) in &frontier {
            for i in *start..pool.len() {
                let mut t = s.clone();
                t.push(pool[i]);
                next.push((i + 1, t));
            }
        }
        out.extend(next.iter().map(|(_, s)| s.clone()));
        frontier = next;
    }
    out
}

/// A signed product of primes up to `bound` with (lambda, d)_v equal to the
/// target at every listed place and +1 at every other place.
pub fn find_lambda_component(component: usize, targets: &Targets, d: i128, bound: u64) -> Result<i128> {
    let mut flips = 0;
    for (v, &s) in targets {
        if s != 1 && s != -1 {
            return Err(Error::InvalidInput(format!("target at {v} must be +1 or -1")));
        }
        if s == -1 {
            if place_decomposition(*v, d) == Decomposition::Split {
                return Err(Error::InvalidInput(format!("{v} splits in K: every symbol there is +1")));
            }
            flips += 1;
        }
    }
    if flips % 2 == 1 {
        return Err(Error::ParityObstruction { component });
    }
    if flips == 0 {
        return Ok(1);
    }
    let mut forced: i128 = 1;
    for (v, &s) in targets {
        if let Place::Finite(p) = v {
            if s == -1 && place_decomposition(*v, d) == Decomposition::Inert {
                if *p > bound {
                    return Err(Error::SearchExhausted { bound });
                }
                forced *= *p as i128;
            }
        }
    }
    let pool: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&q| forced % q as i128 != 0)
        .filter(|&q| place_decomposition(Place::Finite(q), d) != Decomposition::Inert)
        .collect();
    let mut candidates: Vec<i128> = subsets_up_to(&pool, MAX_EXTRA_PRIMES)
        .into_iter()
        .map(|s| forced * s.iter().map(|&q| q as i128).product::<i128>())
        .collect();
    candidates.sort_unstable();
    for m in candidates {
        for l in [m, -m] {
            if matches(l, d, targets)? {
                return Ok(l);
            }
        }
    }
    Err(Error::SearchExhausted { bound })
}

/// lambda per component, verified by re-evaluating every local symbol.
pub fn find_lambda(targets: &[Targets], d: i128, bound: u64) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (j, t) in targets.iter().enumerate() {
        let l = find_lambda_component(j, t, d, bound)?;
        if !matches(l, d, t)? {
            return Err(Error::InvalidInput(format!("lambda {l} fails re-verification")));
        }
        out.push(Rational::from_integer(l));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(pairs: &[(Place, i32)]) -> Targets {
        pairs.iter().copied().collect()
    }

    #[test]
    fn trivial_targets_give_one() {
        let l = find_lambda(&[Targets::new(), t(&[(Place::Finite(3), 1)])], -7, 50).unwrap();
        assert_eq!(l, vec![Rational::from_integer(1); 2]);
    }

    #[test]
    fn three_and_infinity() {
        let targets = t(&[(Place::Finite(3), -1), (Place::Infinite, -1)]);
        let l = find_lambda(std::slice::from_ref(&targets), -7, 50).unwrap()[0];
        assert!(l < Rational::from_integer(0));
        let dd = Rational::from_integer(-7);
        assert_eq!(rational_symbol(Place::Finite(3), l, dd).unwrap(), -1);
        assert!(product_formula_check(&[l], -7).unwrap().holds);
    }

    #[test]
    fn odd_flip_set_is_obstructed() {
        let err = find_lambda(&[t(&[(Place::Finite(5), -1)])], -7, 50).unwrap_err();
        assert_eq!(err, Error::ParityObstruction { component: 0 });
    }

    #[test]
    fn ramified_place_reached_through_split_primes() {
        let targets = t(&[(Place::Finite(7), -1), (Place::Infinite, -1)]);
        let l = find_lambda(std::slice::from_ref(&targets), -7, 50).unwrap()[0];
        let dd = Rational::from_integer(-7);
        assert_eq!(rational_symbol(Place::Finite(7), l, dd).unwrap(), -1);
        assert_eq!(rational_symbol(Place::Infinite, l, dd).unwrap(), -1);
    }

    #[test]
    fn rational_lambda_uses_the_square_class() {
        let dd = Rational::from_integer(-7);
        let a = Rational::new(3, 5);
        for v in relevant_places(a, dd) {
            assert_eq!(rational_symbol(v, a, dd).unwrap(), rational_symbol(v, Rational::from_integer(15), dd).unwrap());
        }
    }
}
