//! Invariants under random inputs: Hilbert symbols, square classes, the
//! product formula, ideal characters and local epsilon factors.

mod common;

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use toric_periods::characters::{enumerate_characters, presentation, tate_epsilon, AdditiveCharacter, MultiplicativeCharacter, Rot};
use toric_periods::global::reciprocity::relevant_places;
use toric_periods::global::{rational_symbol, GlobalHeckeCharacter, OkElement, Rational};
use toric_periods::padic::arith::{legendre, rem};
use toric_periods::padic::{hilbert_symbol, square_class, LocalElement, LocalField};

fn fields() -> &'static Vec<(i128, &'static str, LocalField)> {
    static F: OnceLock<Vec<(i128, &'static str, LocalField)>> = OnceLock::new();
    F.get_or_init(|| {
        [3, 5, 7].into_iter().flat_map(|p| test_fields(p, DIGITS).into_iter().map(move |(n, f)| (p, n, f))).collect()
    })
}

fn elements(seed: u64, field: &LocalField, count: usize) -> Vec<LocalElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(field, &mut rng, 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_symbol_is_symmetric_and_bimultiplicative(which in 0usize..9, seed in any::<u64>()) {
        let (_, _, field) = &fields()[which];
        let v = elements(seed, field, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let h = |x: &LocalElement, y: &LocalElement| hilbert_symbol(x, y).unwrap();
        prop_assert_eq!(h(a, b), h(b, a));
        prop_assert_eq!(h(a, &b.mul(c).unwrap()), h(a, b) * h(a, c));
        prop_assert_eq!(h(a, &a.neg()), 1);
    }

    #[test]
    fn hilbert_symbol_matches_the_search(which in 0usize..9, seed in any::<u64>()) {
        let (_, _, field) = &fields()[which];
        let v = elements(seed, field, 2);
        let squares = residue_squares(field);
        let ts = integers_mod_pi2(field);
        prop_assert_eq!(hilbert_symbol(&v[0], &v[1]).unwrap(), hilbert_by_search(&v[0], &v[1], &ts, &squares));
    }

    #[test]
    fn square_classes_multiply(which in 0usize..9, seed in any::<u64>()) {
        let (_, _, field) = &fields()[which];
        let v = elements(seed, field, 2);
        let prod = v[0].mul(&v[1]).unwrap();
        prop_assert_eq!(square_class(&prod).unwrap(), square_class(&v[0]).unwrap().mul(square_class(&v[1]).unwrap()));
        let squares = residue_squares(field);
        let (nu, odd) = square_class_bits(&prod, &squares);
        prop_assert_eq!(square_class(&prod).unwrap().bits(), (nu, odd));
    }

    #[test]
    fn product_formula(an in -5000i128..5000, ad in 1i128..300, bn in -5000i128..5000, bd in 1i128..300) {
        prop_assume!(an != 0 && bn != 0);
        let (a, b) = (Rational::new(an, ad), Rational::new(bn, bd));
        let product: i32 = relevant_places(a, b).into_iter().map(|v| rational_symbol(v, a, b).unwrap()).product();
        prop_assert_eq!(product, 1);
    }
}

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

fn close_mod_one(x: f64) -> bool {
    (x - x.round()).abs() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ideal_character_is_multiplicative(w in prop::sample::select(vec![1i64, -1, 3]), a in -30i128..30, b in -30i128..30, c in -30i128..30, e in -30i128..30) {
        let x = OkElement { a, b };
        let y = OkElement { a: c, b: e };
        prop_assume!(x.norm(-7) % 7 != 0 && y.norm(-7) % 7 != 0);
        let chi = mu7(w);
        let r = |z: OkElement| chi.ideal_rotation(z).unwrap();
        prop_assert!(close_mod_one(r(x.mul(y, -7)) - r(x) - r(y)));
        // (x) = (-x)
        let minus_x = x.mul(OkElement::int(-1), -7);
        prop_assert!(close_mod_one(r(x) - r(minus_x)));
    }
}

fn characters_of(field: &LocalField, level: u32) -> Vec<MultiplicativeCharacter> {
    let pi_values = [Rot::from_integer(0), Rot::new(1, 3)];
    enumerate_characters(&presentation(field, level).unwrap(), &[], &pi_values).unwrap()
}

#[test]
fn epsilon_times_epsilon_of_inverse_is_chi_of_minus_one() {
    for (p, name, field) in fields() {
        let psi = AdditiveCharacter::standard(field);
        let minus_one = LocalElement::from_int(field, -1);
        let chars = characters_of(field, 2);
        let step = (chars.len() / 12).max(1);
        for chi in chars.iter().step_by(step) {
            let e = tate_epsilon(chi, &psi).unwrap();
            let f = tate_epsilon(&chi.inv(), &psi).unwrap();
            let want: Complex64 = chi.value(&minus_one).unwrap();
            assert!((e.norm() - 1.0).abs() < 1e-9, "p={p} {name}: |epsilon| = {}", e.norm());
            assert!((e * f - want).norm() < 1e-9, "p={p} {name}: {e} * {f} vs {want}");
        }
    }
}

#[test]
fn decisions_depend_on_delta_only_through_its_norm_class() {
    use toric_periods::dichotomy::{corpus, sum_check, CharacterData};
    use toric_periods::etale::{BaseQuadratic, TraceZeroDelta};
    for inst in corpus::generate(&[3, 5, 7], true, 2, 17).unwrap() {
        let BaseQuadratic::Local(k) = &inst.setting.k else { unreachable!() };
        let CharacterData::Local { alphas, beta, splitting, delta } = &inst.data else { unreachable!() };
        let base = sum_check(&inst.setting, &inst.data).unwrap();
        let dims = |r: &toric_periods::dichotomy::SumReport| r.rows.iter().map(|row| row.dim).collect::<Vec<_>>();
        for (a, b) in [(1i128, 1i128), (2, 1), (1, 2), (3, 1)] {
            // a^2 - d b^2 is the norm of a + b sqrt d
            let n = a * a - k.d * b * b;
            if n == 0 || n % k.p() == 0 {
                continue;
            }
            let moved = CharacterData::Local {
                alphas: alphas.clone(),
                beta: beta.clone(),
                splitting: splitting.clone(),
                delta: TraceZeroDelta { t: delta.t * n },
            };
            let r = sum_check(&inst.setting, &moved).unwrap();
            assert_eq!(dims(&r), dims(&base), "{} with t scaled by {n}", inst.label);
        }
    }
}

#[test]
fn classes_do_not_depend_on_the_uniformizer() {
    use toric_periods::padic::{make_local_field, qp};
    for p in [3i128, 5, 7] {
        let standard = qp(p, DIGITS).unwrap();
        // Q_p presented with uniformizer 2p
        let other = make_local_field(p, 1, &[vec![-2 * p], vec![1]], DIGITS).unwrap();
        let ints = [1i128, -1, 2, 3, 5, 7, 10, p, 2 * p, -p, p * p + 1, 3 * p];
        for &x in &ints {
            for &y in &ints {
                let h = |f: &LocalField| {
                    hilbert_symbol(&LocalElement::from_int(f, x), &LocalElement::from_int(f, y)).unwrap()
                };
                assert_eq!(h(&standard), h(&other), "p={p} ({x},{y})");
            }
            let c = |f: &LocalField| square_class(&LocalElement::from_int(f, x)).unwrap();
            // the labels u and pi refer to each field's own representatives,
            // so only the square/nonsquare verdict is comparable
            assert_eq!(c(&standard) == toric_periods::padic::SquareClass::One, c(&other) == toric_periods::padic::SquareClass::One);
        }
    }
}
