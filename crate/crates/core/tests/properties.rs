//! Randomized invariants over finite and infinite Coxeter groups.

use proptest::prelude::*;

use weylconv::convolution;
use weylconv::coxeter::{CoxeterMatrix, CoxeterSystem, Element, Word};

fn finite_systems() -> Vec<CoxeterSystem> {
    [
        CoxeterMatrix::type_a(4).unwrap(),
        CoxeterMatrix::type_b(3).unwrap(),
        CoxeterMatrix::type_d(4).unwrap(),
        CoxeterMatrix::dihedral(Some(5)).unwrap(),
    ]
    .into_iter()
    .map(|m| CoxeterSystem::new(m).unwrap())
    .collect()
}

/// Affine Ã₂ and the hyperbolic (3, 3, 4) triangle group; both infinite.
fn infinite_systems() -> Vec<CoxeterSystem> {
    [
        vec![vec![Some(1), Some(3), Some(3)], vec![Some(3), Some(1), Some(3)], vec![Some(3), Some(3), Some(1)]],
        vec![vec![Some(1), Some(3), Some(4)], vec![Some(3), Some(1), Some(3)], vec![Some(4), Some(3), Some(1)]],
    ]
    .into_iter()
    .map(|rows| CoxeterSystem::new(CoxeterMatrix::new(rows).unwrap()).unwrap())
    .collect()
}

fn all_systems() -> Vec<CoxeterSystem> {
    let mut v = finite_systems();
    v.extend(infinite_systems());
    v
}

/// A random raw word over a system with at least three generators; letters
/// are reduced modulo the rank.
fn raw_word(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..12, 0..max_len)
}

fn word_in(sys: &CoxeterSystem, raw: &[u8]) -> Word {
    Word::new(raw.iter().map(|&l| l % sys.rank() as u8).collect())
}

fn element(sys: &CoxeterSystem, raw: &[u8]) -> Element {
    sys.normal_form(&word_in(sys, raw)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normal_form_is_sound(which in 0usize..6, raw in raw_word(30)) {
        let sys = &all_systems()[which];
        let word = word_in(sys, &raw);
        let nf = sys.normal_form(&word).unwrap();
        prop_assert!(nf.length() <= word.len());
        prop_assert!(sys.is_reduced(nf.normal_form()).unwrap());
        let mut folded = sys.identity();
        for &l in word.letters() {
            folded = sys.multiply(&folded, &sys.generator(l as usize).unwrap()).unwrap();
        }
        prop_assert_eq!(&nf, &folded);
        // Parity of length is a homomorphism to ±1.
        prop_assert_eq!(nf.length() % 2, word.len() % 2);
        // Round trip through the textual form.
        prop_assert_eq!(sys.parse_element(&nf.to_string()).unwrap(), nf);
    }

    #[test]
    fn exchange_sanity(which in 0usize..6, raw in raw_word(25), s in 0usize..12) {
        let sys = &all_systems()[which];
        let e = element(sys, &raw);
        let s = s % sys.rank();
        let es = sys.mul_generator(&e, s).unwrap();
        let up = es.length() == e.length() + 1;
        let down = es.length() + 1 == e.length();
        prop_assert!(up ^ down);
        prop_assert_eq!(sys.is_right_descent(&e, s).unwrap(), down);
        let se = sys.generator_mul(s, &e).unwrap();
        prop_assert_eq!(sys.is_left_descent(&e, s).unwrap(), se.length() < e.length());
    }

    #[test]
    fn group_laws(which in 0usize..6, a in raw_word(15), b in raw_word(15), c in raw_word(15)) {
        let sys = &all_systems()[which];
        let (a, b, c) = (element(sys, &a), element(sys, &b), element(sys, &c));
        let left = sys.multiply(&sys.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = sys.multiply(&a, &sys.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let inv = sys.inverse(&a).unwrap();
        prop_assert!(sys.multiply(&inv, &a).unwrap().is_identity());
        prop_assert_eq!(inv.length(), a.length());
    }

    #[test]
    fn bruhat_basics(which in 0usize..6, u in raw_word(14), w in raw_word(14)) {
        let sys = &all_systems()[which];
        let (u, w) = (element(sys, &u), element(sys, &w));
        prop_assert!(sys.bruhat_leq(&u, &u).unwrap());
        prop_assert!(sys.bruhat_leq(&sys.identity(), &w).unwrap());
        if sys.bruhat_leq(&u, &w).unwrap() && u != w {
            prop_assert!(u.length() < w.length());
            prop_assert!(!sys.bruhat_leq(&w, &u).unwrap());
        }
        // Subword property for the prefix u = first half of w's word.
        let letters = w.normal_form().letters();
        let prefix = sys.normal_form(&Word::new(letters[..letters.len() / 2].to_vec())).unwrap();
        prop_assert!(sys.bruhat_leq(&prefix, &w).unwrap());
    }

    #[test]
    fn convolution_extremes(which in 0usize..6, a in raw_word(12), b in raw_word(12)) {
        // Holds in infinite groups too: the sets are finite.
        let sys = &all_systems()[which];
        let (x1, x2) = (element(sys, &a), element(sys, &b));
        let set = convolution::convolve(sys, &x1, &x2).unwrap();
        let product = sys.multiply(&x1, &x2).unwrap();
        let star = convolution::demazure(sys, &x1, &x2).unwrap();
        prop_assert_eq!(convolution::min_of(sys, &set).unwrap(), product.clone());
        prop_assert_eq!(convolution::max_of(sys, &set).unwrap(), star.clone());
        prop_assert!(set.len() <= 1 << x2.length());
        if product.length() == x1.length() + x2.length() {
            prop_assert_eq!(set.len(), 1);
            prop_assert_eq!(&star, &product);
        }
        let reversed = convolution::convolve(sys, &sys.inverse(&x2).unwrap(), &sys.inverse(&x1).unwrap()).unwrap();
        for y in set.iter() {
            prop_assert!(reversed.contains(&sys.inverse(y).unwrap()));
        }
        prop_assert_eq!(reversed.len(), set.len());
    }

    #[test]
    fn interval_containment(which in 0usize..4, a in raw_word(12), b in raw_word(12)) {
        let sys = &finite_systems()[which];
        let (x1, x2) = (element(sys, &a), element(sys, &b));
        let report = convolution::exhaustion_report(sys, &x1, &x2).unwrap();
        prop_assert!(report.set.is_subset(&report.interval));
        prop_assert!(report.missing.is_disjoint(&report.set));
        prop_assert_eq!(report.missing.len() + report.set.len(), report.interval.len());
    }

    #[test]
    fn demazure_is_associative(which in 0usize..6, a in raw_word(12), b in raw_word(12), c in raw_word(12)) {
        let sys = &all_systems()[which];
        let (x, y, z) = (element(sys, &a), element(sys, &b), element(sys, &c));
        let d = |p: &Element, q: &Element| convolution::demazure(sys, p, q).unwrap();
        prop_assert_eq!(d(&d(&x, &y), &z), d(&x, &d(&y, &z)));
        // x ⋆ y lies above both x and y.
        let xy = d(&x, &y);
        prop_assert!(sys.bruhat_leq(&x, &xy).unwrap());
        prop_assert!(sys.bruhat_leq(&y, &xy).unwrap());
    }

    #[test]
    fn reduced_words_agree(which in 0usize..6, a in raw_word(10), b in raw_word(8)) {
        let sys = &all_systems()[which];
        let (x1, x2) = (element(sys, &a), element(sys, &b));
        let expected = convolution::convolve(sys, &x1, &x2).unwrap();
        for word in sys.reduced_words_capped(&x2, 32).unwrap() {
            prop_assert_eq!(&convolution::convolve_via_word(sys, &x1, &word).unwrap(), &expected);
        }
    }

    #[test]
    fn reflections_are_odd_and_closed(which in 0usize..6, t in raw_word(10), s in 0usize..12, x in raw_word(10)) {
        let sys = &all_systems()[which];
        let s = s % sys.rank();
        // x s x⁻¹ is always a reflection.
        let x = element(sys, &x);
        let conj = sys.multiply(&sys.mul_generator(&x, s).unwrap(), &sys.inverse(&x).unwrap()).unwrap();
        prop_assert!(sys.is_reflection(&conj).unwrap());
        prop_assert_eq!(conj.length() % 2, 1);
        let t = element(sys, &t);
        if sys.is_reflection(&t).unwrap() {
            prop_assert_eq!(t.length() % 2, 1);
            let c = sys.multiply(&sys.multiply(&x, &t).unwrap(), &sys.inverse(&x).unwrap()).unwrap();
            prop_assert!(sys.is_reflection(&c).unwrap());
        }
        // Even-length elements are never reflections.
        if t.length().is_multiple_of(2) {
            prop_assert!(!sys.is_reflection(&t).unwrap());
        }
    }
}

#[test]
fn lifting_property_a3() {
    let sys = CoxeterSystem::new(CoxeterMatrix::type_a(3).unwrap()).unwrap();
    let elements = sys.elements().unwrap();
    for w_prime in elements.iter() {
        for w in elements.iter() {
            if !sys.bruhat_leq(w_prime, w).unwrap() {
                continue;
            }
            for s in 0..3 {
                let a = sys.mul_generator(w_prime, s).unwrap();
                let ws = sys.mul_generator(w, s).unwrap();
                assert!(sys.bruhat_leq(&a, w).unwrap() || sys.bruhat_leq(&a, &ws).unwrap());
            }
        }
    }
}

#[test]
fn oracle_equivalence_small_groups() {
    let mut systems = vec![
        CoxeterMatrix::type_a(2).unwrap(),
        CoxeterMatrix::type_a(3).unwrap(),
        CoxeterMatrix::type_b(3).unwrap(),
    ];
    systems.extend((2..=8).map(|m| CoxeterMatrix::dihedral(Some(m)).unwrap()));
    for m in systems {
        let sys = CoxeterSystem::new(m).unwrap();
        let elements = sys.elements().unwrap();
        for u in elements.iter() {
            for w in elements.iter() {
                assert_eq!(sys.bruhat_leq(u, w).unwrap(), sys.bruhat_leq_oracle(u, w).unwrap());
            }
        }
    }
}
