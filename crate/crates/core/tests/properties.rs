mod common;

use std::collections::HashSet;

use amenity::algebra::{enumerate_basis, Element, Word};
use amenity::exactlin::FieldSpec;
use amenity::exhaustion::{ExponentSpec, MonomialPattern};
use amenity::folner::{folner_ratio, random_word_subspaces};
use amenity::growth::growth_sequence;
use amenity::paradox::{double_transversal, HallOutcome, TransversalInstance};
use amenity::rational::{format_ratio, parse_ratio, ratio, Rational};
use amenity::report::Interval;
use common::*;
use proptest::prelude::*;

#[test]
fn rank_nullity() {
    prop_rank_nullity(&mut runner(200)).unwrap();
}

#[test]
fn normal_form_idempotent_and_linear() {
    prop_normal_form(&mut runner(60)).unwrap();
}

#[test]
fn confluence_gate() {
    prop_confluence_gate(&mut runner(150)).unwrap();
}

#[test]
fn determinism() {
    prop_determinism(&mut runner(30)).unwrap();
}

#[test]
fn injectivity_on_domains() {
    prop_injectivity(&mut runner(60)).unwrap();
}

/// Doubled assignments by exhaustive search: two candidates per slot,
/// all `2m` chosen vectors independent.
fn brute_force_double(cands: &[Vec<u32>]) -> bool {
    let doubled: Vec<Vec<u32>> = cands.iter().flat_map(|c| [c.clone(), c.clone()]).collect();
    brute_force_transversal(&doubled)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hall_matches_brute_force((ambient, cands) in hall_instance()) {
        if let Err(e) = check_hall(ambient, &cands) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn double_transversal_matches_brute_force((ambient, cands) in hall_instance()) {
        let f = FieldSpec::new(2).unwrap();
        let inst = TransversalInstance::new(
            f,
            ambient,
            cands.iter().map(|s| s.iter().map(|&m| mask_to_sparse(f, m)).collect()).collect(),
        )
        .unwrap();
        let expected = brute_force_double(&cands);
        match double_transversal(&inst) {
            HallOutcome::Found(t) => {
                prop_assert!(expected);
                prop_assert!(t.verify(&inst));
                let picked: Vec<u32> = (0..cands.len()).flat_map(|i| [cands[i][t.phi[i]], cands[i][t.psi[i]]]).collect();
                prop_assert_eq!(gf2_rank(&picked), 2 * cands.len());
            }
            HallOutcome::Deficient(w) => {
                prop_assert!(!expected);
                prop_assert!(w.verify(&inst));
                let span: Vec<u32> = w.slots.iter().flat_map(|&i| cands[i].iter().copied()).collect();
                prop_assert!(gf2_rank(&span) < 2 * w.slots.len());
            }
        }
    }

    #[test]
    fn ratio_text_round_trip(a in 0u64..10_000, b in 1u64..10_000) {
        let q = Rational::new(a, b);
        prop_assert_eq!(parse_ratio(&format_ratio(&q)).unwrap(), q);
    }

    #[test]
    fn tail_interval_brackets_the_tail(values in prop::collection::vec((0u64..50, 1u64..50), 3..30)) {
        let qs: Vec<Rational> = values.iter().map(|&(a, b)| Rational::new(a, b)).collect();
        let iv = Interval::of_tail(&qs, Rational::new(1, 100)).unwrap();
        let tail = &qs[qs.len() - qs.len().div_ceil(3)..];
        prop_assert!(iv.liminf <= iv.limsup);
        prop_assert!(tail.iter().all(|q| iv.liminf <= *q && *q <= iv.limsup));
        prop_assert!(tail.contains(&iv.liminf) && tail.contains(&iv.limsup));
    }

    #[test]
    fn pattern_words_match_exponent_ranges(n in 0u64..6, a in 0u64..4, b in 0u64..3) {
        let pat = MonomialPattern {
            factors: vec![(0, ExponentSpec::parse("n").unwrap()), (1, ExponentSpec::parse(&format!("{a}..{}", a + b)).unwrap())],
        };
        let words: HashSet<Word> = pat.words(n).into_iter().collect();
        let expected: HashSet<Word> = (0..=n)
            .flat_map(|i| (a..=a + b).map(move |j| {
                let mut w = vec![0u16; i as usize];
                w.extend(std::iter::repeat_n(1u16, j as usize));
                Word::new(w)
            }))
            .collect();
        prop_assert_eq!(words, expected);
        prop_assert_eq!(pat.max_degree(n), n + a + b);
    }

    #[test]
    fn folner_ratio_of_word_sets_in_free2(seed in 0u64..1000) {
        // For a set of words V and a letter g, dim(Vg + V) counts V ∪ Vg.
        let pres = bundled("free2");
        let win = enumerate_basis(&pres, 5).unwrap();
        let v = random_word_subspaces(&win, 1, 4, seed).pop().unwrap();
        let words: Vec<String> = win.basis_words(&v).unwrap().iter().map(|w| pres.format_word(w).replace('*', "")).collect();
        for (g, letter) in [("x", "x"), ("y", "y")] {
            let mut union: HashSet<String> = words.iter().map(|w| if w == "1" { String::new() } else { w.clone() }).collect();
            let base = union.len();
            for w in union.clone() {
                union.insert(format!("{w}{letter}"));
            }
            let q = folner_ratio(&pres, &v, &pres.parse_element(g).unwrap(), &win).unwrap();
            prop_assert_eq!(q, ratio(union.len(), base));
        }
    }

    #[test]
    fn commutative_normal_form_sorts_letters(letters in prop::collection::vec(0u16..2, 0..10)) {
        let pres = bundled("polyxy");
        let nf = pres.normal_form(&Element::word(Word::new(letters.clone())));
        let mut sorted = letters;
        sorted.sort_unstable();
        prop_assert_eq!(nf, Element::word(Word::new(sorted)));
    }
}

#[test]
fn free_growth_is_geometric() {
    let pres = bundled("free2");
    let win = enumerate_basis(&pres, 8).unwrap();
    let g = growth_sequence(&pres, &pres.generator_elements(), 8, &win).unwrap();
    let expected: Vec<usize> = (0..=8).map(|m| (1 << (m + 1)) - 1).collect();
    assert_eq!(g.d, expected);
    let counted: Vec<usize> = (0..=8).map(|m| all_words(&['x', 'y'], m).len()).collect();
    assert_eq!(g.d, counted);
}
