//! Independent oracles and property checks shared by the integration tests.
//! Nothing here goes through the library's rewriting or linear algebra.

#![allow(dead_code)]

use std::collections::HashSet;

use amenity::algebra::{enumerate_basis, right_multiply_subspace, AlgebraPresentation, Element, Word};
use amenity::exactlin::{rank_of, FieldSpec, RowSpace, SparseVec};
use amenity::paradox::{hall_transversal, HallOutcome, TransversalInstance};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub fn bundled(name: &str) -> AlgebraPresentation {
    amenity::bundled::load(name).expect("bundled name").expect("bundled presentations parse")
}

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

// ---------------------------------------------------------------- words

/// All strings over `alphabet` of length at most `d`.
pub fn all_words(alphabet: &[char], d: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..d {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Monomial count of `W·x + W` and `W` in K[x, y] with `W` the ball of
/// radius `n`, by listing exponent pairs.
pub fn polyxy_ratio(n: u64, by_x: bool) -> (usize, usize) {
    let w: HashSet<(u64, u64)> = (0..=n).flat_map(|a| (0..=n - a).map(move |b| (a, b))).collect();
    let mut grown = w.clone();
    for &(a, b) in &w {
        grown.insert(if by_x { (a + 1, b) } else { (a, b + 1) });
    }
    (grown.len(), w.len())
}

/// Normal words of `K<x,y>/(xx, xy)` lie in `{y^a, y^a x}`; a string is
/// zero exactly when it contains `xx` or `xy`.
pub fn ex33_nonzero(w: &str) -> bool {
    !w.contains("xx") && !w.contains("xy")
}

pub fn ex33_level(n: u64, square: bool) -> Vec<String> {
    let top = if square { n * n } else { n };
    let mut out: Vec<String> = (0..=n).map(|a| "y".repeat(a as usize)).collect();
    out.extend((0..=top).map(|a| format!("{}x", "y".repeat(a as usize))));
    out
}

/// Number of distinct nonzero words among `w·g` for `w` in `level`, `g` in `gens`.
pub fn ex33_translate_count(level: &[String], gens: &[&str]) -> usize {
    let mut seen = HashSet::new();
    for w in level {
        for g in gens {
            let p = format!("{w}{g}");
            if ex33_nonzero(&p) {
                seen.insert(p);
            }
        }
    }
    seen.len()
}

// ---------------------------------------------------------------- GF(2)

/// Rank over GF(2) of bitmask vectors, by elimination on machine words.
pub fn gf2_rank(vs: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vs {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub fn mask_to_sparse(f: FieldSpec, m: u32) -> SparseVec {
    SparseVec::from_pairs(f, (0..32).filter(|i| m >> i & 1 == 1).map(|i| (i, 1)))
}

/// Whether some choice of one candidate per slot is independent, by
/// trying every assignment.
pub fn brute_force_transversal(cands: &[Vec<u32>]) -> bool {
    fn go(cands: &[Vec<u32>], i: usize, picked: &mut Vec<u32>) -> bool {
        if i == cands.len() {
            return gf2_rank(picked) == picked.len();
        }
        for &c in &cands[i] {
            picked.push(c);
            if gf2_rank(picked) == picked.len() && go(cands, i + 1, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    go(cands, 0, &mut Vec::new())
}

/// `(m slots, k candidates per slot, ambient)` with GF(2) bitmask candidates.
pub fn hall_instance() -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (1usize..=8, 1usize..=6, 1usize..=3).prop_flat_map(|(ambient, m, k)| {
        let v = 0u32..(1 << ambient);
        (Just(ambient), prop::collection::vec(prop::collection::vec(v, 1..=k), m))
    })
}

/// Classification check against brute force; returns a description on mismatch.
pub fn check_hall(ambient: usize, cands: &[Vec<u32>]) -> Result<(), String> {
    let f = FieldSpec::new(2).unwrap();
    let inst = TransversalInstance::new(
        f,
        ambient,
        cands.iter().map(|s| s.iter().map(|&m| mask_to_sparse(f, m)).collect()).collect(),
    )
    .map_err(|e| e.to_string())?;
    let expected = brute_force_transversal(cands);
    match hall_transversal(&inst) {
        HallOutcome::Found(t) => {
            if !expected {
                return Err(format!("found a transversal the oracle rules out: {cands:?}"));
            }
            if !t.verify(&inst) {
                return Err("returned transversal does not verify".into());
            }
            let picked: Vec<u32> = t.phi.iter().enumerate().map(|(i, &j)| cands[i][j]).collect();
            if gf2_rank(&picked) != cands.len() {
                return Err("returned transversal is not of full rank".into());
            }
        }
        HallOutcome::Deficient(w) => {
            if expected {
                return Err(format!("witness returned but a transversal exists: {cands:?}"));
            }
            let span: Vec<u32> = w.slots.iter().flat_map(|&i| cands[i].iter().copied()).collect();
            if w.slots.is_empty() || gf2_rank(&span) >= w.slots.len() || gf2_rank(&span) != w.dim || !w.verify(&inst) {
                return Err(format!("witness does not violate the Hall bound: {w:?}"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- properties

pub fn random_sparse(p: u64, ambient: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec((0..ambient, 0..p as u32), 0..=ambient)
        .prop_map(move |pairs| SparseVec::from_pairs(FieldSpec::new(p).unwrap(), pairs))
}

/// `dim(U + V) + dim(U ∩ V) = dim U + dim V`, and row rank equals column rank.
pub fn prop_rank_nullity(runner: &mut TestRunner) -> Result<(), String> {
    let strat = (1usize..=7, prop::sample::select(vec![2u64, 3, 7, 32003])).prop_flat_map(|(n, p)| {
        (
            Just(n),
            Just(p),
            prop::collection::vec(random_sparse(p, n), 0..=6),
            prop::collection::vec(random_sparse(p, n), 0..=6),
        )
    });
    runner
        .run(&strat, |(n, p, us, vs)| {
            let f = FieldSpec::new(p).unwrap();
            let u = RowSpace::span(f, n, us.clone()).unwrap();
            let v = RowSpace::span(f, n, vs.clone()).unwrap();
            let s = u.sum(&v).unwrap();
            let i = u.intersection(&v).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            prop_assert!(s.contains_space(&u).unwrap() && s.contains_space(&v).unwrap());
            prop_assert!(u.contains_space(&i).unwrap() && v.contains_space(&i).unwrap());
            let rows = us.len();
            let transposed: Vec<SparseVec> = (0..n)
                .map(|c| SparseVec::from_pairs(f, us.iter().enumerate().map(|(r, x)| (r, x.get(c)))))
                .collect();
            prop_assert_eq!(rank_of(f, n, &us).unwrap(), rank_of(f, rows.max(1), &transposed).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn random_element(pres: &AlgebraPresentation, max_len: usize) -> impl Strategy<Value = Element> {
    let g = pres.n_generators() as u16;
    let p = pres.field().characteristic() as u32;
    prop::collection::vec((prop::collection::vec(0..g, 0..=max_len), 1..p), 1..=4).prop_map(move |terms| {
        let mut e = Element::zero();
        let f = FieldSpec::new(p as u64).unwrap();
        for (w, c) in terms {
            e.add_term(f, Word::new(w), c);
        }
        e
    })
}

/// Normal forms are idempotent and linear, on each bundled presentation.
pub fn prop_normal_form(runner: &mut TestRunner) -> Result<(), String> {
    for name in ["free2", "polyxy", "ex33", "z2grp", "f2grp"] {
        let pres = bundled(name);
        let f = pres.field();
        let strat = (random_element(&pres, 6), random_element(&pres, 6), 1u32..32003);
        runner
            .run(&strat, |(a, b, c)| {
                let na = pres.normal_form(&a);
                prop_assert_eq!(pres.normal_form(&na), na.clone());
                for w in na.words() {
                    prop_assert!(pres.is_normal_word(w));
                }
                let lhs = pres.normal_form(&a.sum(f, &b.scaled(f, c)));
                let rhs = na.sum(f, &pres.normal_form(&b).scaled(f, c));
                prop_assert_eq!(lhs, rhs);
                Ok(())
            })
            .map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

/// Monomial relations are always confluent, with a basis of the words that
/// avoid every relation; `xy -> c·x, yx -> y` never is.
pub fn prop_confluence_gate(runner: &mut TestRunner) -> Result<(), String> {
    let words = prop::collection::vec(prop::collection::vec(prop::sample::select(vec!['x', 'y']), 2..=3), 1..=3);
    let strat = (words, 1u32..32003);
    runner
        .run(&strat, |(lhs, c)| {
            let lhs: Vec<String> = lhs.into_iter().map(|w| w.into_iter().collect()).collect();
            let rules: Vec<String> = lhs
                .iter()
                .map(|w| {
                    let star: Vec<String> = w.chars().map(String::from).collect();
                    format!(r#"{{"lhs":"{}","rhs":"0"}}"#, star.join("*"))
                })
                .collect();
            let json = format!(r#"{{"generators":["x","y"],"rules":[{}]}}"#, rules.join(","));
            let pres = AlgebraPresentation::from_json(&json).unwrap();
            let win = enumerate_basis(&pres, 5).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let expected = all_words(&['x', 'y'], 5)
                .into_iter()
                .filter(|w| lhs.iter().all(|l| !w.contains(l.as_str())))
                .count();
            prop_assert_eq!(win.len(), expected);

            let bad = format!(
                r#"{{"generators":["x","y"],"rules":[{{"lhs":"x*y","rhs":"{c}*x"}},{{"lhs":"y*x","rhs":"y"}}]}}"#
            );
            let pres = AlgebraPresentation::from_json(&bad).unwrap();
            let rejected = matches!(enumerate_basis(&pres, 4), Err(amenity::Error::NonConfluent { .. }));
            prop_assert!(rejected, "non-confluent system accepted");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Two runs of the same search serialize to identical bytes.
pub fn prop_determinism(runner: &mut TestRunner) -> Result<(), String> {
    let polyxy = bundled("polyxy");
    let free2 = bundled("free2");
    let strat = (1u64..=6, 1u64..=4, 1usize..=4);
    runner
        .run(&strat, |(num, den, d)| {
            let eps = amenity::rational::ratio(num as usize, (den * 4) as usize);
            let ex = amenity::exhaustion::ExhaustionSpec::generator_balls(&polyxy);
            let s = polyxy.generator_elements();
            let run = || {
                let win = enumerate_basis(&polyxy, 9).unwrap();
                let out = amenity::folner::folner_search(&polyxy, &s, eps, &ex, 8, &win).unwrap();
                serde_json::to_vec(&out).unwrap()
            };
            prop_assert_eq!(run(), run());
            let para = || {
                let win = enumerate_basis(&free2, d + 1).unwrap();
                let out = amenity::paradox::build_paradox(&free2, &free2.generator_elements(), d, &win).unwrap();
                serde_json::to_vec(&out).unwrap()
            };
            prop_assert_eq!(para(), para());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// On a domain, right multiplication by a nonzero element preserves dimension.
pub fn prop_injectivity(runner: &mut TestRunner) -> Result<(), String> {
    for name in ["free2", "polyxy", "z2grp", "f2grp"] {
        let pres = bundled(name);
        let win = enumerate_basis(&pres, 6).unwrap();
        let cols = win.columns_up_to(3);
        let strat = (
            prop::collection::vec(random_element(&pres, 3), 1..=5),
            prop::collection::vec(0..cols, 1..=8),
            random_element(&pres, 2),
        );
        runner
            .run(&strat, |(gens, picks, r)| {
                let r = pres.normal_form(&r);
                if r.is_zero() || r.degree() > 3 {
                    return Ok(());
                }
                let mut span: Vec<Element> = gens
                    .iter()
                    .map(|g| pres.normal_form(g))
                    .filter(|g| g.degree() <= 3)
                    .collect();
                span.extend(picks.iter().map(|&c| Element::word(win.word(c).clone())));
                let w = win.span(&span).unwrap();
                let wr = right_multiply_subspace(&pres, &w, &r, &win).unwrap();
                prop_assert_eq!(wr.dim(), w.dim());
                Ok(())
            })
            .map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}
