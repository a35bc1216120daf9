//! Følner ratios `dim(W·r + W)/dim W`, certificate search and verification,
//! the doubling probe, the nested exhaustion `V̄_1 ⊆ V_1 ⊆ V̄_2 ⊆ …`, and
//! the Goldie intersection witness.
//!
//! A failed search is inconclusive: a finite window can exhibit small
//! ratios but never prove their absence.

use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_basis, right_multiply_by_set, right_multiply_subspace, AlgebraPresentation, CoordinateWindow, Element};
use crate::error::{Error, Result};
use crate::exactlin::RowSpace;
use crate::exhaustion::ExhaustionSpec;
use crate::rational::{ratio, serde_ratio, serde_ratio_vec, Rational};

/// `dim(W·r + W) / dim W`.
pub fn folner_ratio(pres: &AlgebraPresentation, w: &RowSpace, r: &Element, window: &CoordinateWindow) -> Result<Rational> {
    if w.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let moved = right_multiply_subspace(pres, w, r, window)?.sum(w)?;
    Ok(ratio(moved.dim(), w.dim()))
}

fn max_ratio(ratios: &[Rational]) -> Rational {
    ratios.iter().copied().max().unwrap_or_else(|| Rational::from_integer(1))
}

/// Largest `m` with every normal word of degree `<= m` in `w`; `None` when
/// even the degree-0 words are missing.
pub fn covered_ball(w: &RowSpace, window: &CoordinateWindow) -> Option<usize> {
    let mut best = None;
    for m in 0..=window.degree_bound() {
        let cols = window.columns_up_to(m);
        let inside = (0..cols).all(|c| w.reduce(&crate::exactlin::SparseVec::unit(c)).is_zero());
        if !inside {
            break;
        }
        best = Some(m);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerCertificate {
    pub algebra_hash: String,
    pub degree_bound: usize,
    /// Level `n` of the exhaustion that produced `W`, if any.
    pub level: Option<usize>,
    pub exhaustion: String,
    /// Basis of `W` as canonical element strings.
    pub subspace: Vec<String>,
    pub dim: usize,
    pub test_set: Vec<String>,
    #[serde(with = "serde_ratio")]
    pub epsilon: Rational,
    /// `dim(W·r + W)/dim W` for each `r` in the test set, in order.
    #[serde(with = "serde_ratio_vec")]
    pub ratios: Vec<Rational>,
    #[serde(with = "serde_ratio")]
    pub max_ratio: Rational,
    /// Largest `m` with `W ⊇ ball(m)` of the generators. A finite
    /// certificate cannot show that the family exhausts the algebra; this
    /// records how much of it the certified subspace covers.
    pub covers_ball: Option<usize>,
}

impl FolnerCertificate {
    pub fn build(
        pres: &AlgebraPresentation,
        w: &RowSpace,
        s: &[Element],
        epsilon: Rational,
        window: &CoordinateWindow,
        level: Option<usize>,
        exhaustion: String,
    ) -> Result<Self> {
        let ratios = s
            .iter()
            .map(|r| folner_ratio(pres, w, r, window))
            .collect::<Result<Vec<_>>>()?;
        Ok(FolnerCertificate {
            algebra_hash: pres.content_hash(),
            degree_bound: window.degree_bound(),
            level,
            exhaustion,
            subspace: window.elements_of(w).iter().map(|e| pres.format_element(e)).collect(),
            dim: w.dim(),
            test_set: s.iter().map(|e| pres.format_element(e)).collect(),
            epsilon,
            max_ratio: max_ratio(&ratios),
            ratios,
            covers_ball: covered_ball(w, window),
        })
    }

    pub fn within_epsilon(&self) -> bool {
        let bound = Rational::from_integer(1) + self.epsilon;
        self.ratios.iter().all(|r| *r <= bound)
    }
}

/// Outcome of recomputing a certificate from its own data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub ratios: Vec<Rational>,
    pub within_epsilon: bool,
    pub matches_recorded: bool,
}

/// Rebuilds `W` and `S` from the certificate's strings and recomputes every
/// ratio. The verdict depends only on the recomputed ratios.
pub fn recompute_certificate(pres: &AlgebraPresentation, cert: &FolnerCertificate) -> Result<Verification> {
    if cert.algebra_hash != pres.content_hash() {
        return Err(Error::Invalid("certificate was issued for a different algebra".into()));
    }
    let window = enumerate_basis(pres, cert.degree_bound)?;
    let elems = cert
        .subspace
        .iter()
        .map(|t| pres.parse_element(t))
        .collect::<Result<Vec<_>>>()?;
    let w = window.span(&elems)?;
    let s = cert
        .test_set
        .iter()
        .map(|t| pres.parse_element(t))
        .collect::<Result<Vec<_>>>()?;
    let ratios = s
        .iter()
        .map(|r| folner_ratio(pres, &w, r, &window))
        .collect::<Result<Vec<_>>>()?;
    let bound = Rational::from_integer(1) + cert.epsilon;
    Ok(Verification {
        within_epsilon: ratios.iter().all(|r| *r <= bound),
        matches_recorded: ratios == cert.ratios && w.dim() == cert.dim,
        ratios,
    })
}

pub fn verify_certificate(pres: &AlgebraPresentation, cert: &FolnerCertificate) -> Result<bool> {
    Ok(recompute_certificate(pres, cert)?.within_epsilon)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(FolnerCertificate),
    /// No level up to `n_max` qualified. `best` is the level with the
    /// smallest worst-case ratio seen.
    Inconclusive {
        n_max: usize,
        best_level: Option<usize>,
        #[serde(with = "crate::rational::serde_ratio_opt")]
        best_ratio: Option<Rational>,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&FolnerCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Evaluates `W_1, W_2, …, W_{n_max}` in order and returns the first level
/// whose ratios are all at most `1 + epsilon`.
pub fn folner_search(
    pres: &AlgebraPresentation,
    s: &[Element],
    epsilon: Rational,
    exhaustion: &ExhaustionSpec,
    n_max: usize,
    window: &CoordinateWindow,
) -> Result<SearchOutcome> {
    let bound = Rational::from_integer(1) + epsilon;
    let deg_s = s.iter().map(Element::degree).max().unwrap_or(0);
    let mut prev: Option<RowSpace> = None;
    let mut best: Option<(usize, Rational)> = None;
    for n in 1..=n_max {
        let w = exhaustion.evaluate(pres, n, window)?;
        if let Some(p) = &prev {
            if !w.contains_space(p)? {
                return Err(Error::NotNested(n - 1, n));
            }
        }
        let needed = window.subspace_degree(&w) + deg_s;
        if needed > window.degree_bound() {
            return Err(Error::overflow(needed, window.degree_bound()).at_level(n));
        }
        let mut ratios = Vec::with_capacity(s.len());
        for r in s {
            let q = folner_ratio(pres, &w, r, window).map_err(|e| e.at_level(n))?;
            ratios.push(q);
            if q > bound {
                break;
            }
        }
        let worst = max_ratio(&ratios);
        if ratios.len() == s.len() && worst <= bound {
            let cert = FolnerCertificate::build(pres, &w, s, epsilon, window, Some(n), exhaustion.describe(pres))?;
            return Ok(SearchOutcome::Found(cert));
        }
        // Levels abandoned early only have a lower bound for their worst ratio.
        if ratios.len() == s.len() && best.is_none_or(|(_, b)| worst < b) {
            best = Some((n, worst));
        }
        prev = Some(w);
    }
    Ok(SearchOutcome::Inconclusive {
        n_max,
        best_level: best.map(|b| b.0),
        best_ratio: best.map(|b| b.1),
    })
}

/// Greedy exploration: start from the words of degree `<= 1` and add, one at
/// a time, the normal word that minimizes the worst ratio, ties broken by
/// deglex order. Stops at the first subspace within `1 + epsilon`.
pub fn greedy_monomial_search(
    pres: &AlgebraPresentation,
    s: &[Element],
    epsilon: Rational,
    max_steps: usize,
    window: &CoordinateWindow,
) -> Result<SearchOutcome> {
    let bound = Rational::from_integer(1) + epsilon;
    let deg_s = s.iter().map(Element::degree).max().unwrap_or(0);
    if deg_s + 1 > window.degree_bound() {
        return Err(Error::overflow(deg_s + 1, window.degree_bound()));
    }
    let eligible = window.columns_up_to(window.degree_bound() - deg_s);
    let mut cols: Vec<usize> = (0..window.columns_up_to(1)).collect();
    let worst_of = |cols: &[usize]| -> Result<Rational> {
        let w = RowSpace::coordinate(window.field(), window.len(), cols.iter().copied());
        let mut worst = Rational::from_integer(1);
        for r in s {
            worst = worst.max(folner_ratio(pres, &w, r, window)?);
        }
        Ok(worst)
    };
    let mut current = worst_of(&cols)?;
    let mut best = (0usize, current);
    for step in 0..=max_steps {
        if current <= bound {
            let w = RowSpace::coordinate(window.field(), window.len(), cols.iter().copied());
            let cert = FolnerCertificate::build(pres, &w, s, epsilon, window, None, format!("greedy({step} steps)"))?;
            return Ok(SearchOutcome::Found(cert));
        }
        if step == max_steps {
            break;
        }
        let mut choice: Option<(Rational, usize)> = None;
        for c in 0..eligible {
            if cols.contains(&c) {
                continue;
            }
            let mut trial = cols.clone();
            trial.push(c);
            let q = worst_of(&trial)?;
            if choice.is_none_or(|(b, _)| q < b) {
                choice = Some((q, c));
            }
        }
        let Some((q, c)) = choice else { break };
        cols.push(c);
        current = q;
        if q < best.1 {
            best = (step + 1, q);
        }
    }
    Ok(SearchOutcome::Inconclusive {
        n_max: max_steps,
        best_level: Some(best.0),
        best_ratio: Some(best.1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingEntry {
    pub dim: usize,
    /// `dim(VZ + V)/dim V`
    #[serde(with = "serde_ratio")]
    pub sum_ratio: Rational,
    /// `dim(VZ)/dim V`
    #[serde(with = "serde_ratio")]
    pub product_ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub entries: Vec<DoublingEntry>,
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub min_sum_ratio: Option<Rational>,
    #[serde(with = "crate::rational::serde_ratio_opt")]
    pub min_product_ratio: Option<Rational>,
}

/// Ratios `dim(VZ + V)/dim V` and `dim(VZ)/dim V` for each `V` of the
/// family, where `Z` is spanned by `z`. The minima are evidence only.
pub fn doubling_probe(
    pres: &AlgebraPresentation,
    z: &[Element],
    family: &[RowSpace],
    window: &CoordinateWindow,
) -> Result<DoublingReport> {
    let mut entries = Vec::with_capacity(family.len());
    for v in family {
        if v.is_zero() {
            return Err(Error::ZeroSubspace);
        }
        let vz = right_multiply_by_set(pres, v, z, window)?;
        entries.push(DoublingEntry {
            dim: v.dim(),
            sum_ratio: ratio(vz.sum(v)?.dim(), v.dim()),
            product_ratio: ratio(vz.dim(), v.dim()),
        });
    }
    Ok(DoublingReport {
        min_sum_ratio: entries.iter().map(|e| e.sum_ratio).min(),
        min_product_ratio: entries.iter().map(|e| e.product_ratio).min(),
        entries,
    })
}

/// How the auxiliary subspace `Z_n` is chosen at each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZSchedule {
    /// The same `Z` (the span of these elements) at every level.
    Fixed(Vec<Element>),
    /// `Z = W_k` for the level's base index `k`.
    BaseLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedLevel {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub inner_dim: usize,
    pub outer_dim: usize,
    /// `dim V̄_n / dim V_n`
    #[serde(with = "serde_ratio")]
    pub inner_ratio: Rational,
    /// `dim(V_n Z + V_n) / dim W_l`, at most `1 + 2^{-n}`.
    #[serde(with = "serde_ratio")]
    pub threshold_ratio: Rational,
    /// `V̄_n + V̄_n Z ⊆ V_n` and `V_{n-1} ⊆ V̄_n`, rechecked.
    pub containment: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedExhaustion {
    pub levels: Vec<NestedLevel>,
    /// Why the construction stopped before `n_max`, if it did.
    pub stopped: Option<String>,
    #[serde(skip)]
    pub spaces: Vec<(RowSpace, RowSpace)>,
}

/// Follows the inductive construction: at level `n` take the least `k`
/// with `V_{n-1} ⊆ W_k`, then the least `l > k` (and beyond the previous
/// `l`) with `dim((W_l Z + W_l)Z + (W_l Z + W_l)) <= (1 + 2^{-n}) dim W_l`,
/// and set `V̄_n = W_l`, `V_n = W_l Z + W_l`.
pub fn nested_exhaustion(
    pres: &AlgebraPresentation,
    base: &ExhaustionSpec,
    schedule: &ZSchedule,
    n_max: usize,
    window: &CoordinateWindow,
) -> Result<NestedExhaustion> {
    let mut out = NestedExhaustion {
        levels: Vec::new(),
        stopped: None,
        spaces: Vec::new(),
    };
    let mut prev_outer = window.zero_space();
    let mut prev_l = 0usize;
    'levels: for n in 1..=n_max {
        let mut k = 1;
        let wk = loop {
            match base.evaluate(pres, k, window) {
                Ok(wk) if wk.contains_space(&prev_outer)? => break wk,
                Ok(_) => k += 1,
                Err(e) if e.is_truncation() => {
                    out.stopped = Some(format!("level {n}: no base index k covers V_{} within the window", n - 1));
                    break 'levels;
                }
                Err(e) => return Err(e),
            }
        };
        let z = match schedule {
            ZSchedule::Fixed(z) => z.clone(),
            ZSchedule::BaseLevel => window.elements_of(&wk),
        };
        let threshold = Rational::from_integer(1) + Rational::new(1, 1u64 << n.min(63));
        let mut l = k.max(prev_l) + 1;
        loop {
            let step = base.evaluate(pres, l, window).and_then(|wl| {
                let outer = right_multiply_by_set(pres, &wl, &z, window)?.sum(&wl)?;
                let grown = right_multiply_by_set(pres, &outer, &z, window)?.sum(&outer)?;
                Ok((wl, outer, grown))
            });
            match step {
                Ok((wl, outer, grown)) => {
                    let q = ratio(grown.dim(), wl.dim());
                    if q <= threshold {
                        let translate = right_multiply_by_set(pres, &wl, &z, window)?.sum(&wl)?;
                        let containment = outer.contains_space(&translate)? && wl.contains_space(&prev_outer)?;
                        out.levels.push(NestedLevel {
                            n,
                            k,
                            l,
                            inner_dim: wl.dim(),
                            outer_dim: outer.dim(),
                            inner_ratio: ratio(wl.dim(), outer.dim()),
                            threshold_ratio: q,
                            containment,
                        });
                        prev_outer = outer.clone();
                        out.spaces.push((wl, outer));
                        prev_l = l;
                        break;
                    }
                    l += 1;
                }
                Err(e) if e.is_truncation() => {
                    out.stopped = Some(format!(
                        "level {n}: no l <= {} meets the threshold 1 + 1/2^{n} within the window",
                        l - 1
                    ));
                    break 'levels;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldieWitness {
    pub n: usize,
    pub intersection_dim: usize,
    /// Basis of `W_n a ∩ W_n b` as element strings.
    pub intersection: Vec<String>,
}

/// First `n <= n_max` with `W_n a ∩ W_n b ≠ 0`.
pub fn goldie_witness(
    pres: &AlgebraPresentation,
    a: &Element,
    b: &Element,
    exhaustion: &ExhaustionSpec,
    n_max: usize,
    window: &CoordinateWindow,
) -> Result<Option<GoldieWitness>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    for n in 1..=n_max {
        let w = exhaustion.evaluate(pres, n, window)?;
        let wa = right_multiply_subspace(pres, &w, a, window).map_err(|e| e.at_level(n))?;
        let wb = right_multiply_subspace(pres, &w, b, window).map_err(|e| e.at_level(n))?;
        let meet = wa.intersection(&wb)?;
        if !meet.is_zero() {
            return Ok(Some(GoldieWitness {
                n,
                intersection_dim: meet.dim(),
                intersection: window.elements_of(&meet).iter().map(|e| pres.format_element(e)).collect(),
            }));
        }
    }
    Ok(None)
}

/// `count` subspaces, each spanned by a nonempty random set of normal words
/// of degree `<= max_degree`. Deterministic in `seed`.
pub fn random_word_subspaces(window: &CoordinateWindow, count: usize, max_degree: usize, seed: u64) -> Vec<RowSpace> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cols = window.columns_up_to(max_degree);
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=cols.clamp(1, 40));
            let picks: Vec<usize> = (0..size).map(|_| rng.gen_range(0..cols)).collect();
            RowSpace::coordinate(window.field(), window.len(), picks)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(json: &str) -> AlgebraPresentation {
        AlgebraPresentation::from_json(json).unwrap()
    }

    const POLYXY: &str = r#"{"generators":["x","y"],"rules":[{"lhs":"y*x","rhs":"x*y"}]}"#;
    const FREE2: &str = r#"{"generators":["x","y"]}"#;
    const KX: &str = r#"{"generators":["x"]}"#;

    #[test]
    fn ratios() {
        let kx = pres(KX);
        let win = enumerate_basis(&kx, 12).unwrap();
        let w = win.ball_words(9);
        assert_eq!(folner_ratio(&kx, &w, &kx.parse_element("x").unwrap(), &win).unwrap(), Rational::new(11, 10));
        assert_eq!(folner_ratio(&kx, &w, &Element::unit(), &win).unwrap(), Rational::from_integer(1));
        let free = pres(FREE2);
        let win = enumerate_basis(&free, 3).unwrap();
        let q = folner_ratio(&free, &win.ball_words(1), &free.parse_element("x").unwrap(), &win).unwrap();
        assert_eq!(q, Rational::new(5, 3));
        assert_eq!(folner_ratio(&free, &win.zero_space(), &Element::unit(), &win), Err(Error::ZeroSubspace));
    }

    #[test]
    fn search_polyxy() {
        let p = pres(POLYXY);
        let win = enumerate_basis(&p, 22).unwrap();
        let ex = ExhaustionSpec::generator_balls(&p);
        let out = folner_search(&p, &p.generator_elements(), Rational::new(1, 10), &ex, 21, &win).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.level, Some(18));
        assert_eq!(cert.max_ratio, Rational::new(11, 10));
        assert_eq!(cert.covers_ball, Some(18));
        assert!(verify_certificate(&p, cert).unwrap());
        let mut tampered = cert.clone();
        tampered.epsilon = Rational::new(1, 20);
        assert!(!verify_certificate(&p, &tampered).unwrap());
    }

    #[test]
    fn search_free_is_inconclusive() {
        let p = pres(FREE2);
        let win = enumerate_basis(&p, 11).unwrap();
        let ex = ExhaustionSpec::generator_balls(&p);
        let out = folner_search(&p, &p.generator_elements(), Rational::new(1, 2), &ex, 10, &win).unwrap();
        assert!(out.certificate().is_none());
        let err = folner_search(&p, &p.generator_elements(), Rational::new(1, 2), &ex, 11, &win).unwrap_err();
        assert_eq!(err, Error::overflow(12, 11).at_level(11));
    }

    #[test]
    fn greedy_finds_something_in_kx() {
        let kx = pres(KX);
        let win = enumerate_basis(&kx, 15).unwrap();
        let out = greedy_monomial_search(&kx, &kx.generator_elements(), Rational::new(1, 5), 20, &win).unwrap();
        let cert = out.certificate().unwrap();
        assert!(verify_certificate(&kx, cert).unwrap());
    }

    #[test]
    fn doubling() {
        let free = pres(FREE2);
        let win = enumerate_basis(&free, 4).unwrap();
        let rep = doubling_probe(&free, &free.generator_elements(), &[win.ball_words(2)], &win).unwrap();
        assert_eq!(rep.min_product_ratio, Some(Rational::from_integer(2)));

        let f2 = pres(
            r#"{"generators":["x","X","y","Y"],"rules":[{"lhs":"x*X","rhs":"1"},{"lhs":"X*x","rhs":"1"},{"lhs":"y*Y","rhs":"1"},{"lhs":"Y*y","rhs":"1"}]}"#,
        );
        let win = enumerate_basis(&f2, 4).unwrap();
        let rep = doubling_probe(&f2, &f2.generator_elements(), &[win.ball_words(3)], &win).unwrap();
        assert_eq!(rep.entries[0].product_ratio, Rational::new(161, 53));
    }

    #[test]
    fn nested_kx() {
        let kx = pres(KX);
        let win = enumerate_basis(&kx, 40).unwrap();
        let z = kx.parse_list("1, x").unwrap();
        let ne = nested_exhaustion(&kx, &ExhaustionSpec::generator_balls(&kx), &ZSchedule::Fixed(z), 6, &win).unwrap();
        // (l+3)/(l+1) <= 1 + 2^{-n} first holds at l = 2^{n+1} - 1
        let ls: Vec<usize> = ne.levels.iter().map(|l| l.l).collect();
        assert_eq!(ls, [3, 7, 15, 31]);
        for (lvl, (inner, outer)) in ne.levels.iter().zip(&ne.spaces) {
            assert!(lvl.containment);
            assert_eq!(*inner, win.ball_words(lvl.l));
            assert_eq!(*outer, win.ball_words(lvl.l + 1));
        }
        assert!(ne.stopped.is_some());
    }

    #[test]
    fn nested_free_fails() {
        let free = pres(FREE2);
        let win = enumerate_basis(&free, 8).unwrap();
        let ne = nested_exhaustion(&free, &ExhaustionSpec::generator_balls(&free), &ZSchedule::BaseLevel, 3, &win).unwrap();
        assert!(ne.levels.is_empty());
        assert!(ne.stopped.unwrap().starts_with("level 1"));
    }

    #[test]
    fn goldie() {
        let kx = pres(KX);
        let win = enumerate_basis(&kx, 8).unwrap();
        let g = goldie_witness(
            &kx,
            &kx.parse_element("x").unwrap(),
            &kx.parse_element("x*x").unwrap(),
            &ExhaustionSpec::generator_balls(&kx),
            3,
            &win,
        )
        .unwrap()
        .unwrap();
        assert_eq!((g.n, g.intersection_dim), (1, 1));
        assert_eq!(g.intersection, ["x*x"]);
    }
}
