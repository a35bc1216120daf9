//! Finite-horizon densities standing in for an invariant dimension-measure.
//!
//! A regular set `L = A_1 r_1 ∪ … ∪ A_n r_n` is given by sets `A_i` of normal
//! words and translators `r_i`. Inside a window only the translates `e·r_i`
//! with `deg e + deg r_i <= D` exist; every count below is over those.
//! Limits along an ultrafilter are replaced by the tail interval of
//! [`Interval`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, CoordinateWindow, Element, Translator, Word};
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, RowSpace, SparseVec};
use crate::exhaustion::{ExhaustionSpec, MonomialPattern, PatternFile};
use crate::rational::{ratio, serde_ratio_vec, Rational};
use crate::report::{default_tolerance, Interval};

/// A set of canonical basis words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordSet {
    All,
    Explicit(Vec<Word>),
    /// Union over all `n` of the pattern words.
    Patterns(Vec<MonomialPattern>),
}

impl WordSet {
    /// Members of degree `<= cap`, in deglex order.
    pub fn members(&self, pres: &AlgebraPresentation, window: &CoordinateWindow, cap: usize) -> Result<Vec<Word>> {
        let cap = cap.min(window.degree_bound());
        let mut out: BTreeSet<Word> = BTreeSet::new();
        match self {
            WordSet::All => return Ok(window.words().take(window.columns_up_to(cap)).cloned().collect()),
            WordSet::Explicit(ws) => out.extend(ws.iter().filter(|w| w.degree() <= cap).cloned()),
            WordSet::Patterns(ps) => {
                // a nonconstant exponent bound p(n) is at least n, so levels
                // beyond the cap add no word of degree <= cap
                for n in 0..=cap as u64 {
                    for p in ps {
                        out.extend(p.words_capped(n, cap as u64));
                    }
                }
            }
        }
        for w in &out {
            if (w.is_unit() && !pres.is_unital()) || !pres.is_normal_word(w) {
                return Err(Error::Invalid(format!("`{}` is not a canonical basis word", pres.format_word(w))));
            }
        }
        Ok(out.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPart {
    pub words: WordSet,
    pub translator: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSet {
    pub parts: Vec<RegularPart>,
}

/// JSON form: `{"parts": [{"words": "all" | ["y*x", …] | {"patterns": …}, "translator": "x"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularSetFile {
    pub parts: Vec<RegularPartFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularPartFile {
    pub words: WordSetFile,
    pub translator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSetFile {
    Keyword(String),
    Explicit(Vec<String>),
    Patterns(PatternFile),
}

impl RegularSet {
    /// The whole canonical basis, translated by the unit.
    pub fn full_basis() -> Self {
        RegularSet {
            parts: vec![RegularPart {
                words: WordSet::All,
                translator: Element::unit(),
            }],
        }
    }

    pub fn from_file(pres: &AlgebraPresentation, file: &RegularSetFile) -> Result<Self> {
        let mut parts = Vec::new();
        for p in &file.parts {
            let words = match &p.words {
                WordSetFile::Keyword(k) if k == "all" => WordSet::All,
                WordSetFile::Keyword(k) => return Err(Error::Invalid(format!("unknown word set `{k}`"))),
                WordSetFile::Explicit(ws) => {
                    WordSet::Explicit(ws.iter().map(|w| pres.parse_word(w)).collect::<Result<Vec<_>>>()?)
                }
                WordSetFile::Patterns(pf) => match ExhaustionSpec::from_pattern_file(pres, pf)? {
                    ExhaustionSpec::Patterns(ps) => WordSet::Patterns(ps),
                    ExhaustionSpec::Ball(_) => unreachable!(),
                },
            };
            parts.push(RegularPart {
                words,
                translator: pres.parse_element(&p.translator)?,
            });
        }
        Ok(RegularSet { parts })
    }

    pub fn from_json(pres: &AlgebraPresentation, text: &str) -> Result<Self> {
        let file: RegularSetFile = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_file(pres, &file)
    }

    /// The denoted vectors `e·r_i` that fit in the window, checked to be
    /// pairwise distinct and linearly independent.
    pub fn vectors(&self, pres: &AlgebraPresentation, window: &CoordinateWindow) -> Result<Vec<SparseVec>> {
        let mut out = Vec::new();
        let mut ech = Echelon::new(window.field(), window.len());
        for part in &self.parts {
            let r = &part.translator;
            if r.is_zero() {
                return Err(Error::ZeroElement);
            }
            let Some(cap) = window.degree_bound().checked_sub(r.degree()) else {
                continue;
            };
            let t = Translator::new(pres, window, r);
            for w in part.words.members(pres, window, cap)? {
                let col = window.index_of(&w).expect("members lie in the window");
                let v = t.word(col)?;
                if !ech.insert(v.clone())? {
                    return Err(Error::Invalid(format!(
                        "regular set is not independent: `{}·({})` depends on earlier vectors",
                        pres.format_word(&w),
                        pres.format_element(r)
                    )));
                }
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// How `|L ∩ V_k|` is read: as the number of denoted vectors lying in `V_k`,
/// or as `dim(span L ∩ V_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionMode {
    #[default]
    Count,
    Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub quantity: String,
    pub k: Vec<usize>,
    #[serde(with = "serde_ratio_vec")]
    pub values: Vec<Rational>,
    pub interval: Option<Interval>,
    pub window_degree: usize,
    pub intersection_mode: Option<IntersectionMode>,
}

impl DensityReport {
    fn new(quantity: &str, k: Vec<usize>, values: Vec<Rational>, window: &CoordinateWindow) -> Self {
        DensityReport {
            quantity: quantity.into(),
            interval: Interval::of_tail(&values, default_tolerance()),
            k,
            values,
            window_degree: window.degree_bound(),
            intersection_mode: None,
        }
    }
}

/// `|F_k(s)|/dim V_k` and `|B_k(s)|/dim V_k`, where
/// `F_k(s) = {e ∈ V_k : e·s ∉ V_k}` and `B_k(s) = {e ∉ V_k : e·s ∈ V_k}`
/// over normal words `e`. `B_k` only sees words with `deg e + deg s <= D`.
pub fn fk_bk_densities(
    pres: &AlgebraPresentation,
    s: &Element,
    exhaustion: &ExhaustionSpec,
    ks: impl IntoIterator<Item = usize>,
    window: &CoordinateWindow,
) -> Result<(DensityReport, DensityReport)> {
    if s.is_zero() {
        return Err(Error::ZeroElement);
    }
    let t = Translator::new(pres, window, s);
    let reach = window
        .degree_bound()
        .checked_sub(s.degree())
        .map_or(0, |d| window.columns_up_to(d));
    let (mut kv, mut fv, mut bv) = (Vec::new(), Vec::new(), Vec::new());
    for k in ks {
        let v = exhaustion.evaluate(pres, k, window)?;
        if !v.is_coordinate() {
            return Err(Error::NonMonomialExhaustion);
        }
        let inside: BTreeSet<usize> = v.pivots().iter().copied().collect();
        let mut f = 0;
        for &c in &inside {
            if !v.contains(&t.word(c).map_err(|e| e.at_level(k))?)? {
                f += 1;
            }
        }
        let mut b = 0;
        for c in (0..reach).filter(|c| !inside.contains(c)) {
            if v.contains(&t.word(c)?)? {
                b += 1;
            }
        }
        kv.push(k);
        fv.push(ratio(f, v.dim()));
        bv.push(ratio(b, v.dim()));
    }
    Ok((
        DensityReport::new("F-density", kv.clone(), fv, window),
        DensityReport::new("B-density", kv, bv, window),
    ))
}

/// `|L ∩ V| / dim V`, counting the denoted vectors of `L` contained in `V`.
pub fn regular_density(
    pres: &AlgebraPresentation,
    l: &RegularSet,
    v: &RowSpace,
    window: &CoordinateWindow,
) -> Result<Rational> {
    if v.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let mut count = 0;
    for x in l.vectors(pres, window)? {
        if v.contains(&x)? {
            count += 1;
        }
    }
    Ok(ratio(count, v.dim()))
}

/// `|dim(Lr ∩ V_k) − |L ∩ V_k|| / dim V_k` for each `k`. `Lr` is spanned by
/// the translates `x·r` of the vectors `x` of `L` with `deg x + deg r <= D`;
/// `|L ∩ V_k|` is read according to `mode`.
pub fn invariance_defect(
    pres: &AlgebraPresentation,
    l: &RegularSet,
    r: &Element,
    exhaustion: &ExhaustionSpec,
    ks: impl IntoIterator<Item = usize>,
    window: &CoordinateWindow,
    mode: IntersectionMode,
) -> Result<DensityReport> {
    if r.is_zero() {
        return Err(Error::ZeroElement);
    }
    let lv = l.vectors(pres, window)?;
    let l_span = RowSpace::span(window.field(), window.len(), lv.iter().cloned())?;
    let cap = window.degree_bound().checked_sub(r.degree());
    let t = Translator::new(pres, window, r);
    let mut moved = Vec::new();
    for x in &lv {
        let deg = x.last_col().map_or(0, |c| window.col_degree(c));
        if cap.is_some_and(|cap| deg <= cap) {
            moved.push(t.apply(x)?);
        }
    }
    let lr = RowSpace::span(window.field(), window.len(), moved)?;
    let (mut kv, mut values) = (Vec::new(), Vec::new());
    for k in ks {
        let v = exhaustion.evaluate(pres, k, window)?;
        let a = lr.intersection_dim(&v)?;
        let b = match mode {
            IntersectionMode::Count => {
                let mut n = 0;
                for x in &lv {
                    if v.contains(x)? {
                        n += 1;
                    }
                }
                n
            }
            IntersectionMode::Span => l_span.intersection_dim(&v)?,
        };
        kv.push(k);
        values.push(ratio(a.abs_diff(b), v.dim()));
    }
    let mut rep = DensityReport::new("invariance defect", kv, values, window);
    rep.intersection_mode = Some(mode);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_basis;

    fn pres(json: &str) -> AlgebraPresentation {
        AlgebraPresentation::from_json(json).unwrap()
    }

    #[test]
    fn kx_boundary() {
        let kx = pres(r#"{"generators":["x"]}"#);
        let win = enumerate_basis(&kx, 21).unwrap();
        let x = kx.parse_element("x").unwrap();
        let ex = ExhaustionSpec::generator_balls(&kx);
        let (f, b) = fk_bk_densities(&kx, &x, &ex, 1..=20, &win).unwrap();
        for (i, k) in (1..=20u64).enumerate() {
            assert_eq!(f.values[i], Rational::new(1, k + 1));
            assert_eq!(b.values[i], Rational::from_integer(0));
        }
        let (f, b) = fk_bk_densities(&kx, &Element::unit(), &ex, 1..=5, &win).unwrap();
        assert!(f.values.iter().chain(&b.values).all(|v| *v == Rational::from_integer(0)));
    }

    #[test]
    fn ex33_family_leavers() {
        let ex33 = pres(r#"{"generators":["x","y"],"rules":[{"lhs":"x*x","rhs":"0"},{"lhs":"x*y","rhs":"0"}]}"#);
        let win = enumerate_basis(&ex33, 12).unwrap();
        let fam = ExhaustionSpec::from_pattern_json(&ex33, r#"{"patterns": [[["y","n"]], [["y","n^2"],["x","1"]]]}"#).unwrap();
        let y = ex33.parse_element("y").unwrap();
        let (f, _) = fk_bk_densities(&ex33, &y, &fam, 1..=3, &win).unwrap();
        // only y^n leaves; y^a x · y = 0 stays inside
        for (i, n) in (1..=3u64).enumerate() {
            assert_eq!(f.values[i], Rational::new(1, n * n + n + 2));
        }
    }

    #[test]
    fn regular_densities() {
        let kx = pres(r#"{"generators":["x"]}"#);
        let win = enumerate_basis(&kx, 12).unwrap();
        let full = RegularSet::full_basis();
        let shifted = RegularSet::from_json(&kx, r#"{"parts":[{"words":"all","translator":"x"}]}"#).unwrap();
        let empty = RegularSet { parts: vec![] };
        for k in 1..=10u64 {
            let v = win.ball_words(k as usize);
            assert_eq!(regular_density(&kx, &full, &v, &win).unwrap(), Rational::from_integer(1));
            assert_eq!(regular_density(&kx, &shifted, &v, &win).unwrap(), Rational::new(k, k + 1));
            assert_eq!(regular_density(&kx, &empty, &v, &win).unwrap(), Rational::from_integer(0));
        }
        let overlapping = RegularSet::from_json(
            &kx,
            r#"{"parts":[{"words":"all","translator":"1"},{"words":["1"],"translator":"x"}]}"#,
        )
        .unwrap();
        assert!(overlapping.vectors(&kx, &win).is_err());
    }

    #[test]
    fn defects() {
        let kx = pres(r#"{"generators":["x"]}"#);
        let win = enumerate_basis(&kx, 15).unwrap();
        let ex = ExhaustionSpec::generator_balls(&kx);
        let x = kx.parse_element("x").unwrap();
        let full = RegularSet::full_basis();
        for mode in [IntersectionMode::Count, IntersectionMode::Span] {
            let rep = invariance_defect(&kx, &full, &x, &ex, 1..=10, &win, mode).unwrap();
            for (i, k) in (1..=10u64).enumerate() {
                assert_eq!(rep.values[i], Rational::new(1, k + 1));
            }
            let rep = invariance_defect(&kx, &full, &Element::unit(), &ex, 1..=10, &win, mode).unwrap();
            assert!(rep.values.iter().all(|v| *v == Rational::from_integer(0)));
        }

        let free = pres(r#"{"generators":["x","y"]}"#);
        let win = enumerate_basis(&free, 11).unwrap();
        let ex = ExhaustionSpec::generator_balls(&free);
        let x = free.parse_element("x").unwrap();
        let rep = invariance_defect(&free, &full, &x, &ex, 1..=10, &win, IntersectionMode::Count).unwrap();
        for (i, k) in (1..=10u32).enumerate() {
            assert_eq!(rep.values[i], Rational::new(2u64.pow(k), 2u64.pow(k + 1) - 1));
        }
    }
}
