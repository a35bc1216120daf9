//! Rank and relative rank of finitely generated left modules `M ⊆ R^t`.
//!
//! For an exhaustion `W_n` the rank entries are `dim(Σ W_n x_i)/dim W_n`.
//! Submodules appearing in quotients and intersections are truncated to
//! `M_D = span{w·m_j : deg w <= D − deg m_j}` inside the window of `R^t`,
//! whose columns are `(component, word)` pairs numbered `component·N + word`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, CoordinateWindow, Element, Translator};
use crate::error::{Error, Result};
use crate::exactlin::{RowSpace, SparseVec};
use crate::exhaustion::ExhaustionSpec;
use crate::rational::{ratio, serde_ratio_vec, Rational};
use crate::report::{default_tolerance, Interval};

/// Module element: one algebra element per component of `R^t`.
pub type ModuleElement = Vec<Element>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    pub ambient_rank: usize,
    /// Generators `x_1, …, x_r`.
    pub generators: Vec<ModuleElement>,
    /// Generators of a submodule `M` to quotient by, giving `N/M`.
    pub sub_generators: Option<Vec<ModuleElement>>,
}

/// JSON form: `{"ambient_rank": 1, "generators": [["x"], ["y"]], "sub_generators": [["x"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub ambient_rank: usize,
    pub generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_generators: Option<Vec<Vec<String>>>,
}

fn parse_vectors(pres: &AlgebraPresentation, t: usize, gens: &[Vec<String>]) -> Result<Vec<ModuleElement>> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if g.len() != t {
            return Err(Error::LengthMismatch {
                expected: t,
                got: g.len(),
            });
        }
        let v = g.iter().map(|s| pres.parse_element(s)).collect::<Result<Vec<_>>>()?;
        if v.iter().all(Element::is_zero) {
            return Err(Error::ZeroElement);
        }
        out.push(v);
    }
    Ok(out)
}

impl ModulePresentation {
    pub fn new(ambient_rank: usize, generators: Vec<ModuleElement>) -> Result<Self> {
        let m = ModulePresentation {
            ambient_rank,
            generators,
            sub_generators: None,
        };
        m.validate()?;
        Ok(m)
    }

    /// `R^t` with its standard generators.
    pub fn free(t: usize) -> Self {
        let generators = (0..t)
            .map(|i| (0..t).map(|j| if i == j { Element::unit() } else { Element::zero() }).collect())
            .collect();
        ModulePresentation {
            ambient_rank: t,
            generators,
            sub_generators: None,
        }
    }

    pub fn quotient(mut self, sub: Vec<ModuleElement>) -> Result<Self> {
        self.sub_generators = Some(sub);
        self.validate()?;
        Ok(self)
    }

    /// The submodule generated by `sub_generators`, inside the same `R^t`.
    pub fn submodule(&self) -> Option<ModulePresentation> {
        self.sub_generators.as_ref().map(|s| ModulePresentation {
            ambient_rank: self.ambient_rank,
            generators: s.clone(),
            sub_generators: None,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.ambient_rank == 0 {
            return Err(Error::Invalid("ambient rank must be at least 1".into()));
        }
        for g in self.generators.iter().chain(self.sub_generators.iter().flatten()) {
            if g.len() != self.ambient_rank {
                return Err(Error::LengthMismatch {
                    expected: self.ambient_rank,
                    got: g.len(),
                });
            }
            if g.iter().all(Element::is_zero) {
                return Err(Error::ZeroElement);
            }
        }
        Ok(())
    }

    pub fn from_file(pres: &AlgebraPresentation, file: &ModuleFile) -> Result<Self> {
        let m = ModulePresentation {
            ambient_rank: file.ambient_rank,
            generators: parse_vectors(pres, file.ambient_rank, &file.generators)?,
            sub_generators: file
                .sub_generators
                .as_ref()
                .map(|s| parse_vectors(pres, file.ambient_rank, s))
                .transpose()?,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_json(pres: &AlgebraPresentation, text: &str) -> Result<Self> {
        let file: ModuleFile = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_file(pres, &file)
    }

    fn max_degree(gens: &[ModuleElement]) -> usize {
        gens.iter().flatten().map(Element::degree).max().unwrap_or(0)
    }

    /// `M ⊕ N` inside `R^{t + t'}`.
    pub fn direct_sum(&self, other: &ModulePresentation) -> ModulePresentation {
        let t = self.ambient_rank + other.ambient_rank;
        let pad = |g: &ModuleElement, before: usize, after: usize| -> ModuleElement {
            std::iter::repeat_n(Element::zero(), before)
                .chain(g.iter().cloned())
                .chain(std::iter::repeat_n(Element::zero(), after))
                .collect()
        };
        ModulePresentation {
            ambient_rank: t,
            generators: self
                .generators
                .iter()
                .map(|g| pad(g, 0, other.ambient_rank))
                .chain(other.generators.iter().map(|g| pad(g, self.ambient_rank, 0)))
                .collect(),
            sub_generators: None,
        }
    }
}

/// Left multiplication `w ↦ w·x` for a fixed module element `x`, as a map
/// from the algebra window into the window of `R^t`.
struct LeftAction<'a> {
    n_cols: usize,
    parts: Vec<(usize, Translator<'a>)>,
}

impl<'a> LeftAction<'a> {
    fn new(pres: &'a AlgebraPresentation, window: &'a CoordinateWindow, x: &'a ModuleElement) -> Self {
        LeftAction {
            n_cols: window.len(),
            parts: x
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(j, e)| (j, Translator::new(pres, window, e)))
                .collect(),
        }
    }

    fn apply(&self, row: &SparseVec) -> Result<SparseVec> {
        let mut out = SparseVec::zero();
        for (j, t) in &self.parts {
            out = out.concat(&t.apply(row)?, j * self.n_cols);
        }
        Ok(out)
    }

    fn word(&self, col: usize) -> Result<SparseVec> {
        self.apply(&SparseVec::unit(col))
    }
}

struct ModuleWindow<'a> {
    pres: &'a AlgebraPresentation,
    window: &'a CoordinateWindow,
    t: usize,
}

impl<'a> ModuleWindow<'a> {
    fn new(pres: &'a AlgebraPresentation, window: &'a CoordinateWindow, t: usize) -> Result<Self> {
        if !pres.is_unital() {
            return Err(Error::NonUnital);
        }
        Ok(ModuleWindow { pres, window, t })
    }

    fn ambient(&self) -> usize {
        self.t * self.window.len()
    }

    /// `Σ_i W·x_i`.
    fn translate(&self, w: &RowSpace, gens: &'a [ModuleElement], level: usize) -> Result<RowSpace> {
        let need = self.window.subspace_degree(w) + ModulePresentation::max_degree(gens);
        if !gens.is_empty() && need > self.window.degree_bound() {
            return Err(Error::overflow(need, self.window.degree_bound()).at_level(level));
        }
        let mut rows = Vec::with_capacity(w.dim() * gens.len());
        for x in gens {
            let act = LeftAction::new(self.pres, self.window, x);
            for row in w.basis() {
                rows.push(act.apply(row).map_err(|e| e.at_level(level))?);
            }
        }
        RowSpace::span(self.window.field(), self.ambient(), rows)
    }

    /// `M_D`: span of `w·m_j` over normal words `w` with `deg w + deg m_j <= D`.
    fn truncation(&self, gens: &'a [ModuleElement]) -> Result<RowSpace> {
        let mut rows = Vec::new();
        for m in gens {
            let act = LeftAction::new(self.pres, self.window, m);
            let Some(room) = self.window.degree_bound().checked_sub(ModulePresentation::max_degree(std::slice::from_ref(m))) else {
                continue;
            };
            for col in 0..self.window.columns_up_to(room) {
                rows.push(act.word(col)?);
            }
        }
        RowSpace::span(self.window.field(), self.ambient(), rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub quantity: String,
    pub exhaustion: String,
    pub generators: usize,
    pub n: Vec<usize>,
    pub numerators: Vec<usize>,
    pub dims: Vec<usize>,
    #[serde(with = "serde_ratio_vec")]
    pub entries: Vec<Rational>,
    pub interval: Option<Interval>,
    pub verdict: Option<String>,
    /// Every entry is at most the number of generators.
    pub within_generator_bound: bool,
}

impl RankReport {
    fn new(quantity: &str, exhaustion: String, generators: usize, n: Vec<usize>, numerators: Vec<usize>, dims: Vec<usize>) -> Self {
        let entries: Vec<Rational> = numerators.iter().zip(&dims).map(|(&a, &b)| ratio(a, b)).collect();
        let interval = Interval::of_tail(&entries, default_tolerance());
        RankReport {
            quantity: quantity.into(),
            exhaustion,
            generators,
            within_generator_bound: entries.iter().all(|e| *e <= Rational::from_integer(generators as u64)),
            verdict: interval.as_ref().map(Interval::verdict),
            interval,
            n,
            numerators,
            dims,
            entries,
        }
    }
}

struct Levels {
    n: Vec<usize>,
    spaces: Vec<RowSpace>,
}

fn levels(
    pres: &AlgebraPresentation,
    exhaustion: &ExhaustionSpec,
    ns: impl IntoIterator<Item = usize>,
    window: &CoordinateWindow,
) -> Result<Levels> {
    let mut out = Levels {
        n: Vec::new(),
        spaces: Vec::new(),
    };
    for n in ns {
        out.spaces.push(exhaustion.evaluate(pres, n, window)?);
        out.n.push(n);
    }
    Ok(out)
}

fn dims(l: &Levels) -> Vec<usize> {
    l.spaces.iter().map(RowSpace::dim).collect()
}

/// Rank entries of `M`, or of `N/M` when the module carries sub-generators:
/// then the numerator is `dim(Σ W_n x_i + M_D) − dim M_D`.
pub fn rank(
    pres: &AlgebraPresentation,
    module: &ModulePresentation,
    exhaustion: &ExhaustionSpec,
    ns: impl IntoIterator<Item = usize>,
    window: &CoordinateWindow,
) -> Result<RankReport> {
    let mw = ModuleWindow::new(pres, window, module.ambient_rank)?;
    let lv = levels(pres, exhaustion, ns, window)?;
    let sub = match &module.sub_generators {
        Some(s) => Some(mw.truncation(s)?),
        None => None,
    };
    let mut nums = Vec::with_capacity(lv.n.len());
    for (&n, w) in lv.n.iter().zip(&lv.spaces) {
        let span = mw.translate(w, &module.generators, n)?;
        nums.push(match &sub {
            None => span.dim(),
            Some(md) => span.sum(md)?.dim() - md.dim(),
        });
    }
    let quantity = if sub.is_some() { "rank(N/M)" } else { "rank" };
    Ok(RankReport::new(quantity, exhaustion.describe(pres), module.generators.len(), lv.n.clone(), nums, dims(&lv)))
}

fn check_generators_in(sub: &[ModuleElement], x: &[ModuleElement]) -> Result<()> {
    for m in sub {
        if !x.contains(m) {
            return Err(Error::Invalid("every generator of M must appear among the generators X of N".into()));
        }
    }
    Ok(())
}

/// Relative rank entries `dim(M_D ∩ Σ W_n x_i)/dim W_n` for `M ⊆ N`, `X`
/// the generators of `N`.
pub fn relative_rank(
    pres: &AlgebraPresentation,
    x: &[ModuleElement],
    m: &[ModuleElement],
    t: usize,
    exhaustion: &ExhaustionSpec,
    ns: impl IntoIterator<Item = usize>,
    window: &CoordinateWindow,
) -> Result<RankReport> {
    check_generators_in(m, x)?;
    let mw = ModuleWindow::new(pres, window, t)?;
    let lv = levels(pres, exhaustion, ns, window)?;
    let md = mw.truncation(m)?;
    let mut nums = Vec::new();
    for (&n, w) in lv.n.iter().zip(&lv.spaces) {
        nums.push(md.intersection_dim(&mw.translate(w, x, n)?)?);
    }
    Ok(RankReport::new("rank_X(M)", exhaustion.describe(pres), m.len(), lv.n.clone(), nums, dims(&lv)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceRow {
    pub n: usize,
    /// `dim Σ W_n x_i`
    pub total: usize,
    /// `dim Σ W_n [x_i]` in `N/M`
    pub quotient: usize,
    /// `dim(M ∩ Σ W_n x_i)`
    pub relative: usize,
    pub residual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceReport {
    pub rows: Vec<ExactSequenceRow>,
    pub rank_n: RankReport,
    pub rank_quotient: RankReport,
    pub rank_relative: RankReport,
}

impl ExactSequenceReport {
    pub fn max_residual(&self) -> usize {
        self.rows.iter().map(|r| r.residual).max().unwrap_or(0)
    }
}

/// Per-level residual of `dim Σ W_n x_i = dim Σ W_n [x_i] + dim(M ∩ Σ W_n x_i)`.
/// The intersection is computed directly (Zassenhaus), not from the sum.
pub fn exact_sequence_check(
    pres: &AlgebraPresentation,
    x: &[ModuleElement],
    m: &[ModuleElement],
    t: usize,
    exhaustion: &ExhaustionSpec,
    ns: impl IntoIterator<Item = usize>,
    window: &CoordinateWindow,
) -> Result<ExactSequenceReport> {
    check_generators_in(m, x)?;
    let mw = ModuleWindow::new(pres, window, t)?;
    let lv = levels(pres, exhaustion, ns, window)?;
    let md = mw.truncation(m)?;
    let mut rows = Vec::new();
    for (&n, w) in lv.n.iter().zip(&lv.spaces) {
        let span = mw.translate(w, x, n)?;
        let total = span.dim();
        let quotient = span.sum(&md)?.dim() - md.dim();
        let relative = md.intersection_dim(&span)?;
        rows.push(ExactSequenceRow {
            n,
            total,
            quotient,
            relative,
            residual: total.abs_diff(quotient + relative),
        });
    }
    let d = dims(&lv);
    let desc = exhaustion.describe(pres);
    let col = |f: fn(&ExactSequenceRow) -> usize| rows.iter().map(f).collect::<Vec<_>>();
    Ok(ExactSequenceReport {
        rank_n: RankReport::new("rank(N)", desc.clone(), x.len(), lv.n.clone(), col(|r| r.total), d.clone()),
        rank_quotient: RankReport::new("rank(N/M)", desc.clone(), x.len(), lv.n.clone(), col(|r| r.quotient), d.clone()),
        rank_relative: RankReport::new("rank_X(M)", desc, m.len(), lv.n.clone(), col(|r| r.relative), d),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectSumReport {
    pub sum: RankReport,
    pub left: RankReport,
    pub right: RankReport,
    pub residuals: Vec<usize>,
}

/// Per-level residual of `dim Σ W_n (M ⊕ N) = dim Σ W_n M + dim Σ W_n N`.
pub fn direct_sum_check(
    pres: &AlgebraPresentation,
    m: &ModulePresentation,
    n_mod: &ModulePresentation,
    exhaustion: &ExhaustionSpec,
    ns: impl IntoIterator<Item = usize> + Clone,
    window: &CoordinateWindow,
) -> Result<DirectSumReport> {
    let sum = m.direct_sum(n_mod);
    let s = rank(pres, &sum, exhaustion, ns.clone(), window)?;
    let l = rank(pres, m, exhaustion, ns.clone(), window)?;
    let r = rank(pres, n_mod, exhaustion, ns, window)?;
    let residuals = s
        .numerators
        .iter()
        .zip(l.numerators.iter().zip(&r.numerators))
        .map(|(&a, (&b, &c))| a.abs_diff(b + c))
        .collect();
    Ok(DirectSumReport {
        sum: s,
        left: l,
        right: r,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_basis;

    const EX33: &str = r#"{"generators":["x","y"],"rules":[{"lhs":"x*x","rhs":"0"},{"lhs":"x*y","rhs":"0"}]}"#;

    fn setup() -> (AlgebraPresentation, ExhaustionSpec, ExhaustionSpec) {
        let p = AlgebraPresentation::from_json(EX33).unwrap();
        let w = ExhaustionSpec::from_pattern_json(&p, r#"{"patterns": [[["y","n"]], [["y","n^2"],["x","1"]]]}"#).unwrap();
        let w2 = ExhaustionSpec::from_pattern_json(&p, r#"{"patterns": [[["y","n"]], [["y","n"],["x","1"]]]}"#).unwrap();
        (p, w, w2)
    }

    fn gens(p: &AlgebraPresentation, names: &[&str]) -> Vec<ModuleElement> {
        names.iter().map(|s| vec![p.parse_element(s).unwrap()]).collect()
    }

    #[test]
    fn ex33_ranks() {
        let (p, w, w2) = setup();
        let win = enumerate_basis(&p, 18).unwrap();
        let m = ModulePresentation::new(1, gens(&p, &["x", "y"])).unwrap();
        let rep = rank(&p, &m, &w, 1..=4, &win).unwrap();
        for (i, n) in (1..=4u64).enumerate() {
            assert_eq!(rep.entries[i], Rational::new(2 * (n + 1), n * n + n + 2));
        }
        let rep = rank(&p, &m, &w2, 1..=10, &win).unwrap();
        assert!(rep.entries.iter().all(|e| *e == Rational::from_integer(1)));
        let r = rank(&p, &ModulePresentation::free(1), &w, 1..=4, &win).unwrap();
        assert!(r.entries.iter().all(|e| *e == Rational::from_integer(1)));
    }

    #[test]
    fn ex33_exact_sequence() {
        let (p, w, w2) = setup();
        let win = enumerate_basis(&p, 18).unwrap();
        let x = gens(&p, &["1", "x", "y"]);
        let m = gens(&p, &["x", "y"]);
        for ex in [&w, &w2] {
            let rep = exact_sequence_check(&p, &x, &m, 1, ex, 1..=4, &win).unwrap();
            assert_eq!(rep.max_residual(), 0);
            assert!(rep.rows.iter().all(|r| r.quotient == 1));
        }
        let rel = relative_rank(&p, &x, &m, 1, &w, 1..=4, &win).unwrap();
        // everything but the unit line of W_n, plus y^{n+1}
        for (i, n) in (1..=4u64).enumerate() {
            assert_eq!(rel.entries[i], Rational::new(n * n + n + 2, n * n + n + 2));
        }
        let m_only = relative_rank(&p, &gens(&p, &["x", "y"]), &m, 1, &w, 1..=4, &win).unwrap();
        assert_eq!(m_only.numerators, rank(&p, &ModulePresentation::new(1, m.clone()).unwrap(), &w, 1..=4, &win).unwrap().numerators);
        assert!(relative_rank(&p, &gens(&p, &["1"]), &m, 1, &w, 1..=2, &win).is_err());
    }

    #[test]
    fn quotient_rank() {
        let (p, w, _) = setup();
        let win = enumerate_basis(&p, 18).unwrap();
        let q = ModulePresentation::free(1).quotient(gens(&p, &["x", "y"])).unwrap();
        let rep = rank(&p, &q, &w, 1..=4, &win).unwrap();
        assert_eq!(rep.numerators, [1, 1, 1, 1]);
    }

    #[test]
    fn free_modules_and_sums() {
        let p = AlgebraPresentation::from_json(r#"{"generators":["x","y"],"rules":[{"lhs":"y*x","rhs":"x*y"}]}"#).unwrap();
        let win = enumerate_basis(&p, 8).unwrap();
        let balls = ExhaustionSpec::generator_balls(&p);
        for j in 1..=3u64 {
            let rep = rank(&p, &ModulePresentation::free(j as usize), &balls, 1..=8, &win).unwrap();
            assert!(rep.entries.iter().all(|e| *e == Rational::from_integer(j)));
        }
        let one = ModulePresentation::free(1);
        let ds = direct_sum_check(&p, &one, &one, &balls, 1..=6, &win).unwrap();
        assert!(ds.residuals.iter().all(|&r| r == 0));
        assert!(ds.sum.entries.iter().all(|e| *e == Rational::from_integer(2)));
        let nonunital = AlgebraPresentation::from_json(r#"{"unital":false,"generators":["x"]}"#).unwrap();
        let win = enumerate_basis(&nonunital, 3).unwrap();
        let m = ModulePresentation::new(1, vec![vec![nonunital.parse_element("x").unwrap()]]).unwrap();
        assert_eq!(
            rank(&nonunital, &m, &ExhaustionSpec::generator_balls(&nonunital), 1..=2, &win).unwrap_err(),
            Error::NonUnital
        );
    }
}
