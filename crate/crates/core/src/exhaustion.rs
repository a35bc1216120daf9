//! Parametric families `n ↦ W_n` of finite-dimensional subspaces.
//!
//! An exhaustion is either the ball family of a set `S` or a union of
//! monomial patterns. A pattern is a sequence `g_1^{e_1} g_2^{e_2} …`, where
//! each exponent specification is one of
//!
//! * a polynomial in `n` (`n`, `n^2`, `2*n+1`): the exponent ranges over
//!   `0..=p(n)`;
//! * a constant (`1`, `3`): the exponent is exactly that value;
//! * an explicit range `lo..hi` of two polynomials.
//!
//! With this reading `[["y","n^2"],["x","1"]]` denotes `{y^a x : a <= n²}`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, CoordinateWindow, Element, Word};
use crate::error::{Error, Result};
use crate::exactlin::RowSpace;
use crate::growth;

/// A polynomial in `n` with nonnegative integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    // (coefficient, power of n)
    terms: Vec<(u64, u32)>,
    source: String,
}

impl Poly {
    pub fn parse(text: &str) -> Result<Poly> {
        let bad = |msg: &str| Error::Invalid(format!("exponent `{text}`: {msg}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut terms = Vec::new();
        for term in compact.split('+') {
            let mut coeff = 1u64;
            let mut power = 0u32;
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            for factor in term.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad("bad power"))?),
                    None => (factor, 1),
                };
                if base == "n" {
                    power += exp;
                } else {
                    let v: u64 = base.parse().map_err(|_| bad("expected `n` or a number"))?;
                    coeff = v
                        .checked_pow(exp)
                        .and_then(|p| coeff.checked_mul(p))
                        .ok_or_else(|| bad("overflow"))?;
                }
            }
            terms.push((coeff, power));
        }
        Ok(Poly {
            terms,
            source: text.to_string(),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|&(c, p)| p == 0 || c == 0)
    }

    pub fn eval(&self, n: u64) -> u64 {
        self.terms
            .iter()
            .map(|&(c, p)| c.saturating_mul(n.saturating_pow(p)))
            .fold(0u64, u64::saturating_add)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentSpec {
    Exact(Poly),
    UpTo(Poly),
    Range(Poly, Poly),
}

impl ExponentSpec {
    pub fn parse(text: &str) -> Result<ExponentSpec> {
        if let Some((lo, hi)) = text.split_once("..") {
            return Ok(ExponentSpec::Range(Poly::parse(lo)?, Poly::parse(hi)?));
        }
        let p = Poly::parse(text)?;
        Ok(if p.is_constant() {
            ExponentSpec::Exact(p)
        } else {
            ExponentSpec::UpTo(p)
        })
    }

    pub fn range(&self, n: u64) -> std::ops::RangeInclusive<u64> {
        match self {
            ExponentSpec::Exact(p) => p.eval(n)..=p.eval(n),
            ExponentSpec::UpTo(p) => 0..=p.eval(n),
            ExponentSpec::Range(lo, hi) => lo.eval(n)..=hi.eval(n),
        }
    }

    fn source(&self) -> String {
        match self {
            ExponentSpec::Exact(p) | ExponentSpec::UpTo(p) => p.source.clone(),
            ExponentSpec::Range(lo, hi) => format!("{}..{}", lo.source, hi.source),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialPattern {
    pub factors: Vec<(u16, ExponentSpec)>,
}

impl MonomialPattern {
    /// Words `g_1^{a_1} … g_k^{a_k}` for every admissible exponent choice.
    pub fn words(&self, n: u64) -> Vec<Word> {
        self.words_capped(n, u64::MAX)
    }

    /// The words of [`words`](Self::words) of degree at most `cap`.
    pub fn words_capped(&self, n: u64, cap: u64) -> Vec<Word> {
        let mut out = vec![Vec::<u16>::new()];
        for (g, spec) in &self.factors {
            let mut next = Vec::new();
            for prefix in &out {
                let room = cap.saturating_sub(prefix.len() as u64);
                for a in spec.range(n).take_while(|&a| a <= room) {
                    let mut w = prefix.clone();
                    w.extend(std::iter::repeat_n(*g, a as usize));
                    next.push(w);
                }
            }
            out = next;
        }
        out.into_iter().map(Word::new).collect()
    }

    /// Largest word degree produced at level `n`.
    pub fn max_degree(&self, n: u64) -> u64 {
        self.factors.iter().map(|(_, s)| *s.range(n).end()).sum()
    }
}

/// On-disk pattern file: `{"patterns": [[["y","n"]], [["y","n^2"],["x","1"]]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub patterns: Vec<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExhaustionSpec {
    /// `W_n = R_n`, the ball of radius `n` for the set `S`.
    Ball(Vec<Element>),
    /// `W_n` = span of the normal forms of all pattern words at level `n`.
    Patterns(Vec<MonomialPattern>),
}

impl ExhaustionSpec {
    pub fn generator_balls(pres: &AlgebraPresentation) -> Self {
        ExhaustionSpec::Ball(pres.generator_elements())
    }

    pub fn from_pattern_file(pres: &AlgebraPresentation, file: &PatternFile) -> Result<Self> {
        let mut patterns = Vec::with_capacity(file.patterns.len());
        for p in &file.patterns {
            let mut factors = Vec::with_capacity(p.len());
            for (g, e) in p {
                let idx = pres
                    .generators()
                    .iter()
                    .position(|s| s == g)
                    .ok_or_else(|| Error::UnknownGenerator(g.clone()))?;
                factors.push((idx as u16, ExponentSpec::parse(e)?));
            }
            patterns.push(MonomialPattern { factors });
        }
        Ok(ExhaustionSpec::Patterns(patterns))
    }

    pub fn from_pattern_json(pres: &AlgebraPresentation, text: &str) -> Result<Self> {
        let file: PatternFile = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_pattern_file(pres, &file)
    }

    pub fn to_pattern_file(&self, pres: &AlgebraPresentation) -> Option<PatternFile> {
        match self {
            ExhaustionSpec::Ball(_) => None,
            ExhaustionSpec::Patterns(ps) => Some(PatternFile {
                patterns: ps
                    .iter()
                    .map(|p| {
                        p.factors
                            .iter()
                            .map(|(g, s)| (pres.generators()[*g as usize].clone(), s.source()))
                            .collect()
                    })
                    .collect(),
            }),
        }
    }

    /// Short identifier for reports.
    pub fn describe(&self, pres: &AlgebraPresentation) -> String {
        match self {
            ExhaustionSpec::Ball(s) => format!(
                "ball({})",
                s.iter().map(|e| pres.format_element(e)).collect::<Vec<_>>().join(",")
            ),
            ExhaustionSpec::Patterns(_) => format!(
                "patterns{}",
                serde_json::to_string(&self.to_pattern_file(pres).unwrap().patterns).unwrap()
            ),
        }
    }

    /// Degree the window must reach to hold `W_n`, computed without building it.
    pub fn degree_at(&self, n: usize) -> usize {
        match self {
            ExhaustionSpec::Ball(s) => n * s.iter().map(Element::degree).max().unwrap_or(0),
            ExhaustionSpec::Patterns(ps) => ps.iter().map(|p| p.max_degree(n as u64) as usize).max().unwrap_or(0),
        }
    }

    /// `W_n` inside `window`; fails with a truncation overflow tagged with `n`
    /// when the window is too small, and with `ZeroSubspace` if `W_n = 0`.
    pub fn evaluate(&self, pres: &AlgebraPresentation, n: usize, window: &CoordinateWindow) -> Result<RowSpace> {
        let w = match self {
            ExhaustionSpec::Ball(s) => growth::ball(pres, s, n, window).map_err(|e| e.at_level(n))?,
            ExhaustionSpec::Patterns(ps) => {
                let need = self.degree_at(n);
                if need > window.degree_bound() {
                    return Err(Error::overflow(need, window.degree_bound()).at_level(n));
                }
                let mut elems = Vec::new();
                for p in ps {
                    for w in p.words(n as u64) {
                        let e = if pres.is_unital() || !w.is_unit() {
                            pres.normal_form_word(&w)
                        } else {
                            Element::zero()
                        };
                        if !e.is_zero() {
                            elems.push(e);
                        }
                    }
                }
                window.span(&elems).map_err(|e| e.at_level(n))?
            }
        };
        if w.is_zero() {
            return Err(Error::ZeroSubspace);
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_basis;

    #[test]
    fn polynomials() {
        let p = Poly::parse("n^2 + 2*n + 1").unwrap();
        assert_eq!(p.eval(3), 16);
        assert!(!p.is_constant());
        assert!(Poly::parse("3").unwrap().is_constant());
        assert_eq!(Poly::parse("2^3*n").unwrap().eval(2), 16);
        assert!(Poly::parse("m").is_err());
        assert!(Poly::parse("n+").is_err());
    }

    #[test]
    fn ex33_family() {
        let pres = AlgebraPresentation::from_json(
            r#"{"generators":["x","y"],"rules":[{"lhs":"x*x","rhs":"0"},{"lhs":"x*y","rhs":"0"}]}"#,
        )
        .unwrap();
        let ex = ExhaustionSpec::from_pattern_json(&pres, r#"{"patterns": [[["y","n"]], [["y","n^2"],["x","1"]]]}"#)
            .unwrap();
        let win = enumerate_basis(&pres, 10).unwrap();
        for n in 1..=3 {
            let w = ex.evaluate(&pres, n, &win).unwrap();
            assert_eq!(w.dim(), n * n + n + 2);
        }
        assert!(ex.evaluate(&pres, 4, &win).unwrap_err().is_truncation());
        let file = ex.to_pattern_file(&pres).unwrap();
        assert_eq!(ExhaustionSpec::from_pattern_file(&pres, &file).unwrap(), ex);
    }

    #[test]
    fn explicit_ranges() {
        let s = ExponentSpec::parse("1..n").unwrap();
        assert_eq!(s.range(3), 1..=3);
        assert_eq!(ExponentSpec::parse("2").unwrap().range(9), 2..=2);
    }
}
