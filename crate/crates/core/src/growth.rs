//! Balls `R_m` spanned by products of at most `m` elements of a generating
//! set, their dimensions, and a probe for subexponential growth.
//!
//! For unital algebras the ball also contains the unit (the empty product),
//! so `d[0] = 1`. Følner and rank computations need windows containing the
//! unit, and one ball definition serves both.

use serde::{Deserialize, Serialize};

use crate::algebra::{right_multiply_by_set, AlgebraPresentation, CoordinateWindow, Element, Word};
use crate::error::{Error, Result};
use crate::exactlin::RowSpace;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub algebra_hash: String,
    pub generating_set: Vec<String>,
    /// `d[m] = dim R_m`.
    pub d: Vec<usize>,
}

/// True when `s` consists of every generator (as a scaled single letter), in
/// which case the ball is just the span of normal words of degree `<= m`.
fn is_generator_set(pres: &AlgebraPresentation, s: &[Element]) -> bool {
    let mut seen = vec![false; pres.n_generators()];
    for e in s {
        match e.terms().collect::<Vec<_>>().as_slice() {
            [(w, _)] if w.degree() == 1 => seen[w.letters()[0] as usize] = true,
            _ => return false,
        }
    }
    seen.iter().all(|&b| b)
}

fn check_degree(s: &[Element], m: usize, window: &CoordinateWindow) -> Result<()> {
    let deg = s.iter().map(Element::degree).max().unwrap_or(0);
    if m * deg > window.degree_bound() {
        return Err(Error::overflow(m * deg, window.degree_bound()));
    }
    Ok(())
}

/// Iterates the layers `K·1, KS, KS², …` of a ball.
struct Layers<'a> {
    pres: &'a AlgebraPresentation,
    s: &'a [Element],
    window: &'a CoordinateWindow,
    current: Option<RowSpace>,
}

impl<'a> Layers<'a> {
    fn new(pres: &'a AlgebraPresentation, s: &'a [Element], window: &'a CoordinateWindow) -> Self {
        Layers {
            pres,
            s,
            window,
            current: None,
        }
    }

    fn next_layer(&mut self) -> Result<RowSpace> {
        let next = match &self.current {
            None if self.pres.is_unital() => self.window.span(&[Element::unit()])?,
            None => self.window.span(self.s)?,
            Some(cur) => right_multiply_by_set(self.pres, cur, self.s, self.window)?,
        };
        self.current = Some(next.clone());
        Ok(next)
    }

    /// Running sums `R_0, R_1, …, R_m`.
    fn balls(mut self, m: usize) -> Result<Vec<RowSpace>> {
        let mut out = Vec::with_capacity(m + 1);
        if !self.pres.is_unital() {
            out.push(self.window.zero_space());
        }
        let mut acc = self.window.zero_space();
        while out.len() <= m {
            acc = acc.sum(&self.next_layer()?)?;
            out.push(acc.clone());
        }
        Ok(out)
    }
}

/// `R_m`: span of all products of at most `m` elements of `s`.
pub fn ball(pres: &AlgebraPresentation, s: &[Element], m: usize, window: &CoordinateWindow) -> Result<RowSpace> {
    check_degree(s, m, window)?;
    if is_generator_set(pres, s) {
        let mut b = window.ball_words(m);
        if !pres.is_unital() && m == 0 {
            b = window.zero_space();
        }
        return Ok(b);
    }
    ball_by_products(pres, s, m, window)
}

/// Ball computed by explicit layer products, without the word-count shortcut.
pub fn ball_by_products(
    pres: &AlgebraPresentation,
    s: &[Element],
    m: usize,
    window: &CoordinateWindow,
) -> Result<RowSpace> {
    check_degree(s, m, window)?;
    Ok(Layers::new(pres, s, window).balls(m)?.pop().unwrap())
}

pub fn growth_sequence(
    pres: &AlgebraPresentation,
    s: &[Element],
    m_max: usize,
    window: &CoordinateWindow,
) -> Result<GrowthSeries> {
    check_degree(s, m_max, window)?;
    let d: Vec<usize> = if is_generator_set(pres, s) {
        (0..=m_max).map(|m| window.columns_up_to(m)).collect()
    } else {
        Layers::new(pres, s, window)
            .balls(m_max)?
            .iter()
            .map(RowSpace::dim)
            .collect()
    };
    Ok(GrowthSeries {
        algebra_hash: pres.content_hash(),
        generating_set: s.iter().map(|e| pres.format_element(e)).collect(),
        d,
    })
}

/// Smallest `m >= 1` with `d[m + t] <= d[m]·(1 + epsilon)`, if any within the
/// computed range. `None` is inconclusive.
pub fn subexp_probe(g: &GrowthSeries, epsilon: Rational, t: usize) -> Option<usize> {
    let factor = Rational::from_integer(1) + epsilon;
    (1..g.d.len())
        .take_while(|m| m + t < g.d.len())
        .find(|&m| Rational::from_integer(g.d[m + t] as u64) <= factor * Rational::from_integer(g.d[m] as u64))
}

/// Normal words of the window spanning `R_m` when `s` is the generating set.
pub fn ball_word_list(window: &CoordinateWindow, m: usize) -> Vec<Word> {
    window.words().take(window.columns_up_to(m)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_basis;

    fn pres(json: &str) -> AlgebraPresentation {
        AlgebraPresentation::from_json(json).unwrap()
    }

    // number of words of length <= m over an alphabet of size 2
    fn free_words(m: u32) -> usize {
        (0..=m).map(|j| 2usize.pow(j)).sum()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn balls_match_word_counts() {
        let free = pres(r#"{"generators":["x","y"]}"#);
        let win = enumerate_basis(&free, 4).unwrap();
        let s = free.generator_elements();
        assert_eq!(ball(&free, &s, 2, &win).unwrap().dim(), free_words(2));
        assert_eq!(ball_by_products(&free, &s, 2, &win).unwrap().dim(), 7);

        let comm = pres(r#"{"generators":["x","y"],"rules":[{"lhs":"y*x","rhs":"x*y"}]}"#);
        let win = enumerate_basis(&comm, 3).unwrap();
        let s = comm.generator_elements();
        assert_eq!(ball_by_products(&comm, &s, 3, &win).unwrap().dim(), binom(5, 2));

        let ex = pres(r#"{"generators":["x","y"],"rules":[{"lhs":"x*x","rhs":"0"},{"lhs":"x*y","rhs":"0"}]}"#);
        let win = enumerate_basis(&ex, 3).unwrap();
        let s = ex.generator_elements();
        assert_eq!(ball_by_products(&ex, &s, 3, &win).unwrap().dim(), 7);
    }

    #[test]
    fn growth_closed_forms() {
        let free = pres(r#"{"generators":["x","y"]}"#);
        let win = enumerate_basis(&free, 10).unwrap();
        let g = growth_sequence(&free, &free.generator_elements(), 10, &win).unwrap();
        for m in 0..=10u32 {
            assert_eq!(g.d[m as usize], free_words(m));
            assert_eq!(g.d[m as usize], 2usize.pow(m + 1) - 1);
        }
        let comm = pres(r#"{"generators":["x","y"],"rules":[{"lhs":"y*x","rhs":"x*y"}]}"#);
        let win = enumerate_basis(&comm, 9).unwrap();
        let g = growth_sequence(&comm, &comm.generator_elements(), 9, &win).unwrap();
        for m in 0..=9 {
            assert_eq!(g.d[m], (m + 1) * (m + 2) / 2);
        }
        assert_eq!(subexp_probe(&g, Rational::new(1, 4), 1), Some(7));
        assert_eq!(subexp_probe(&g, Rational::from_integer(10), 1), Some(1));

        let ex = pres(r#"{"generators":["x","y"],"rules":[{"lhs":"x*x","rhs":"0"},{"lhs":"x*y","rhs":"0"}]}"#);
        let win = enumerate_basis(&ex, 8).unwrap();
        let g = growth_sequence(&ex, &ex.generator_elements(), 8, &win).unwrap();
        for m in 1..=8 {
            assert_eq!(g.d[m], 2 * m + 1);
        }
    }

    #[test]
    fn free_growth_is_inconclusive() {
        let free = pres(r#"{"generators":["x","y"]}"#);
        let win = enumerate_basis(&free, 12).unwrap();
        let g = growth_sequence(&free, &free.generator_elements(), 12, &win).unwrap();
        assert_eq!(subexp_probe(&g, Rational::new(1, 2), 1), None);
    }

    #[test]
    fn overflow_is_reported() {
        let free = pres(r#"{"generators":["x","y"]}"#);
        let win = enumerate_basis(&free, 3).unwrap();
        let err = ball(&free, &free.generator_elements(), 4, &win).unwrap_err();
        assert_eq!(err, Error::overflow(4, 3));
    }
}
