use std::collections::HashMap;

use indexmap::IndexSet;

use super::{AlgebraPresentation, Element, Word};
use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, RowSpace, SparseVec};

/// The normal words of degree at most `degree_bound`, in deglex order, with
/// their column indices. Every exact computation happens inside a window.
#[derive(Debug, Clone)]
pub struct CoordinateWindow {
    field: FieldSpec,
    degree_bound: usize,
    words: IndexSet<Word>,
    // number of columns of degree <= d, indexed by d
    prefix: Vec<usize>,
}

impl CoordinateWindow {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter()
    }

    pub fn word(&self, col: usize) -> &Word {
        &self.words[col]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.get_index_of(w)
    }

    /// Number of columns whose word has degree at most `d`; these columns
    /// form a prefix of the window.
    pub fn columns_up_to(&self, d: usize) -> usize {
        self.prefix[d.min(self.degree_bound)]
    }

    pub fn col_degree(&self, col: usize) -> usize {
        self.words[col].degree()
    }

    /// Coordinates of a canonical element. Words outside the window are a
    /// truncation overflow.
    pub fn vector(&self, e: &Element) -> Result<SparseVec> {
        let mut pairs = Vec::with_capacity(e.len());
        for (w, c) in e.terms() {
            match self.words.get_index_of(w) {
                Some(i) => pairs.push((i, c)),
                None => return Err(Error::overflow(w.degree(), self.degree_bound)),
            }
        }
        Ok(SparseVec::from_pairs(self.field, pairs))
    }

    pub fn element(&self, v: &SparseVec) -> Element {
        v.iter().map(|(c, a)| (self.words[c].clone(), a)).collect()
    }

    /// Largest degree of a column carrying a nonzero coordinate of `w`.
    pub fn subspace_degree(&self, w: &RowSpace) -> usize {
        w.support_max().map(|c| self.col_degree(c)).unwrap_or(0)
    }

    /// Span of the given canonical elements.
    pub fn span(&self, elements: &[Element]) -> Result<RowSpace> {
        let vs = elements.iter().map(|e| self.vector(e)).collect::<Result<Vec<_>>>()?;
        RowSpace::span(self.field, self.len(), vs)
    }

    /// Span of a set of words.
    pub fn word_span<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> Result<RowSpace> {
        let mut cols = Vec::new();
        for w in words {
            match self.index_of(w) {
                Some(i) => cols.push(i),
                None => return Err(Error::overflow(w.degree(), self.degree_bound)),
            }
        }
        Ok(RowSpace::coordinate(self.field, self.len(), cols))
    }

    /// All words of degree at most `d`.
    pub fn ball_words(&self, d: usize) -> RowSpace {
        RowSpace::coordinate(self.field, self.len(), 0..self.columns_up_to(d))
    }

    pub fn zero_space(&self) -> RowSpace {
        RowSpace::zero(self.field, self.len())
    }

    /// Words spanning `w` when `w` is a coordinate subspace.
    pub fn basis_words(&self, w: &RowSpace) -> Result<Vec<Word>> {
        if !w.is_coordinate() {
            return Err(Error::NonMonomialExhaustion);
        }
        Ok(w.pivots().iter().map(|&c| self.words[c].clone()).collect())
    }

    pub fn elements_of(&self, w: &RowSpace) -> Vec<Element> {
        w.basis().iter().map(|r| self.element(r)).collect()
    }
}

/// Enumerates the canonical basis of normal words up to degree `degree_bound`.
///
/// Refuses to run unless every rewriting ambiguity up to degree
/// `max(2·degree_bound, 2·max rule degree)` resolves, which covers all
/// ambiguities of the rewriting system.
pub fn enumerate_basis(pres: &AlgebraPresentation, degree_bound: usize) -> Result<CoordinateWindow> {
    let bound = (2 * degree_bound).max(2 * pres.max_rule_degree());
    let overlaps = pres.confluence_check(bound);
    if !overlaps.is_empty() {
        return Err(Error::NonConfluent { bound, overlaps });
    }
    let words: IndexSet<Word> = pres.normal_words_up_to(degree_bound).into_iter().collect();
    let mut prefix = vec![0usize; degree_bound + 1];
    for w in &words {
        prefix[w.degree()] += 1;
    }
    for d in 1..=degree_bound {
        prefix[d] += prefix[d - 1];
    }
    Ok(CoordinateWindow {
        field: pres.field(),
        degree_bound,
        words,
        prefix,
    })
}

/// Right translate `W·r` as a subspace of the same window.
pub fn right_multiply_subspace(
    pres: &AlgebraPresentation,
    w: &RowSpace,
    r: &Element,
    window: &CoordinateWindow,
) -> Result<RowSpace> {
    let needed = window.subspace_degree(w) + r.degree();
    if !w.is_zero() && !r.is_zero() && needed > window.degree_bound() {
        return Err(Error::overflow(needed, window.degree_bound()));
    }
    let translates = Translator::new(pres, window, r);
    let rows = w
        .basis()
        .iter()
        .map(|row| translates.apply(row))
        .collect::<Result<Vec<_>>>()?;
    RowSpace::span(window.field(), window.len(), rows)
}

/// Sum of right translates `Σ_z W·z`.
pub fn right_multiply_by_set(
    pres: &AlgebraPresentation,
    w: &RowSpace,
    zs: &[Element],
    window: &CoordinateWindow,
) -> Result<RowSpace> {
    let mut acc = window.zero_space();
    for z in zs {
        acc = acc.sum(&right_multiply_subspace(pres, w, z, window)?)?;
    }
    Ok(acc)
}

/// Right multiplication by a fixed element, memoized per basis word.
pub(crate) struct Translator<'a> {
    pres: &'a AlgebraPresentation,
    window: &'a CoordinateWindow,
    r: &'a Element,
    cache: std::cell::RefCell<HashMap<usize, SparseVec>>,
}

impl<'a> Translator<'a> {
    pub(crate) fn new(pres: &'a AlgebraPresentation, window: &'a CoordinateWindow, r: &'a Element) -> Self {
        Translator {
            pres,
            window,
            r,
            cache: Default::default(),
        }
    }

    pub(crate) fn word(&self, col: usize) -> Result<SparseVec> {
        if let Some(v) = self.cache.borrow().get(&col) {
            return Ok(v.clone());
        }
        let w = self.window.word(col);
        if w.degree() + self.r.degree() > self.window.degree_bound() && !self.r.is_zero() {
            return Err(Error::overflow(w.degree() + self.r.degree(), self.window.degree_bound()));
        }
        let v = self.window.vector(&self.pres.multiply_normal_word(w, self.r))?;
        self.cache.borrow_mut().insert(col, v.clone());
        Ok(v)
    }

    pub(crate) fn apply(&self, row: &SparseVec) -> Result<SparseVec> {
        let f = self.window.field();
        if row.nnz() == 1 {
            let (c, a) = row.leading().unwrap();
            return Ok(self.word(c)?.scale(f, a));
        }
        let mut pairs = Vec::new();
        for (c, a) in row.iter() {
            pairs.extend(self.word(c)?.iter().map(|(col, v)| (col, f.mul(v, a))));
        }
        Ok(SparseVec::from_pairs(f, pairs))
    }
}
