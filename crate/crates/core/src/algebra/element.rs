use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::Word;
use crate::exactlin::FieldSpec;

/// A finite linear combination of words with nonzero GF(p) coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element(BTreeMap<Word, u32>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeMap::new())
    }

    pub fn monomial(word: Word, coeff: u32) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(word, coeff);
        }
        Element(m)
    }

    pub fn word(word: Word) -> Self {
        Element::monomial(word, 1)
    }

    pub fn unit() -> Self {
        Element::word(Word::unit())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, u32)> + '_ {
        self.0.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> u32 {
        self.0.get(w).copied().unwrap_or(0)
    }

    /// Largest word degree; zero for the zero element.
    pub fn degree(&self) -> usize {
        self.0.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.0.keys().next_back()
    }

    /// `self += c·w`.
    pub fn add_term(&mut self, field: FieldSpec, w: Word, c: u32) {
        if c == 0 {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let n = field.add(*o.get(), c);
                if n == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = n;
                }
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, field: FieldSpec, other: &Element, c: u32) {
        for (w, a) in other.terms() {
            self.add_term(field, w.clone(), field.mul(a, c));
        }
    }

    pub fn scaled(&self, field: FieldSpec, c: u32) -> Element {
        let mut out = Element::zero();
        out.add_scaled(field, self, c);
        out
    }

    pub fn sum(&self, field: FieldSpec, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(field, other, 1);
        out
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> + '_ {
        self.0.keys()
    }
}

impl FromIterator<(Word, u32)> for Element {
    /// Collects terms assuming distinct words and nonzero coefficients.
    fn from_iter<I: IntoIterator<Item = (Word, u32)>>(iter: I) -> Self {
        Element(iter.into_iter().filter(|(_, c)| *c != 0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_terms() {
        let f = FieldSpec::new(5).unwrap();
        let mut e = Element::monomial(Word::letter(0), 2);
        e.add_term(f, Word::letter(0), 3);
        assert!(e.is_zero());
        let a = Element::monomial(Word::letter(1), 4);
        assert_eq!(a.scaled(f, 0), Element::zero());
        assert_eq!(a.sum(f, &a).coeff(&Word::letter(1)), 3);
    }
}
