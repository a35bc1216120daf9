use std::cmp::Ordering;

/// A word in the generators, stored as generator indices. The empty word is
/// the unit.
///
/// Words are ordered degree-lexicographically: shorter words first, then
/// lexicographically by generator index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u16>) -> Self {
        Word(letters)
    }

    pub fn letter(g: u16) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, g: u16) -> Word {
        let mut v = self.0.clone();
        v.push(g);
        Word(v)
    }

    pub fn last(&self) -> Option<u16> {
        self.0.last().copied()
    }

    /// First position where `factor` occurs.
    pub fn find(&self, factor: &[u16]) -> Option<usize> {
        if factor.is_empty() || factor.len() > self.0.len() {
            return None;
        }
        self.0.windows(factor.len()).position(|w| w == factor)
    }

    pub fn contains_factor(&self, factor: &[u16]) -> bool {
        self.find(factor).is_some()
    }
}

impl From<Vec<u16>> for Word {
    fn from(v: Vec<u16>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
