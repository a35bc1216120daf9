use std::collections::{BTreeMap, HashMap};

use super::{FieldSpec, SparseVec};

/// Echelon basis that remembers, for every row, which combination of the
/// inserted generators produced it. Used to read off fundamental circuits.
#[derive(Debug, Clone)]
pub struct TrackedBasis {
    field: FieldSpec,
    rows: Vec<(SparseVec, BTreeMap<usize, u32>)>,
    pivot_row: HashMap<usize, usize>,
}

impl TrackedBasis {
    pub fn new(field: FieldSpec) -> Self {
        TrackedBasis {
            field,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`, returning the residue and the combination `c` of
    /// generators such that `v = residue + Σ c[g]·generator_g`.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, BTreeMap<usize, u32>) {
        let f = self.field;
        let mut acc: BTreeMap<usize, u32> = v.iter().collect();
        let mut combo: BTreeMap<usize, u32> = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let hit = acc
                .range(cursor..)
                .find(|(c, a)| **a != 0 && self.pivot_row.contains_key(c))
                .map(|(&c, &a)| (c, a));
            let Some((c, a)) = hit else { break };
            let (row, row_combo) = &self.rows[self.pivot_row[&c]];
            let na = f.neg(a);
            for (col, val) in row.iter() {
                let e = acc.entry(col).or_insert(0);
                *e = f.add(*e, f.mul(na, val));
            }
            for (&g, &val) in row_combo {
                let e = combo.entry(g).or_insert(0);
                *e = f.add(*e, f.mul(a, val));
            }
            cursor = c + 1;
        }
        let residue = SparseVec::from_pairs(f, acc);
        combo.retain(|_, v| *v != 0);
        (residue, combo)
    }

    /// Inserts generator `id` with vector `v`; returns false (and leaves the
    /// basis unchanged) when `v` is dependent on earlier generators.
    pub fn insert(&mut self, id: usize, v: &SparseVec) -> bool {
        let f = self.field;
        let (residue, combo) = self.reduce(v);
        let Some((lead, a)) = residue.leading() else {
            return false;
        };
        // residue = v - Σ combo·g, so the row tracks e_id - combo
        let mut track: BTreeMap<usize, u32> = combo.into_iter().map(|(g, c)| (g, f.neg(c))).collect();
        let e = track.entry(id).or_insert(0);
        *e = f.add(*e, 1);
        let inv = f.inv(a);
        let row = residue.scale(f, inv);
        for val in track.values_mut() {
            *val = f.mul(*val, inv);
        }
        track.retain(|_, v| *v != 0);
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push((row, track));
        true
    }

    pub fn is_independent(&self, v: &SparseVec) -> bool {
        !self.reduce(v).0.is_zero()
    }

    /// For `v` in the span, the ids of generators with a nonzero coefficient
    /// in its (unique) expansion; `None` if `v` is independent.
    pub fn circuit(&self, v: &SparseVec) -> Option<Vec<usize>> {
        let (residue, combo) = self.reduce(v);
        if !residue.is_zero() {
            return None;
        }
        Some(combo.into_keys().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_reads_expansion() {
        let f = FieldSpec::new(5).unwrap();
        let mut t = TrackedBasis::new(f);
        let a = SparseVec::from_dense(f, &[1, 1, 0]);
        let b = SparseVec::from_dense(f, &[0, 1, 1]);
        let c = SparseVec::from_dense(f, &[0, 0, 1]);
        assert!(t.insert(10, &a));
        assert!(t.insert(20, &b));
        assert!(t.insert(30, &c));
        // (1,0,0) = a - b + c
        assert_eq!(t.circuit(&SparseVec::from_dense(f, &[1, 0, 0])), Some(vec![10, 20, 30]));
        // (1,2,1) = a + b
        assert_eq!(t.circuit(&SparseVec::from_dense(f, &[1, 2, 1])), Some(vec![10, 20]));
        assert_eq!(t.circuit(&SparseVec::zero()), Some(vec![]));
        let mut t2 = TrackedBasis::new(f);
        t2.insert(0, &a);
        assert_eq!(t2.circuit(&b), None);
        assert!(!t2.insert(1, &a.scale(f, 3)));
    }
}
