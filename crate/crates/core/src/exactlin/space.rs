use std::collections::{BTreeMap, HashMap};

use super::FieldSpec;
use crate::error::{Error, Result};

/// A sparse vector over GF(p): strictly increasing column indices with
/// nonzero values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec(Vec<(usize, u32)>);

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec(Vec::new())
    }

    /// Builds a vector from arbitrary `(col, value)` pairs, summing repeated
    /// columns and dropping zeros.
    pub fn from_pairs(field: FieldSpec, pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (c, v) in pairs {
            let e = acc.entry(c).or_insert(0);
            *e = field.add(*e, v);
        }
        SparseVec(acc.into_iter().filter(|&(_, v)| v != 0).collect())
    }

    pub fn unit(col: usize) -> Self {
        SparseVec(vec![(col, 1)])
    }

    pub fn from_dense(field: FieldSpec, dense: &[u32]) -> Self {
        SparseVec::from_pairs(field, dense.iter().copied().enumerate())
    }

    fn from_acc(acc: BTreeMap<usize, u64>) -> Self {
        SparseVec(
            acc.into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(c, v)| (c, v as u32))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn leading(&self) -> Option<(usize, u32)> {
        self.0.first().copied()
    }

    pub fn last_col(&self) -> Option<usize> {
        self.0.last().map(|&(c, _)| c)
    }

    pub fn get(&self, col: usize) -> u32 {
        self.0
            .binary_search_by_key(&col, |&(c, _)| c)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(c, v) in &self.0 {
            out[c] = v;
        }
        out
    }

    pub fn scale(&self, field: FieldSpec, a: u32) -> Self {
        if a == 0 {
            return SparseVec::zero();
        }
        SparseVec(self.0.iter().map(|&(c, v)| (c, field.mul(v, a))).collect())
    }

    /// Shifts every column index by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec(self.0.iter().map(|&(c, v)| (c + offset, v)).collect())
    }

    /// Keeps the columns in `range` and re-bases them to start at zero.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Self {
        SparseVec(
            self.0
                .iter()
                .filter(|(c, _)| range.contains(c))
                .map(|&(c, v)| (c - range.start, v))
                .collect(),
        )
    }

    pub fn concat(&self, other: &SparseVec, offset: usize) -> Self {
        let mut out = self.0.clone();
        out.extend(other.0.iter().map(|&(c, v)| (c + offset, v)));
        SparseVec(out)
    }
}

/// A matrix stored sparse by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    cols: usize,
    rows: Vec<SparseVec>,
}

impl Mat {
    pub fn new(field: FieldSpec, cols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        for r in &rows {
            if let Some(c) = r.last_col() {
                if c >= cols {
                    return Err(Error::LengthMismatch {
                        expected: cols,
                        got: c + 1,
                    });
                }
            }
        }
        Ok(Mat { field, cols, rows })
    }

    pub fn from_dense(field: FieldSpec, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::LengthMismatch {
                        expected: cols,
                        got: r.len(),
                    });
                }
                Ok(SparseVec::from_pairs(
                    field,
                    r.iter()
                        .enumerate()
                        .map(|(c, &v)| (c, (v % field.characteristic()) as u32)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat { field, cols, rows })
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            cols,
            rows: vec![SparseVec::zero(); rows],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Mat {
            field,
            cols: n,
            rows: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

/// A subspace of GF(p)^n held as a reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        RowSpace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span<I>(field: FieldSpec, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = SparseVec>,
    {
        let mut ech = Echelon::new(field, ambient);
        for v in vectors {
            ech.insert(v)?;
        }
        Ok(ech.into_row_space())
    }

    /// Span of coordinate vectors.
    pub fn coordinate(field: FieldSpec, ambient: usize, cols: impl IntoIterator<Item = usize>) -> Self {
        let mut cols: Vec<usize> = cols.into_iter().filter(|&c| c < ambient).collect();
        cols.sort_unstable();
        cols.dedup();
        RowSpace {
            field,
            ambient,
            rows: cols.iter().map(|&c| SparseVec::unit(c)).collect(),
            pivots: cols,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_mat(&self) -> Mat {
        Mat {
            field: self.field,
            cols: self.ambient,
            rows: self.rows.clone(),
        }
    }

    /// Largest column index carrying a nonzero entry in any basis row.
    pub fn support_max(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.last_col()).max()
    }

    /// True when every basis row is a single coordinate vector.
    pub fn is_coordinate(&self) -> bool {
        self.rows.iter().all(|r| r.nnz() == 1)
    }

    /// Reduces `v` modulo the space; the result has zeros at all pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let f = self.field;
        let mut touched = false;
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for (c, a) in v.iter() {
            acc.insert(c, a as u64);
        }
        for (c, a) in v.iter() {
            if let Ok(i) = self.pivots.binary_search(&c) {
                touched = true;
                let na = f.neg(a);
                for (col, val) in self.rows[i].iter() {
                    let e = acc.entry(col).or_insert(0);
                    *e = f.add(*e as u32, f.mul(na, val)) as u64;
                }
            }
        }
        if !touched {
            return v.clone();
        }
        SparseVec::from_acc(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        if let Some(c) = v.last_col() {
            if c >= self.ambient {
                return Err(Error::LengthMismatch {
                    expected: self.ambient,
                    got: c + 1,
                });
            }
        }
        Ok(self.reduce(v).is_zero())
    }

    pub fn contains_space(&self, other: &RowSpace) -> Result<bool> {
        check_ambient(self, other)?;
        Ok(other.rows.iter().all(|r| self.reduce(r).is_zero()))
    }

    pub fn sum(&self, other: &RowSpace) -> Result<RowSpace> {
        check_ambient(self, other)?;
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        if small.is_zero() {
            return Ok(big.clone());
        }
        let mut ech = Echelon::from_space(big);
        for r in &small.rows {
            ech.insert(r.clone())?;
        }
        Ok(ech.into_row_space())
    }

    /// Intersection computed by the Zassenhaus method: eliminate the stacked
    /// rows `(u, u)` and `(v, 0)`; rows whose left half vanishes span `U ∩ V`.
    pub fn intersection(&self, other: &RowSpace) -> Result<RowSpace> {
        check_ambient(self, other)?;
        let n = self.ambient;
        if self.is_zero() || other.is_zero() {
            return Ok(RowSpace::zero(self.field, n));
        }
        let mut ech = Echelon::new(self.field, 2 * n);
        for r in &self.rows {
            ech.insert(r.concat(r, n))?;
        }
        for r in &other.rows {
            ech.insert(r.clone())?;
        }
        let right: Vec<SparseVec> = ech
            .rows
            .iter()
            .filter(|r| r.leading().is_some_and(|(c, _)| c >= n))
            .map(|r| r.restrict(n..2 * n))
            .collect();
        RowSpace::span(self.field, n, right)
    }

    pub fn intersection_dim(&self, other: &RowSpace) -> Result<usize> {
        Ok(self.intersection(other)?.dim())
    }

    /// Image of the space under a coordinate relabelling `col -> offset + col`
    /// into a larger ambient space.
    pub fn embed(&self, ambient: usize, offset: usize) -> Result<RowSpace> {
        if offset + self.ambient > ambient {
            return Err(Error::AmbientMismatch(offset + self.ambient, ambient));
        }
        Ok(RowSpace {
            field: self.field,
            ambient,
            rows: self.rows.iter().map(|r| r.shifted(offset)).collect(),
            pivots: self.pivots.iter().map(|p| p + offset).collect(),
        })
    }
}

fn check_ambient(u: &RowSpace, v: &RowSpace) -> Result<()> {
    if u.ambient != v.ambient {
        return Err(Error::AmbientMismatch(u.ambient, v.ambient));
    }
    if u.field != v.field {
        return Err(Error::Invalid("subspaces over different fields".into()));
    }
    Ok(())
}

/// Reduced row-echelon form of `m` and its rank.
pub fn rref(m: &Mat) -> (RowSpace, usize) {
    let mut ech = Echelon::new(m.field, m.cols);
    for r in &m.rows {
        ech.insert(r.clone()).expect("rows validated at construction");
    }
    let rs = ech.into_row_space();
    let rank = rs.dim();
    (rs, rank)
}

/// Rank of a family of vectors.
pub fn rank_of<'a>(
    field: FieldSpec,
    ambient: usize,
    vectors: impl IntoIterator<Item = &'a SparseVec>,
) -> Result<usize> {
    let mut ech = Echelon::new(field, ambient);
    for v in vectors {
        ech.insert(v.clone())?;
    }
    Ok(ech.rank())
}

/// Incremental semi-echelon basis: rows have distinct leading columns and a
/// leading coefficient of one. Converted to full RREF on demand.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: FieldSpec, ambient: usize) -> Self {
        Echelon {
            field,
            ambient,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn from_space(space: &RowSpace) -> Self {
        Echelon {
            field: space.field,
            ambient: space.ambient,
            rows: space.rows.clone(),
            pivot_row: space.pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Forward reduction of `v` against the current rows.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if !v.iter().any(|(c, _)| self.pivot_row.contains_key(&c)) {
            return v.clone();
        }
        let f = self.field;
        let mut acc: BTreeMap<usize, u64> = v.iter().map(|(c, a)| (c, a as u64)).collect();
        let mut cursor = 0usize;
        loop {
            let hit = acc
                .range(cursor..)
                .find(|(c, a)| **a != 0 && self.pivot_row.contains_key(c))
                .map(|(&c, &a)| (c, a as u32));
            let Some((c, a)) = hit else { break };
            let na = f.neg(a);
            for (col, val) in self.rows[self.pivot_row[&c]].iter() {
                let e = acc.entry(col).or_insert(0);
                *e = f.add(*e as u32, f.mul(na, val)) as u64;
            }
            cursor = c + 1;
        }
        SparseVec::from_acc(acc)
    }

    pub fn is_independent(&self, v: &SparseVec) -> bool {
        !self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> Result<bool> {
        if let Some(c) = v.last_col() {
            if c >= self.ambient {
                return Err(Error::LengthMismatch {
                    expected: self.ambient,
                    got: c + 1,
                });
            }
        }
        let r = self.reduce(&v);
        let Some((lead, a)) = r.leading() else {
            return Ok(false);
        };
        let r = if a == 1 { r } else { r.scale(self.field, self.field.inv(a)) };
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push(r);
        Ok(true)
    }

    pub fn into_row_space(self) -> RowSpace {
        let f = self.field;
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading().map(|(c, _)| c));
        let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap().0).collect();
        // back substitution, last row first
        for i in (0..rows.len()).rev() {
            let needs = rows[i]
                .iter()
                .skip(1)
                .any(|(c, _)| pivots[i + 1..].binary_search(&c).is_ok());
            if !needs {
                continue;
            }
            let mut acc: BTreeMap<usize, u64> = rows[i].iter().map(|(c, a)| (c, a as u64)).collect();
            for (c, a) in rows[i].iter().skip(1) {
                if let Ok(j) = pivots[i + 1..].binary_search(&c) {
                    let na = f.neg(a);
                    for (col, val) in rows[i + 1 + j].iter() {
                        let e = acc.entry(col).or_insert(0);
                        *e = f.add(*e as u32, f.mul(na, val)) as u64;
                    }
                }
            }
            rows[i] = SparseVec::from_acc(acc);
        }
        RowSpace {
            field: f,
            ambient: self.ambient,
            rows,
            pivots,
        }
    }
}
