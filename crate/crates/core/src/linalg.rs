//! Exact sparse linear algebra: incremental row echelon forms, ranks,
//! kernels and subspace comparisons.

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sparse vector as sorted `(index, value)` pairs without zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, F::one())] }
    }

    /// Build from arbitrary pairs; duplicates are summed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut map: BTreeMap<usize, F> = BTreeMap::new();
        for (i, v) in pairs {
            let e = map.entry(i).or_insert_with(F::zero);
            *e += v;
        }
        SparseVec { entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(v: &[F]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<F> {
        let mut d = vec![F::zero(); n];
        for (i, v) in &self.entries {
            d[*i] = v.clone();
        }
        d
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> F {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v.clone() * c.clone())).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &F, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = other.entries.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.entries[a].clone());
                a += 1;
            } else if ib < ia {
                let v = other.entries[b].1.clone() * c.clone();
                if !v.is_zero() {
                    out.push((ib, v));
                }
                b += 1;
            } else {
                let v = self.entries[a].1.clone() + other.entries[b].1.clone() * c.clone();
                if !v.is_zero() {
                    out.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-F::one(), other)
    }

    pub fn dot(&self, other: &Self) -> F {
        let (mut a, mut b) = (0, 0);
        let mut acc = F::zero();
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ib) = (self.entries[a].0, other.entries[b].0);
            if ia < ib {
                a += 1;
            } else if ib < ia {
                b += 1;
            } else {
                acc += self.entries[a].1.clone() * other.entries[b].1.clone();
                a += 1;
                b += 1;
            }
        }
        acc
    }

    pub fn first(&self) -> Option<&(usize, F)> {
        self.entries.first()
    }
}

/// Row echelon form built incrementally. Each stored row is normalized so
/// that its pivot (first nonzero entry) equals one.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec<F>>) -> Self {
        let mut e = Self::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F>> + '_ {
        self.rows.values()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        if v.is_zero() || self.rows.is_empty() {
            return v.clone();
        }
        let mut dense: BTreeMap<usize, F> = v.entries.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = dense.range(cursor..).find(|(i, _)| self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone()));
            let Some((p, c)) = next else { break };
            let row = &self.rows[&p];
            for (j, rv) in row.entries() {
                let e = dense.entry(*j).or_insert_with(F::zero);
                *e -= rv.clone() * c.clone();
                if e.is_zero() {
                    dense.remove(j);
                }
            }
            cursor = p + 1;
        }
        SparseVec { entries: dense.into_iter().collect() }
    }

    /// Insert a vector; returns true if it was independent of the span.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(&v);
        match r.first() {
            None => false,
            Some((p, lead)) => {
                let p = *p;
                let inv = lead.inv();
                self.rows.insert(p, r.scale(&inv));
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Whether every vector of `other`'s span lies in this span.
    pub fn contains_span(&self, other: &Echelon<F>) -> bool {
        other.rows.values().all(|r| self.contains(r))
    }

    /// Fully reduced form: every pivot column is zero in all other rows.
    pub fn into_rref(mut self) -> Echelon<F> {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for (idx, &p) in pivots.iter().enumerate() {
            let row = self.rows[&p].clone();
            for &q in &pivots[idx + 1..] {
                let c = self.rows[&q].get(p);
                if !c.is_zero() {
                    let updated = self.rows[&q].axpy(&-c, &row);
                    self.rows.insert(q, updated);
                }
            }
        }
        self
    }

    /// Basis of `{c : sum_j c_j * column_j = 0}` when the stored rows are the
    /// rows of a matrix with `ncols` columns.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        let rref = self.clone().into_rref();
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if rref.rows.contains_key(&free) {
                continue;
            }
            let mut pairs = vec![(free, F::one())];
            for (p, row) in &rref.rows {
                let c = row.get(free);
                if !c.is_zero() {
                    pairs.push((*p, -c));
                }
            }
            out.push(SparseVec::from_pairs(pairs));
        }
        out
    }
}

/// Rank of a list of vectors.
pub fn rank<F: Field>(ncols: usize, vectors: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    Echelon::from_rows(ncols, vectors).rank()
}

/// Kernel of a matrix given by its rows.
pub fn kernel_of_rows<F: Field>(ncols: usize, rows: impl IntoIterator<Item = SparseVec<F>>) -> Vec<SparseVec<F>> {
    Echelon::from_rows(ncols, rows).kernel()
}

/// Transpose a list of column vectors (each of length `nrows`) into rows.
pub fn transpose<F: Field>(nrows: usize, columns: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.entries() {
            rows[*i].push((j, v.clone()));
        }
    }
    rows.into_iter().map(|entries| SparseVec { entries }).collect()
}

/// Kernel of the map `c -> sum_j c_j * columns[j]`.
pub fn kernel_of_columns<F: Field>(nrows: usize, columns: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    kernel_of_rows(columns.len(), transpose(nrows, columns))
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span<F: Field>(ncols: usize, a: &[SparseVec<F>], b: &[SparseVec<F>]) -> bool {
    let ea = Echelon::from_rows(ncols, a.iter().cloned());
    let eb = Echelon::from_rows(ncols, b.iter().cloned());
    ea.rank() == eb.rank() && ea.contains_span(&eb) && eb.contains_span(&ea)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::{Field, Fp, Rational};
    use proptest::prelude::*;

    type F = Fp<101>;

    fn sv(v: &[i64]) -> SparseVec<Rational> {
        SparseVec::from_dense(&v.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_kernel_small() {
        let rows = vec![sv(&[1, 2, 3]), sv(&[2, 4, 6]), sv(&[0, 1, 1])];
        let e = Echelon::from_rows(3, rows.clone());
        assert_eq!(e.rank(), 2);
        let ker = e.kernel();
        assert_eq!(ker.len(), 1);
        for r in &rows {
            assert!(r.dot(&ker[0]).is_zero());
        }
    }

    #[test]
    fn kernel_of_columns_finds_dependency() {
        let cols = vec![sv(&[1, 0]), sv(&[0, 1]), sv(&[1, 1])];
        let ker = kernel_of_columns(2, &cols);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        let combo = cols[0].scale(&k.get(0)).add(&cols[1].scale(&k.get(1))).add(&cols[2].scale(&k.get(2)));
        assert!(combo.is_zero());
    }

    proptest! {
        #[test]
        fn rank_nullity(m in prop::collection::vec(prop::collection::vec(0i64..5, 6), 1..7)) {
            let rows: Vec<SparseVec<F>> = m.iter()
                .map(|r| SparseVec::from_dense(&r.iter().map(|&x| F::from_i64(x)).collect::<Vec<_>>()))
                .collect();
            let e = Echelon::from_rows(6, rows.clone());
            let ker = e.kernel();
            prop_assert_eq!(e.rank() + ker.len(), 6);
            for r in &rows {
                for k in &ker {
                    prop_assert!(r.dot(k).is_zero());
                }
            }
            prop_assert!(same_span(6, &rows, &e.rows().cloned().collect::<Vec<_>>()));
        }
    }
}
