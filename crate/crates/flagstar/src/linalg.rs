//! Exact linear algebra over the Gaussian rationals.
//!
//! Two workhorses: [`RowBasis`], an echelonized row span over arbitrary
//! ordered keys (polynomial monomials, operator monomials) used to build all
//! graded and filtered bases, and [`DenseMat`] with exact Gaussian
//! elimination, kernels, and the hermitian `LDL*` positivity certificate.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::scalar::GaussianRational;

pub type SparseVec<K> = BTreeMap<K, GaussianRational>;

/// Outcome of inserting a vector into a [`RowBasis`].
#[derive(Clone, Debug)]
pub struct Insertion {
    /// Coefficients over previously stored rows: the inserted vector equals
    /// `sum(combo) + scale * new_row` (with the last term absent when the
    /// vector was dependent).
    pub combo: Vec<(usize, GaussianRational)>,
    /// Index of the freshly stored row, if the vector was independent.
    pub new_row: Option<usize>,
    /// Leading coefficient divided out of the stored row.
    pub scale: GaussianRational,
}

/// A forward-only echelon basis: rows are pivot-normalized on their largest
/// key and never modified after insertion, so row `i` always equals the `i`-th
/// independent inserted vector reduced against rows `0..i`.
#[derive(Clone, Debug, Default)]
pub struct RowBasis<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> RowBasis<K> {
    pub fn new() -> Self {
        RowBasis {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &SparseVec<K> {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    /// Reduces `v` against the stored rows. Returns the combination over row
    /// indices and the irreducible remainder.
    pub fn reduce(&self, v: &SparseVec<K>) -> (Vec<(usize, GaussianRational)>, SparseVec<K>) {
        let mut rem = v.clone();
        let mut combo: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        let mut bound: Option<K> = None;
        loop {
            let hit = {
                let iter: Box<dyn Iterator<Item = (&K, &GaussianRational)>> = match &bound {
                    Some(b) => Box::new(rem.range(..b.clone()).rev()),
                    None => Box::new(rem.iter().rev()),
                };
                let mut found = None;
                for (k, _) in iter {
                    if let Some(&ri) = self.pivots.get(k) {
                        found = Some((k.clone(), ri));
                        break;
                    }
                }
                found
            };
            let Some((key, ri)) = hit else { break };
            let c = rem.get(&key).cloned().unwrap_or_default();
            if !c.is_zero() {
                // rem -= c * rows[ri]
                for (k, rc) in &self.rows[ri] {
                    let delta = &c * rc;
                    match rem.get_mut(k) {
                        Some(v) => {
                            *v -= &delta;
                            if v.is_zero() {
                                rem.remove(k);
                            }
                        }
                        None => {
                            if !delta.is_zero() {
                                rem.insert(k.clone(), -delta);
                            }
                        }
                    }
                }
                let e = combo.entry(ri).or_default();
                *e += &c;
                if e.is_zero() {
                    combo.remove(&ri);
                }
            }
            bound = Some(key);
        }
        (combo.into_iter().collect(), rem)
    }

    /// Coordinates of `v` over the stored rows, or `None` if `v` is outside
    /// the span.
    pub fn coords(&self, v: &SparseVec<K>) -> Option<Vec<(usize, GaussianRational)>> {
        let (combo, rem) = self.reduce(v);
        if rem.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).1.is_empty()
    }

    /// Stores an already pivot-normalized echelon row without reduction
    /// (cache reload path). Panics if the leading key collides with an
    /// existing pivot.
    pub fn push_trusted(&mut self, v: SparseVec<K>) {
        let (pivot_key, lead) = {
            let (k, c) = v.iter().next_back().expect("nonempty row");
            (k.clone(), c.clone())
        };
        assert!(lead.is_one(), "trusted row must be pivot normalized");
        let idx = self.rows.len();
        let prev = self.pivots.insert(pivot_key, idx);
        assert!(prev.is_none(), "duplicate pivot in trusted rows");
        self.rows.push(v);
    }

    /// Reduces and, when independent, stores the pivot-normalized remainder.
    pub fn insert(&mut self, v: SparseVec<K>) -> Insertion {
        let (combo, rem) = self.reduce(&v);
        if rem.is_empty() {
            return Insertion {
                combo,
                new_row: None,
                scale: GaussianRational::zero(),
            };
        }
        let (pivot_key, lead) = {
            let (k, c) = rem.iter().next_back().expect("nonempty remainder");
            (k.clone(), c.clone())
        };
        let inv = lead.inv();
        let normalized: SparseVec<K> = rem.iter().map(|(k, c)| (k.clone(), c * &inv)).collect();
        let idx = self.rows.len();
        self.rows.push(normalized);
        self.pivots.insert(pivot_key, idx);
        Insertion {
            combo,
            new_row: Some(idx),
            scale: lead,
        }
    }
}

/// Torus weight; every vector routed through a [`BlockedBasis`] must be
/// weight-homogeneous.
pub type Weight = Vec<i64>;

/// Outcome of a blocked insertion, with global row indices.
#[derive(Clone, Debug)]
pub struct BlockedInsertion {
    pub combo: Vec<(usize, GaussianRational)>,
    pub new_row: Option<usize>,
    pub scale: GaussianRational,
}

/// An echelon span split into independent weight blocks. Torus-weight
/// homogeneity of all spanning vectors keeps reductions inside small blocks
/// and certifies that cross-weight pairings vanish identically.
#[derive(Clone, Debug, Default)]
pub struct BlockedBasis<K: Ord + Clone> {
    blocks: BTreeMap<Weight, RowBasis<K>>,
    /// Global rows in insertion order: (weight, index within block).
    locator: Vec<(Weight, usize)>,
    /// (weight, in-block index) -> global index.
    global: BTreeMap<(Weight, usize), usize>,
}

impl<K: Ord + Clone> BlockedBasis<K> {
    pub fn new() -> Self {
        BlockedBasis {
            blocks: BTreeMap::new(),
            locator: Vec::new(),
            global: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.locator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locator.is_empty()
    }

    pub fn weight_of(&self, global_idx: usize) -> &Weight {
        &self.locator[global_idx].0
    }

    /// Direct view of a stored row by global index.
    pub fn row_view(&self, global_idx: usize) -> (&Weight, &SparseVec<K>) {
        let (w, i) = &self.locator[global_idx];
        (w, self.blocks[w].row(*i))
    }

    pub fn block(&self, w: &Weight) -> Option<&RowBasis<K>> {
        self.blocks.get(w)
    }

    /// Row indices (global) of one weight block, in insertion order.
    pub fn block_rows(&self, w: &Weight) -> Vec<usize> {
        match self.blocks.get(w) {
            None => Vec::new(),
            Some(rb) => (0..rb.len())
                .map(|i| self.global[&(w.clone(), i)])
                .collect(),
        }
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.blocks.keys()
    }

    /// Cache-reload path: store a normalized echelon row directly.
    pub fn push_trusted(&mut self, weight: Weight, v: SparseVec<K>) -> usize {
        let rb = self.blocks.entry(weight.clone()).or_insert_with(RowBasis::new);
        rb.push_trusted(v);
        let i = rb.len() - 1;
        let g = self.locator.len();
        self.locator.push((weight.clone(), i));
        self.global.insert((weight, i), g);
        g
    }

    pub fn insert(&mut self, weight: Weight, v: SparseVec<K>) -> BlockedInsertion {
        let rb = self.blocks.entry(weight.clone()).or_insert_with(RowBasis::new);
        let ins = rb.insert(v);
        let combo = ins
            .combo
            .into_iter()
            .map(|(i, c)| (self.global[&(weight.clone(), i)], c))
            .collect();
        let new_row = ins.new_row.map(|i| {
            let g = self.locator.len();
            self.locator.push((weight.clone(), i));
            self.global.insert((weight.clone(), i), g);
            g
        });
        BlockedInsertion {
            combo,
            new_row,
            scale: ins.scale,
        }
    }

    /// Reduces a weight-homogeneous vector; combo is over global indices.
    pub fn reduce(&self, weight: &Weight, v: &SparseVec<K>) -> (Vec<(usize, GaussianRational)>, SparseVec<K>) {
        match self.blocks.get(weight) {
            None => (Vec::new(), v.clone()),
            Some(rb) => {
                let (combo, rem) = rb.reduce(v);
                (
                    combo
                        .into_iter()
                        .map(|(i, c)| (self.global[&(weight.clone(), i)], c))
                        .collect(),
                    rem,
                )
            }
        }
    }

    /// Coordinates over global rows of a vector presented as weight-homogeneous
    /// parts; `None` when any part falls outside the span.
    pub fn coords_parts(
        &self,
        parts: &[(Weight, SparseVec<K>)],
    ) -> Option<Vec<(usize, GaussianRational)>> {
        let mut all: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        for (w, v) in parts {
            let (combo, rem) = self.reduce(w, v);
            if !rem.is_empty() {
                return None;
            }
            for (i, c) in combo {
                let e = all.entry(i).or_default();
                *e += &c;
                if e.is_zero() {
                    all.remove(&i);
                }
            }
        }
        Some(all.into_iter().collect())
    }
}

/// Dense matrix over `Q(i)`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<GaussianRational>,
}

impl DenseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMat {
            rows,
            cols,
            a: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianRational) -> Self {
        let mut m = DenseMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &GaussianRational {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut GaussianRational {
        &mut self.a[i * self.cols + j]
    }

    pub fn transpose(&self) -> DenseMat {
        DenseMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn conj(&self) -> DenseMat {
        DenseMat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn mul(&self, other: &DenseMat) -> DenseMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = DenseMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.at_mut(i, j) += &(aik * b);
                }
            }
        }
        out
    }

    pub fn sub_mat(&self, other: &DenseMat) -> DenseMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMat {
            rows: self.rows,
            cols: self.cols,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x.clone() - y)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = GaussianRational::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        s += &(a * &v[j]);
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..=i {
                if *self.at(i, j) != self.at(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Solves `self * X = rhs` for possibly many right-hand sides.
    /// Returns `None` when the system is inconsistent; free variables are set
    /// to zero, making the result deterministic.
    pub fn solve_multi(&self, rhs: &DenseMat) -> Option<DenseMat> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let m = self.cols;
        let k = rhs.cols;
        // Augmented elimination.
        let mut a = self.clone();
        let mut b = rhs.clone();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..m {
            // find pivot
            let mut piv = None;
            for r in row..n {
                if !a.at(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != row {
                for j in 0..m {
                    a.a.swap(p * m + j, row * m + j);
                }
                for j in 0..k {
                    b.a.swap(p * k + j, row * k + j);
                }
            }
            let inv = a.at(row, col).inv();
            for j in 0..m {
                let v = a.at(row, j) * &inv;
                *a.at_mut(row, j) = v;
            }
            for j in 0..k {
                let v = b.at(row, j) * &inv;
                *b.at_mut(row, j) = v;
            }
            for r in 0..n {
                if r == row || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..m {
                    let delta = &f * a.at(row, j);
                    *a.at_mut(r, j) -= &delta;
                }
                for j in 0..k {
                    let delta = &f * b.at(row, j);
                    *b.at_mut(r, j) -= &delta;
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        // Inconsistency: zero row of a with nonzero rhs.
        for r in row..n {
            for j in 0..k {
                if !b.at(r, j).is_zero() {
                    return None;
                }
            }
        }
        let mut x = DenseMat::zeros(m, k);
        for (r, &col) in pivot_cols.iter().enumerate() {
            for j in 0..k {
                *x.at_mut(col, j) = b.at(r, j).clone();
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, rhs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        let r = DenseMat {
            rows: rhs.len(),
            cols: 1,
            a: rhs.to_vec(),
        };
        let x = self.solve_multi(&r)?;
        Some(x.a)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<DenseMat> {
        assert_eq!(self.rows, self.cols);
        let x = self.solve_multi(&DenseMat::identity(self.rows))?;
        // solve_multi zero-fills free variables; verify honest invertibility.
        let prod = self.mul(&x);
        if prod == DenseMat::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let n = self.rows;
        let m = self.cols;
        let mut row = 0usize;
        for col in 0..m {
            let mut piv = None;
            for r in row..n {
                if !a.at(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != row {
                for j in 0..m {
                    a.a.swap(p * m + j, row * m + j);
                }
            }
            let inv = a.at(row, col).inv();
            for r in row + 1..n {
                if a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col) * &inv;
                for j in col..m {
                    let delta = &f * a.at(row, j);
                    *a.at_mut(r, j) -= &delta;
                }
            }
            row += 1;
            if row == n {
                break;
            }
        }
        row
    }

    /// Basis of the right kernel, deterministic (free variables in column
    /// order, each set to one).
    pub fn kernel(&self) -> Vec<Vec<GaussianRational>> {
        let n = self.rows;
        let m = self.cols;
        let mut a = self.clone();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; m];
        let mut row = 0usize;
        for col in 0..m {
            let mut piv = None;
            for r in row..n {
                if !a.at(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != row {
                for j in 0..m {
                    a.a.swap(p * m + j, row * m + j);
                }
            }
            let inv = a.at(row, col).inv();
            for j in 0..m {
                let v = a.at(row, j) * &inv;
                *a.at_mut(row, j) = v;
            }
            for r in 0..n {
                if r == row || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..m {
                    let delta = &f * a.at(row, j);
                    *a.at_mut(r, j) -= &delta;
                }
            }
            pivot_of_col[col] = Some(row);
            row += 1;
            if row == n {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..m {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![GaussianRational::zero(); m];
            v[free] = GaussianRational::one();
            for col in 0..m {
                if let Some(r) = pivot_of_col[col] {
                    v[col] = -a.at(r, free).clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Hermitian `LDL*` pivots, in order. Fails when the matrix is not
    /// hermitian or a zero pivot appears (which cannot happen for a definite
    /// form). Pivots are returned as exact rationals; positivity of all of
    /// them is a complete positive-definiteness certificate.
    pub fn ldlt_pivots(&self) -> Result<Vec<BigRational>, String> {
        if !self.is_hermitian() {
            return Err("matrix is not hermitian".into());
        }
        let n = self.rows;
        let mut l = DenseMat::identity(n);
        let mut d: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.at(k, k).clone();
            for j in 0..k {
                let ljk = l.at(k, j);
                let term = ljk * &ljk.conj();
                acc -= &(term * &GaussianRational::from_rational(d[j].clone()));
            }
            let Some(dk) = acc.as_rational().cloned() else {
                return Err(format!("pivot {k} is not real: {acc}"));
            };
            if dk.is_zero() && (k + 1..n).any(|i| {
                let mut v = self.at(i, k).clone();
                for j in 0..k {
                    let t = l.at(i, j) * &l.at(k, j).conj();
                    v -= &(t * &GaussianRational::from_rational(d[j].clone()));
                }
                !v.is_zero()
            }) {
                return Err(format!("zero pivot {k} with nonzero column; needs pivoting"));
            }
            d.push(dk.clone());
            if dk.is_zero() {
                continue;
            }
            let dk_inv = GaussianRational::from_rational(dk).inv();
            for i in k + 1..n {
                let mut v = self.at(i, k).clone();
                for j in 0..k {
                    let t = l.at(i, j) * &l.at(k, j).conj();
                    v -= &(t * &GaussianRational::from_rational(d[j].clone()));
                }
                *l.at_mut(i, k) = v * &dk_inv;
            }
        }
        Ok(d)
    }
}

/// True when every pivot is strictly positive.
pub fn all_pivots_positive(pivots: &[BigRational]) -> bool {
    pivots.iter().all(|p| p.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Gq;

    fn q(n: i64, d: i64) -> Gq {
        Gq::from_ratio(n, d)
    }

    #[test]
    fn row_basis_reduction_and_coords() {
        let mut rb: RowBasis<u32> = RowBasis::new();
        let v1: SparseVec<u32> = [(0u32, q(1, 1)), (2, q(1, 1))].into_iter().collect();
        let v2: SparseVec<u32> = [(1u32, q(2, 1))].into_iter().collect();
        assert!(rb.insert(v1.clone()).new_row.is_some());
        assert!(rb.insert(v2.clone()).new_row.is_some());
        // 3*v1 - v2 should reduce to zero with coords over the stored rows.
        let mut w: SparseVec<u32> = BTreeMap::new();
        w.insert(0, q(3, 1));
        w.insert(2, q(3, 1));
        w.insert(1, q(-2, 1));
        let ins = rb.insert(w.clone());
        assert!(ins.new_row.is_none());
        let coords = rb.coords(&w).unwrap();
        assert_eq!(coords.len(), 2);
    }

    #[test]
    fn dependent_detection() {
        let mut rb: RowBasis<u32> = RowBasis::new();
        let v1: SparseVec<u32> = [(0u32, q(1, 1)), (1, q(1, 1))].into_iter().collect();
        let v2: SparseVec<u32> = [(0u32, q(2, 1)), (1, q(2, 1))].into_iter().collect();
        rb.insert(v1);
        let ins = rb.insert(v2);
        assert!(ins.new_row.is_none());
        assert_eq!(rb.len(), 1);
    }

    #[test]
    fn solve_and_inverse() {
        let a = DenseMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => q(2, 1),
            (0, 1) => q(1, 1),
            (1, 0) => q(1, 1),
            (1, 1) => q(1, 1),
            _ => unreachable!(),
        });
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), DenseMat::identity(2));
        let x = a.solve_vec(&[q(3, 1), q(2, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(1, 1)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = DenseMat::from_fn(2, 1, |i, _| if i == 0 { q(1, 1) } else { q(1, 1) });
        assert!(a.solve_vec(&[q(1, 1), q(2, 1)]).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        // [1 1; 1 1] has kernel spanned by (1, -1) up to scaling.
        let a = DenseMat::from_fn(2, 2, |_, _| q(1, 1));
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!((v[0].clone() + v[1].clone()).is_zero());
    }

    #[test]
    fn ldlt_positive_definite() {
        // [[2,1],[1,1]] is PD with pivots 2, 1/2.
        let a = DenseMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => q(2, 1),
            (1, 1) => q(1, 1),
            _ => q(1, 1),
        });
        let pivots = a.ldlt_pivots().unwrap();
        assert!(all_pivots_positive(&pivots));
        assert_eq!(pivots[0], q(2, 1).as_rational().unwrap().clone());
        assert_eq!(pivots[1], q(1, 2).as_rational().unwrap().clone());
    }

    #[test]
    fn ldlt_hermitian_complex() {
        // [[2, i],[-i, 2]] is hermitian PD.
        let i = Gq::i();
        let a = DenseMat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) | (1, 1) => q(2, 1),
            (0, 1) => i.clone(),
            (1, 0) => -i.clone(),
            _ => unreachable!(),
        });
        let pivots = a.ldlt_pivots().unwrap();
        assert!(all_pivots_positive(&pivots));
    }

    #[test]
    fn ldlt_detects_indefinite() {
        let a = DenseMat::from_fn(2, 2, |r, c| if r == c && r == 0 { q(1, 1) } else if r == c { q(-3, 1) } else { q(0, 1) });
        let pivots = a.ldlt_pivots().unwrap();
        assert!(!all_pivots_positive(&pivots));
    }
}
