//! Dense exact matrices and echelon services.
//!
//! Matrices act on column vectors: `rows` is the target dimension and `cols`
//! the source dimension. Entries are stored row-major.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.field.format(self.get(i, j)))?;
            }
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_entries(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Row-major integer entries, reduced into the field.
    pub fn from_i64(field: &F, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        let data = data.iter().map(|&v| field.from_i64(v)).collect();
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { field: field.clone(), rows: r, cols, data }
    }

    /// A single column.
    pub fn column(field: &F, v: Vec<F::Elem>) -> Self {
        let n = v.len();
        Matrix { field: field.clone(), rows: n, cols: 1, data: v }
    }

    /// The matrix unit E_{ij}.
    pub fn unit(field: &F, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.set(i, j, field.one());
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn entries_mut(&mut self) -> &mut [F::Elem] {
        &mut self.data
    }
    pub fn into_entries(self) -> Vec<F::Elem> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(&out.data[idx], a, other.get(k, j));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = f.mul_add(&acc, self.get(i, j), x);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in difference");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut r = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn is_nilpotent(&self) -> bool {
        self.rows == 0 || self.pow(self.rows).is_zero()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut m = Self::zeros(&self.field, nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// [[a, b], [c, d]] from four blocks of compatible shapes.
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Self::zeros(&a.field, a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(&self.field, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut m = Self::zeros(&self.field, self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }

    /// Kronecker product with an identity: block-diagonal copies of `self`.
    pub fn kron_identity(&self, d: usize) -> Self {
        let mut m = Self::zeros(&self.field, self.rows * d, self.cols * d);
        for k in 0..d {
            m.set_block(k * self.rows, k * self.cols, self);
        }
        m
    }

    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of the null space; `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let Rref { reduced, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(reduced.get(r, free));
            }
            out.push(v);
        }
        out
    }

    /// Some solution of `self * x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(rhs.len(), self.rows, "rhs length must equal row count");
        let f = &self.field;
        let aug = self.hstack(&Matrix::column(f, rhs.to_vec()));
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(reduced.submatrix(0, n, n, n))
    }
}

/// An incrementally built subspace kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    len: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, len: usize) -> Self {
        Echelon { field: field.clone(), len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by(field: &F, len: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let mut e = Self::new(field, len);
        for v in vectors {
            e.insert(v.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Reduces `v` in place so that all pivot coordinates vanish.
    /// The result is the canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let f = self.field.clone();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                *x = f.sub(x, &f.mul(&c, y));
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of `v` (assumed in the span) with respect to the echelon rows.
    pub fn coordinates(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }
}

/// Greedy choice, in input order, of candidates independent modulo `span(subspace)`.
pub fn select_independent_mod<F: Field>(
    field: &F,
    candidates: &[Vec<F::Elem>],
    subspace: &[Vec<F::Elem>],
) -> Vec<usize> {
    let Some(len) = candidates.first().or(subspace.first()).map(|v| v.len()) else {
        return Vec::new();
    };
    let mut e = Echelon::spanned_by(field, len, subspace);
    candidates
        .iter()
        .enumerate()
        .filter_map(|(i, v)| e.insert(v.clone()).then_some(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: usize, cols: usize, d: &[i64]) -> Matrix<Rationals> {
        Matrix::from_i64(&Rationals, rows, cols, d)
    }

    #[test]
    fn rref_identity() {
        let r = Matrix::identity(&Rationals, 2).rref();
        assert!(r.reduced.is_identity());
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_proportional_rows() {
        let r = q(2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(r.reduced, q(2, 2, &[1, 2, 0, 0]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_char_two() {
        let f2 = PrimeField::new(2).unwrap();
        let r = Matrix::from_i64(&f2, 2, 2, &[1, 1, 1, 1]).rref();
        assert_eq!(r.reduced, Matrix::from_i64(&f2, 2, 2, &[1, 1, 0, 0]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernels() {
        assert!(Matrix::identity(&Rationals, 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(&Rationals, 2, 3).kernel_basis().len(), 3);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(Matrix::from_i64(&f2, 1, 2, &[1, 1]).kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn greedy_selection() {
        let e1 = vec![Rationals.one(), Rationals.zero()];
        let e2 = vec![Rationals.zero(), Rationals.one()];
        assert_eq!(select_independent_mod(&Rationals, &[e1.clone(), e2.clone()], &[]), vec![0, 1]);
        assert_eq!(select_independent_mod(&Rationals, &[e1.clone(), e1.clone()], &[]), vec![0]);
        assert_eq!(select_independent_mod(&Rationals, &[e1.clone(), e2], &[e1]), vec![1]);
    }

    #[test]
    fn solving() {
        let id = Matrix::identity(&Rationals, 2);
        let rhs = vec![Rationals.from_i64(3), Rationals.from_i64(4)];
        assert_eq!(id.solve(&rhs).unwrap(), rhs);
        assert!(Matrix::zeros(&Rationals, 2, 2).solve(&rhs).is_none());
        let f3 = PrimeField::new(3).unwrap();
        let m = Matrix::from_i64(&f3, 1, 2, &[1, 1]);
        let x = m.solve(&[2]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![2]);
    }

    #[test]
    fn invertibility() {
        assert!(Matrix::identity(&Rationals, 3).invertible());
        assert!(!Matrix::zeros(&Rationals, 2, 3).invertible());
        assert!(!q(2, 2, &[1, 2, 2, 4]).invertible());
        let m = q(2, 2, &[2, 1, 1, 1]);
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        assert!(q(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert!(Matrix::<Rationals>::zeros(&Rationals, 0, 0).inverse().is_some());
    }

    #[test]
    fn echelon_canonical_representatives() {
        let f5 = PrimeField::new(5).unwrap();
        let e = Echelon::spanned_by(&f5, 3, &[vec![1, 2, 3], vec![0, 1, 1]]);
        let mut a = vec![4, 4, 4];
        let mut b = vec![4, 4, 4];
        // b differs from a by an element of the span
        for (x, y) in b.iter_mut().zip([2u32, 4, 1]) {
            *x = f5.add(x, &y);
        }
        e.reduce(&mut a);
        e.reduce(&mut b);
        assert_eq!(a, b);
        for &p in e.pivots() {
            assert_eq!(a[p], 0);
        }
    }
}
