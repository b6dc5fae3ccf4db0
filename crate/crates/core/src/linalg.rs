//! Dense matrices over a [`FiniteField`] and subspaces in canonical reduced
//! row echelon form. Vectors are rows; maps act on the right.

use std::fmt;

use crate::algebra::{FieldElem, FiniteField};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, FieldElem::ONE)
    }

    pub fn scalar(n: usize, k: FieldElem) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = k;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<FieldElem>) -> Self {
        assert_eq!(rows * cols, data.len());
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<FieldElem>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Mat, f: &FiniteField) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other[(k, j)]);
                    out[(i, j)] = f.add(out[(i, j)], t);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, f: &FiniteField) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat, f: &FiniteField) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, f: &FiniteField) -> Mat {
        self.map(|x| f.neg(x))
    }

    pub fn scale(&self, k: FieldElem, f: &FiniteField) -> Mat {
        self.map(|x| f.mul(k, x))
    }

    /// Entrywise image under `g`.
    pub fn map(&self, g: impl Fn(FieldElem) -> FieldElem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| g(x)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[FieldElem], f: &FiniteField) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![FieldElem::ZERO; self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(x, self[(i, j)]));
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Mat { rows: self.rows, cols, data }
    }

    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Reduces in place to reduced row echelon form with leading ones and
    /// returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &FiniteField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in 0..self.cols {
                self[(r, j)] = f.mul(inv, self[(r, j)]);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let t = f.mul(factor, self[(r, j)]);
                    self[(i, j)] = f.sub(self[(i, j)], t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self, f: &FiniteField) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(f);
        (m, pivots)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.rref(f).1.len()
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hcat(&Mat::identity(n)).rref(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Basis of `{v : v·self = 0}` in reduced echelon form.
    pub fn left_kernel(&self, f: &FiniteField) -> Mat {
        let (r, pivots) = self.transpose().rref(f);
        // Right kernel of the transpose.
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![FieldElem::ZERO; n];
            v[fc] = FieldElem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[(i, fc)]);
            }
            basis.push(v);
        }
        let m = Mat::from_rows(&basis, n);
        m.rref(f).0
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = FieldElem;

    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Scales `v` so that its first nonzero entry is one. Returns `None` for the
/// zero vector.
pub fn normalize(v: &[FieldElem], f: &FiniteField) -> Option<Vec<FieldElem>> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&x| f.mul(inv, x)).collect())
}

/// Dense integer code of a vector, `Σ v_i q^i`.
pub fn vector_code(v: &[FieldElem], q: usize) -> u64 {
    v.iter().rev().fold(0u64, |acc, x| acc * q as u64 + x.index() as u64)
}

pub fn vector_from_code(mut code: u64, len: usize, q: usize) -> Vec<FieldElem> {
    (0..len)
        .map(|_| {
            let x = FieldElem((code % q as u64) as u16);
            code /= q as u64;
            x
        })
        .collect()
}

/// All normalized nonzero vectors of `K^n`, one per projective point,
/// in increasing code order.
pub fn projective_points(n: usize, f: &FiniteField) -> Vec<Vec<FieldElem>> {
    let q = f.order();
    let total = (q as u64).pow(n as u32);
    (1..total)
        .map(|c| vector_from_code(c, n, q))
        .filter(|v| v.iter().find(|x| !x.is_zero()) == Some(&FieldElem::ONE))
        .collect()
}

pub fn projective_point_count(n: usize, q: usize) -> u64 {
    ((q as u64).pow(n as u32) - 1) / (q as u64 - 1)
}

/// A subspace of `K^ambient`, stored as its unique reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    pub fn from_rows(rows: &Mat, f: &FiniteField) -> Self {
        let (r, pivots) = rows.rref(f);
        Subspace { basis: r.block(0, 0, pivots.len(), r.cols()) }
    }

    pub fn from_vectors(vectors: &[Vec<FieldElem>], ambient: usize, f: &FiniteField) -> Self {
        Self::from_rows(&Mat::from_rows(vectors, ambient), f)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: Mat::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { basis: Mat::identity(ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn contains(&self, v: &[FieldElem], f: &FiniteField) -> bool {
        let extended = self.basis.vcat(&Mat::from_vec(1, v.len(), v.to_vec()));
        extended.rank(f) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace, f: &FiniteField) -> bool {
        self.join(other, f).dim() == self.dim()
    }

    pub fn join(&self, other: &Subspace, f: &FiniteField) -> Subspace {
        Subspace::from_rows(&self.basis.vcat(&other.basis), f)
    }

    /// Intersection via the Zassenhaus sum-intersection reduction.
    pub fn meet(&self, other: &Subspace, f: &FiniteField) -> Subspace {
        let n = self.ambient();
        assert_eq!(n, other.ambient());
        let mut m = Mat::zeros(self.dim() + other.dim(), 2 * n);
        m.set_block(0, 0, &self.basis);
        m.set_block(0, n, &self.basis);
        m.set_block(self.dim(), 0, &other.basis);
        let (r, pivots) = m.rref(f);
        let rows: Vec<Vec<FieldElem>> = pivots
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c >= n)
            .map(|(i, _)| r.row(i)[n..].to_vec())
            .collect();
        Subspace::from_vectors(&rows, n, f)
    }

    /// Normalized vectors of all projective points in the subspace.
    pub fn points(&self, f: &FiniteField) -> Vec<Vec<FieldElem>> {
        projective_points(self.dim(), f)
            .into_iter()
            .map(|coeffs| self.basis.apply_row(&coeffs, f))
            .map(|v| normalize(&v, f).expect("combination of independent rows is nonzero"))
            .collect()
    }

    /// Image under a linear map acting on the right.
    pub fn image(&self, m: &Mat, f: &FiniteField) -> Subspace {
        Subspace::from_rows(&self.basis.mul(m, f), f)
    }
}
