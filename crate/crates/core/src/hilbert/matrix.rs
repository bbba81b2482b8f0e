use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{c_re, Real, C};

/// Dense square complex matrix, row-major.
///
/// Products skip structurally zero entries of the left factor, so composing a
/// sparse optical element onto a dense accumulated operator costs
/// `nnz(left) * dim` rather than `dim^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![C::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                data.push(f(r, col));
            }
        }
        CMatrix { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(CMatrix { dim, data })
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c_re(T::lit(x))).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[C<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[C<T>] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<C<T>> {
        (0..self.dim).map(|r| self[(r, col)]).collect()
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other,
            })
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let (left, out_row) = (self.row(i), &mut out.data[i * n..(i + 1) * n]);
            for (k, &a) in left.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * v`.
    pub fn apply(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(C::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn adjoint(&self) -> CMatrix<T> {
        CMatrix::from_fn(self.dim, |r, col| self[(col, r)].conj())
    }

    pub fn scale(&self, s: C<T>) -> CMatrix<T> {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CMatrix<T>) -> CMatrix<T> {
        let m = rhs.dim;
        CMatrix::from_fn(self.dim * m, |r, col| {
            self[(r / m, col / m)] * rhs[(r % m, col % m)]
        })
    }

    /// Square block selected by `indices` (rows and columns in that order).
    pub fn submatrix(&self, indices: &[usize]) -> CMatrix<T> {
        CMatrix::from_fn(indices.len(), |r, col| self[(indices[r], indices[col])])
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix<T>) -> Result<T> {
        self.check_dim(rhs.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Largest entry of `|U^dag U - I|`. Zero entries are skipped row by row,
    /// which keeps the cost low for the permutation-like matrices optics
    /// produces.
    pub fn unitarity_defect(&self) -> T {
        let n = self.dim;
        let mut gram = vec![C::<T>::zero(); n * n];
        let mut nz: Vec<(usize, C<T>)> = Vec::new();
        for k in 0..n {
            nz.clear();
            nz.extend(
                self.row(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, &v)| (i, v)),
            );
            for &(i, a) in &nz {
                let ac = a.conj();
                for &(j, b) in &nz {
                    gram[i * n + j] += ac * b;
                }
            }
        }
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { C::one() } else { C::zero() };
                worst = worst.max((gram[i * n + j] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }

    /// True iff `self = c * rhs` within `tol` for a unit-modulus `c` taken from
    /// the first entry (row-major) where `|rhs| > tol`.
    pub fn equal_up_to_global_phase(&self, rhs: &CMatrix<T>, tol: T) -> bool {
        if self.dim != rhs.dim {
            return false;
        }
        let anchor = self
            .data
            .iter()
            .zip(&rhs.data)
            .find(|(_, b)| b.norm() > tol);
        let phase = match anchor {
            Some((a, b)) => {
                let ratio = a / b;
                let modulus = ratio.norm();
                if (modulus - T::one()).abs() > tol {
                    return false;
                }
                ratio / c_re(modulus)
            }
            None => return self.data.iter().all(|a| a.norm() <= tol),
        };
        self.data
            .iter()
            .zip(&rhs.data)
            .all(|(a, b)| (a - b * phase).norm() <= tol)
    }

    /// Reads the matrix as a truth table: each column must carry exactly one
    /// entry of modulus `> 1 - tol`, and the selected rows must be distinct.
    pub fn as_phased_permutation(&self, tol: T) -> Option<PhasedPermutation<T>> {
        let threshold = T::one() - tol;
        let mut images = Vec::with_capacity(self.dim);
        let mut hit = vec![false; self.dim];
        for col in 0..self.dim {
            let mut found = None;
            for r in 0..self.dim {
                let v = self[(r, col)];
                if v.norm() > threshold {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((r, v));
                }
            }
            let (r, v) = found?;
            if hit[r] {
                return None;
            }
            hit[r] = true;
            images.push((r, v / c_re(v.norm())));
        }
        Some(PhasedPermutation { images })
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    fn index(&self, (r, col): (usize, usize)) -> &C<T> {
        &self.data[r * self.dim + col]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.dim + col]
    }
}

/// Column `j` maps to row `images[j].0` with unit-modulus phase `images[j].1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasedPermutation<T> {
    images: Vec<(usize, C<T>)>,
}

impl<T: Real> PhasedPermutation<T> {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, col: usize) -> (usize, C<T>) {
        self.images[col]
    }

    pub fn images(&self) -> &[(usize, C<T>)] {
        &self.images
    }

    /// The underlying permutation with phases stripped.
    pub fn permutation(&self) -> Vec<usize> {
        self.images.iter().map(|&(r, _)| r).collect()
    }

    pub fn phases(&self) -> Vec<C<T>> {
        self.images.iter().map(|&(_, p)| p).collect()
    }

    pub fn to_matrix(&self) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.images.len());
        for (col, &(r, p)) in self.images.iter().enumerate() {
            m[(r, col)] = p;
        }
        m
    }
}
