use num_traits::Zero;

use super::basis::{ModeIndex, Space};
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Dense operator on a hybrid mode space. Builders and compiled circuits
/// produce unitaries; nothing in the type forbids other matrices so that
/// [`check_unitary`](super::check_unitary) has something to reject.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    space: Space,
    matrix: CMatrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn identity(space: Space) -> Self {
        Operator {
            space,
            matrix: CMatrix::identity(space.dim()),
        }
    }

    pub fn from_matrix(space: Space, matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: matrix.dim(),
            });
        }
        Ok(Operator { space, matrix })
    }

    /// Builds the operator column by column: `f(source)` lists the images of
    /// one basis mode as `(target, amplitude)` pairs.
    pub fn from_columns<F>(space: Space, mut f: F) -> Result<Self>
    where
        F: FnMut(ModeIndex) -> Result<Vec<(ModeIndex, C<T>)>>,
    {
        let mut matrix = CMatrix::zeros(space.dim());
        for (col, source) in space.modes().enumerate() {
            for (target, amp) in f(source)? {
                let row = space.try_index(target)?;
                matrix[(row, col)] += amp;
            }
        }
        Ok(Operator { space, matrix })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// Matrix element `<to| U |from>`.
    pub fn amplitude(&self, to: ModeIndex, from: ModeIndex) -> Result<C<T>> {
        Ok(self.matrix[(self.space.try_index(to)?, self.space.try_index(from)?)])
    }

    pub fn adjoint(&self) -> Self {
        Operator {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Operator {
            space: self.space,
            matrix: self.matrix.scale(s),
        }
    }

    /// Block of the operator on the listed modes, in the listed order.
    pub fn restrict(&self, modes: &[ModeIndex]) -> Result<CMatrix<T>> {
        let idx = modes
            .iter()
            .map(|&m| self.space.try_index(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.matrix.submatrix(&idx))
    }

    /// Images of `source` with modulus above `tol`, in canonical order.
    pub fn images(&self, source: ModeIndex, tol: T) -> Result<Vec<(ModeIndex, C<T>)>> {
        let col = self.space.try_index(source)?;
        Ok((0..self.dim())
            .filter_map(|r| {
                let v = self.matrix[(r, col)];
                (v.norm() > tol).then(|| (self.space.mode(r), v))
            })
            .collect())
    }

    pub(crate) fn check_same_space(&self, other: &Operator<T>) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    /// True if the operator is diagonal (off-diagonal entries exactly zero
    /// or below `tol`).
    pub fn is_diagonal(&self, tol: T) -> bool {
        let n = self.dim();
        (0..n).all(|r| {
            (0..n).all(|col| {
                r == col || {
                    let v = self.matrix[(r, col)];
                    v.is_zero() || v.norm() <= tol
                }
            })
        })
    }
}
