//! Hybrid (rail x polarization x OAM) mode basis, states, operators and the
//! comparison oracles the rest of the crate is checked against.

mod basis;
mod matrix;
mod operator;
mod state;

pub use basis::{basis_enumerate, ModeIndex, Pol, Space};
pub use matrix::{CMatrix, PhasedPermutation};
pub use operator::Operator;
pub use state::State;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `U |psi>`.
pub fn apply<T: Real>(op: &Operator<T>, psi: &State<T>) -> Result<State<T>> {
    if op.space() != psi.space() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: psi.space().dim(),
        });
    }
    let out = op.matrix().apply(psi.amplitudes())?;
    State::unnormalized(psi.space(), out)
}

/// `second * first`: `first` acts on the light first.
pub fn compose<T: Real>(second: &Operator<T>, first: &Operator<T>) -> Result<Operator<T>> {
    second.check_same_space(first)?;
    Operator::from_matrix(first.space(), second.matrix().mul(first.matrix())?)
}

/// Composes a sequence given in order of application.
pub fn compose_all<'a, T: Real>(
    space: Space,
    ops: impl IntoIterator<Item = &'a Operator<T>>,
) -> Result<Operator<T>> {
    ops.into_iter()
        .try_fold(Operator::identity(space), |acc, op| compose(op, &acc))
}

pub fn equal_up_to_global_phase<T: Real>(a: &Operator<T>, b: &Operator<T>, tol: T) -> bool {
    a.space() == b.space() && a.matrix().equal_up_to_global_phase(b.matrix(), tol)
}

pub fn as_phased_permutation<T: Real>(op: &Operator<T>, tol: T) -> Option<PhasedPermutation<T>> {
    op.matrix().as_phased_permutation(tol)
}

pub fn check_unitary<T: Real>(op: &Operator<T>, tol: T) -> bool {
    op.matrix().is_unitary(tol)
}
