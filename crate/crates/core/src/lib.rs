//! Linear-optics simulator for hybrid polarization and orbital-angular-momentum
//! (OAM) modes.
//!
//! Modes are `(rail, polarization, ell)` triples in a truncated OAM window.
//! Optical elements are unitaries on that space, circuits are ordered element
//! stages, and [`circuits`] provides OAM sorters, the polarization/OAM CNOT and
//! SWAP, and generalized Pauli gates. [`geometry`] covers refraction and path
//! difference in the crystal cube of a polarization-selective Dove prism.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` case.

pub mod circuits;
pub mod cli;
pub mod elements;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod scalar;

pub use circuits::{compile, resource_count, run_sort, ActiveSubspace, Circuit, SortReport};
pub use elements::{Element, ElementKind};
pub use error::{Error, Result};
pub use geometry::{validate_assembly, AssemblyReport, Crystal, Material};
pub use hilbert::{
    apply, as_phased_permutation, basis_enumerate, check_unitary, compose,
    equal_up_to_global_phase, CMatrix, ModeIndex, Operator, PhasedPermutation, Pol, Space, State,
};
pub use scalar::{Real, C};

pub type UnitaryOp = Operator<f64>;
pub type StateVector = State<f64>;
pub type ElementSpec = Element<f64>;
pub type OpticalCircuit = Circuit<f64>;
pub type CrystalSpec = Crystal<f64>;

pub type UnitaryOpF32 = Operator<f32>;
pub type StateVectorF32 = State<f32>;
pub type OpticalCircuitF32 = Circuit<f32>;
pub type CrystalSpecF32 = Crystal<f32>;
