use thiserror::Error;

use crate::hilbert::ModeIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode space mismatch between operands")]
    SpaceMismatch,

    #[error("invalid mode space: {0}")]
    InvalidSpace(String),

    #[error("rail {rail} out of range for {rails} rail(s)")]
    InvalidRail { rail: usize, rails: usize },

    #[error("mode {0:?} lies outside the configured space")]
    ModeOutOfSpace(ModeIndex),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("OAM window overflow: shift {shift} moves populated mode {mode:?} outside |ell| <= {window}")]
    WindowOverflow {
        mode: ModeIndex,
        shift: i32,
        window: u32,
    },

    #[error("internal self-check failed: {0}")]
    SelfCheck(String),

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("operator is not unitary: max |U^dag U - I| = {0}")]
    NotUnitary(f64),

    #[error("unsupported size {0}: expected a power of two in 2..=16")]
    UnsupportedSize(usize),

    #[error("invalid gate power {0}: expected 1, 2 or 3")]
    InvalidPower(u32),

    #[error("invalid crystal: {0}")]
    InvalidCrystal(String),

    #[error("no propagating refracted ray: (n_o/n_e) sin(beta) = {0} exceeds 1")]
    NoPropagation(f64),

    #[error("degenerate geometry: refraction angle delta is zero")]
    DegenerateGeometry,

    #[error("crystal is not negative uniaxial: n_e = {n_e} >= n_o = {n_o}")]
    NotNegativeUniaxial { n_o: f64, n_e: f64 },
}
