//! Dense symmetric-matrix primitives.

mod eigen;
pub mod io;
mod matrix;
pub mod random;
mod sym;

pub use eigen::{jacobi_eigen, Eigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::Matrix;
pub use random::{random_spd, TrialRng};
pub use sym::{
    congruence, SpdMatrix, SpectralBounds, SpectralFn, SymMatrix, POSITIVITY_ABS_FLOOR,
    POSITIVITY_REL_FLOOR,
};
pub(crate) use sym::check_same_dim;

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eig(a: &SymMatrix) -> crate::error::Result<Eigen> {
    a.eigen()
}
