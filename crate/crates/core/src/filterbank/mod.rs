//! Trigonometric-polynomial filter masks and everything that verifies them:
//! coset machinery for integer dilations, the orthogonal/biorthogonal and
//! generalized tight/dual filter-bank identities, Fourier-domain cascade
//! evaluation of refinable vectors, the vanishing limit condition, and
//! spectral factorization.

mod cascade;
mod checks;
mod dilation;
mod fejer;
mod io;
mod trigpoly;

pub use cascade::{
    cascade_eval, cascade_fourier, check_limit_condition, default_seed, LimitReport, LimitTarget,
    EIGENVECTOR_TOL,
};
pub use checks::{
    check_biorthogonal_fb, check_generalized_dual, check_generalized_tight, check_orthogonal_fb,
    FilterBankReport, COEFF_TOL, DEFAULT_KMAX, GRID_TOL,
};
pub use dilation::DilationMatrix;
pub use fejer::{fejer_riesz_matrix, fejer_riesz_scalar, MATRIX_TOL, SCALAR_TOL};
pub use io::{CoeffEntry, DilationFile, FilterEntry, FilterFile};
pub use trigpoly::{TrigPoly, TrigPolyMatrix};

#[derive(Debug, thiserror::Error)]
pub enum FbError {
    #[error("invalid dilation: {0}")]
    BadDilation(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("grid misaligned: {0}")]
    MisalignedGrid(String),
    #[error("â(0) has no eigenvalue 1 within tolerance (nearest defect {0:.3e}); supply a seed vector")]
    NoUnitEigenvector(f64),
    #[error("not factorable: {0}")]
    NotFactorable(String),
    #[error("factorization did not converge (residual {0:.3e})")]
    FactorizationResidual(f64),
    #[error("numeric failure: {0}")]
    Numeric(String),
}
