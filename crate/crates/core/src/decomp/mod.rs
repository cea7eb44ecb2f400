//! Pointwise decompositions of matrix-valued functions: null-space bases,
//! Hermitian Schur factorizations, singular value decompositions, and
//! positive-semidefinite square roots with pseudoinverses.
//!
//! The measurable-selection arguments these realize are replaced by a
//! determinism discipline: per-point computations use fixed pivot and phase
//! conventions, run independently per cell or sample, and merge in index
//! order, so results are bitwise identical regardless of thread count.

mod jacobi;
mod nullspace;
mod schur;

pub use jacobi::{hermitian_eigen_with_vectors, hermitian_eigenvalues};
pub use nullspace::{
    normalize_column_phases, null_basis_point, null_basis_uniform, numerical_rank, RANK_ABS_TOL,
    RANK_REL_TOL,
};
pub use schur::{
    psqrt_point, schur_hermitian_point, svd_point, HERMITIAN_TOL, MULTIPLICITY_GAP, PSD_TOL,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::exec;
use crate::torus::RationalPi;

#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("rank is not constant across the queried cells: {0:?}; split the cell set")]
    RankNotConstant(Vec<usize>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("mesh must be sorted, distinct, and inside [−π, π)")]
    BadMesh,
}

/// Matrix-valued step function: one complex matrix per cell of a shared
/// breakpoint mesh on `[−π, π)`.
#[derive(Clone, Debug)]
pub struct StepMatrixFunction {
    breakpoints: Vec<RationalPi>,
    mats: Vec<DMatrix<Complex64>>,
    pub hermitian: bool,
    pub positive_semidefinite: bool,
}

impl StepMatrixFunction {
    /// `breakpoints[i]` opens cell `i`; the first breakpoint must be −π and
    /// the last cell wraps to π. Flags are verified, not trusted.
    pub fn new(
        breakpoints: Vec<RationalPi>,
        mats: Vec<DMatrix<Complex64>>,
        hermitian: bool,
        positive_semidefinite: bool,
    ) -> Result<Self, DecompError> {
        if breakpoints.is_empty()
            || breakpoints.len() != mats.len()
            || breakpoints[0] != -RationalPi::pi()
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
            || breakpoints.last().unwrap() >= &RationalPi::pi()
        {
            return Err(DecompError::BadMesh);
        }
        let shape = mats[0].shape();
        if mats.iter().any(|m| m.shape() != shape) {
            return Err(DecompError::ShapeMismatch(
                "cells carry different shapes".into(),
            ));
        }
        if hermitian {
            for m in &mats {
                let dev = (m - m.adjoint()).norm();
                if dev > HERMITIAN_TOL * (1.0 + m.norm()) {
                    return Err(DecompError::NotHermitian(dev));
                }
            }
        }
        if positive_semidefinite {
            for m in &mats {
                let vals = hermitian_eigenvalues(m);
                if let Some(&min) = vals.last() {
                    if min < -PSD_TOL {
                        return Err(DecompError::NotPsd(min));
                    }
                }
            }
        }
        Ok(StepMatrixFunction {
            breakpoints,
            mats,
            hermitian,
            positive_semidefinite,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mats[0].shape()
    }

    pub fn breakpoints(&self) -> &[RationalPi] {
        &self.breakpoints
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.mats
    }
}

/// Matrix samples on a uniform midpoint grid over `[−span·π, span·π)` per
/// axis (`span = 1` is the fundamental domain; cascades use wider spans so
/// translated arguments stay on-grid).
#[derive(Clone, Debug)]
pub struct GridMatrixFunction {
    pub dim: usize,
    pub samples_per_axis: usize,
    pub span: u32,
    samples: Vec<DMatrix<Complex64>>,
}

impl GridMatrixFunction {
    pub fn new(
        dim: usize,
        samples_per_axis: usize,
        span: u32,
        samples: Vec<DMatrix<Complex64>>,
    ) -> Result<Self, DecompError> {
        let expected = samples_per_axis.pow(dim as u32);
        if dim == 0 || dim > 2 || samples_per_axis == 0 || samples.len() != expected {
            return Err(DecompError::ShapeMismatch(format!(
                "expected {} samples, got {}",
                expected,
                samples.len()
            )));
        }
        let shape = samples[0].shape();
        if samples.iter().any(|m| m.shape() != shape) {
            return Err(DecompError::ShapeMismatch(
                "samples carry different shapes".into(),
            ));
        }
        Ok(GridMatrixFunction {
            dim,
            samples_per_axis,
            span,
            samples,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.samples[0].shape()
    }

    pub fn samples(&self) -> &[DMatrix<Complex64>] {
        &self.samples
    }

    /// Sample coordinates along one axis (cell midpoints).
    pub fn axis_coords(&self) -> Vec<f64> {
        let n = self.samples_per_axis as f64;
        let width = 2.0 * std::f64::consts::PI * self.span as f64;
        (0..self.samples_per_axis)
            .map(|i| -width / 2.0 + (i as f64 + 0.5) * width / n)
            .collect()
    }
}

/// Per-point Hermitian Schur factorizations.
#[derive(Clone, Debug)]
pub struct SchurResult {
    pub lambdas: Vec<Vec<f64>>,
    pub factors: Vec<DMatrix<Complex64>>,
}

impl SchurResult {
    /// Largest `‖A − UΛU*‖` over the points.
    pub fn reconstruction_residual(&self, points: &[DMatrix<Complex64>]) -> f64 {
        points
            .iter()
            .zip(self.lambdas.iter().zip(&self.factors))
            .map(|(a, (l, u))| {
                let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                    l.iter()
                        .map(|&x| Complex64::new(x, 0.0))
                        .collect::<Vec<_>>(),
                ));
                (u * lam * u.adjoint() - a).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.factors
            .iter()
            .map(|u| (u.adjoint() * u - DMatrix::identity(u.ncols(), u.ncols())).norm())
            .fold(0.0, f64::max)
    }
}

/// Per-point singular value decompositions.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub sigmas: Vec<Vec<f64>>,
    pub u_factors: Vec<DMatrix<Complex64>>,
    pub v_factors: Vec<DMatrix<Complex64>>,
}

impl SvdResult {
    /// Largest off-diagonal magnitude of `U*AV` over the points.
    pub fn diagonality_residual(&self, points: &[DMatrix<Complex64>]) -> f64 {
        points
            .iter()
            .zip(self.u_factors.iter().zip(&self.v_factors))
            .map(|(a, (u, v))| {
                let d = u.adjoint() * a * v;
                let mut worst = 0.0f64;
                for i in 0..d.nrows() {
                    for j in 0..d.ncols() {
                        if i != j {
                            worst = worst.max(d[(i, j)].norm());
                        }
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

/// Schur decomposition applied per cell or sample, in parallel, merged in
/// index order.
pub fn schur_hermitian(points: &[DMatrix<Complex64>]) -> Result<SchurResult, DecompError> {
    let per_point = exec::map_slice(points, schur_hermitian_point);
    let mut lambdas = Vec::with_capacity(points.len());
    let mut factors = Vec::with_capacity(points.len());
    for res in per_point {
        let (l, u) = res?;
        lambdas.push(l);
        factors.push(u);
    }
    Ok(SchurResult { lambdas, factors })
}

/// SVD applied per cell or sample.
pub fn svd_measurable(points: &[DMatrix<Complex64>]) -> Result<SvdResult, DecompError> {
    let per_point = exec::map_slice(points, svd_point);
    let mut sigmas = Vec::with_capacity(points.len());
    let mut u_factors = Vec::with_capacity(points.len());
    let mut v_factors = Vec::with_capacity(points.len());
    for res in per_point {
        let (s, u, v) = res?;
        sigmas.push(s);
        u_factors.push(u);
        v_factors.push(v);
    }
    Ok(SvdResult {
        sigmas,
        u_factors,
        v_factors,
    })
}

/// PSD square roots and their pseudoinverses, per point.
pub fn psqrt(
    points: &[DMatrix<Complex64>],
) -> Result<Vec<(DMatrix<Complex64>, DMatrix<Complex64>)>, DecompError> {
    exec::map_slice(points, psqrt_point).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_matrix_flag_validation() {
        let herm = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1., 0.),
                Complex64::new(0., 1.),
                Complex64::new(0., -1.),
                Complex64::new(1., 0.),
            ],
        );
        let bps = vec![-RationalPi::pi()];
        assert!(StepMatrixFunction::new(bps.clone(), vec![herm.clone()], true, false).is_ok());
        let skew = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1., 0.),
                Complex64::new(0., 1.),
                Complex64::new(0., 1.),
                Complex64::new(1., 0.),
            ],
        );
        assert!(matches!(
            StepMatrixFunction::new(bps, vec![skew], true, false),
            Err(DecompError::NotHermitian(_))
        ));
    }

    #[test]
    fn grid_axis_coords_are_midpoints() {
        let g = GridMatrixFunction::new(1, 4, 1, vec![DMatrix::<Complex64>::zeros(1, 1); 4])
            .unwrap();
        let xs = g.axis_coords();
        assert!((xs[0] + 3.0 * std::f64::consts::PI / 4.0).abs() < 1e-15);
        assert!((xs[3] - 3.0 * std::f64::consts::PI / 4.0).abs() < 1e-15);
    }
}
