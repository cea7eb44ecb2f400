use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::jacobi::{hermitian_eigen_with_vectors, hermitian_eigenvalues};
use super::nullspace::{normalize_column_phases, null_basis_point};
use super::DecompError;

/// Eigenvalue-gap tolerance for the multiplicity partition: eigenvalues
/// closer than this are handled as one invariant block.
pub const MULTIPLICITY_GAP: f64 = 1e-8;
/// Hermitian deviation accepted before an input is rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most-negative eigenvalue a matrix may have and still count as PSD.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian Schur decomposition at one point: eigenvalues sorted
/// nonincreasing and a unitary factor.
///
/// Eigenvalues come from Jacobi sweeps; the unitary is built per multiplicity
/// block by the null-space construction applied to `λ·I − A`, with a
/// Rayleigh–Ritz rotation inside each block so the reconstruction holds to
/// roundoff even when a block only clusters within the gap tolerance.
pub fn schur_hermitian_point(
    a: &DMatrix<Complex64>,
) -> Result<(Vec<f64>, DMatrix<Complex64>), DecompError> {
    let r = a.nrows();
    if a.ncols() != r {
        return Err(DecompError::ShapeMismatch(format!(
            "{}×{} is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let herm_dev = (a - a.adjoint()).norm();
    if herm_dev > HERMITIAN_TOL * (1.0 + a.norm()) {
        return Err(DecompError::NotHermitian(herm_dev));
    }
    if r == 0 {
        return Ok((vec![], DMatrix::zeros(0, 0)));
    }
    let est = hermitian_eigenvalues(a);
    let scale = est.iter().fold(0.0f64, |m, &x| m.max(x.abs())).max(1.0);

    let mut vals: Vec<f64> = Vec::with_capacity(r);
    let mut u = DMatrix::<Complex64>::zeros(r, r);
    let mut col = 0usize;
    let mut start = 0usize;
    while start < r {
        let mut end = start + 1;
        while end < r && (est[end - 1] - est[end]).abs() <= MULTIPLICITY_GAP * scale {
            end += 1;
        }
        let mult = end - start;
        let lambda = est[start..end].iter().sum::<f64>() / mult as f64;
        // kernel of λI − A spans the block's invariant subspace
        let shifted = DMatrix::from_diagonal_element(r, r, Complex64::new(lambda, 0.0)) - a;
        let (_, basis) = null_basis_point(&shifted, Some(r - mult));
        debug_assert_eq!(basis.ncols(), mult);
        // Rayleigh–Ritz inside the block: exact eigenpairs of the compression
        let small = basis.adjoint() * a * &basis;
        let (mut block_vals, w) = hermitian_eigen_with_vectors(&small);
        let mut block_vecs = basis * w;
        normalize_column_phases(&mut block_vecs);
        // descending inside the block (hermitian_eigen_with_vectors sorts)
        for j in 0..mult {
            for i in 0..r {
                u[(i, col + j)] = block_vecs[(i, j)];
            }
        }
        vals.append(&mut block_vals);
        col += mult;
        start = end;
    }
    // clustering slack can leave hairline inversions at block seams
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_u = DMatrix::<Complex64>::zeros(r, r);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..r {
            sorted_u[(i, new)] = u[(i, old)];
        }
    }
    Ok((sorted_vals, sorted_u))
}

/// Singular value decomposition at one point, assembled from the Hermitian
/// Schur factor of `A·A*` plus a null-space completion: returns
/// `(σ, U, V)` with `U*AV` diagonal, `σ` nonincreasing and nonnegative.
pub fn svd_point(
    a: &DMatrix<Complex64>,
) -> Result<(Vec<f64>, DMatrix<Complex64>, DMatrix<Complex64>), DecompError> {
    let (r, s) = a.shape();
    if r > s {
        let (sigma, u, v) = svd_point(&a.adjoint())?;
        return Ok((sigma, v, u));
    }
    // r ≤ s from here on
    let gram = a * a.adjoint();
    let (lambdas, u) = schur_hermitian_point(&gram)?;
    let sigma: Vec<f64> = lambdas.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sig_scale = sigma.first().copied().unwrap_or(0.0);
    let rank = sigma
        .iter()
        .take_while(|&&x| x > super::nullspace::RANK_REL_TOL * sig_scale && x > 0.0)
        .count();
    // V₁ = A*·U·D with D the pseudoinverse diagonal (zero stays zero)
    let d = DMatrix::from_diagonal(&DVector::from_vec(
        sigma
            .iter()
            .map(|&x| {
                if x > 0.0 && rank > 0 {
                    Complex64::new(1.0 / x, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .enumerate()
            .map(|(j, z)| if j < rank { z } else { Complex64::new(0.0, 0.0) })
            .collect::<Vec<_>>(),
    ));
    let v1_full = a.adjoint() * &u * d;
    // the completion spans the kernel of U*A
    let ua = u.adjoint() * a;
    let (_, v2) = null_basis_point(&ua, Some(rank));
    let mut v = DMatrix::<Complex64>::zeros(s, s);
    for j in 0..rank {
        for i in 0..s {
            v[(i, j)] = v1_full[(i, j)];
        }
    }
    for j in 0..(s - rank) {
        for i in 0..s {
            v[(i, rank + j)] = v2[(i, j)];
        }
    }
    Ok((sigma, u, v))
}

/// Positive-semidefinite square root and its pseudoinverse at one point,
/// under the convention `1/√λ := 0` when `λ = 0`. Eigenvalues below the PSD
/// tolerance are rejected; tiny negatives are clamped to 0.
pub fn psqrt_point(
    a: &DMatrix<Complex64>,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), DecompError> {
    let (lambdas, u) = schur_hermitian_point(a)?;
    if let Some(&min) = lambdas.last() {
        if min < -PSD_TOL {
            return Err(DecompError::NotPsd(min));
        }
    }
    let scale = lambdas.first().copied().unwrap_or(0.0).max(0.0);
    let zero_cut = super::nullspace::RANK_REL_TOL * scale;
    let sqrt_diag = DMatrix::from_diagonal(&DVector::from_vec(
        lambdas
            .iter()
            .map(|&l| Complex64::new(l.max(0.0).sqrt(), 0.0))
            .collect::<Vec<_>>(),
    ));
    let pinv_diag = DMatrix::from_diagonal(&DVector::from_vec(
        lambdas
            .iter()
            .map(|&l| {
                if l > zero_cut && l > 0.0 {
                    Complex64::new(1.0 / l.sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect::<Vec<_>>(),
    ));
    let sqrt = &u * sqrt_diag * u.adjoint();
    let pinv = &u * pinv_diag * u.adjoint();
    Ok((sqrt, pinv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn swap_matrix_schur() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let (vals, u) = schur_hermitian_point(&a).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);
        let lam = DMatrix::from_diagonal(&DVector::from_vec(
            vals.iter().map(|&x| c(x, 0.)).collect::<Vec<_>>(),
        ));
        assert!((&u * lam * u.adjoint() - a).norm() < 1e-12);
        // eigenvector of λ=1 is (1,1)/√2 up to phase, normalized real positive
        assert!((u[(0, 0)].re - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(u[(0, 0)].im.abs() < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_block() {
        let a = DMatrix::from_diagonal_element(2, 2, c(3., 0.));
        let (vals, u) = schur_hermitian_point(&a).unwrap();
        assert_eq!(vals, vec![3.0, 3.0]);
        assert!((u.adjoint() * &u - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(2., 0.), c(0., 0.)]);
        assert!(matches!(
            schur_hermitian_point(&a),
            Err(DecompError::NotHermitian(_))
        ));
    }

    #[test]
    fn svd_examples() {
        // diag(2,0) → σ = (2,0)
        let a = DMatrix::from_row_slice(2, 2, &[c(2., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let (sigma, u, v) = svd_point(&a).unwrap();
        assert!((sigma[0] - 2.0).abs() < 1e-12 && sigma[1].abs() < 1e-12);
        let diag = u.adjoint() * &a * &v;
        assert!((diag[(0, 0)].re - 2.0).abs() < 1e-12);
        // [1 1] → σ₁ = √2
        let a = DMatrix::from_row_slice(1, 2, &[c(1., 0.), c(1., 0.)]);
        let (sigma, u, v) = svd_point(&a).unwrap();
        assert!((sigma[0] - 2f64.sqrt()).abs() < 1e-12);
        let diag = u.adjoint() * &a * &v;
        assert!(diag[(0, 1)].norm() < 1e-12);
        assert!((v.adjoint() * &v - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn psqrt_conventions() {
        // diag(4,0): sqrt diag(2,0), pinv diag(1/2, 0)
        let a = DMatrix::from_row_slice(2, 2, &[c(4., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let (s, d) = psqrt_point(&a).unwrap();
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-12 && s[(1, 1)].norm() < 1e-12);
        assert!((d[(0, 0)].re - 0.5).abs() < 1e-12 && d[(1, 1)].norm() < 1e-12);
        // zero matrix
        let z = DMatrix::<Complex64>::zeros(2, 2);
        let (s, d) = psqrt_point(&z).unwrap();
        assert!(s.norm() == 0.0 && d.norm() == 0.0);
        // [[2,1],[1,2]] has sqrt with eigenvalues √3, 1
        let a = DMatrix::from_row_slice(2, 2, &[c(2., 0.), c(1., 0.), c(1., 0.), c(2., 0.)]);
        let (s, _) = psqrt_point(&a).unwrap();
        let vals = hermitian_eigenvalues(&s);
        assert!((vals[0] - 3f64.sqrt()).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((&s * &s - a).norm() < 1e-12);
        // significantly negative eigenvalue rejected
        let neg = DMatrix::from_row_slice(2, 2, &[c(-1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(psqrt_point(&neg), Err(DecompError::NotPsd(_))));
    }
}
