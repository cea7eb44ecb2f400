use nalgebra::DMatrix;
use num_complex::Complex64;

use super::jacobi::hermitian_eigen_with_vectors;
use super::DecompError;

/// Relative threshold below which an elimination pivot counts as zero.
pub const RANK_REL_TOL: f64 = 1e-9;
/// Absolute fallback when the leading pivot itself vanishes.
pub const RANK_ABS_TOL: f64 = 1e-12;

/// Numerical rank by fully pivoted elimination, with the largest-magnitude
/// pivot chosen deterministically (ties broken by lowest row, then column).
pub fn numerical_rank(a: &DMatrix<Complex64>) -> usize {
    eliminate(a, None).rank
}

struct Elimination {
    rank: usize,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
}

fn eliminate(a: &DMatrix<Complex64>, forced_rank: Option<usize>) -> Elimination {
    let (r, s) = a.shape();
    let mut w = a.clone();
    let mut row_perm: Vec<usize> = (0..r).collect();
    let mut col_perm: Vec<usize> = (0..s).collect();
    let mut first_pivot: Option<f64> = None;
    let mut rank = 0;
    for step in 0..r.min(s) {
        // deterministic full pivot: strictly-greater keeps the first maximum
        let mut best = (step, step);
        let mut best_mag = -1.0f64;
        for i in step..r {
            for j in step..s {
                let m = w[(i, j)].norm();
                if m > best_mag {
                    best_mag = m;
                    best = (i, j);
                }
            }
        }
        let stop = match forced_rank {
            Some(n) => step >= n,
            None => {
                let thresh = match first_pivot {
                    Some(p) => RANK_REL_TOL * p,
                    None => RANK_ABS_TOL,
                };
                best_mag <= thresh
            }
        };
        if stop {
            break;
        }
        if first_pivot.is_none() {
            first_pivot = Some(best_mag);
        }
        w.swap_rows(step, best.0);
        w.swap_columns(step, best.1);
        row_perm.swap(step, best.0);
        col_perm.swap(step, best.1);
        let pivot = w[(step, step)];
        for i in (step + 1)..r {
            let factor = w[(i, step)] / pivot;
            for j in step..s {
                let sub = factor * w[(step, j)];
                w[(i, j)] -= sub;
            }
        }
        rank += 1;
    }
    Elimination {
        rank,
        row_perm,
        col_perm,
    }
}

/// Orthonormal null-space basis of a single matrix: returns `(n, V)` with
/// `n = rank(A)`, `A·V ≈ 0`, and `V*V = I_{s−n}` exactly up to roundoff.
///
/// Construction: pick a nonsingular `n×n` minor `A₁` by deterministic full
/// pivoting, set `K = A₁⁻¹A₂`, and take `V = P_c·[−K; I]·(I + K*K)^{−1/2}`.
/// The inverse square root keeps the columns orthonormal by construction.
pub fn null_basis_point(
    a: &DMatrix<Complex64>,
    forced_rank: Option<usize>,
) -> (usize, DMatrix<Complex64>) {
    let (r, s) = a.shape();
    let elim = eliminate(a, forced_rank);
    let n = forced_rank.unwrap_or(elim.rank);
    assert!(n <= r.min(s), "rank exceeds dimensions");
    if n == s {
        return (n, DMatrix::zeros(s, 0));
    }
    if n == 0 {
        return (0, DMatrix::identity(s, s));
    }
    // permuted copy with the chosen minor leading
    let mut ap = DMatrix::<Complex64>::zeros(r, s);
    for i in 0..r {
        for j in 0..s {
            ap[(i, j)] = a[(elim.row_perm[i], elim.col_perm[j])];
        }
    }
    let a1 = ap.view((0, 0), (n, n)).into_owned();
    let a2 = ap.view((0, n), (n, s - n)).into_owned();
    let k = a1
        .lu()
        .solve(&a2)
        .expect("pivoted minor is nonsingular by construction");
    // M = I + K*K is Hermitian positive definite, M ≥ I
    let m = DMatrix::identity(s - n, s - n) + k.adjoint() * &k;
    let m_inv_sqrt = hermitian_inv_sqrt(&m);
    let mut stacked = DMatrix::<Complex64>::zeros(s, s - n);
    for j in 0..(s - n) {
        for i in 0..n {
            stacked[(i, j)] = -k[(i, j)];
        }
        stacked[(n + j, j)] = Complex64::new(1.0, 0.0);
    }
    let v_perm = stacked * m_inv_sqrt;
    // undo the column permutation on rows of V
    let mut v = DMatrix::<Complex64>::zeros(s, s - n);
    for i in 0..s {
        for j in 0..(s - n) {
            v[(elim.col_perm[i], j)] = v_perm[(i, j)];
        }
    }
    normalize_column_phases(&mut v);
    (n, v)
}

/// Null bases for a family of matrices that must share one constant rank;
/// reports the observed ranks when they differ so the caller can split cells.
pub fn null_basis_uniform(
    points: &[DMatrix<Complex64>],
) -> Result<(usize, Vec<DMatrix<Complex64>>), DecompError> {
    let results: Vec<(usize, DMatrix<Complex64>)> = crate::exec::map_slice(points, |a| {
        null_basis_point(a, None)
    });
    let ranks: Vec<usize> = results.iter().map(|(n, _)| *n).collect();
    if let Some(&n0) = ranks.first() {
        if ranks.iter().any(|&n| n != n0) {
            return Err(DecompError::RankNotConstant(ranks));
        }
    }
    Ok((
        ranks.first().copied().unwrap_or(0),
        results.into_iter().map(|(_, v)| v).collect(),
    ))
}

/// `M^{−1/2}` for Hermitian positive definite `M` (used with `M ≥ I`, so the
/// spectrum is safely bounded away from 0).
fn hermitian_inv_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (vals, u) = hermitian_eigen_with_vectors(m);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        vals.iter()
            .map(|&l| Complex64::new(1.0 / l.max(f64::MIN_POSITIVE).sqrt(), 0.0))
            .collect::<Vec<_>>(),
    ));
    &u * d * u.adjoint()
}

/// Rotate each column so its largest-magnitude entry (lowest index on ties)
/// is real and positive; zero columns are left alone.
pub fn normalize_column_phases(v: &mut DMatrix<Complex64>) {
    let (rows, cols) = v.shape();
    for j in 0..cols {
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for i in 0..rows {
            let m = v[(i, j)].norm();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag <= 0.0 {
            continue;
        }
        let z = v[(best, j)];
        let factor = z.conj() / z.norm();
        for i in 0..rows {
            v[(i, j)] *= factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn row_vector_null_basis() {
        // A = [1 1]: V = (−1, 1)ᵀ/√2 up to sign, here phase-fixed
        let a = DMatrix::from_row_slice(1, 2, &[c(1., 0.), c(1., 0.)]);
        let (n, v) = null_basis_point(&a, None);
        assert_eq!(n, 1);
        assert_eq!(v.shape(), (2, 1));
        assert!((&a * &v).norm() < 1e-14);
        assert!((v.adjoint() * &v - DMatrix::identity(1, 1)).norm() < 1e-14);
        assert!((v[(0, 0)].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn full_rank_gives_empty_basis() {
        let a = DMatrix::identity(2, 2);
        let (n, v) = null_basis_point(&a, None);
        assert_eq!(n, 2);
        assert_eq!(v.shape(), (2, 0));
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let a = DMatrix::<Complex64>::zeros(2, 3);
        let (n, v) = null_basis_point(&a, None);
        assert_eq!(n, 0);
        assert_eq!(v, DMatrix::identity(3, 3));
    }

    #[test]
    fn mixed_ranks_reported() {
        let a0 = DMatrix::identity(2, 2);
        let a1 = DMatrix::<Complex64>::zeros(2, 2);
        let err = null_basis_uniform(&[a0, a1]).unwrap_err();
        match err {
            DecompError::RankNotConstant(ranks) => assert_eq!(ranks, vec![2, 0]),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
