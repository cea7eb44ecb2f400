use nalgebra::DMatrix;
use num_complex::Complex64;

/// Cyclic Jacobi diagonalization for complex Hermitian matrices.
///
/// Small and deterministic: fixed sweep order and tie handling, so identical
/// inputs give bitwise identical spectra on every run. Sizes in this crate
/// are tiny (r ≤ 8), where Jacobi is both accurate and simple.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Vec<f64> {
    let (vals, _) = jacobi(a, false);
    vals
}

/// Eigenvalues (descending) and the accumulated unitary `V` with
/// `A = V diag(λ) V*`.
pub fn hermitian_eigen_with_vectors(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    jacobi(a, true)
}

fn jacobi(a: &DMatrix<Complex64>, want_vectors: bool) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let mut h = a.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    if n <= 1 {
        let vals = if n == 1 { vec![h[(0, 0)].re] } else { vec![] };
        return (vals, v);
    }
    let scale: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-15 * scale.max(1e-300);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = h[(p, q)];
                let bmag = beta.norm();
                if bmag <= tol * 1e-2 {
                    continue;
                }
                // J = D·R with D = diag(1, e^{−iφ}) killing the phase of β
                // and R a real rotation zeroing the (p,q) entry.
                let phase = beta / bmag; // e^{iφ}
                let alpha = h[(p, p)].re;
                let gamma = h[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * bmag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // block entries: J[p,p]=c, J[p,q]=s, J[q,p]=−s·e^{−iφ}, J[q,q]=c·e^{−iφ}
                let e_neg = phase.conj();
                let e_pos = phase;

                // H ← H·J
                for i in 0..n {
                    let hip = h[(i, p)];
                    let hiq = h[(i, q)];
                    h[(i, p)] = hip * c - hiq * (s * e_neg);
                    h[(i, q)] = hip * s + hiq * (c * e_neg);
                }
                // H ← J*·H
                for i in 0..n {
                    let hpi = h[(p, i)];
                    let hqi = h[(q, i)];
                    h[(p, i)] = hpi * c - hqi * (s * e_pos);
                    h[(q, i)] = hpi * s + hqi * (c * e_pos);
                }
                if want_vectors {
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c - viq * (s * e_neg);
                        v[(i, q)] = vip * s + viq * (c * e_neg);
                    }
                }
            }
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let v_sorted = if want_vectors {
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            for i in 0..n {
                out[(i, new)] = v[(i, old)];
            }
        }
        out
    } else {
        v
    };
    (vals, v_sorted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn swap_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let (vals, v) = hermitian_eigen_with_vectors(&a);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] + 1.0).abs() < 1e-14);
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            vals.iter().map(|&x| c(x, 0.)).collect::<Vec<_>>(),
        ));
        let recon = &v * lam * v.adjoint();
        assert!((recon - a).norm() < 1e-13);
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2., 0.),
                c(1., 1.),
                c(0., -2.),
                c(1., -1.),
                c(-1., 0.),
                c(0.5, 0.25),
                c(0., 2.),
                c(0.5, -0.25),
                c(3., 0.),
            ],
        );
        let (vals, v) = hermitian_eigen_with_vectors(&a);
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            vals.iter().map(|&x| c(x, 0.)).collect::<Vec<_>>(),
        ));
        let recon = &v * lam * v.adjoint();
        let residual = (recon - &a).norm();
        assert!(residual < 1e-12, "residual {}", residual);
        assert!((v.adjoint() * &v - DMatrix::identity(3, 3)).norm() < 1e-13);
    }
}
