use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::decomp::hermitian_eigenvalues;

use super::trigpoly::{TrigPoly, TrigPolyMatrix};
use super::FbError;

/// Scalar residual bound: `‖|v|² − p‖∞ ≤ SCALAR_TOL·(1+‖p‖∞)`.
pub const SCALAR_TOL: f64 = 1e-8;
/// Matrix residual bound: `‖v̂*v̂ − P‖∞ ≤ MATRIX_TOL·(1+‖P‖∞)`.
pub const MATRIX_TOL: f64 = 1e-6;

const GRID: usize = 1024;

fn grid_points() -> Vec<f64> {
    (0..GRID)
        .map(|i| -std::f64::consts::PI + (i as f64 + 0.5) * 2.0 * std::f64::consts::PI / GRID as f64)
        .collect()
}

/// Spectral factorization of a nonnegative scalar trigonometric polynomial
/// with a real symmetric coefficient sequence: returns `v` with `|v|² = p`.
///
/// Roots of the associated Laurent polynomial are found by Durand–Kerner
/// iteration with fixed deterministic seeds, sorted by `(modulus, argument)`
/// and paired greedily into reciprocal pairs; one root per pair is kept
/// (on-circle pairs are snapped to the circle and halved in multiplicity),
/// and the factor is normalized to a positive leading coefficient.
pub fn fejer_riesz_scalar(p: &TrigPoly) -> Result<TrigPoly, FbError> {
    if p.dim != 1 {
        return Err(FbError::Shape("scalar factorization is one-dimensional".into()));
    }
    // real symmetric coefficients
    for (k, c) in p.coeffs() {
        let mirror = p.coeff([-k[0], 0]);
        if c.im.abs() > 1e-12 || (c - mirror).norm() > 1e-12 {
            return Err(FbError::NotFactorable(
                "coefficient sequence is not real symmetric".into(),
            ));
        }
    }
    let sup = p.sup_coeff();
    if sup == 0.0 {
        return Ok(TrigPoly::zero(1));
    }
    let xs = grid_points();
    let mut p_max: f64 = 0.0;
    for &x in &xs {
        let v = p.eval(&[x]).re;
        if v < -1e-9 * (1.0 + sup) {
            return Err(FbError::NotFactorable(format!(
                "polynomial is negative on the circle (p({x:.4}) = {v:.3e})"
            )));
        }
        p_max = p_max.max(v.abs());
    }
    let n = p
        .coeffs()
        .map(|(k, _)| k[0])
        .max()
        .unwrap_or(0);
    if n == 0 {
        // constant: v = √c
        let c = p.coeff([0, 0]).re.max(0.0);
        return Ok(TrigPoly::constant(1, Complex64::new(c.sqrt(), 0.0)));
    }
    // z^n·L(z) with L(z) = Σ c_k z^k: monic-ready degree-2n polynomial
    let mut poly: Vec<Complex64> = (0..=2 * n)
        .map(|i| p.coeff([i as i64 - n, 0]))
        .collect();
    let lead = poly[2 * n as usize];
    for c in poly.iter_mut() {
        *c /= lead;
    }
    let roots = durand_kerner(&poly)?;
    let selected = pair_roots(roots)?;
    // monic factor from the selected roots, in z = e^{−iξ}
    let mut factor = vec![Complex64::new(1.0, 0.0)];
    for z in &selected {
        let mut next = vec![Complex64::new(0.0, 0.0); factor.len() + 1];
        for (i, c) in factor.iter().enumerate() {
            next[i + 1] += c; // ·z
            next[i] -= c * z; // ·(−root)
        }
        factor = next;
    }
    let v_monic = TrigPoly::from_coeffs_1d(
        factor
            .iter()
            .enumerate()
            .map(|(i, c)| (i as i64, *c)),
    );
    // amplitude: p / |v_monic|² is a nonnegative constant; estimate on the
    // grid away from zeros and take the square root
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for &x in &xs {
        let pv = p.eval(&[x]).re.max(0.0);
        let mv = v_monic.eval(&[x]).norm_sqr();
        if mv > 1e-6 * (1.0 + p_max) {
            num += pv;
            den += mv;
        }
    }
    if den == 0.0 {
        return Err(FbError::NotFactorable("factor vanished on the grid".into()));
    }
    let alpha = (num / den).sqrt();
    let mut v = v_monic.scale(Complex64::new(alpha, 0.0));
    // positive leading coefficient (first nonzero in k-order)
    let lead = v
        .coeffs()
        .find(|(_, c)| c.norm() > 1e-14)
        .map(|(_, c)| *c);
    if let Some(c) = lead {
        v = v.scale(c.conj() / c.norm());
    }
    // verify
    let residual = factor_residual_scalar(p, &v, &xs);
    if residual > SCALAR_TOL * (1.0 + p_max) {
        return Err(FbError::FactorizationResidual(residual));
    }
    Ok(v)
}

fn factor_residual_scalar(p: &TrigPoly, v: &TrigPoly, xs: &[f64]) -> f64 {
    xs.iter()
        .map(|&x| (v.eval(&[x]).norm_sqr() - p.eval(&[x]).re).abs())
        .fold(0.0, f64::max)
}

/// Durand–Kerner simultaneous root iteration for a monic polynomial given
/// by ascending coefficients (`poly[deg] = 1`).
fn durand_kerner(poly: &[Complex64]) -> Result<Vec<Complex64>, FbError> {
    let deg = poly.len() - 1;
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in poly.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // fixed deterministic seeds spread around a non-unit circle
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|i| seed.powu(i as u32 + 1))
        .collect();
    for _iter in 0..600 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    // final residual sanity
    let worst = roots.iter().map(|&z| eval(z).norm()).fold(0.0, f64::max);
    if !worst.is_finite() {
        return Err(FbError::NotFactorable("root iteration diverged".into()));
    }
    Ok(roots)
}

/// Sort roots by `(modulus, argument)` and pair them into reciprocal pairs
/// `(z, 1/z̄)`; returns one representative per pair (the one inside the
/// circle, or the snapped circle root for an on-circle double root).
fn pair_roots(mut roots: Vec<Complex64>) -> Result<Vec<Complex64>, FbError> {
    roots.sort_by(|a, b| {
        (a.norm(), a.arg())
            .partial_cmp(&(b.norm(), b.arg()))
            .expect("finite roots")
    });
    let mut used = vec![false; roots.len()];
    let mut selected = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        // best reciprocal partner among the unused
        let mut best: Option<(usize, f64)> = None;
        for j in 0..roots.len() {
            if used[j] {
                continue;
            }
            let mismatch = (roots[i] * roots[j].conj() - Complex64::new(1.0, 0.0)).norm();
            if best.map(|(_, m)| mismatch < m).unwrap_or(true) {
                best = Some((j, mismatch));
            }
        }
        let (j, mismatch) = best.ok_or_else(|| {
            FbError::NotFactorable("odd number of roots cannot pair".into())
        })?;
        used[j] = true;
        let zi = roots[i];
        let zj = roots[j];
        if mismatch > 1e-5 {
            return Err(FbError::NotFactorable(format!(
                "roots do not form reciprocal pairs (mismatch {mismatch:.2e})"
            )));
        }
        if (zi.norm() - 1.0).abs() < 1e-6 && (zj.norm() - 1.0).abs() < 1e-6 {
            // on-circle double root: snap the pair's mean direction
            let dir = zi / zi.norm() + zj / zj.norm();
            let snapped = if dir.norm() > 1e-12 {
                dir / dir.norm()
            } else {
                zi / zi.norm()
            };
            selected.push(snapped);
        } else if zi.norm() <= zj.norm() {
            selected.push(zi);
        } else {
            selected.push(zj);
        }
    }
    Ok(selected)
}

/// Matrix spectral factorization by Bauer's method: banded Cholesky of the
/// block-Toeplitz truncation, iterated on the section size until the
/// residual converges. Diagonal inputs factor entrywise through the scalar
/// routine (which handles on-circle zeros by root snapping).
pub fn fejer_riesz_matrix(p: &TrigPolyMatrix) -> Result<TrigPolyMatrix, FbError> {
    if p.rows != p.cols {
        return Err(FbError::Shape("factorization needs a square matrix".into()));
    }
    if p.dim != 1 {
        return Err(FbError::Shape("matrix factorization is one-dimensional".into()));
    }
    let n = p.rows;
    let xs = grid_points();
    // Hermitian PSD on the circle
    let mut p_max: f64 = 0.0;
    for &x in xs.iter().step_by(8) {
        let at = p.eval(&[x]);
        let herm_dev = (&at - at.adjoint()).norm();
        if herm_dev > 1e-9 * (1.0 + at.norm()) {
            return Err(FbError::NotFactorable(
                "matrix is not Hermitian on the circle".into(),
            ));
        }
        let eigs = hermitian_eigenvalues(&symmetrize(&at));
        if let Some(&min) = eigs.last() {
            if min < -1e-9 * (1.0 + at.norm()) {
                return Err(FbError::NotFactorable(format!(
                    "matrix is indefinite on the circle (λ = {min:.3e})"
                )));
            }
        }
        p_max = p_max.max(at.norm());
    }
    // diagonal shortcut
    let off_diag_zero = (0..n).all(|i| {
        (0..n).all(|j| i == j || p.entry(i, j).is_zero())
    });
    if off_diag_zero {
        let mut out = TrigPolyMatrix::zero(1, n, n);
        for i in 0..n {
            *out.entry_mut(i, i) = fejer_riesz_scalar(p.entry(i, i))?;
        }
        return Ok(out);
    }
    let g = p.max_degree() as usize;
    let mut section = 64usize.max(8 * (g + 1));
    let mut last_err = f64::INFINITY;
    while section <= 4096 {
        match bauer_section(p, g, section) {
            Ok(v) => {
                let residual = matrix_residual(p, &v, &xs);
                if residual <= MATRIX_TOL * (1.0 + p_max) {
                    return Ok(v);
                }
                last_err = residual;
            }
            Err(e) => {
                if section >= 4096 {
                    return Err(e);
                }
            }
        }
        section *= 2;
    }
    Err(FbError::FactorizationResidual(last_err))
}

fn symmetrize(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn matrix_residual(p: &TrigPolyMatrix, v: &TrigPolyMatrix, xs: &[f64]) -> f64 {
    let prod = v.adjoint_fn().mul(v).sub(p);
    xs.iter()
        .step_by(4)
        .map(|&x| prod.eval(&[x]).norm())
        .fold(0.0, f64::max)
}

/// One Bauer step: Cholesky of the `section`-block Toeplitz matrix with
/// symbol `P`, reading the factor off the last block row. The factor
/// satisfies `v̂*v̂ = P` with support `0..g` in `e^{+ikξ}` powers.
fn bauer_section(p: &TrigPolyMatrix, g: usize, section: usize) -> Result<TrigPolyMatrix, FbError> {
    let n = p.rows;
    let dim = section * n;
    let band = (g + 1) * n; // scalar bandwidth
    // block coefficient lookup: P_k for k = i−j
    let coeff_block = |k: i64| -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |r, c| p.entry(r, c).coeff([k, 0]))
    };
    // banded storage: l[i][i − j] for j ∈ [i−band+1, i]
    let mut l: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); band]; dim];
    for i in 0..dim {
        let bi = i / n;
        let ri = i % n;
        let j_lo = i.saturating_sub(band - 1);
        for j in j_lo..=i {
            let bj = j / n;
            let rj = j % n;
            let kblock = bi as i64 - bj as i64;
            // T[i,j] = (P_{bi−bj})[ri, rj]
            let mut sum = if kblock.unsigned_abs() as usize <= g {
                coeff_block(kblock)[(ri, rj)]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let t_lo = j.saturating_sub(band - 1).max(j_lo);
            for t in t_lo..j {
                sum -= l[i][i - t] * l[j][j - t].conj();
            }
            if i == j {
                let re = sum.re;
                if re <= 0.0 || !re.is_finite() {
                    return Err(FbError::NotFactorable(format!(
                        "Toeplitz section lost positivity at row {i}"
                    )));
                }
                l[i][0] = Complex64::new(re.sqrt(), 0.0);
            } else {
                l[i][i - j] = sum / l[j][0];
            }
        }
    }
    // last block row: W_k = L[block section−1, block section−1−k]
    let last = section - 1;
    let mut v = TrigPolyMatrix::zero(1, n, n);
    for k in 0..=g {
        let bj = last - k;
        for r in 0..n {
            for c in 0..n {
                let i = last * n + r;
                let j = bj * n + c;
                if i >= j && (i - j) < band {
                    let w = l[i][i - j];
                    // v̂ := Σ_k W_k*·e^{+ikξ}: entry (c, r) gets conj(w) at −k
                    v.entry_mut(c, r).add_to([-(k as i64), 0], w.conj());
                }
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_circle_double_root() {
        // p = 2 + e^{iξ} + e^{−iξ} = |1+e^{−iξ}|²
        let p = TrigPoly::from_coeffs_1d([(-1, c(1., 0.)), (0, c(2., 0.)), (1, c(1., 0.))]);
        let v = fejer_riesz_scalar(&p).unwrap();
        let xs = grid_points();
        assert!(factor_residual_scalar(&p, &v, &xs) < 1e-8);
        // v should be 1 + e^{−iξ} up to the stated conventions
        assert!((v.coeff([0, 0]) - c(1., 0.)).norm() < 1e-6);
        assert!((v.coeff([1, 0]) - c(1., 0.)).norm() < 1e-6);
    }

    #[test]
    fn scalar_trivial_and_negative_cases() {
        let one = TrigPoly::one(1);
        let v = fejer_riesz_scalar(&one).unwrap();
        assert!((v.coeff([0, 0]) - c(1., 0.)).norm() < 1e-12);
        // p = 2 − e^{iξ} − e^{−iξ} = |1−e^{−iξ}|²
        let p = TrigPoly::from_coeffs_1d([(-1, c(-1., 0.)), (0, c(2., 0.)), (1, c(-1., 0.))]);
        let v = fejer_riesz_scalar(&p).unwrap();
        let xs = grid_points();
        assert!(factor_residual_scalar(&p, &v, &xs) < 1e-8);
        // genuinely negative somewhere → rejected
        let neg = TrigPoly::from_coeffs_1d([(-1, c(1., 0.)), (0, c(1., 0.)), (1, c(1., 0.))]);
        assert!(fejer_riesz_scalar(&neg).is_err());
    }

    #[test]
    fn scalar_strictly_positive() {
        // p = 5 + 2cos ξ: roots off the circle
        let p = TrigPoly::from_coeffs_1d([(-1, c(1., 0.)), (0, c(5., 0.)), (1, c(1., 0.))]);
        let v = fejer_riesz_scalar(&p).unwrap();
        let xs = grid_points();
        assert!(factor_residual_scalar(&p, &v, &xs) < 1e-9);
    }

    #[test]
    fn matrix_identity_and_diagonal() {
        let id = TrigPolyMatrix::identity(1, 2);
        let v = fejer_riesz_matrix(&id).unwrap();
        let xs = grid_points();
        assert!(matrix_residual(&id, &v, &xs) < 1e-10);
        // diag(2+2cos ξ, 1): scalar factorization per entry
        let mut p = TrigPolyMatrix::zero(1, 2, 2);
        *p.entry_mut(0, 0) =
            TrigPoly::from_coeffs_1d([(-1, c(1., 0.)), (0, c(2., 0.)), (1, c(1., 0.))]);
        *p.entry_mut(1, 1) = TrigPoly::one(1);
        let v = fejer_riesz_matrix(&p).unwrap();
        assert!(matrix_residual(&p, &v, &xs) < 1e-6);
    }

    #[test]
    fn matrix_round_trip() {
        // P := v̂₀*v̂₀ for a fixed non-diagonal v̂₀ of degree 2
        let mut v0 = TrigPolyMatrix::zero(1, 2, 2);
        *v0.entry_mut(0, 0) =
            TrigPoly::from_coeffs_1d([(0, c(1., 0.)), (1, c(0.5, 0.25)), (2, c(-0.25, 0.))]);
        *v0.entry_mut(0, 1) = TrigPoly::from_coeffs_1d([(1, c(0.3, -0.1))]);
        *v0.entry_mut(1, 0) = TrigPoly::from_coeffs_1d([(0, c(0.2, 0.))]);
        *v0.entry_mut(1, 1) = TrigPoly::from_coeffs_1d([(0, c(1.5, 0.)), (2, c(0.4, 0.2))]);
        let p = v0.adjoint_fn().mul(&v0);
        let v = fejer_riesz_matrix(&p).unwrap();
        let xs = grid_points();
        let res = matrix_residual(&p, &v, &xs);
        assert!(res < 1e-6 * (1.0 + p.sup_coeff()), "residual {res}");
        // degree bound: deg(v̂) ≤ deg(P)
        assert!(v.max_degree() <= p.max_degree());
    }
}
