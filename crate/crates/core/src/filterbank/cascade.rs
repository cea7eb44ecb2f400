use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::decomp::{svd_point, GridMatrixFunction};
use crate::exec;

use super::dilation::DilationMatrix;
use super::trigpoly::TrigPolyMatrix;
use super::FbError;

/// Acceptable distance of `â(0)`'s spectrum from eigenvalue 1 when deriving
/// the normalization vector.
pub const EIGENVECTOR_TOL: f64 = 1e-8;

/// Default normalization: a unit right 1-eigenvector of `â(0)` with positive
/// first nonzero entry. This pins `φ̂(0)` the way the limit condition
/// expects for standard masks.
pub fn default_seed(a: &TrigPolyMatrix) -> Result<DVector<Complex64>, FbError> {
    let a0 = a.eval(&[0.0, 0.0][..a.dim]);
    let r = a0.nrows();
    let shifted = &a0 - DMatrix::<Complex64>::identity(r, r);
    let (sigma, _, v) = svd_point(&shifted).map_err(|e| FbError::Numeric(e.to_string()))?;
    let smallest = sigma.last().copied().unwrap_or(0.0);
    if smallest > EIGENVECTOR_TOL {
        return Err(FbError::NoUnitEigenvector(smallest));
    }
    // right singular vector of the smallest singular value spans the kernel
    let mut seed = v.column(r - 1).into_owned();
    // positive first nonzero entry
    if let Some(lead) = seed.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = lead.conj() / lead.norm();
        seed *= phase;
    }
    Ok(seed)
}

/// Evaluate the truncated Fourier-domain refinement product
/// `φ̂(ξ) ≈ [Π_{j=1}^{J} â((Mᵀ)^{−j}ξ)]·v` at one point.
pub fn cascade_eval(
    a: &TrigPolyMatrix,
    m: &DilationMatrix,
    iterations: u32,
    seed: &DVector<Complex64>,
    xi: &[f64],
) -> DVector<Complex64> {
    let mut acc = DMatrix::<Complex64>::identity(a.rows, a.rows);
    let mut arg: Vec<f64> = xi.to_vec();
    for _ in 0..iterations {
        arg = m.inv_transpose_apply(&arg);
        acc *= a.eval(&arg);
    }
    acc * seed
}

/// Sample the cascade on a uniform midpoint grid spanning
/// `[−span·π, span·π)^d`; `n` samples per axis. Wide spans keep `ξ + 2πk`
/// on-grid for the lattice-window checks.
pub fn cascade_fourier(
    a: &TrigPolyMatrix,
    m: &DilationMatrix,
    iterations: u32,
    seed: Option<DVector<Complex64>>,
    n: usize,
    span: u32,
) -> Result<GridMatrixFunction, FbError> {
    if iterations == 0 {
        return Err(FbError::Numeric("cascade needs at least one factor".into()));
    }
    let seed = match seed {
        Some(v) => {
            if v.len() != a.rows {
                return Err(FbError::Shape(format!(
                    "seed has length {}, expected {}",
                    v.len(),
                    a.rows
                )));
            }
            v
        }
        None => default_seed(a)?,
    };
    let d = a.dim;
    let width = 2.0 * std::f64::consts::PI * span as f64;
    let coord = |i: usize| -width / 2.0 + (i as f64 + 0.5) * width / n as f64;
    let total = n.pow(d as u32);
    let samples = exec::map_indexed(total, |idx| {
        let xi = if d == 1 {
            vec![coord(idx)]
        } else {
            vec![coord(idx / n), coord(idx % n)]
        };
        let col = cascade_eval(a, m, iterations, &seed, &xi);
        DMatrix::from_column_slice(a.rows, 1, col.as_slice())
    });
    GridMatrixFunction::new(d, n, span, samples).map_err(|e| FbError::Numeric(e.to_string()))
}

/// Trend of the vanishing-moment limit pairing against a family of bump
/// functions: for each `j` up to `j_max`, quadrature of
/// `⟨w((Mᵀ)^{−j}·), h⟩ − ⟨1, h⟩` where `w` is the squared cascade norm
/// (plain variant), the Θ̂-weighted pairing, or the mixed primal/dual
/// pairing.
#[derive(Clone, Debug)]
pub struct LimitReport {
    /// Largest gap over the bump family, per scale `1..=j_max`.
    pub gaps: Vec<f64>,
    pub final_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub struct LimitTarget<'a> {
    pub a: &'a TrigPolyMatrix,
    /// Θ̂ weight; identity for the plain variant.
    pub theta: Option<&'a TrigPolyMatrix>,
    /// Dual mask for the mixed pairing; `a` again when absent.
    pub a_dual: Option<&'a TrigPolyMatrix>,
}

pub fn check_limit_condition(
    target: &LimitTarget,
    m: &DilationMatrix,
    j_max: u32,
    tolerance: f64,
) -> Result<LimitReport, FbError> {
    let a = target.a;
    if a.dim != 1 {
        return Err(FbError::Shape(
            "limit condition quadrature is one-dimensional".into(),
        ));
    }
    let seed = default_seed(a)?;
    let seed_dual = match target.a_dual {
        Some(ad) => default_seed(ad)?,
        None => seed.clone(),
    };
    // compactly supported smooth bumps: the classic exp(−1/(1−x²)) profile
    // at three placements
    let bumps: Vec<(f64, f64)> = vec![(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)]; // (center, halfwidth)
    let quad_n = 2048usize;
    let depth = 25u32;
    let gaps: Vec<f64> = (1..=j_max)
        .map(|j| {
            let mut worst: f64 = 0.0;
            for &(center, half) in &bumps {
                let xs: Vec<f64> = (0..=quad_n)
                    .map(|i| center - half + 2.0 * half * i as f64 / quad_n as f64)
                    .collect();
                let h = |x: f64| {
                    let t = (x - center) / half;
                    if t.abs() >= 1.0 {
                        0.0
                    } else {
                        (-1.0 / (1.0 - t * t)).exp()
                    }
                };
                let weights: Vec<f64> = exec::map_slice(&xs, |&x| {
                    // argument (Mᵀ)^{−j}x
                    let mut arg = vec![x];
                    for _ in 0..j {
                        arg = m.inv_transpose_apply(&arg);
                    }
                    let phi = cascade_eval(a, m, depth, &seed, &arg);
                    match (target.theta, target.a_dual) {
                        (None, None) => phi.norm_squared(),
                        (theta, a_dual) => {
                            let phit = match a_dual {
                                Some(ad) => cascade_eval(ad, m, depth, &seed_dual, &arg),
                                None => phi.clone(),
                            };
                            let th = match theta {
                                Some(t) => t.eval(&arg),
                                None => DMatrix::identity(a.rows, a.rows),
                            };
                            // φ̂ᵀ·Θ̂·conj(φ̃̂)
                            let mut acc = Complex64::new(0.0, 0.0);
                            for p in 0..a.rows {
                                for q in 0..a.rows {
                                    acc += phi[p] * th[(p, q)] * phit[q].conj();
                                }
                            }
                            acc.re
                        }
                    }
                });
                // trapezoid; all derivatives vanish at the support edge, so
                // the rule converges spectrally
                let dx = 2.0 * half / quad_n as f64;
                let mut with_w = 0.0;
                let mut plain = 0.0;
                for i in 0..=quad_n {
                    let wgt = if i == 0 || i == quad_n { 0.5 } else { 1.0 };
                    with_w += wgt * weights[i] * h(xs[i]) * dx;
                    plain += wgt * h(xs[i]) * dx;
                }
                worst = worst.max((with_w - plain).abs());
            }
            worst
        })
        .collect();
    let final_gap = gaps.last().copied().unwrap_or(f64::INFINITY);
    Ok(LimitReport {
        final_gap,
        pass: final_gap <= tolerance,
        gaps,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use crate::filterbank::trigpoly::TrigPoly;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn haar_mask() -> TrigPolyMatrix {
        TrigPolyMatrix::scalar(TrigPoly::from_coeffs_1d([
            (0, c(0.5, 0.)),
            (1, c(0.5, 0.)),
        ]))
    }

    #[test]
    fn haar_cascade_matches_closed_form() {
        // φ = χ_[0,1): φ̂(ξ) = (1−e^{−iξ})/(iξ); at π the modulus is 2/π
        let a = haar_mask();
        let m = DilationMatrix::scalar(2).unwrap();
        let seed = default_seed(&a).unwrap();
        assert!((seed[0].re - 1.0).abs() < 1e-10);
        let phi_pi = cascade_eval(&a, &m, 25, &seed, &[std::f64::consts::PI]);
        assert!((phi_pi[0].norm() - 2.0 / std::f64::consts::PI).abs() < 1e-6);
        // φ̂(0) = v
        let phi_0 = cascade_eval(&a, &m, 25, &seed, &[0.0]);
        assert!((phi_0[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn hat_cascade_matches_closed_form() {
        // â = e^{−iξ}cos²(ξ/2) = (1+e^{−iξ})²/4: φ̂(ξ) = ((1−e^{−iξ})/(iξ))²
        let a = TrigPolyMatrix::scalar(TrigPoly::from_coeffs_1d([
            (0, c(0.25, 0.)),
            (1, c(0.5, 0.)),
            (2, c(0.25, 0.)),
        ]));
        let m = DilationMatrix::scalar(2).unwrap();
        let seed = default_seed(&a).unwrap();
        for &xi in &[std::f64::consts::PI, 1.0, -2.1] {
            let got = cascade_eval(&a, &m, 25, &seed, &[xi])[0];
            let z = Complex64::new(0.0, xi);
            let factor = (Complex64::new(1.0, 0.0) - (-z).exp()) / z;
            let expect = factor * factor;
            assert!((got - expect).norm() < 1e-6, "xi={xi}: {got} vs {expect}");
        }
    }

    #[test]
    fn zero_mask_has_no_unit_eigenvector() {
        let a = TrigPolyMatrix::zero(1, 1, 1);
        assert!(matches!(
            default_seed(&a),
            Err(FbError::NoUnitEigenvector(_))
        ));
    }

    #[test]
    fn haar_limit_condition() {
        let a = haar_mask();
        let m = DilationMatrix::scalar(2).unwrap();
        let rep = check_limit_condition(
            &LimitTarget {
                a: &a,
                theta: None,
                a_dual: None,
            },
            &m,
            6,
            1e-4,
        )
        .unwrap();
        assert!(rep.pass, "final gap {}", rep.final_gap);
        // gaps shrink as j grows
        assert!(rep.gaps.last().unwrap() < rep.gaps.first().unwrap());
    }
}
