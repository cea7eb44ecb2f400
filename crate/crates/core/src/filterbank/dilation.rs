use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::FbError;

/// An expansive integer dilation matrix (`d ≤ 2`) with its coset machinery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationMatrix {
    pub d: usize,
    m: [[i64; 2]; 2],
}

impl DilationMatrix {
    /// 1-D dilation by the integer `m`, `|m| ≥ 2`.
    pub fn scalar(m: i64) -> Result<Self, FbError> {
        Self::new(1, [[m, 0], [0, 1]])
    }

    pub fn new(d: usize, m: [[i64; 2]; 2]) -> Result<Self, FbError> {
        if d < 1 || d > 2 {
            return Err(FbError::BadDilation("dimension must be 1 or 2".into()));
        }
        let dm = DilationMatrix { d, m };
        let det = dm.det();
        if det.abs() < 2 {
            return Err(FbError::BadDilation(format!(
                "|det M| = {} < 2",
                det.abs()
            )));
        }
        if !dm.expansive() {
            return Err(FbError::BadDilation(
                "matrix is not expansive (an eigenvalue has modulus ≤ 1)".into(),
            ));
        }
        Ok(dm)
    }

    pub fn raw(&self) -> &[[i64; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> i64 {
        if self.d == 1 {
            self.m[0][0]
        } else {
            self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
        }
    }

    /// All eigenvalues strictly outside the unit circle, checked exactly via
    /// the Jury conditions on the reversed characteristic polynomial.
    fn expansive(&self) -> bool {
        if self.d == 1 {
            return self.m[0][0].abs() >= 2;
        }
        let det = self.det();
        let tr = self.m[0][0] + self.m[1][1];
        // roots of λ² − tr·λ + det lie outside ⟺ roots of
        // μ² + (−tr/det)·μ + 1/det lie inside the open unit disc
        let p = BigRational::new(BigInt::from(-tr), BigInt::from(det));
        let q = BigRational::new(BigInt::from(1), BigInt::from(det));
        let one = BigRational::from_integer(1.into());
        // Jury: |q| < 1, f(1) = 1 + p + q > 0, f(−1) = 1 − p + q > 0
        q.abs() < one
            && (&one + &p + &q).is_positive()
            && (&one - &p + &q).is_positive()
    }

    pub fn transpose(&self) -> [[i64; 2]; 2] {
        [
            [self.m[0][0], self.m[1][0]],
            [self.m[0][1], self.m[1][1]],
        ]
    }

    /// Coset representatives `Ω_M = [(Mᵀ)^{−1}ℤ^d] ∩ [0,1)^d` as exact
    /// rational vectors; there are exactly `|det M|` of them.
    pub fn omega(&self) -> Vec<Vec<BigRational>> {
        let det = self.det();
        if self.d == 1 {
            let n = det.abs();
            return (0..n)
                .map(|k| vec![BigRational::new(BigInt::from(k), BigInt::from(n))])
                .collect();
        }
        // ω = (Mᵀ)^{−1}k for integer k; enumerate k over the box of Mᵀ[0,1)²
        let mt = self.transpose();
        let mut out = Vec::new();
        let bound = (mt[0][0].abs() + mt[0][1].abs() + mt[1][0].abs() + mt[1][1].abs()) + 2;
        for k0 in -bound..=bound {
            for k1 in -bound..=bound {
                // solve Mᵀω = k exactly
                let det_r = BigRational::from_integer(BigInt::from(self.det()));
                let w0 = BigRational::from_integer(BigInt::from(mt[1][1] * k0 - mt[0][1] * k1))
                    / det_r.clone();
                let w1 = BigRational::from_integer(BigInt::from(-mt[1][0] * k0 + mt[0][0] * k1))
                    / det_r;
                let zero = BigRational::zero();
                let one = BigRational::from_integer(1.into());
                if w0 >= zero && w0 < one && w1 >= zero && w1 < one {
                    out.push(vec![w0, w1]);
                }
            }
        }
        out.sort();
        assert_eq!(out.len() as i64, det.abs(), "coset count must be |det M|");
        out
    }

    /// Lattice representatives `Γ_M = ℤ^d ∩ M[0,1)^d`.
    pub fn gamma(&self) -> Vec<Vec<i64>> {
        let det = self.det();
        if self.d == 1 {
            let n = det.abs();
            let step = if det > 0 { 1 } else { -1 };
            return (0..n).map(|k| vec![k * step]).collect();
        }
        let mut out = Vec::new();
        let bound = (self.m[0][0].abs()
            + self.m[0][1].abs()
            + self.m[1][0].abs()
            + self.m[1][1].abs())
            + 2;
        for k0 in -bound..=bound {
            for k1 in -bound..=bound {
                // k = M·x with x ∈ [0,1)² ⟺ M^{−1}k ∈ [0,1)²
                let det_r = BigRational::from_integer(BigInt::from(self.det()));
                let x0 = BigRational::from_integer(BigInt::from(
                    self.m[1][1] * k0 - self.m[0][1] * k1,
                )) / det_r.clone();
                let x1 = BigRational::from_integer(BigInt::from(
                    -self.m[1][0] * k0 + self.m[0][0] * k1,
                )) / det_r;
                let zero = BigRational::zero();
                let one = BigRational::from_integer(1.into());
                if x0 >= zero && x0 < one && x1 >= zero && x1 < one {
                    out.push(vec![k0, k1]);
                }
            }
        }
        out.sort();
        assert_eq!(out.len() as i64, det.abs(), "coset count must be |det M|");
        out
    }

    /// Coset representatives as floats for grid work.
    pub fn omega_f64(&self) -> Vec<Vec<f64>> {
        self.omega()
            .iter()
            .map(|w| {
                w.iter()
                    .map(|r| num_traits::ToPrimitive::to_f64(r).unwrap())
                    .collect()
            })
            .collect()
    }

    /// `(Mᵀ)^{−1}·ξ` in floats.
    pub fn inv_transpose_apply(&self, xi: &[f64]) -> Vec<f64> {
        if self.d == 1 {
            return vec![xi[0] / self.m[0][0] as f64];
        }
        let det = self.det() as f64;
        let mt = self.transpose();
        vec![
            (mt[1][1] as f64 * xi[0] - mt[0][1] as f64 * xi[1]) / det,
            (-mt[1][0] as f64 * xi[0] + mt[0][0] as f64 * xi[1]) / det,
        ]
    }

    /// `Mᵀ·ξ` in floats.
    pub fn transpose_apply(&self, xi: &[f64]) -> Vec<f64> {
        if self.d == 1 {
            return vec![xi[0] * self.m[0][0] as f64];
        }
        let mt = self.transpose();
        vec![
            mt[0][0] as f64 * xi[0] + mt[0][1] as f64 * xi[1],
            mt[1][0] as f64 * xi[0] + mt[1][1] as f64 * xi[1],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_cosets() {
        let m = DilationMatrix::scalar(2).unwrap();
        assert_eq!(
            m.omega(),
            vec![
                vec![BigRational::zero()],
                vec![BigRational::new(1.into(), 2.into())]
            ]
        );
        assert_eq!(m.gamma(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn triadic_cosets() {
        let m = DilationMatrix::scalar(3).unwrap();
        let omega = m.omega();
        assert_eq!(omega.len(), 3);
        assert_eq!(omega[1], vec![BigRational::new(1.into(), 3.into())]);
        assert_eq!(omega[2], vec![BigRational::new(2.into(), 3.into())]);
    }

    #[test]
    fn quincunx_cosets() {
        // M = [[1,1],[1,−1]]: Ω = {(0,0), (1/2,1/2)}
        let m = DilationMatrix::new(2, [[1, 1], [1, -1]]).unwrap();
        let omega = m.omega();
        assert_eq!(omega.len(), 2);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(omega[0], vec![BigRational::zero(), BigRational::zero()]);
        assert_eq!(omega[1], vec![half.clone(), half]);
        assert_eq!(m.gamma().len(), 2);
    }

    #[test]
    fn non_expansive_rejected() {
        assert!(DilationMatrix::scalar(1).is_err());
        // shear with eigenvalues on the unit circle but |det| = 2? use
        // [[2,1],[1,1]]: det = 1 → rejected by |det| ≥ 2
        assert!(DilationMatrix::new(2, [[2, 1], [1, 1]]).is_err());
        // [[1,-2],[2,-1]]: det = 3, eigenvalues ±i√3: |λ| = √3 > 1 — fine
        assert!(DilationMatrix::new(2, [[1, -2], [2, -1]]).is_ok());
        // [[3,0],[0,1]]: det 3 but eigenvalue 1 → not expansive
        assert!(DilationMatrix::new(2, [[3, 0], [0, 1]]).is_err());
    }
}
