use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// A trigonometric (Laurent) polynomial `û(ξ) = Σ_k c_k e^{−ik·ξ}` with
/// finitely many complex coefficients, `k ∈ ℤ^d`, `d ≤ 2`. One-dimensional
/// polynomials store `k` as `[k, 0]`.
#[derive(Clone, PartialEq)]
pub struct TrigPoly {
    pub dim: usize,
    coeffs: BTreeMap<[i64; 2], Complex64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= 2);
        TrigPoly {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.set([0, 0], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    /// 1-D polynomial from `(k, coefficient)` pairs.
    pub fn from_coeffs_1d<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut p = Self::zero(1);
        for (k, c) in coeffs {
            p.add_to([k, 0], c);
        }
        p
    }

    pub fn from_coeffs_2d<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = ([i64; 2], Complex64)>,
    {
        let mut p = Self::zero(2);
        for (k, c) in coeffs {
            p.add_to(k, c);
        }
        p
    }

    pub fn set(&mut self, k: [i64; 2], c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn add_to(&mut self, k: [i64; 2], c: Complex64) {
        let v = self.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0));
        *v += c;
        if *v == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: [i64; 2]) -> Complex64 {
        self.coeffs
            .get(&k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&[i64; 2], &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Support diameter per axis.
    pub fn degree(&self) -> [i64; 2] {
        let mut deg = [0i64; 2];
        for axis in 0..2 {
            let lo = self.coeffs.keys().map(|k| k[axis]).min();
            let hi = self.coeffs.keys().map(|k| k[axis]).max();
            deg[axis] = match (lo, hi) {
                (Some(a), Some(b)) => b - a,
                _ => 0,
            };
        }
        deg
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|k| k[0].abs().max(k[1].abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_to(*k, *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_to(*k, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            out.set(*k, -c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.coeffs {
            out.set(*k, v * c);
        }
        out
    }

    /// Product (coefficient convolution: `e^{−ik·ξ}·e^{−ik'·ξ} = e^{−i(k+k')·ξ}`).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                out.add_to([ka[0] + kb[0], ka[1] + kb[1]], ca * cb);
            }
        }
        out
    }

    /// The conjugate function `ξ ↦ conj(û(ξ))`, again a trig polynomial:
    /// coefficient `k ↦ conj(c_{−k})`.
    pub fn conj_fn(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            out.set([-k[0], -k[1]], c.conj());
        }
        out
    }

    /// Argument shift `ξ ↦ û(ξ + 2πω)` for an exact rational coset `ω`:
    /// multiplies `c_k` by `e^{−2πi k·ω}`, with quarter-turn phases kept
    /// exactly ±1/±i so dyadic filter banks verify with residual 0.
    pub fn modulate(&self, omega: &[num_rational::BigRational]) -> Self {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            let mut dot = BigRational::from_integer(BigInt::from(k[0])) * &omega[0];
            if let Some(w1) = omega.get(1) {
                dot += BigRational::from_integer(BigInt::from(k[1])) * w1;
            }
            out.set(*k, c * unit_phase(&dot));
        }
        out
    }

    /// Argument dilation `ξ ↦ û(Mᵀξ)`: reindexes `k ↦ M·k` exactly.
    pub fn compose_dilation(&self, m: &[[i64; 2]; 2]) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.coeffs {
            // e^{−ik·(Mᵀξ)} = e^{−i(Mk)·ξ}
            let mk = [
                m[0][0] * k[0] + m[0][1] * k[1],
                m[1][0] * k[0] + m[1][1] * k[1],
            ];
            out.add_to(mk, *c);
        }
        out
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            let dot = k[0] as f64 * xi[0] + k[1] as f64 * xi.get(1).copied().unwrap_or(0.0);
            acc += c * Complex64::from_polar(1.0, -dot);
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn sup_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `e^{−2πi·t}` for exact rational `t`, with the four quarter-turn values
/// returned exactly.
fn unit_phase(t: &num_rational::BigRational) -> Complex64 {
    use num_traits::ToPrimitive;
    let frac = t - t.floor();
    let (num, den) = (frac.numer(), frac.denom());
    let four = num_bigint::BigInt::from(4);
    if (num * &four) % den == num_bigint::BigInt::from(0) {
        // t ∈ {0, 1/4, 1/2, 3/4} mod 1
        let quarter = ((num * four) / den) % num_bigint::BigInt::from(4);
        return match quarter.to_i64().unwrap() {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
    }
    let angle = -2.0 * std::f64::consts::PI * frac.to_f64().unwrap_or(f64::NAN);
    Complex64::from_polar(1.0, angle)
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if self.dim == 1 {
                write!(f, "({:.4})·e^(-i{}ξ)", c, k[0])?;
            } else {
                write!(f, "({:.4})·e^(-i⟨{:?},ξ⟩)", c, k)?;
            }
        }
        Ok(())
    }
}

/// Matrix of trigonometric polynomials, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub dim: usize,
    entries: Vec<TrigPoly>,
}

impl TrigPolyMatrix {
    pub fn zero(dim: usize, rows: usize, cols: usize) -> Self {
        TrigPolyMatrix {
            rows,
            cols,
            dim,
            entries: vec![TrigPoly::zero(dim); rows * cols],
        }
    }

    pub fn identity(dim: usize, n: usize) -> Self {
        let mut m = Self::zero(dim, n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = TrigPoly::one(dim);
        }
        m
    }

    pub fn from_entries(dim: usize, rows: usize, cols: usize, entries: Vec<TrigPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        TrigPolyMatrix {
            rows,
            cols,
            dim,
            entries,
        }
    }

    /// 1×1 matrix from a scalar polynomial.
    pub fn scalar(p: TrigPoly) -> Self {
        let dim = p.dim;
        TrigPolyMatrix {
            rows: 1,
            cols: 1,
            dim,
            entries: vec![p],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut TrigPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[TrigPoly] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.dim, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        out
    }

    /// Entrywise conjugate function (no transpose).
    pub fn conj_fn(&self) -> Self {
        self.map(|p| p.conj_fn())
    }

    /// Conjugate transpose as a function: `(A*)(ξ) = conj(A(ξ))ᵀ`.
    pub fn adjoint_fn(&self) -> Self {
        self.conj_fn().transpose()
    }

    pub fn map(&self, f: impl Fn(&TrigPoly) -> TrigPoly) -> Self {
        TrigPolyMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn modulate(&self, omega: &[num_rational::BigRational]) -> Self {
        self.map(|p| p.modulate(omega))
    }

    pub fn compose_dilation(&self, m: &[[i64; 2]; 2]) -> Self {
        self.map(|p| p.compose_dilation(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::from_entries(self.dim, self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        Self::from_entries(self.dim, self.rows, self.cols, entries)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zero(self.dim, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TrigPoly::zero(self.dim);
                for t in 0..self.cols {
                    acc = acc.add(&self.entry(i, t).mul(other.entry(t, j)));
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        out
    }

    /// Largest coefficient magnitude over all entries.
    pub fn sup_coeff(&self) -> f64 {
        self.entries.iter().map(|p| p.sup_coeff()).fold(0.0, f64::max)
    }

    pub fn eval(&self, xi: &[f64]) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval(xi))
    }

    pub fn max_degree(&self) -> i64 {
        self.entries
            .iter()
            .map(|p| p.max_abs_exponent())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn haar_modulus_identity() {
        // â = (1+e^{−iξ})/2: |â(ξ)|² + |â(ξ+π)|² = 1 as a polynomial identity
        let a = TrigPoly::from_coeffs_1d([(0, c(0.5, 0.)), (1, c(0.5, 0.))]);
        let sq = a.conj_fn().mul(&a);
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let shifted = a.modulate(&[half]);
        let sq2 = shifted.conj_fn().mul(&shifted);
        let total = sq.add(&sq2).sub(&TrigPoly::one(1));
        assert!(total.sup_coeff() < 1e-15);
    }

    #[test]
    fn conj_and_eval_agree() {
        let p = TrigPoly::from_coeffs_1d([(-1, c(0.3, -0.4)), (2, c(1.0, 2.0))]);
        let xi = [0.7];
        assert!((p.conj_fn().eval(&xi) - p.eval(&xi).conj()).norm() < 1e-15);
        let q = p.modulate(&[num_rational::BigRational::new(1.into(), 4.into())]);
        let expect = p.eval(&[0.7 + std::f64::consts::PI / 2.0]);
        assert!((q.eval(&xi) - expect).norm() < 1e-12);
    }

    #[test]
    fn dilation_compose_reindexes() {
        let p = TrigPoly::from_coeffs_1d([(1, c(1.0, 0.0))]);
        let m = [[2, 0], [0, 1]];
        let q = p.compose_dilation(&m);
        assert_eq!(q.coeff([2, 0]), c(1.0, 0.0));
        assert!((q.eval(&[0.3]) - p.eval(&[0.6])).norm() < 1e-14);
    }
}
