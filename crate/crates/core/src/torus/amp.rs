use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// A cell amplitude: a complex number that is either an exact rational pair
/// or a binary float.
///
/// Breakpoints are always exact; amplitudes start exact and stay exact
/// through ring operations, degrading to floats only when an operation
/// leaves the rationals (square roots of non-squares, eigenvector entries).
/// Exactness is what lets integrals, measures, and dimension functions be
/// asserted with `==` in tests instead of tolerances.
#[derive(Clone, Debug)]
pub enum Amp {
    Exact(BigRational, BigRational),
    Approx(Complex64),
}

impl Amp {
    pub fn zero() -> Self {
        Amp::Exact(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Amp::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Amp::Exact(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Amp::Exact(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Amp::Exact(re, BigRational::zero())
    }

    pub fn from_rational_pair(re: BigRational, im: BigRational) -> Self {
        Amp::Exact(re, im)
    }

    pub fn from_c64(z: Complex64) -> Self {
        Amp::Approx(z)
    }

    /// Promote an `f64` pair that is known to be the intended exact value
    /// (every finite float is a rational).
    pub fn exact_from_f64(re: f64, im: f64) -> Option<Self> {
        Some(Amp::Exact(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Amp::Exact(_, _))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Amp::Exact(re, im) => re.is_zero() && im.is_zero(),
            Amp::Approx(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Amp::Exact(re, im) => Complex64::new(
                re.to_f64().unwrap_or(f64::NAN),
                im.to_f64().unwrap_or(f64::NAN),
            ),
            Amp::Approx(z) => *z,
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact rational value when the amplitude is exact and purely real.
    pub fn exact_real(&self) -> Option<&BigRational> {
        match self {
            Amp::Exact(re, im) if im.is_zero() => Some(re),
            _ => None,
        }
    }

    pub fn add(&self, other: &Amp) -> Amp {
        match (self, other) {
            (Amp::Exact(ar, ai), Amp::Exact(br, bi)) => Amp::Exact(ar + br, ai + bi),
            _ => Amp::Approx(self.to_c64() + other.to_c64()),
        }
    }

    pub fn sub(&self, other: &Amp) -> Amp {
        match (self, other) {
            (Amp::Exact(ar, ai), Amp::Exact(br, bi)) => Amp::Exact(ar - br, ai - bi),
            _ => Amp::Approx(self.to_c64() - other.to_c64()),
        }
    }

    pub fn mul(&self, other: &Amp) -> Amp {
        match (self, other) {
            (Amp::Exact(ar, ai), Amp::Exact(br, bi)) => {
                Amp::Exact(ar * br - ai * bi, ar * bi + ai * br)
            }
            _ => Amp::Approx(self.to_c64() * other.to_c64()),
        }
    }

    pub fn neg(&self) -> Amp {
        match self {
            Amp::Exact(re, im) => Amp::Exact(-re, -im),
            Amp::Approx(z) => Amp::Approx(-z),
        }
    }

    pub fn conj(&self) -> Amp {
        match self {
            Amp::Exact(re, im) => Amp::Exact(re.clone(), -im),
            Amp::Approx(z) => Amp::Approx(z.conj()),
        }
    }

    /// `|z|²`, exact when the amplitude is exact.
    pub fn abs2(&self) -> Amp {
        match self {
            Amp::Exact(re, im) => Amp::Exact(re * re + im * im, BigRational::zero()),
            Amp::Approx(z) => Amp::Approx(Complex64::new(z.norm_sqr(), 0.0)),
        }
    }

    pub fn scale_rat(&self, factor: &BigRational) -> Amp {
        match self {
            Amp::Exact(re, im) => Amp::Exact(re * factor, im * factor),
            Amp::Approx(z) => Amp::Approx(z * factor.to_f64().unwrap_or(f64::NAN)),
        }
    }

    pub fn scale_f64(&self, factor: f64) -> Amp {
        Amp::Approx(self.to_c64() * factor)
    }

    /// Reciprocal under the `0⁻¹ := 0` convention used by pseudoinverses.
    pub fn recip_or_zero(&self) -> Amp {
        if self.is_zero() {
            return Amp::zero();
        }
        match self {
            Amp::Exact(re, im) => {
                let d = re * re + im * im;
                Amp::Exact(re / &d, -im / d)
            }
            Amp::Approx(z) => Amp::Approx(z.inv()),
        }
    }

    /// Square root of a nonnegative real amplitude; stays exact when the
    /// rational is a perfect square. Negative or non-real input is a caller
    /// bug (these arise only from self-brackets and PSD eigenvalues).
    pub fn sqrt_real(&self) -> Amp {
        match self {
            Amp::Exact(re, im) => {
                assert!(im.is_zero(), "sqrt of non-real amplitude");
                assert!(!re.is_negative(), "sqrt of negative amplitude");
                if let Some(root) = rational_sqrt(re) {
                    Amp::Exact(root, BigRational::zero())
                } else {
                    Amp::Approx(Complex64::new(re.to_f64().unwrap_or(f64::NAN).sqrt(), 0.0))
                }
            }
            Amp::Approx(z) => {
                debug_assert!(z.im.abs() < 1e-12 && z.re > -1e-12);
                Amp::Approx(Complex64::new(z.re.max(0.0).sqrt(), 0.0))
            }
        }
    }

    /// Equality used by canonical merging: exact values compare exactly,
    /// floats compare bitwise. Never merges an exact cell with a float cell.
    pub fn merge_eq(&self, other: &Amp) -> bool {
        match (self, other) {
            (Amp::Exact(ar, ai), Amp::Exact(br, bi)) => ar == br && ai == bi,
            (Amp::Approx(a), Amp::Approx(b)) => {
                a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
            }
            _ => false,
        }
    }

    pub fn approx_eq(&self, other: &Amp, tol: f64) -> bool {
        (self.to_c64() - other.to_c64()).norm() <= tol
    }
}

/// Exact square root of a nonnegative rational, when one exists.
fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let num_root = x.numer().sqrt();
    let den_root = x.denom().sqrt();
    if &(&num_root * &num_root) == x.numer() && &(&den_root * &den_root) == x.denom() {
        Some(BigRational::new(num_root, den_root))
    } else {
        None
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amp::Exact(re, im) if im.is_zero() => write!(f, "{}", re),
            Amp::Exact(re, im) => write!(f, "{}+{}i", re, im),
            Amp::Approx(z) => write!(f, "{}", z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactness_propagates() {
        let a = Amp::from_ratio(1, 3);
        let b = Amp::from_ratio(2, 3);
        assert!(a.add(&b).is_exact());
        assert_eq!(a.add(&b).exact_real().unwrap(), &BigRational::from_float(1.0).unwrap());
        let c = Amp::from_c64(Complex64::new(0.5, 0.0));
        assert!(!a.add(&c).is_exact());
    }

    #[test]
    fn sqrt_keeps_perfect_squares_exact() {
        let four = Amp::from_int(4);
        assert!(four.sqrt_real().is_exact());
        assert_eq!(four.sqrt_real().exact_real().unwrap().to_f64().unwrap(), 2.0);
        let two = Amp::from_int(2);
        assert!(!two.sqrt_real().is_exact());
        assert!((two.sqrt_real().to_c64().re - 2f64.sqrt()).abs() < 1e-15);
        let q = Amp::from_ratio(9, 16);
        assert_eq!(q.sqrt_real().exact_real().unwrap(), &BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn abs2_of_complex_cell() {
        // (1+i) has |z|² = 2, exactly
        let z = Amp::from_rational_pair(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(1.into()),
        );
        assert_eq!(z.abs2().exact_real().unwrap(), &BigRational::from_integer(2.into()));
    }
}
