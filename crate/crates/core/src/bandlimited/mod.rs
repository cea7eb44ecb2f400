//! Bandlimited functions and systems: exact bracket products, shift
//! energies, orthogonalization, dimension functions, dilate families with
//! finiteness certificates, and the negative-dilate dimension series.

mod bracket;
mod dilates;
mod func;
mod ortho;
mod vminus;

pub use bracket::{bracket, mixed_parseval, shift_energy};
pub use dilates::{negative_dilates, DilateFamily, FinitenessCertificate};
pub use func::BandlimitedFunction;
pub use ortho::{dimension_function, length, orthogonalize, StackCell, StackGermMesh, StackMesh};
pub(crate) use ortho::{
    assemble_generators as assemble_from_fibers, fiber_basis as fiber_basis_cells,
    fiber_rank as fiber_rank_cells,
};
pub use vminus::{integral_identity_check, vminus_dimension, IntegralIdentityReport, VminusReport};

#[derive(Debug, thiserror::Error)]
pub enum BlError {
    #[error("cells of a bandlimited function must be pairwise disjoint")]
    OverlappingCells,
    #[error("spectral support must stay away from 0 and be bounded: inf |supp| = {inf}π, sup |supp| = {sup}π")]
    CertificateFailure { inf: String, sup: String },
    #[error("system is empty")]
    EmptySystem,
    #[error("paired systems must have equal length: {0} vs {1}")]
    PairingMismatch(usize, usize),
    #[error("dilation factor must satisfy |M| ≥ 2, got {0}")]
    BadDilation(i64),
}

/// Which generating family a system plays in the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemRole {
    /// Wavelet generators Ψ.
    Generators,
    /// Coarse-layer generators Φ.
    CoarseLayer,
    /// Dual wavelet generators.
    DualGenerators,
    /// Dual coarse layer.
    DualCoarseLayer,
    /// Negative-dilate family members.
    Dilates,
    /// Output of a generator reduction.
    Reduced,
}

/// An ordered, named list of bandlimited functions.
#[derive(Clone, Debug)]
pub struct BandlimitedSystem {
    names: Vec<String>,
    members: Vec<BandlimitedFunction>,
    pub role: SystemRole,
}

impl BandlimitedSystem {
    pub fn new(role: SystemRole, named: Vec<(String, BandlimitedFunction)>) -> Self {
        let (names, members) = named.into_iter().unzip();
        BandlimitedSystem {
            names,
            members,
            role,
        }
    }

    pub fn from_members(role: SystemRole, members: Vec<BandlimitedFunction>) -> Self {
        let names = (0..members.len()).map(|i| format!("m{}", i)).collect();
        BandlimitedSystem {
            names,
            members,
            role,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BandlimitedFunction] {
        &self.members
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn iter(&self) -> impl Iterator<Item = &BandlimitedFunction> {
        self.members.iter()
    }

    /// Check a claimed pairing (bijection by position) against this system.
    pub fn check_pairing(&self, dual: &BandlimitedSystem) -> Result<(), BlError> {
        if self.len() != dual.len() {
            return Err(BlError::PairingMismatch(self.len(), dual.len()));
        }
        Ok(())
    }
}

/// How an affine system spans scales.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineKind {
    /// All scales `j ∈ ℤ`.
    Homogeneous,
    /// Coarse layer at scale `J` plus wavelet scales `j ≥ J`.
    NonhomogeneousAt(i32),
    /// Negative scales only.
    NegativeOnly,
    /// Scales `j ≥ 0`.
    NonnegativeOnly,
}

/// Dilation, scale structure, and the certified scale window of an affine
/// system built from bandlimited generators.
#[derive(Clone, Debug)]
pub struct AffineSystemSpec {
    pub dilation: i64,
    pub kind: AffineKind,
    /// Scales outside this window provably contribute nothing (or are
    /// closed by a geometric tail) to the quantities computed over it.
    pub window: (i32, i32),
    pub certificate: Option<FinitenessCertificate>,
}

impl AffineSystemSpec {
    pub fn homogeneous(dilation: i64) -> Result<Self, BlError> {
        if dilation.abs() < 2 {
            return Err(BlError::BadDilation(dilation));
        }
        Ok(AffineSystemSpec {
            dilation,
            kind: AffineKind::Homogeneous,
            window: (-8, 8),
            certificate: None,
        })
    }
}
