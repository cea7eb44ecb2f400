//! Exact arithmetic on the frequency line: rational-π points, finite unions
//! of half-open intervals, and 2π-periodic complex step functions (with
//! optional self-similar refinement near 0). Everything here is immutable
//! and pure; set combinatorics never leave the rationals.

mod amp;
mod germ;
mod ratpi;
mod set;
mod step;

pub use amp::Amp;
pub use germ::{Annulus, Germ};
pub use ratpi::RationalPi;
pub use set::{set_combine, FrequencySet, SetOp};
pub use step::{zip_map, CommonMesh, GermMesh, PeriodicStepFunction, Seg};

#[derive(Debug, thiserror::Error)]
pub enum TorusError {
    #[error("malformed rational '{0}' (expected p or p/q)")]
    BadRational(String),
    #[error("empty interval [{0}π, {1}π)")]
    EmptyInterval(String, String),
    #[error("cells do not tile [−π, π): {0}")]
    BadTiling(String),
}
