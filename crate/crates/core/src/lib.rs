//! Construction and verification of bandlimited wavelet and framelet systems.
//!
//! The crate is organized around exact arithmetic on the frequency line:
//! frequencies are rational multiples of π, sets of frequencies are finite
//! unions of half-open intervals, and 2π-periodic step functions carry the
//! bracket products, dimension functions, and Gramians that drive generator
//! reduction and frame verification. Filter masks are trigonometric
//! polynomials with their own verifiers, and pointwise matrix decompositions
//! (Schur, SVD, null bases, semidefinite square roots) connect the two.
//!
//! Modules:
//! - [`torus`]: rational-π endpoints, frequency sets, periodic step functions.
//! - [`bandlimited`]: functions with piecewise-constant Fourier transforms,
//!   bracket products, orthogonalization, dimension functions, dilate families.
//! - [`decomp`]: pointwise decompositions of matrix-valued functions.
//! - [`filterbank`]: trigonometric polynomial masks, coset machinery,
//!   filter-bank identities, spectral factorization, cascade evaluation.
//! - [`lift`]: generator reduction and homogeneous-to-nonhomogeneous lifting.
//! - [`verify`]: randomized and exact frame/Riesz/orthonormality verification.

pub mod bandlimited;
pub mod decomp;
pub mod exec;
pub mod filterbank;
pub mod lift;
pub mod torus;
pub mod verify;

pub use torus::{Amp, FrequencySet, PeriodicStepFunction, RationalPi};
