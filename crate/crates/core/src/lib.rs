//! Exact entanglement entropies for the critical XX spin chain.
//!
//! The ground-state reduced density matrix of any finite set of sites —
//! contiguous or not — is characterized by a real symmetric correlation
//! matrix `A` whose entries are signed determinants of small Toeplitz-like
//! matrices built from the Fourier coefficients of the model's spectral
//! symbol. Its eigenvalues `nu_i` in `[-1, 1]` give the von Neumann and
//! Renyi entropies mode by mode.
//!
//! The crate is organized along that pipeline:
//!
//! * [`model`] — the XX symbol `g(theta)` and its Fourier coefficients;
//! * [`toeplitz`] — bordered Toeplitz-like determinants, including a batched
//!   Schur-complement engine that shares one factorization across all entries
//!   of an interval pair;
//! * [`correlation`] — subsystem bookkeeping and assembly of `A`;
//! * [`spectral`] — self-contained dense kernels (Jacobi eigensolver, pivoted
//!   LU, resolvent traces);
//! * [`entropy`] — entropies, mutual information, and the explicit product
//!   reduced density matrix;
//! * [`contour`] — the determinant representation `det(lambda I - A)` and
//!   contour-integral entropy formulas, as an independent numerical
//!   cross-check of the spectral path;
//! * [`oracle`] — brute-force exact diagonalization of small finite chains
//!   for validation.
//!
//! The crate is `no_std`-compatible (`alloc` is required); disable the
//! default `std` feature for embedded use.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod contour;
pub mod correlation;
pub mod entropy;
pub mod error;
pub mod mat;
pub mod model;
pub mod oracle;
pub mod spectral;
pub mod toeplitz;

pub use contour::{ContourShape, ContourSpec};
pub use correlation::{CorrMatrix, SubsystemSpec};
pub use entropy::{EntropyReport, MutualInformationReport};
pub use error::{Error, Result};
pub use mat::Mat;
pub use model::{FourierTable, ModelParams};
pub use oracle::{FiniteChain, FiniteCorrelator};
pub use spectral::Spectrum;
