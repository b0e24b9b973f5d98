//! Entropies from correlation spectra: the modewise von Neumann sum, Renyi
//! orders, mutual information between disjoint parts, and the explicit
//! product-form reduced density matrix for small subsystems.
//!
//! Everything is in nats.

use alloc::vec::Vec;

#[allow(unused_imports)] use num_traits::Float; // float math in no_std builds

use crate::correlation::{build_corr_matrix, SubsystemSpec};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::model::ModelParams;
use crate::spectral::{eig_symmetric, Spectrum};

/// Guard for the explicit `2^N x 2^N` density matrix.
pub const DENSITY_MATRIX_MAX_SITES: usize = 12;

/// Entropy contribution of one fermionic mode with correlation eigenvalue
/// `nu`: `-(1+nu)/2 ln((1+nu)/2) - (1-nu)/2 ln((1-nu)/2)`, with the
/// convention `0 ln 0 = 0` at `nu = ±1`.
// negated comparison so NaN is rejected
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn binary_term(nu: f64) -> Result<f64> {
    if !(nu.abs() <= 1.0) {
        return Err(Error::DomainError { nu });
    }
    let mut s = 0.0;
    for p in [(1.0 + nu) / 2.0, (1.0 - nu) / 2.0] {
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Von Neumann entropy of the subsystem with the given spectrum.
pub fn von_neumann(spectrum: &Spectrum) -> f64 {
    spectrum
        .values()
        .iter()
        .map(|&nu| binary_term(nu).expect("spectrum values are clamped to [-1, 1]"))
        .sum()
}

/// Renyi entropy `S_alpha`, `alpha > 0`, `alpha != 1`:
/// `sum_i ln[((1+nu)/2)^alpha + ((1-nu)/2)^alpha] / (1-alpha)`.
pub fn renyi(spectrum: &Spectrum, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let s: f64 = spectrum
        .values()
        .iter()
        .map(|&nu| {
            let p = (1.0 + nu) / 2.0;
            let q = (1.0 - nu) / 2.0;
            (p.powf(alpha) + q.powf(alpha)).ln()
        })
        .sum();
    Ok(s / (1.0 - alpha))
}

#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must be rejected
pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::BadAlpha { alpha });
    }
    Ok(())
}

/// Everything one run of the pipeline produces, with the inputs retained
/// for audit.
#[derive(Clone, Debug)]
pub struct EntropyReport {
    pub spec: SubsystemSpec,
    pub params: ModelParams,
    pub s_von_neumann: f64,
    /// `(alpha, S_alpha)` pairs in the order requested.
    pub renyi: Vec<(f64, f64)>,
    pub spectrum: Spectrum,
}

/// Runs the full pipeline for one subsystem: correlation matrix, spectrum,
/// von Neumann entropy, and the requested Renyi orders.
pub fn entropy_report(
    spec: &SubsystemSpec,
    params: &ModelParams,
    alphas: &[f64],
) -> Result<EntropyReport> {
    let a = build_corr_matrix(spec, params)?;
    let spectrum = eig_symmetric(a.entries())?;
    let s_von_neumann = von_neumann(&spectrum);
    let mut renyi_values = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        renyi_values.push((alpha, renyi(&spectrum, alpha)?));
    }
    Ok(EntropyReport {
        spec: spec.clone(),
        params: *params,
        s_von_neumann,
        renyi: renyi_values,
        spectrum,
    })
}

#[derive(Clone, Debug)]
pub struct MutualInformationReport {
    pub part1: SubsystemSpec,
    pub part2: SubsystemSpec,
    pub s_part1: f64,
    pub s_part2: f64,
    pub s_union: f64,
    /// `I = S(A1) + S(A2) - S(A1 ∪ A2)`.
    pub mutual_information: f64,
}

/// Mutual information between two disjoint parts, from three independent
/// pipeline runs.
///
/// The union's matrix is built from scratch rather than reusing sub-blocks:
/// the separator set between two part-1 sites changes when part 2 occupies
/// sites between them, so reuse would be wrong.
pub fn mutual_information(
    part1: &SubsystemSpec,
    part2: &SubsystemSpec,
    params: &ModelParams,
) -> Result<MutualInformationReport> {
    let union = part1.union(part2)?;
    let s_part1 = entropy_report(part1, params, &[])?.s_von_neumann;
    let s_part2 = entropy_report(part2, params, &[])?.s_von_neumann;
    let s_union = entropy_report(&union, params, &[])?.s_von_neumann;
    Ok(MutualInformationReport {
        part1: part1.clone(),
        part2: part2.clone(),
        s_part1,
        s_part2,
        s_union,
        mutual_information: s_part1 + s_part2 - s_union,
    })
}

/// The explicit reduced density matrix, diagonal in the occupation basis of
/// the normal modes: entry `b` is `prod_i (1 -+ nu_i)/2` with the sign
/// picked by bit `i` of `b` (set bit = occupied mode, weight `(1-nu_i)/2`).
///
/// Audit-only; guarded to `N <= 12`.
pub fn reduced_density_matrix(spec: &SubsystemSpec, params: &ModelParams) -> Result<Mat> {
    let n = spec.len();
    if n > DENSITY_MATRIX_MAX_SITES {
        return Err(Error::TooLarge { size: n, cap: DENSITY_MATRIX_MAX_SITES });
    }
    let a = build_corr_matrix(spec, params)?;
    let spectrum = eig_symmetric(a.entries())?;
    let dim = 1usize << n;
    let mut rho = Mat::zeros(dim, dim);
    for b in 0..dim {
        let mut w = 1.0;
        for (i, &nu) in spectrum.values().iter().enumerate() {
            w *= if b >> i & 1 == 1 { (1.0 - nu) / 2.0 } else { (1.0 + nu) / 2.0 };
        }
        rho[(b, b)] = w;
    }
    Ok(rho)
}
