//! Brute-force ground truth at small size: exact diagonalization of a
//! finite open XX chain in the full `2^L` spin space, partial-trace
//! entropies, and a finite-chain free-fermion path that mirrors the
//! production pipeline with the finite correlator `G` in place of the
//! translation-invariant coefficients.
//!
//! Spin basis convention: site `s` maps to bit `s - 1` of the basis index,
//! set bit = spin up.


use alloc::vec::Vec;

#[allow(unused_imports)] use num_traits::Float; // float math in no_std builds

use crate::correlation::SubsystemSpec;
use crate::entropy::von_neumann;
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::spectral::{eig_symmetric, lu_logdet, sym_eigen, sym_eigenvalues};

/// Spin-space exact diagonalization is dense `2^L x 2^L`.
pub const ED_MAX_SITES: usize = 12;
/// Partial-trace guard on the subsystem size.
pub const PARTIAL_TRACE_MAX_SITES: usize = 10;
/// Two lowest chain eigenvalues closer than this flag a degenerate ground
/// space.
const GROUND_GAP_TOL: f64 = 1e-10;
/// Single-particle energies this close to zero make the filling ambiguous.
const FERMI_TOL: f64 = 1e-12;

/// An open XX chain of `length` sites in field `h`.
///
/// Unlike the thermodynamic-limit model, the oracle accepts any finite `h`;
/// outside `|h| < 2` the ground state is simply polarized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteChain {
    pub length: usize,
    pub h: f64,
}

impl FiniteChain {
    pub fn new(length: usize, h: f64) -> Result<Self> {
        if length < 2 {
            return Err(Error::ChainTooShort { length });
        }
        Ok(Self { length, h })
    }

    fn check_sites(&self, sites: &SubsystemSpec) -> Result<()> {
        if sites.max_site() > self.length as i64 {
            return Err(Error::SiteOutsideChain {
                site: sites.max_site(),
                length: self.length,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// spin-space exact diagonalization
// ---------------------------------------------------------------------------

/// Ground state of the dense spin Hamiltonian
/// `H = -sum_n (sx sx + sy sy) - h sum_n sz`, open boundary.
///
/// Refuses degenerate ground spaces: entanglement entropy is
/// basis-dependent there, so a silent choice would poison every
/// cross-check.
pub fn ed_ground_state(chain: &FiniteChain) -> Result<Vec<f64>> {
    let l = chain.length;
    if l > ED_MAX_SITES {
        return Err(Error::TooLarge { size: l, cap: ED_MAX_SITES });
    }
    let dim = 1usize << l;
    let mut ham = Mat::zeros(dim, dim);
    for b in 0..dim {
        // field term: -h (n_up - n_down)
        let ups = (b as u64).count_ones() as i64;
        ham[(b, b)] = -chain.h * (2 * ups - l as i64) as f64;
        // -(sx sx + sy sy) exchanges anti-aligned neighbors with weight -2
        for n in 0..(l - 1) {
            let pair = (b >> n) & 3;
            if pair == 1 || pair == 2 {
                let flipped = b ^ (3 << n);
                ham[(b, flipped)] = -2.0;
            }
        }
    }
    let (vals, basis) = sym_eigen(&ham)?;
    let gap = vals[1] - vals[0];
    if gap < GROUND_GAP_TOL {
        return Err(Error::DegenerateGroundState { gap });
    }
    Ok((0..dim).map(|i| basis[(i, 0)]).collect())
}

/// Eigenvalues of the reduced density matrix of `sites`, collapsed to a
/// von Neumann entropy in nats.
///
/// The Gram trick keeps the diagonalization on the smaller factor: the
/// nonzero spectrum of `T T^t` equals that of `T^t T`.
pub fn ed_reduced_entropy(state: &[f64], sites: &SubsystemSpec) -> Result<f64> {
    let dim = state.len();
    if !dim.is_power_of_two() || dim < 4 {
        return Err(Error::BadStateDimension { len: dim, expected: 4 });
    }
    let l = dim.trailing_zeros() as usize;
    let n = sites.len();
    if n > PARTIAL_TRACE_MAX_SITES {
        return Err(Error::TooLarge { size: n, cap: PARTIAL_TRACE_MAX_SITES });
    }
    if sites.max_site() > l as i64 {
        return Err(Error::SiteOutsideChain { site: sites.max_site(), length: l });
    }

    let a_bits: Vec<usize> = sites.sites().iter().map(|&s| s as usize - 1).collect();
    let b_bits: Vec<usize> =
        (0..l).filter(|bit| !sites.contains(*bit as i64 + 1)).collect();
    let na = 1usize << a_bits.len();
    let nb = 1usize << b_bits.len();

    let scatter = |config: usize, bits: &[usize]| -> usize {
        let mut idx = 0usize;
        for (k, &bit) in bits.iter().enumerate() {
            if config >> k & 1 == 1 {
                idx |= 1 << bit;
            }
        }
        idx
    };
    let a_index: Vec<usize> = (0..na).map(|a| scatter(a, &a_bits)).collect();
    let b_index: Vec<usize> = (0..nb).map(|b| scatter(b, &b_bits)).collect();

    let gram = if na <= nb {
        Mat::from_fn(na, na, |i, j| {
            let mut s = 0.0;
            for &bo in &b_index {
                s += state[a_index[i] | bo] * state[a_index[j] | bo];
            }
            s
        })
    } else {
        Mat::from_fn(nb, nb, |i, j| {
            let mut s = 0.0;
            for &ao in &a_index {
                s += state[ao | b_index[i]] * state[ao | b_index[j]];
            }
            s
        })
    };
    let probs = sym_eigenvalues(&gram)?;
    Ok(probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum())
}

// ---------------------------------------------------------------------------
// finite free-fermion path
// ---------------------------------------------------------------------------

/// The finite-chain analog of the symbol coefficients:
/// `G_mn = 2 <a^+_m a_n> - delta_mn` in the fermionized ground state.
#[derive(Clone, Debug)]
pub struct FiniteCorrelator {
    g: Mat,
}

impl FiniteCorrelator {
    pub fn matrix(&self) -> &Mat {
        &self.g
    }
}

/// Builds `G` by filling all negative-energy modes of the explicit
/// tridiagonal hopping matrix.
pub fn finite_correlator(chain: &FiniteChain) -> Result<FiniteCorrelator> {
    let l = chain.length;
    let mut hop = Mat::zeros(l, l);
    for i in 0..(l - 1) {
        hop[(i, i + 1)] = 2.0;
        hop[(i + 1, i)] = 2.0;
    }
    for i in 0..l {
        hop[(i, i)] = -2.0 * chain.h;
    }
    let (energies, modes) = sym_eigen(&hop)?;
    for &e in &energies {
        if e.abs() < FERMI_TOL {
            return Err(Error::DegenerateFermiLevel { energy: e });
        }
    }
    let mut g = Mat::zeros(l, l);
    for (k, &e) in energies.iter().enumerate() {
        if e < 0.0 {
            for i in 0..l {
                let v = modes[(i, k)];
                if v == 0.0 {
                    continue;
                }
                for j in 0..l {
                    g[(i, j)] += 2.0 * v * modes[(j, k)];
                }
            }
        }
    }
    for i in 0..l {
        g[(i, i)] -= 1.0;
    }
    Ok(FiniteCorrelator { g })
}

/// The production pipeline with `G` substituted for the lag coefficients:
/// `A_mn = -det(T̂_mn)` where `T̂` has entries `G[row, col]` over the
/// bordered index sets, followed by the spectral and entropy steps.
pub fn ff_finite_entropy(chain: &FiniteChain, sites: &SubsystemSpec) -> Result<f64> {
    chain.check_sites(sites)?;
    let corr = finite_correlator(chain)?;
    let a = ff_corr_matrix(&corr, sites);
    let spectrum = eig_symmetric(&a)?;
    Ok(von_neumann(&spectrum))
}

fn ff_corr_matrix(corr: &FiniteCorrelator, sites: &SubsystemSpec) -> Mat {
    let g = corr.matrix();
    let list = sites.sites();
    let n = list.len();
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let separators = sites.separators_between(list[i], list[j]);
            let k = separators.len();
            let mut rows = Vec::with_capacity(k + 1);
            rows.push(list[i]);
            rows.extend_from_slice(&separators);
            let mut cols = Vec::with_capacity(k + 1);
            cols.push(list[j]);
            cols.extend_from_slice(&separators);
            let t = Mat::from_fn(k + 1, k + 1, |r, c| {
                g[(rows[r] as usize - 1, cols[c] as usize - 1)]
            });
            let (sign, log_abs) = lu_logdet(&t);
            let det = if sign == 0 { 0.0 } else { f64::from(sign) * log_abs.exp() };
            a[(i, j)] = -det;
            a[(j, i)] = -det;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;

    fn spec(raw: &[i64]) -> SubsystemSpec {
        SubsystemSpec::parse(raw).unwrap()
    }

    #[test]
    fn two_site_ground_state_is_the_triplet_combination() {
        let chain = FiniteChain::new(2, 0.0).unwrap();
        let psi = ed_ground_state(&chain).unwrap();
        // (|ud> + |du>)/sqrt(2): indices 0b01 and 0b10
        let r = 0.5f64.sqrt();
        assert!(psi[0].abs() < 1e-12);
        assert!(psi[3].abs() < 1e-12);
        assert!((psi[1].abs() - r).abs() < 1e-12);
        assert!((psi[2].abs() - r).abs() < 1e-12);
        assert!(psi[1] * psi[2] > 0.0, "components carry the same sign");
        let norm: f64 = psi.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polarized_chain_has_product_ground_state() {
        for h in [5.0, -5.0] {
            let chain = FiniteChain::new(2, h).unwrap();
            let psi = ed_ground_state(&chain).unwrap();
            let s = ed_reduced_entropy(&psi, &spec(&[1])).unwrap();
            assert!(s.abs() < 1e-10);
            let sff = ff_finite_entropy(&chain, &spec(&[1])).unwrap();
            assert!(sff.abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_configurations_are_refused() {
        // L = 3 at h = 0 has a zero single-particle mode
        let chain = FiniteChain::new(3, 0.0).unwrap();
        assert!(matches!(
            ed_ground_state(&chain),
            Err(Error::DegenerateGroundState { .. })
        ));
        assert!(matches!(
            ff_finite_entropy(&chain, &spec(&[1])),
            Err(Error::DegenerateFermiLevel { .. })
        ));
        // a small field shift lifts the degeneracy
        let shifted = FiniteChain::new(3, 1e-3).unwrap();
        assert!(ed_ground_state(&shifted).is_ok());
    }

    #[test]
    fn guards() {
        assert!(matches!(FiniteChain::new(1, 0.0), Err(Error::ChainTooShort { .. })));
        let chain = FiniteChain::new(4, 0.0).unwrap();
        let psi = ed_ground_state(&chain).unwrap();
        assert!(matches!(
            ed_reduced_entropy(&psi, &spec(&[5])),
            Err(Error::SiteOutsideChain { .. })
        ));
        assert!(matches!(
            ed_reduced_entropy(&psi[1..], &spec(&[1])),
            Err(Error::BadStateDimension { .. })
        ));
        assert!(matches!(
            ff_finite_entropy(&chain, &spec(&[7])),
            Err(Error::SiteOutsideChain { .. })
        ));
    }

    #[test]
    fn full_system_is_pure_and_complements_match() {
        let chain = FiniteChain::new(6, 0.5).unwrap();
        let psi = ed_ground_state(&chain).unwrap();
        let full: Vec<i64> = (1..=6).collect();
        assert!(ed_reduced_entropy(&psi, &spec(&full)).unwrap().abs() < 1e-10);
        let s_a = ed_reduced_entropy(&psi, &spec(&[1, 4])).unwrap();
        let s_b = ed_reduced_entropy(&psi, &spec(&[2, 3, 5, 6])).unwrap();
        assert!((s_a - s_b).abs() < 1e-10);
    }

    #[test]
    fn single_site_entropy_is_ln2_at_zero_field() {
        let chain = FiniteChain::new(8, 0.0).unwrap();
        let psi = ed_ground_state(&chain).unwrap();
        // half filling: every site is maximally mixed
        for s in [1i64, 4, 8] {
            let ed = ed_reduced_entropy(&psi, &spec(&[s])).unwrap();
            let ff = ff_finite_entropy(&chain, &spec(&[s])).unwrap();
            assert!((ed - LN_2).abs() < 1e-10);
            assert!((ff - LN_2).abs() < 1e-10);
        }
    }

    #[test]
    fn contiguous_blocks_match_exact_diagonalization() {
        let chain = FiniteChain::new(8, 0.0).unwrap();
        let psi = ed_ground_state(&chain).unwrap();
        for start in 1i64..=8 {
            for len in 1i64..=(8 - start + 1) {
                let block: Vec<i64> = (start..start + len).collect();
                let s = spec(&block);
                let ed = ed_reduced_entropy(&psi, &s).unwrap();
                let ff = ff_finite_entropy(&chain, &s).unwrap();
                assert!(
                    (ed - ff).abs() < 1e-9,
                    "block {block:?}: ed={ed} ff={ff}"
                );
            }
        }
    }

    #[test]
    fn finite_correlator_is_symmetric_with_unit_spectrum() {
        let chain = FiniteChain::new(10, 0.7).unwrap();
        let g = finite_correlator(&chain).unwrap();
        assert!(g.matrix().symmetry_defect() < 1e-12);
        // G = 2P - I with P a projector: eigenvalues are exactly ±1
        let vals = sym_eigenvalues(g.matrix()).unwrap();
        for v in vals {
            assert!(v.abs() <= 1.0 + 1e-12);
            assert!((v.abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bulk_blocks_approach_the_thermodynamic_pipeline() {
        use crate::correlation::build_corr_matrix;
        use crate::model::ModelParams;

        // S of a 5-site block deep in the bulk converges (in L) to the
        // translation-invariant pipeline value; report-style check that the
        // gap shrinks as the chain grows
        let params = ModelParams::new(0.0).unwrap();
        let block: Vec<i64> = (1..=5).collect();
        let a = build_corr_matrix(&spec(&block), &params).unwrap();
        let s_inf = von_neumann(&eig_symmetric(a.entries()).unwrap());

        let mut gaps = Vec::new();
        for l in [40usize, 80, 160] {
            let chain = FiniteChain::new(l, 0.0).unwrap();
            let mid = l as i64 / 2;
            let bulk: Vec<i64> = (mid - 2..=mid + 2).collect();
            let s = ff_finite_entropy(&chain, &spec(&bulk)).unwrap();
            gaps.push((s - s_inf).abs());
        }
        assert!(gaps[2] < gaps[0], "gaps {gaps:?} should shrink with L");
    }
}
