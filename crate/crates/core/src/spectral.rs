//! Self-contained dense numerical kernels: cyclic-Jacobi symmetric
//! eigendecomposition, pivoted LU with log-magnitude determinants, and
//! resolvent traces in complex arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] use num_traits::Float; // float math in no_std builds

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Off-diagonal Frobenius threshold for the Jacobi sweep, relative to the
/// input Frobenius norm.
const JACOBI_TOL: f64 = 1e-13;
/// Sweep cap; Jacobi on a symmetric matrix converges long before this.
const JACOBI_MAX_SWEEPS: usize = 60;
/// Entrywise symmetry tolerance demanded of correlation matrices.
const SYMMETRY_TOL: f64 = 1e-12;
/// Allowed excursion of correlation eigenvalues beyond `[-1, 1]`.
pub const SPECTRUM_CLAMP_TOL: f64 = 1e-9;
/// Pivot-collapse threshold for shifted complex factorizations, relative to
/// the problem scale `max(|A|, |lambda|, 1)`.
const SHIFT_PIVOT_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// real pivoted LU
// ---------------------------------------------------------------------------

/// Compact LU factors with partial (row) pivoting: `P A = L U`.
///
/// Zero pivots are recorded rather than rejected; `logdet` reports them as a
/// zero determinant sign and `solve` must not be called on a singular factor.
pub struct LuFactors {
    lu: Mat,
    piv: Vec<usize>,
    perm_sign: i8,
    min_pivot: f64,
}

pub fn lu_factor(a: &Mat) -> LuFactors {
    debug_assert!(a.is_square());
    let n = a.rows();
    let mut lu = a.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut perm_sign = 1i8;
    let mut min_pivot = f64::INFINITY;

    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            lu.swap_rows(p, k);
            piv.swap(p, k);
            perm_sign = -perm_sign;
        }
        let pivot = lu[(k, k)];
        min_pivot = min_pivot.min(pivot.abs());
        if pivot == 0.0 {
            continue;
        }
        for i in (k + 1)..n {
            let m = lu[(i, k)] / pivot;
            lu[(i, k)] = m;
            if m != 0.0 {
                let (upper, lower) = lu.two_rows_mut(k, i);
                for j in (k + 1)..n {
                    lower[j] -= m * upper[j];
                }
            }
        }
    }
    if n == 0 {
        min_pivot = 0.0;
    }
    LuFactors { lu, piv, perm_sign, min_pivot }
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// Determinant as `(sign, ln |det|)`; sign 0 flags a collapsed pivot.
    pub fn logdet(&self) -> (i8, f64) {
        let n = self.dim();
        let mut sign = self.perm_sign;
        let mut log_abs = 0.0;
        for k in 0..n {
            let d = self.lu[(k, k)];
            if d.abs() < f64::MIN_POSITIVE {
                return (0, f64::NEG_INFINITY);
            }
            if d < 0.0 {
                sign = -sign;
            }
            log_abs += d.abs().ln();
        }
        (sign, log_abs)
    }

    /// Solves `A x = b` in place. The factorization must be nonsingular.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        debug_assert_eq!(b.len(), n);
        // apply the row permutation
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        // forward substitution, unit lower factor
        for i in 1..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for (k, xv) in x.iter().enumerate().take(i) {
                s -= row[k] * xv;
            }
            x[i] = s;
        }
        // back substitution
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for (k, xv) in x.iter().enumerate().skip(i + 1) {
                s -= row[k] * xv;
            }
            x[i] = s / row[i];
        }
        b.copy_from_slice(&x);
    }

    /// Rebuilds `A = P^T L U`, used by validity checks in tests.
    pub fn reconstruct(&self) -> Mat {
        let n = self.dim();
        let mut pa = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                let hi = i.min(j);
                for k in 0..=hi {
                    let l = if k == i { 1.0 } else { self.lu[(i, k)] };
                    s += l * self.lu[(k, j)];
                }
                pa[(i, j)] = s;
            }
        }
        // undo the row permutation
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(self.piv[i], j)] = pa[(i, j)];
            }
        }
        a
    }
}

/// Determinant of a square matrix as `(sign, ln |det|)` via pivoted LU.
pub fn lu_logdet(a: &Mat) -> (i8, f64) {
    lu_factor(a).logdet()
}

// ---------------------------------------------------------------------------
// cyclic Jacobi
// ---------------------------------------------------------------------------

fn off_diagonal_norm(a: &Mat) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[(i, j)] * a[(i, j)];
        }
    }
    (2.0 * s).sqrt()
}

fn jacobi(a: &Mat, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat>)> {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = if want_vectors { Some(Mat::identity(n)) } else { None };
    if n <= 1 {
        let vals = (0..n).map(|i| m[(i, i)]).collect();
        return Ok((vals, v));
    }

    let norm = a.frobenius_norm();
    let threshold = JACOBI_TOL * norm;
    // each annihilation spills O(eps)-level mass into its row and column,
    // so off(A) plateaus near n*eps*|A|; below the strict threshold that
    // plateau is itself a converged spectrum (eigenvalue error <= off)
    let plateau = 16.0 * n as f64 * f64::EPSILON * norm;
    let mut off = off_diagonal_norm(&m);
    let mut converged = off <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                // tan of the rotation that annihilates a_pq; the stable
                // formula degrades gracefully for large theta
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = m[(p, p)];
                let aqq = m[(q, q)];
                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp - s * (akq + tau * akp);
                    m[(k, q)] = akq + s * (akp - tau * akq);
                    m[(p, k)] = m[(k, p)];
                    m[(q, k)] = m[(k, q)];
                }
                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm[(k, p)];
                        let vkq = vm[(k, q)];
                        vm[(k, p)] = vkp - s * (vkq + tau * vkp);
                        vm[(k, q)] = vkq + s * (vkp - tau * vkq);
                    }
                }
            }
        }
        let next = off_diagonal_norm(&m);
        converged = next <= threshold
            || (sweeps >= 4 && next <= plateau && next > 0.25 * off);
        off = next;
    }

    let mut vals: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    // sort ascending, carrying eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite eigenvalues"));
    vals = order.iter().map(|&i| vals[i]).collect();
    let v = v.map(|vm| Mat::from_fn(n, n, |i, j| vm[(i, order[j])]));
    Ok((vals, v))
}

/// Eigenvalues of a symmetric matrix, ascending. No symmetry check; the
/// caller owns that contract.
pub fn sym_eigenvalues(a: &Mat) -> Result<Vec<f64>> {
    Ok(jacobi(a, false)?.0)
}

/// Eigenvalues (ascending) and the orthonormal eigenbasis, columnwise.
pub fn sym_eigen(a: &Mat) -> Result<(Vec<f64>, Mat)> {
    let (vals, v) = jacobi(a, true)?;
    Ok((vals, v.expect("vectors requested")))
}

// ---------------------------------------------------------------------------
// correlation spectra
// ---------------------------------------------------------------------------

/// The `N` real eigenvalues of a correlation matrix, ascending, clamped to
/// `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Accepts raw eigenvalues, sorts them, and clamps excursions beyond
    /// `[-1, 1]` of at most [`SPECTRUM_CLAMP_TOL`]. Larger excursions
    /// indicate an upstream bug and are rejected rather than hidden.
    pub fn from_correlation_eigenvalues(mut values: Vec<f64>) -> Result<Self> {
        for v in &mut values {
            if !v.is_finite() || v.abs() > 1.0 + SPECTRUM_CLAMP_TOL {
                return Err(Error::EigenvalueOutOfRange { value: *v });
            }
            *v = v.clamp(-1.0, 1.0);
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Symmetric eigendecomposition with the contract checks of the entropy
/// pipeline: entrywise symmetry to 1e-12 on the way in, eigenvalues clamped
/// to `[-1, 1]` on the way out.
pub fn eig_symmetric(a: &Mat) -> Result<Spectrum> {
    check_symmetric(a)?;
    Spectrum::from_correlation_eigenvalues(sym_eigenvalues(a)?)
}

/// As [`eig_symmetric`], additionally returning the orthonormal eigenbasis.
pub fn eig_symmetric_with_basis(a: &Mat) -> Result<(Spectrum, Mat)> {
    check_symmetric(a)?;
    let (vals, basis) = sym_eigen(a)?;
    Ok((Spectrum::from_correlation_eigenvalues(vals)?, basis))
}

fn check_symmetric(a: &Mat) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSymmetric { defect: f64::INFINITY });
    }
    let defect = a.symmetry_defect();
    if defect > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { defect });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// complex LU and resolvent traces
// ---------------------------------------------------------------------------

/// Compact complex LU with partial pivoting, for shifted systems
/// `(lambda I - A)`.
pub(crate) struct CluFactors {
    n: usize,
    lu: Vec<Complex64>,
    piv: Vec<usize>,
    perm_sign: i8,
}

pub(crate) fn clu_factor(mut lu: Vec<Complex64>, n: usize) -> CluFactors {
    debug_assert_eq!(lu.len(), n * n);
    let mut piv: Vec<usize> = (0..n).collect();
    let mut perm_sign = 1i8;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].norm_sqr();
        for i in (k + 1)..n {
            let v = lu[i * n + k].norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                lu.swap(p * n + j, k * n + j);
            }
            piv.swap(p, k);
            perm_sign = -perm_sign;
        }
        let pivot = lu[k * n + k];
        if pivot == Complex64::new(0.0, 0.0) {
            continue;
        }
        for i in (k + 1)..n {
            let m = lu[i * n + k] / pivot;
            lu[i * n + k] = m;
            if m != Complex64::new(0.0, 0.0) {
                for j in (k + 1)..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= m * u;
                }
            }
        }
    }
    CluFactors { n, lu, piv, perm_sign }
}

impl CluFactors {
    pub(crate) fn min_pivot_norm(&self) -> f64 {
        (0..self.n).map(|k| self.lu[k * self.n + k].norm()).fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        let mut x: Vec<Complex64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for (k, xv) in x.iter().enumerate().take(i) {
                s -= self.lu[i * n + k] * xv;
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for (k, xv) in x.iter().enumerate().skip(i + 1) {
                s -= self.lu[i * n + k] * xv;
            }
            x[i] = s / self.lu[i * n + i];
        }
        b.copy_from_slice(&x);
    }

    /// `ln det` with a per-pivot principal branch; the global branch is
    /// arbitrary, which is fine wherever only differences or derivatives of
    /// `ln det` matter.
    pub(crate) fn logdet(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..self.n {
            s += self.lu[k * self.n + k].ln();
        }
        if self.perm_sign < 0 {
            s += Complex64::new(0.0, core::f64::consts::PI);
        }
        s
    }
}

pub(crate) fn shifted_factor(a: &Mat, lambda: Complex64) -> Result<CluFactors> {
    debug_assert!(a.is_square());
    let n = a.rows();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut z = Complex64::new(-a[(i, j)], 0.0);
            if i == j {
                z += lambda;
            }
            data.push(z);
        }
    }
    let f = clu_factor(data, n);
    // pivot collapse is judged against the problem scale, not the shifted
    // matrix's own norm: lambda inside the spectrum leaves tiny pivots even
    // when the shifted matrix is uniformly small
    let scale = a.max_abs().max(lambda.norm()).max(1.0);
    if f.min_pivot_norm() <= SHIFT_PIVOT_TOL * scale {
        return Err(Error::NearSingularShift);
    }
    Ok(f)
}

/// `trace((lambda I - A)^{-1})` via one complex factorization and `N`
/// solves. This is `d/d lambda ln det(lambda I - A)`.
pub fn resolvent_trace(a: &Mat, lambda: Complex64) -> Result<Complex64> {
    let f = shifted_factor(a, lambda)?;
    let n = a.rows();
    let mut tr = Complex64::new(0.0, 0.0);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for v in e.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        e[i] = Complex64::new(1.0, 0.0);
        f.solve_in_place(&mut e);
        tr += e[i];
    }
    Ok(tr)
}

/// Same trace through a precomputed spectrum: `sum_i 1/(lambda - nu_i)`.
pub fn resolvent_trace_from_spectrum(spectrum: &Spectrum, lambda: Complex64) -> Complex64 {
    spectrum.values().iter().map(|&nu| (lambda - nu).inv()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_two_by_two_off_diagonal() {
        let a = 0.37;
        let m = Mat::from_fn(2, 2, |i, j| if i != j { a } else { 0.0 });
        let vals = sym_eigenvalues(&m).unwrap();
        assert!((vals[0] + a).abs() < 1e-14);
        assert!((vals[1] - a).abs() < 1e-14);
    }

    #[test]
    fn jacobi_identity() {
        let vals = sym_eigenvalues(&Mat::identity(7)).unwrap();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_eigenpairs_satisfy_residual_and_orthonormality() {
        // deterministic symmetric test matrix
        let n = 12;
        let a = Mat::from_fn(n, n, |i, j| {
            let (i, j) = (i as f64, j as f64);
            ((i * 3.7 + j * 1.3).sin() + (j * 3.7 + i * 1.3).sin()) / 2.0 + if i == j { 0.5 } else { 0.0 }
        });
        let (vals, v) = sym_eigen(&a).unwrap();
        let norm = a.frobenius_norm();
        for k in 0..n {
            let mut res = 0.0f64;
            for i in 0..n {
                let mut av = 0.0;
                for j in 0..n {
                    av += a[(i, j)] * v[(j, k)];
                }
                res += (av - vals[k] * v[(i, k)]).powi(2);
            }
            assert!(res.sqrt() <= 1e-9 * norm, "residual {res:e} too large");
        }
        for p in 0..n {
            for q in 0..n {
                let mut dot = 0.0;
                for i in 0..n {
                    dot += v[(i, p)] * v[(i, q)];
                }
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
        // eigenvalue sum equals the trace
        let sum: f64 = vals.iter().sum();
        assert!((sum - a.trace()).abs() < 1e-9 * n as f64);
    }

    #[test]
    fn lu_logdet_examples() {
        assert_eq!(lu_logdet(&Mat::identity(5)), (1, 0.0));

        let mut d = Mat::zeros(2, 2);
        d[(0, 0)] = 2.0;
        d[(1, 1)] = 3.0;
        let (s, l) = lu_logdet(&d);
        assert_eq!(s, 1);
        assert!((l - 6.0f64.ln()).abs() < 1e-15);

        let mut p = Mat::zeros(2, 2);
        p[(0, 1)] = 1.0;
        p[(1, 0)] = 1.0;
        assert_eq!(lu_logdet(&p), (-1, 0.0));

        let z = Mat::zeros(3, 3);
        assert_eq!(lu_logdet(&z).0, 0);
    }

    #[test]
    fn lu_solve_roundtrip_and_reconstruct() {
        let n = 6;
        let a = Mat::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 11) as f64 - 4.0 + if i == j { 8.0 } else { 0.0 });
        let f = lu_factor(&a);
        let x0: Vec<f64> = (0..n).map(|i| (i as f64) - 2.5).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            b[i] = (0..n).map(|j| a[(i, j)] * x0[j]).sum();
        }
        f.solve_in_place(&mut b);
        for i in 0..n {
            assert!((b[i] - x0[i]).abs() < 1e-10);
        }
        let r = f.reconstruct();
        for i in 0..n {
            for j in 0..n {
                assert!((r[(i, j)] - a[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrum_clamps_and_rejects() {
        let s = Spectrum::from_correlation_eigenvalues(vec![1.0 + 5e-10, -1.0 - 5e-10, 0.3]).unwrap();
        assert_eq!(s.values(), &[-1.0, 0.3, 1.0]);
        assert!(matches!(
            Spectrum::from_correlation_eigenvalues(vec![1.0 + 1e-8]),
            Err(Error::EigenvalueOutOfRange { .. })
        ));
    }

    #[test]
    fn eig_symmetric_rejects_asymmetry() {
        let mut m = Mat::identity(3);
        m[(0, 1)] = 1e-6;
        assert!(matches!(eig_symmetric(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn resolvent_trace_trivial_cases() {
        // A = 0 (1x1), lambda = 2 -> 0.5
        let a = Mat::zeros(1, 1);
        let tr = resolvent_trace(&a, Complex64::new(2.0, 0.0)).unwrap();
        assert!((tr - Complex64::new(0.5, 0.0)).norm() < 1e-14);

        // A = diag(0.5, -0.5), lambda = 2i -> sum 1/(2i -+ 0.5)
        let mut d = Mat::zeros(2, 2);
        d[(0, 0)] = 0.5;
        d[(1, 1)] = -0.5;
        let tr = resolvent_trace(&d, Complex64::new(0.0, 2.0)).unwrap();
        let want = Complex64::new(0.0, -0.9411764705882353);
        assert!((tr - want).norm() < 1e-14);
    }

    #[test]
    fn resolvent_paths_agree() {
        let n = 6;
        let a = Mat::from_fn(n, n, |i, j| {
            let v = (((i + 1) * (j + 2)) as f64 * 0.371).sin() * 0.05;
            if i == j { v + 0.1 } else { v }
        });
        let sym = Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) / 2.0);
        let spectrum = eig_symmetric(&sym).unwrap();
        let lambda = Complex64::new(1.5, 1.0);
        let t1 = resolvent_trace(&sym, lambda).unwrap();
        let t2 = resolvent_trace_from_spectrum(&spectrum, lambda);
        assert!((t1 - t2).norm() < 1e-10);
    }

    #[test]
    fn near_singular_shift_is_reported() {
        let a = Mat::identity(3);
        assert!(matches!(
            resolvent_trace(&a, Complex64::new(1.0 + 1e-15, 0.0)),
            Err(Error::NearSingularShift)
        ));
    }
}
