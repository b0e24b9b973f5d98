//! Bordered Toeplitz-like matrices `T_pq` and their determinants.
//!
//! For a site pair `(p, q)` separated by complement sites `D_1 < … < D_K`,
//! the matrix has row index set `{p, D_1, …, D_K}`, column index set
//! `{q, D_1, …, D_K}`, and entries `g_{row - col}`. The correlator of the
//! pair is (up to sign) its determinant.
//!
//! Three evaluation paths are provided:
//!
//! * [`det_direct`] — one pivoted LU per matrix; always applicable;
//! * [`batch_det_schur`] — the performance path. All pairs of one interval
//!   pair share the trailing `K x K` block `M`, so one factorization of `M`
//!   serves the whole batch: `det T_pq = det(M) (g_{p-q} - u^T M^{-1} v)`.
//!   Requires `M` nonsingular, which fails in structured cases (at `h = 0`
//!   every even lag vanishes, making odd-`K` cores exactly singular);
//! * [`batch_det_bordered_column`] — the fallback when the core is singular.
//!   For a fixed column site `q`, all `T_pq` share their last `K` rows
//!   `[v_q | M]`; a fully pivoted elimination of that `K x (K+1)` block is
//!   computed once and each border row is then reduced against it in
//!   `O(K^2)`. Rank deficiency of the shared block forces every determinant
//!   in the column to zero exactly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)] use num_traits::Float; // float math in no_std builds

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::model::FourierTable;
use crate::spectral::{lu_factor, lu_logdet, LuFactors};

/// Relative pivot threshold below which a separator core is declared
/// singular (relative to the largest column norm of `M`).
const CORE_PIVOT_TOL: f64 = 1e-12;

/// The bordered matrix of one site pair.
#[derive(Clone, Debug)]
pub struct ToeplitzLike {
    row_sites: Vec<i64>,
    col_sites: Vec<i64>,
    entries: Mat,
}

impl ToeplitzLike {
    pub fn row_sites(&self) -> &[i64] {
        &self.row_sites
    }

    pub fn col_sites(&self) -> &[i64] {
        &self.col_sites
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }
}

fn check_separators(separators: &[i64]) -> Result<()> {
    for w in separators.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateSite { site: w[0] });
        }
        if w[0] > w[1] {
            return Err(Error::SeparatorsNotAscending);
        }
    }
    Ok(())
}

fn check_range(sites: &[i64], table: &FourierTable) -> Result<()> {
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for &s in sites {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    let span = hi - lo;
    if span > table.max_lag() as i64 {
        return Err(Error::LagOutOfRange { lag: span, max_lag: table.max_lag() })
    }
    Ok(())
}

/// Builds `T_pq` with first row indexed by `p`, first column by `q`, and the
/// trailing block by the separators in ascending order.
pub fn build_toeplitz_like(
    p: i64,
    q: i64,
    separators: &[i64],
    table: &FourierTable,
) -> Result<ToeplitzLike> {
    check_separators(separators)?;
    if separators.binary_search(&p).is_ok() {
        return Err(Error::DuplicateSite { site: p });
    }
    if separators.binary_search(&q).is_ok() {
        return Err(Error::DuplicateSite { site: q });
    }
    let mut row_sites = Vec::with_capacity(separators.len() + 1);
    row_sites.push(p);
    row_sites.extend_from_slice(separators);
    let mut col_sites = Vec::with_capacity(separators.len() + 1);
    col_sites.push(q);
    col_sites.extend_from_slice(separators);

    let mut all = row_sites.clone();
    all.push(q);
    check_range(&all, table)?;

    let n = row_sites.len();
    let entries = Mat::from_fn(n, n, |i, j| table.lag(row_sites[i] - col_sites[j]));
    Ok(ToeplitzLike { row_sites, col_sites, entries })
}

/// Determinant by dense pivoted LU; a zero determinant is a valid value.
pub fn det_direct(t: &ToeplitzLike) -> f64 {
    det_from_logdet(lu_logdet(&t.entries))
}

fn det_from_logdet((sign, log_abs): (i8, f64)) -> f64 {
    if sign == 0 {
        0.0
    } else {
        f64::from(sign) * log_abs.exp()
    }
}

/// Shared factorization of one interval pair's trailing block `M`, with
/// `M(i,j) = g_{D_i - D_j}`.
pub struct SeparatorCore {
    sites: Vec<i64>,
    factors: LuFactors,
    log_abs_det: f64,
    det_sign: i8,
    singular: bool,
    max_colnorm: f64,
}

impl SeparatorCore {
    pub fn new(separators: &[i64], table: &FourierTable) -> Result<Self> {
        check_separators(separators)?;
        if !separators.is_empty() {
            check_range(separators, table)?;
        }
        let k = separators.len();
        let m = Mat::from_fn(k, k, |i, j| table.lag(separators[i] - separators[j]));
        let mut max_colnorm = 0.0f64;
        for j in 0..k {
            let s: f64 = (0..k).map(|i| m[(i, j)] * m[(i, j)]).sum();
            max_colnorm = max_colnorm.max(s.sqrt());
        }
        let factors = lu_factor(&m);
        let singular = k > 0 && factors.min_pivot() <= CORE_PIVOT_TOL * max_colnorm;
        let (det_sign, log_abs_det) = if singular { (0, f64::NEG_INFINITY) } else { factors.logdet() };
        Ok(Self { sites: separators.to_vec(), factors, log_abs_det, det_sign, singular, max_colnorm })
    }

    pub fn sites(&self) -> &[i64] {
        &self.sites
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn log_abs_det(&self) -> f64 {
        self.log_abs_det
    }

    /// Crude condition estimate of the core, `max column norm / min pivot`.
    pub fn condition_estimate(&self) -> f64 {
        if self.sites.is_empty() {
            1.0
        } else {
            self.max_colnorm / self.factors.min_pivot()
        }
    }

    /// `M` rebuilt from its factors, for validity checks.
    pub fn reconstructed(&self) -> Mat {
        self.factors.reconstruct()
    }
}

/// Determinants of `T_pq` for a batch of pairs sharing one core.
///
/// One `O(K^2)` solve is amortized over each distinct column site; every
/// additional pair costs `O(K)`. Fails with [`Error::SingularCore`] when the
/// core factorization is unusable, in which case the caller must take a
/// per-entry path.
pub fn batch_det_schur(
    core: &SeparatorCore,
    pairs: &[(i64, i64)],
    table: &FourierTable,
) -> Result<Vec<f64>> {
    if core.singular {
        return Err(Error::SingularCore);
    }
    let seps = &core.sites;
    let k = seps.len();
    let mut out = Vec::with_capacity(pairs.len());
    if k == 0 {
        for &(p, q) in pairs {
            check_range(&[p, q], table)?;
            out.push(table.lag(p - q));
        }
        return Ok(out);
    }

    let mut solved: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    let mut border = Vec::with_capacity(k);
    for &(p, q) in pairs {
        if seps.binary_search(&p).is_ok() {
            return Err(Error::DuplicateSite { site: p });
        }
        if seps.binary_search(&q).is_ok() {
            return Err(Error::DuplicateSite { site: q });
        }
        check_range(&[p, q, seps[0], seps[k - 1]], table)?;
        let x = solved.entry(q).or_insert_with(|| {
            let mut v: Vec<f64> = seps.iter().map(|&d| table.lag(d - q)).collect();
            core.factors.solve_in_place(&mut v);
            v
        });
        border.clear();
        border.extend(seps.iter().map(|&d| table.lag(p - d)));
        let schur: f64 = table.lag(p - q) - border.iter().zip(x.iter()).map(|(u, y)| u * y).sum::<f64>();
        if schur == 0.0 {
            out.push(0.0);
        } else {
            let sign = f64::from(core.det_sign) * schur.signum();
            out.push(sign * (core.log_abs_det + schur.abs().ln()).exp());
        }
    }
    Ok(out)
}

/// Determinants of `T_{p q}` for every `p` in `row_sites` at one fixed
/// column site, sharing a fully pivoted elimination of the last `K` rows.
///
/// Unlike the Schur path this never divides by `det(M)`, so it remains exact
/// for singular cores; if the shared row block is rank-deficient every
/// determinant in the column vanishes identically.
pub fn batch_det_bordered_column(
    separators: &[i64],
    column_site: i64,
    row_sites: &[i64],
    table: &FourierTable,
) -> Result<Vec<f64>> {
    check_separators(separators)?;
    if separators.binary_search(&column_site).is_ok() {
        return Err(Error::DuplicateSite { site: column_site });
    }
    let k = separators.len();
    if k == 0 {
        let mut out = Vec::with_capacity(row_sites.len());
        for &p in row_sites {
            check_range(&[p, column_site], table)?;
            out.push(table.lag(p - column_site));
        }
        return Ok(out);
    }
    let mut extremes = separators.to_vec();
    extremes.push(column_site);
    extremes.extend_from_slice(row_sites);
    check_range(&extremes, table)?;
    for &p in row_sites {
        if separators.binary_search(&p).is_ok() {
            return Err(Error::DuplicateSite { site: p });
        }
    }

    // shared rows of every T_pq in this column: [v_q | M], K x (K+1)
    let mut r = Mat::from_fn(k, k + 1, |i, j| {
        if j == 0 {
            table.lag(separators[i] - column_site)
        } else {
            table.lag(separators[i] - separators[j - 1])
        }
    });
    let threshold = CORE_PIVOT_TOL * r.max_abs().max(f64::MIN_POSITIVE);

    // full-pivot elimination; column swaps keep a usable pivot available
    // even when M itself is singular
    let mut colperm: Vec<usize> = (0..=k).collect();
    let mut sign = 1.0f64;
    let mut rank_deficient = false;
    for step in 0..k {
        let (mut pi, mut pj, mut best) = (step, step, 0.0f64);
        for i in step..k {
            for j in step..=k {
                let v = r[(i, j)].abs();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if best <= threshold {
            rank_deficient = true;
            break;
        }
        if pi != step {
            r.swap_rows(pi, step);
            sign = -sign;
        }
        if pj != step {
            for i in 0..k {
                let t = r[(i, pj)];
                r[(i, pj)] = r[(i, step)];
                r[(i, step)] = t;
            }
            colperm.swap(pj, step);
            sign = -sign;
        }
        let pivot = r[(step, step)];
        for i in (step + 1)..k {
            let m = r[(i, step)] / pivot;
            r[(i, step)] = m;
            if m != 0.0 {
                let (upper, lower) = r.two_rows_mut(step, i);
                for j in (step + 1)..=k {
                    lower[j] -= m * upper[j];
                }
            }
        }
    }
    if rank_deficient {
        return Ok(row_sites.iter().map(|_| 0.0).collect());
    }

    let mut log_pivots = 0.0f64;
    let mut pivot_sign = 1.0f64;
    for step in 0..k {
        let d = r[(step, step)];
        log_pivots += d.abs().ln();
        pivot_sign *= d.signum();
    }
    // moving the border row from the top to below the K shared rows costs
    // K transpositions
    let border_sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut out = Vec::with_capacity(row_sites.len());
    let mut row = Vec::with_capacity(k + 1);
    for &p in row_sites {
        row.clear();
        for &jold in &colperm {
            row.push(if jold == 0 {
                table.lag(p - column_site)
            } else {
                table.lag(p - separators[jold - 1])
            });
        }
        for step in 0..k {
            let m = row[step] / r[(step, step)];
            for j in (step + 1)..=k {
                row[j] -= m * r[(step, j)];
            }
        }
        let s = row[k];
        if s == 0.0 {
            out.push(0.0);
        } else {
            let total_sign = border_sign * sign * pivot_sign * s.signum();
            out.push(total_sign * (log_pivots + s.abs().ln()).exp());
        }
    }
    Ok(out)
}
