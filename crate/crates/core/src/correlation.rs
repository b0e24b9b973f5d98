//! Subsystem bookkeeping and assembly of the real symmetric correlation
//! matrix `A`, with `A_mn = -det(T_mn)`.
//!
//! The separator set of an entry `(m, n)` is the set of complement sites
//! strictly between `m` and `n`. Within one pair of subsystem intervals that
//! set is the same for every entry of the block, which is what lets a single
//! core factorization serve the whole block.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::model::{FourierTable, ModelParams};
use crate::toeplitz::{
    batch_det_bordered_column, batch_det_schur, build_toeplitz_like, det_direct, SeparatorCore,
};

/// Largest supported distance between the first and last subsystem site.
pub const SITE_SPAN_CAP: i64 = 1_000_000;

/// A maximal run of consecutive sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub start: i64,
    pub len: i64,
}

impl Interval {
    pub fn end(&self) -> i64 {
        self.start + self.len - 1
    }
}

/// A strictly increasing set of 1-based sites, decomposed into maximal
/// consecutive intervals and the complement runs (gaps) separating them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemSpec {
    sites: Vec<i64>,
    intervals: Vec<Interval>,
    gaps: Vec<Interval>,
}

impl SubsystemSpec {
    /// Sorts and validates a raw site list. Duplicates and non-positive
    /// indices are rejected rather than silently dropped.
    pub fn parse(raw: &[i64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySites);
        }
        let mut sites = raw.to_vec();
        sites.sort_unstable();
        if sites[0] <= 0 {
            return Err(Error::NonPositiveSite { site: sites[0] });
        }
        for w in sites.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateSite { site: w[0] });
            }
        }

        let mut intervals = Vec::new();
        let mut gaps = Vec::new();
        let mut start = sites[0];
        let mut prev = sites[0];
        for &s in &sites[1..] {
            if s == prev + 1 {
                prev = s;
                continue;
            }
            intervals.push(Interval { start, len: prev - start + 1 });
            gaps.push(Interval { start: prev + 1, len: s - prev - 1 });
            start = s;
            prev = s;
        }
        intervals.push(Interval { start, len: prev - start + 1 });
        Ok(Self { sites, intervals, gaps })
    }

    pub fn sites(&self) -> &[i64] {
        &self.sites
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn gaps(&self) -> &[Interval] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_site(&self) -> i64 {
        self.sites[0]
    }

    pub fn max_site(&self) -> i64 {
        *self.sites.last().expect("nonempty")
    }

    /// `max - min`; the Fourier table must cover this range.
    pub fn span(&self) -> i64 {
        self.max_site() - self.min_site()
    }

    pub fn contains(&self, site: i64) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    /// Complement sites strictly between `m` and `n`, ascending. These are
    /// the separator sites of the entry `(m, n)`.
    pub fn separators_between(&self, m: i64, n: i64) -> Vec<i64> {
        let (lo, hi) = if m <= n { (m, n) } else { (n, m) };
        ((lo + 1)..hi).filter(|s| !self.contains(*s)).collect()
    }

    /// Union with a disjoint spec; overlap is an error.
    pub fn union(&self, other: &Self) -> Result<Self> {
        for &s in other.sites() {
            if self.contains(s) {
                return Err(Error::OverlappingParts { site: s });
            }
        }
        let mut all = self.sites.clone();
        all.extend_from_slice(other.sites());
        Self::parse(&all)
    }
}

/// The assembled correlation matrix of a subsystem; row/column `i` belongs
/// to the `i`-th site in ascending order.
#[derive(Clone, Debug)]
pub struct CorrMatrix {
    spec: SubsystemSpec,
    params: ModelParams,
    entries: Mat,
}

impl CorrMatrix {
    pub fn spec(&self) -> &SubsystemSpec {
        &self.spec
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn entries(&self) -> &Mat {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }
}

/// One entry of `A`: `-det(T_mn)` over the separators between `m` and `n`.
/// Always takes the per-entry determinant path, so it stays valid when the
/// shared-core fast path cannot be used.
pub fn correlation_entry(
    m: i64,
    n: i64,
    spec: &SubsystemSpec,
    table: &FourierTable,
) -> Result<f64> {
    if !spec.contains(m) {
        return Err(Error::SiteNotInSubsystem { site: m });
    }
    if !spec.contains(n) {
        return Err(Error::SiteNotInSubsystem { site: n });
    }
    let separators = spec.separators_between(m, n);
    if separators.is_empty() {
        // same site or same interval
        return Ok(-table.get(m - n)?);
    }
    let t = build_toeplitz_like(m, n, &separators, table)?;
    Ok(-det_direct(&t))
}

fn make_table(spec: &SubsystemSpec, params: &ModelParams) -> Result<FourierTable> {
    let span = spec.span();
    if span > SITE_SPAN_CAP {
        return Err(Error::SpanTooLarge { span, cap: SITE_SPAN_CAP });
    }
    Ok(FourierTable::new(*params, span as usize))
}

/// Assembles `A` for the subsystem: Toeplitz diagonal blocks, batched
/// Schur-complement off-diagonal blocks with a column-shared fallback when a
/// core is singular, mirrored to exact symmetry.
pub fn build_corr_matrix(spec: &SubsystemSpec, params: &ModelParams) -> Result<CorrMatrix> {
    let table = make_table(spec, params)?;
    let n = spec.len();
    let mut a = Mat::zeros(n, n);

    // offsets of each interval into the site list
    let mut offsets = Vec::with_capacity(spec.intervals().len());
    let mut acc = 0usize;
    for iv in spec.intervals() {
        offsets.push(acc);
        acc += iv.len as usize;
    }

    for (bi, iv_i) in spec.intervals().iter().enumerate() {
        let oi = offsets[bi];
        let ni = iv_i.len as usize;
        // diagonal block: Toeplitz in the site distance
        for i in 0..ni {
            for j in i..ni {
                let v = -table.lag((i as i64) - (j as i64));
                a[(oi + i, oi + j)] = v;
                a[(oi + j, oi + i)] = v;
            }
        }
        for (bj, iv_j) in spec.intervals().iter().enumerate().skip(bi + 1) {
            let oj = offsets[bj];
            let nj = iv_j.len as usize;
            let separators = spec.separators_between(iv_i.end(), iv_j.start);
            let core = SeparatorCore::new(&separators, &table)?;
            if !core.is_singular() {
                let mut pairs = Vec::with_capacity(ni * nj);
                for i in 0..ni {
                    for j in 0..nj {
                        pairs.push((iv_i.start + i as i64, iv_j.start + j as i64));
                    }
                }
                let dets = batch_det_schur(&core, &pairs, &table)?;
                for (idx, det) in dets.into_iter().enumerate() {
                    let (i, j) = (idx / nj, idx % nj);
                    a[(oi + i, oj + j)] = -det;
                    a[(oj + j, oi + i)] = -det;
                }
            } else {
                let rows: Vec<i64> = (0..ni).map(|i| iv_i.start + i as i64).collect();
                for j in 0..nj {
                    let q = iv_j.start + j as i64;
                    let dets = batch_det_bordered_column(&separators, q, &rows, &table)?;
                    for (i, det) in dets.into_iter().enumerate() {
                        a[(oi + i, oj + j)] = -det;
                        a[(oj + j, oi + i)] = -det;
                    }
                }
            }
        }
    }
    Ok(CorrMatrix { spec: spec.clone(), params: *params, entries: a })
}

/// Assembles `A` entry by entry with one dense LU per entry. This is the
/// reference fill used to validate the batched build; it shares no
/// factorizations.
pub fn build_corr_matrix_direct(spec: &SubsystemSpec, params: &ModelParams) -> Result<CorrMatrix> {
    let table = make_table(spec, params)?;
    let n = spec.len();
    let sites = spec.sites();
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = correlation_entry(sites[i], sites[j], spec, &table)?;
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Ok(CorrMatrix { spec: spec.clone(), params: *params, entries: a })
}
