//! Error type shared across the crate.

use core::fmt;

/// Everything that can go wrong while building or evaluating the pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// `|h| >= 2`: outside the critical phase, the symbol never alternates.
    FieldOutOfRange { h: f64 },
    /// A Fourier coefficient beyond the table range was requested.
    LagOutOfRange { lag: i64, max_lag: usize },
    /// A site appears twice in a subsystem or separator list.
    DuplicateSite { site: i64 },
    /// Site indices are 1-based.
    NonPositiveSite { site: i64 },
    /// Subsystems must contain at least one site.
    EmptySites,
    /// Separator lists must be strictly ascending (determinant sign depends
    /// on row order).
    SeparatorsNotAscending,
    /// A requested site is not part of the subsystem.
    SiteNotInSubsystem { site: i64 },
    /// The subsystem spans more sites than the configured cap.
    SpanTooLarge { span: i64, cap: i64 },
    /// The shared separator factorization is singular; the caller must fall
    /// back to a per-entry determinant path.
    SingularCore,
    /// Input matrix failed the symmetry pre-check.
    NotSymmetric { defect: f64 },
    /// The Jacobi sweep cap was reached before the off-diagonal norm
    /// converged.
    NoConvergence { sweeps: usize },
    /// A correlation eigenvalue exceeded `[-1, 1]` by more than the clamping
    /// tolerance, indicating an upstream bug.
    EigenvalueOutOfRange { value: f64 },
    /// `binary_term` argument outside `[-1, 1]`.
    DomainError { nu: f64 },
    /// Renyi order must be positive and distinct from 1.
    BadAlpha { alpha: f64 },
    /// Mutual information requires disjoint parts.
    OverlappingParts { site: i64 },
    /// A dense construction was requested above its size guard.
    TooLarge { size: usize, cap: usize },
    /// The shifted matrix `lambda I - A` is numerically singular.
    NearSingularShift,
    /// Contour fails a validity requirement.
    InvalidContour { reason: &'static str },
    /// The Renyi weight has branch points inside (or too close to) the
    /// contour for this order.
    ContourUnsuitableForAlpha { alpha: f64, limit: f64 },
    /// Doubling the quadrature nodes moved the result by more than the
    /// tolerance.
    QuadratureNotConverged { delta: f64 },
    /// The contour integral came back with a non-negligible imaginary part.
    ImaginaryResidue { imag: f64 },
    /// The two lowest chain eigenvalues coincide; entropy is ill-defined.
    DegenerateGroundState { gap: f64 },
    /// A single-particle energy sits at the Fermi level; occupation is
    /// ambiguous.
    DegenerateFermiLevel { energy: f64 },
    /// Finite chains need at least two sites.
    ChainTooShort { length: usize },
    /// A subsystem site lies outside the finite chain.
    SiteOutsideChain { site: i64, length: usize },
    /// State vector length does not equal `2^L`.
    BadStateDimension { len: usize, expected: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FieldOutOfRange { h } => {
                write!(f, "field h = {h} is outside the critical phase |h| < 2")
            }
            Error::LagOutOfRange { lag, max_lag } => {
                write!(f, "Fourier lag {lag} exceeds table range {max_lag}")
            }
            Error::DuplicateSite { site } => write!(f, "duplicate site {site}"),
            Error::NonPositiveSite { site } => {
                write!(f, "site {site} is not a positive 1-based index")
            }
            Error::EmptySites => write!(f, "subsystem contains no sites"),
            Error::SeparatorsNotAscending => {
                write!(f, "separator sites must be strictly ascending")
            }
            Error::SiteNotInSubsystem { site } => {
                write!(f, "site {site} is not part of the subsystem")
            }
            Error::SpanTooLarge { span, cap } => {
                write!(f, "site span {span} exceeds the cap {cap}")
            }
            Error::SingularCore => write!(
                f,
                "separator core is singular; use a per-entry determinant path"
            ),
            Error::NotSymmetric { defect } => {
                write!(f, "matrix is not symmetric (entrywise defect {defect:e})")
            }
            Error::NoConvergence { sweeps } => {
                write!(f, "Jacobi did not converge within {sweeps} sweeps")
            }
            Error::EigenvalueOutOfRange { value } => {
                write!(f, "correlation eigenvalue {value} leaves [-1, 1] beyond tolerance")
            }
            Error::DomainError { nu } => write!(f, "nu = {nu} is outside [-1, 1]"),
            Error::BadAlpha { alpha } => {
                write!(f, "Renyi order alpha = {alpha} must be > 0 and != 1")
            }
            Error::OverlappingParts { site } => {
                write!(f, "parts overlap at site {site}")
            }
            Error::TooLarge { size, cap } => {
                write!(f, "size {size} exceeds the guard {cap}")
            }
            Error::NearSingularShift => {
                write!(f, "lambda is too close to the spectrum; shifted matrix is singular")
            }
            Error::InvalidContour { reason } => write!(f, "invalid contour: {reason}"),
            Error::ContourUnsuitableForAlpha { alpha, limit } => write!(
                f,
                "contour encloses Renyi weight branch points for alpha = {alpha} \
                 (needs half-height/radius below {limit})"
            ),
            Error::QuadratureNotConverged { delta } => {
                write!(f, "quadrature moved by {delta:e} when nodes were doubled")
            }
            Error::ImaginaryResidue { imag } => {
                write!(f, "contour integral has imaginary residue {imag:e}")
            }
            Error::DegenerateGroundState { gap } => {
                write!(f, "ground state is degenerate (gap {gap:e})")
            }
            Error::DegenerateFermiLevel { energy } => {
                write!(f, "single-particle energy {energy:e} sits at the Fermi level")
            }
            Error::ChainTooShort { length } => {
                write!(f, "finite chain needs at least 2 sites, got {length}")
            }
            Error::SiteOutsideChain { site, length } => {
                write!(f, "site {site} lies outside the chain 1..={length}")
            }
            Error::BadStateDimension { len, expected } => {
                write!(f, "state vector has length {len}, expected {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
