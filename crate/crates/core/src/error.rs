use thiserror::Error;

use crate::cover::SurgeryCertificate;
use crate::slope::SlopeSample;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("n must not be 0 or −1 (got {n})")]
    InvalidTwist { n: i64 },

    #[error("n = 1 has a closed-form solution; no bracket is constructed")]
    ClosedFormAvailable,

    #[error("trace {trace} lies outside [-2, 2]")]
    TraceOutOfRange { trace: f64 },

    #[error("T = {t_param} lies outside the band [s+2, s+2+4/s] for s = {s}")]
    OutsideBand { s: f64, t_param: f64 },

    #[error("parameter {name} = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("meridian eigenvalue parameter t = {t} is too close to 1")]
    DegenerateMeridian { t: f64 },

    #[error("bracket endpoints do not change sign: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no convergence after {iterations} iterations (bracket width {width:e})")]
    NonConvergence { iterations: usize, width: f64 },

    #[error("longitude image is not diagonal: off-diagonal {residual:e} vs norm {norm:e}")]
    OffDiagonalTooLarge { residual: f64, norm: f64 },

    #[error("slope {p}/{q} is not a reduced fraction with positive denominator")]
    MalformedSlope { p: i64, q: i64 },

    #[error("slope {p}/{q} lies outside the open interval (0, 4)")]
    SlopeOutOfRange { p: i64, q: i64 },

    #[error("no sign change of g - {r} found on the search grid ({} samples)", table.len())]
    NoBracketFound { r: f64, table: Vec<SlopeSample> },

    #[error("g jumps across {r} between s = {lo} and s = {hi} (g = {g_lo} .. {g_hi})")]
    SlopeDiscontinuity {
        r: f64,
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("matrix determinant {det} differs from 1")]
    DeterminantViolation { det: f64 },

    #[error("lifted relator is not central: |gamma| = {gamma_abs:e}")]
    RelatorNotCentral { gamma_abs: f64 },

    #[error("lifted longitude has omega = {omega:e}, expected 0")]
    LongitudeOmegaNonzero { omega: f64 },

    #[error("certificate check failed: |gamma| = {:e}, omega = {:e}", .0.final_gamma_abs, .0.final_omega)]
    CertificateFailed(Box<SurgeryCertificate>),
}

impl Error {
    /// True for failures of the numerics, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NoSignChange { .. }
                | Error::OffDiagonalTooLarge { .. }
                | Error::NoBracketFound { .. }
                | Error::SlopeDiscontinuity { .. }
                | Error::RelatorNotCentral { .. }
                | Error::LongitudeOmegaNonzero { .. }
                | Error::CertificateFailed(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidTwist { .. } => "InvalidTwist",
            Error::ClosedFormAvailable => "ClosedFormAvailable",
            Error::TraceOutOfRange { .. } => "TraceOutOfRange",
            Error::OutsideBand { .. } => "OutsideBand",
            Error::Domain { .. } => "Domain",
            Error::DegenerateMeridian { .. } => "DegenerateMeridian",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::OffDiagonalTooLarge { .. } => "OffDiagonalTooLarge",
            Error::MalformedSlope { .. } => "MalformedSlope",
            Error::SlopeOutOfRange { .. } => "SlopeOutOfRange",
            Error::NoBracketFound { .. } => "NoBracketFound",
            Error::SlopeDiscontinuity { .. } => "SlopeDiscontinuity",
            Error::DeterminantViolation { .. } => "DeterminantViolation",
            Error::RelatorNotCentral { .. } => "RelatorNotCentral",
            Error::LongitudeOmegaNonzero { .. } => "LongitudeOmegaNonzero",
            Error::CertificateFailed(_) => "CertificateFailed",
        }
    }
}

pub(crate) fn check_twist(n: i64) -> Result<()> {
    if n == 0 || n == -1 {
        Err(Error::InvalidTwist { n })
    } else {
        Ok(())
    }
}
