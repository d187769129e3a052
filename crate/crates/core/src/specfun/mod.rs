//! Special functions needed by the capacity formulas.
//!
//! Everything here works on `f64` and returns either a finite value or a
//! [`SpecfunError`]. Iterative evaluations stop after [`MAX_ITERATIONS`] steps.

mod gamma;
mod incgamma;
mod legendre;

use std::fmt;

use thiserror::Error;

pub use gamma::{digamma, digamma_int_plus_one, gamma, log_gamma, EULER_GAMMA};
pub use incgamma::{
    exp_int_e1, lower_inc_gamma, regularized_gamma_p, regularized_gamma_q, upper_inc_gamma,
    upper_inc_gamma_scaled,
};
pub use legendre::{legendre_p, legendre_p_signed_ln};

pub(crate) use gamma::{digamma_pos, ln_gamma_pos};

/// Iteration cap shared by every series and continued fraction in this module.
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecfunErrorKind {
    DomainViolation,
    NonConvergence,
    Overflow,
}

impl fmt::Display for SpecfunErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpecfunErrorKind::DomainViolation => "domain violation",
            SpecfunErrorKind::NonConvergence => "no convergence",
            SpecfunErrorKind::Overflow => "overflow",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}: {detail}")]
pub struct SpecfunError {
    pub kind: SpecfunErrorKind,
    pub detail: String,
}

impl SpecfunError {
    pub(crate) fn domain(detail: impl Into<String>) -> Self {
        Self { kind: SpecfunErrorKind::DomainViolation, detail: detail.into() }
    }

    pub(crate) fn no_convergence(detail: impl Into<String>) -> Self {
        Self { kind: SpecfunErrorKind::NonConvergence, detail: detail.into() }
    }

    pub(crate) fn overflow(detail: impl Into<String>) -> Self {
        Self { kind: SpecfunErrorKind::Overflow, detail: detail.into() }
    }
}

pub type SpecfunResult<T> = Result<T, SpecfunError>;
