//! Error taxonomy shared by every module of the crate.
//!
//! Three classes matter to callers:
//!
//! * parameter / precondition violations (`Parameter`, `Precision`, `NonUnit`,
//!   `NonDivisible`, `DegenerateDivisor`, `SlopeOutOfCriterion`,
//!   `StarBoundRefused`) — the request itself was malformed or outside the
//!   certified range of a criterion;
//! * `Inconsistency` — an internal cross-check that can only fail if the
//!   mathematics or the implementation is wrong (e.g. a non-terminating
//!   uniformizer expansion).  Never coerced, always surfaced;
//! * everything else returns a value.
//!
//! The CLI maps the first class to exit code 2 and `Inconsistency` to 3.

use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on the arguments failed; the message names it.
    Parameter(String),
    /// An operation needs more q-precision than the inputs carry.
    Precision { needed: usize, have: usize },
    /// Inversion of a series whose constant term is zero.
    NonUnit,
    /// Division by a series that is identically zero at the working precision.
    DegenerateDivisor,
    /// `div_by_order` with ord_q(numerator) < ord_q(denominator).
    NonDivisible { num_order: usize, den_order: usize },
    /// A linear slope check was requested beyond the range on which the
    /// valuation criterion is valid (slope > 12p/(p^2-1) in q-units).
    SlopeOutOfCriterion { p: u32 },
    /// The sharpened U-matrix entry bound only holds for p in {2, 3}.
    StarBoundRefused { p: u32 },
    /// An internal consistency check failed.  This is a hard error: it means
    /// the computation contradicts an exact identity it relies on.
    Inconsistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Precision { needed, have } => {
                write!(f, "insufficient q-precision: need {needed}, have {have}")
            }
            Error::NonUnit => write!(f, "series is not a unit (constant term is zero)"),
            Error::DegenerateDivisor => {
                write!(f, "divisor is identically zero at the working precision")
            }
            Error::NonDivisible { num_order, den_order } => write!(
                f,
                "q-order of numerator ({num_order}) is smaller than q-order of divisor ({den_order})"
            ),
            Error::SlopeOutOfCriterion { p } => write!(
                f,
                "slope exceeds 12p/(p^2-1) for p = {p}; the expansion criterion does not \
                 certify growth rates beyond that line"
            ),
            Error::StarBoundRefused { p } => write!(
                f,
                "the sharpened entry bound is only valid for p in {{2, 3}}; for p = {p} it \
                 fails outright (already at p = 5 the entry c_(4,1) = 24 has valuation 0 \
                 against a required 1/4)"
            ),
            Error::Inconsistency(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

impl Error {
    /// True for the parameter/precondition class of errors (CLI exit code 2).
    pub fn is_parameter_class(&self) -> bool {
        !matches!(self, Error::Inconsistency(_))
    }
}
