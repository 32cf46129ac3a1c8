use thiserror::Error;

use crate::series::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,

    #[error("constant term {0} has no rational square root")]
    NonSquareConstant(Rational),

    /// A coefficient that must cancel exactly did not. Upstream this almost
    /// always means a mistranscribed formula.
    #[error("inexact cancellation: coefficient of z^{index} is {value}, expected 0")]
    InexactCancellation { index: usize, value: Rational },

    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,

    #[error("series is not revertible (needs a(0) = 0 and a'(0) != 0)")]
    NotRevertible,

    #[error("linear system is singular: determinant has zero constant term")]
    SingularSystem,

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(Rational),

    #[error("distribution has mass outside the even parity class")]
    ParityViolation,
}

pub type Result<T> = std::result::Result<T, Error>;
