//! Error type shared by every module of the crate.

use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map onto the process exit codes of the command-line front end:
/// [`Error::HypothesisViolated`] and [`Error::DegenerateSequence`] are
/// "hypothesis violated" (exit 3); everything else is an internal failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The characteristic roots do not define a usable non-degenerate sequence
    /// (non-positive discriminant, root quotient of modulus one, `a*b = 0`, ...).
    #[error("degenerate sequence: {0}")]
    DegenerateSequence(String),

    /// The instance violates a standing hypothesis of the method
    /// (`gcd(A, B) != 1`, `p | w` for some prime of the set, non-prime in the set, ...).
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Logarithm (real or p-adic) of zero was requested.
    #[error("logarithm of zero")]
    ZeroArgument,

    /// A floor computed at two working precisions disagreed, or sat right next
    /// to an integer, at every precision that was tried.
    #[error("precision unstable: {0}")]
    PrecisionUnstable(String),

    /// A p-adic unit was required but the element has non-zero valuation.
    #[error("p-adic element is not a unit (valuation {num}/{den})")]
    NonUnit { num: i64, den: i64 },

    /// Tracked p-adic precision ran out before the requested accuracy was reached.
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// The lattice basis handed to LLL is not of full rank.
    #[error("lattice basis columns are linearly dependent")]
    DependentColumns,

    /// Well-formedness problem with the input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The reduction machinery could not produce a certificate.
    #[error("reduction failed: {0}")]
    ReductionFailed(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
