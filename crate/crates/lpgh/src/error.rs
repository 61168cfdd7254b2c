use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Input validation and invariant-audit failures.
///
/// Operations in this crate are pure functions; every fallible one returns
/// one of these variants instead of panicking, with enough context to
/// reproduce the rejection.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An exponent outside the domain required by the operation.
    #[error("exponent p = {p} rejected: need {required}")]
    Exponent { p: f64, required: &'static str },

    /// An empty collection where at least one element is required.
    #[error("{what} must not be empty")]
    Empty { what: &'static str },

    /// Mismatched lengths or dimensions.
    #[error("{what}: expected {expected}, got {got}")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A scalar argument outside its admissible interval.
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// NaN or infinity where a finite number is required.
    #[error("{what} contains a non-finite value")]
    NonFinite { what: &'static str },

    /// A point whose norm exceeds 1 beyond the membership tolerance.
    #[error("point outside the unit ball: norm = {norm} exceeds 1 + {tol}")]
    OutsideBall { norm: f64, tol: f64 },

    /// A size beyond a hard cap (brute-force enumeration, grid dimension).
    #[error("{what} = {got} exceeds the supported cap of {cap}")]
    TooLarge {
        what: &'static str,
        got: u64,
        cap: u64,
    },

    /// Inputs that must share one `LpSpace` but do not.
    #[error("inputs live in different spaces: {what}")]
    SpaceMismatch { what: &'static str },

    /// A sampling config handed to an operation expecting a different mode.
    #[error("sampling mode {got} passed to an operation requiring {expected}")]
    Mode {
        expected: &'static str,
        got: &'static str,
    },

    /// A table lookup that found no entry near the queried point.
    #[error("{what} has no entry within tolerance of the queried point")]
    MissingEntry { what: &'static str },

    /// A relation that is not a correspondence for the given spaces.
    #[error("invalid correspondence: {reason}")]
    Correspondence { reason: &'static str },

    /// A distance matrix failing one of the metric axioms.
    #[error("metric axiom violated: {detail}")]
    MetricAxiom { detail: String },

    /// A computed quantity contradicting a proved bound or a cross-check.
    #[error("consistency check failed: {detail}")]
    Consistency { detail: String },
}
