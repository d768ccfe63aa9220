use thiserror::Error;

/// Failure modes shared by every layer of the crate.
///
/// The variants map one-to-one onto the command-line exit codes, so callers can
/// classify a failure without string matching.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A computation was requested outside the hypotheses that make it meaningful.
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    /// An enumeration would exceed the configured size bound.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// Inversion of zero in an exact field.
    #[error("division by zero")]
    ZeroDivision,
    /// A rank-one intertwining factor hit its pole.
    #[error("pole: {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default bound on enumerated group sizes.
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

/// Default bound on enumerated lattice-quotient sizes.
pub const DEFAULT_QUOTIENT_BOUND: usize = 1 << 24;

/// Environment variable overriding [`DEFAULT_GROUP_BOUND`].
pub const GROUP_BOUND_ENV: &str = "COVER_GROUP_BOUND";

/// Environment variable overriding [`DEFAULT_QUOTIENT_BOUND`].
pub const QUOTIENT_BOUND_ENV: &str = "COVER_QUOTIENT_BOUND";

fn bound_from_env(var: &str, default: usize) -> usize {
    std::env::var(var)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

/// The active bound on enumerated group sizes.
pub fn group_bound() -> usize {
    bound_from_env(GROUP_BOUND_ENV, DEFAULT_GROUP_BOUND)
}

/// The active bound on enumerated quotient sizes.
pub fn quotient_bound() -> usize {
    bound_from_env(QUOTIENT_BOUND_ENV, DEFAULT_QUOTIENT_BOUND)
}
