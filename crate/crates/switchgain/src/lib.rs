//! Capacity gains from coherently superposing the execution order of noisy
//! channels with a quantum switch.
//!
//! The crate has two computation routes that deliberately do not share code:
//!
//! * closed forms for n copies of a Pauli or depolarizing channel under a
//!   forward/backward order superposition ([`pauli`], [`depol`], [`bb84`]),
//! * a brute-force enumeration oracle that assembles the effective channel
//!   from its definition for arbitrary Kraus channels, permutation sets and
//!   control states ([`oracle`]).
//!
//! The two routes are checked against each other in the test suite; the
//! oracle is the ground truth.

pub mod bb84;
pub mod channel;
pub mod depol;
pub mod entropy;
pub mod linalg;
pub mod oracle;
pub mod pauli;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },
    #[error("eigenvalue sweep did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("not a probability distribution: {0}")]
    NotDistribution(String),
    #[error("invalid quantum state: {0}")]
    InvalidState(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("enumeration needs {needed} terms, cap is {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("order count {n} outside supported range {min}..={max}")]
    OrderOutOfRange { n: u32, min: u32, max: u32 },
    #[error("bad channel spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
