//! Error taxonomy shared by every crate in the workspace.

use thiserror::Error;

/// Workspace-wide error type.
///
/// The variants mirror the failure classes the operations document:
/// configuration (mis-assembled inputs), domain (arguments outside an
/// operation's range), coverage (a window too short for the requested
/// event), invariant (malformed data structures), sampling (Monte Carlo
/// could not produce a usable sample within its retry budget), and
/// certificate (a verification run whose claim did not hold).
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("invariant error: {0}")]
    Invariant(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
