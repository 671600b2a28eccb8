//! Command-line driver plumbing for the workbench: run manifests, the
//! subcommand implementations behind the `finitary` binary, and the
//! eight-criterion verification suite.
//!
//! Every run is seeded explicitly and records its parameters, RNG, and
//! result payload in a [`manifest::RunManifest`], so any result can be
//! reproduced bit-exactly (exact computations) or within its reported
//! standard error (Monte Carlo) from the manifest alone.

pub mod commands;
pub mod manifest;
pub mod verify;
