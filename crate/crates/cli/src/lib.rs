//! Command-line front end: spectra, trajectories, gate counts and the
//! verification suite.

pub mod commands;
pub mod config;

use clap::Parser;

/// Exit status when every check passes.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification check fails.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit status for usage and configuration errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qu8it", version, about = "Qu8it and qubit simulations of 1+1D SU(3) lattice QCD")]
pub struct Cli {
    #[command(subcommand)]
    pub command: config::Command,
}
