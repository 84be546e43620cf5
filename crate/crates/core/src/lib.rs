//! Gaussian-state simulation of optical Ising machines.
//!
//! * [`gaussian`]: multimode Gaussian states and the operations the machines use.
//! * [`ising`]: couplings, energies, benchmark graphs and exact ground-state oracles.
//! * [`machine`]: the measurement-feedback (MIF) and delay-line (ODL) machines.
//! * [`harness`]: seeded trial batches, success statistics and result files.
//! * [`cli`]: the `gim` command-line front end.
//! * [`selftest`]: quick invariant checks across all modules.

pub mod cli;
pub mod error;
pub mod gaussian;
pub mod harness;
pub mod ising;
pub mod machine;
pub mod rng;
pub mod selftest;

pub use error::{Error, Result};
