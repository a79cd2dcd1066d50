//! Riemann-invariant solver and verification lab for the damped 1D wave
//! equation `u_tt - u_xx + a(t, x) u_t = 0` on `(0, 1)`.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod lemmas;
pub mod output;
pub mod quad;
pub mod rng;
pub mod solver;
pub mod state;
pub mod wave;

pub use error::{Error, Result};
