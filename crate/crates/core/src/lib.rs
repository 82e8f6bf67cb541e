//! Numerics for Caputo-type fractional initial-value problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`fracops`]: grid functions, Riemann–Liouville integration (product
//!   trapezoid), Caputo differentiation (L1 scheme) and closed-form power rules.
//! * [`fde_solvers`]: predictor–corrector solvers for the direct problem
//!   `D^α x = f(τ, x, D^β x)` and the sequential problem
//!   `(D^α x)' = f(τ, x, D^β x)`.
//! * [`bihari_bounds`]: the E-transform, Bihari/Gronwall-type integral
//!   inequality bounds and the growth/boundedness envelopes built from them.
//! * [`asymptotics`]: slope estimation for `x(τ)/τ^α`, improper-integral
//!   hypothesis checks and boundedness verdicts.
//! * [`harness`]: JSON-configured experiment runner behind the `fracdyn` CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bihari_bounds;
mod error;
pub mod fde_solvers;
pub mod fracops;
pub mod harness;
pub mod quad;

pub use error::{Error, Result};
