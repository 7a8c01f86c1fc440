//! Approximate eigenvalues of N-identical-particle quantum Hamiltonians by the
//! envelope theory (also known as the auxiliary field method).
//!
//! The Hamiltonian is `H = sum_i T(p_i) + sum_i U(s_i) + sum_sets V(r_set)`,
//! where `s_i` is the distance to the centre of mass and the K-body radial
//! argument is `r_set^2 = sum_{i<j in set} r_ij^2`. The method reduces the
//! eigenvalue problem to a one-dimensional stationarity condition in a mean
//! radius `r0`, with the state entering only through the global quantum number
//! `Q = sum (2 n_i + l_i + D/2)`. When the squared-argument forms of all laws
//! are concave (convex), the result is a variational upper (lower) bound.
//!
//! Modules:
//! - [`model`]: system definition, quantum numbers, exact combinatorics
//! - [`law`]: kinetic/potential laws, derivatives, bound-character classifier
//! - [`solver`]: generic numeric solution of the stationarity system
//! - [`closed_form`]: analytic power-law and exponential solutions, Lambert W
//! - [`critical`]: critical coupling constants of attractive wells
//! - [`simplex`]: semiclassical regular-simplex picture and force balance
//! - [`oracle`]: independent reference solutions (harmonic formula, Numerov)
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used on purpose: unlike `x <= 0.0` it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod bracket;
mod error;
mod math;

pub mod closed_form;
pub mod critical;
pub mod law;
pub mod model;
pub mod oracle;
pub mod simplex;
pub mod solver;

pub use error::Error;
pub use law::{BoundCharacter, KineticLaw, PotentialLaw, WellShape};
pub use model::{ManyBodyTerm, Mode, QuantumState, SystemSpec};
pub use solver::{EtSolution, SolveOptions};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
