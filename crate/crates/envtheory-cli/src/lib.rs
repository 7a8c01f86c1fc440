//! Library backing the `envtheory` binary: configuration files, task
//! execution and deterministic table output. Kept as a library so the
//! integration tests can drive runs without spawning processes.

// `!(x > 0.0)` is used on purpose: unlike `x <= 0.0` it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod runner;
pub mod table;
