//! Common fixed points of self-maps on complex-valued metric spaces.
//!
//! Distances take values in ℂ, ordered componentwise. The crate provides the
//! order predicates, a set of metrics, simulation functions and contraction
//! checkers that search for counterexamples by seeded random sampling, an
//! alternating Picard engine, and discretized solvers for a Volterra integral
//! equation and a periodic first-order ODE.
//!
//! `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod admissibility;
pub mod applications;
pub mod engine;
mod error;
pub mod metric;
pub mod order;
pub mod point;
mod report;
pub mod simulation;

pub use error::Error;
pub use order::{ComplexScalar, OrderConfig};
pub use point::{GridFunction, GridShape, Point, PointDomain, SelfMap};
pub use report::{CheckReport, Witness};
