//! Generalization bounds for hybrid quantum-classical models.
//!
//! A parametrized circuit of local 2-qubit unitaries is applied to an
//! angle-encoded input, read out through single-qubit observables and fed to
//! a Frobenius-bounded feed-forward network. This crate provides:
//!
//! - [`qcore`]: a dense density-matrix simulator plus the norm and distance
//!   machinery for unitary channels,
//! - [`net`]: the bounded k-layer network class,
//! - [`hybrid`]: the composite hypothesis, its loss, and gradient training,
//! - [`bounds`]: metric entropies, the product (submultiplicative) entropy of
//!   the hybrid class, Dudley integrals in closed form and the resulting
//!   generalization bounds,
//! - [`empirical`]: packing/cover oracles, Monte Carlo Rademacher estimates,
//!   quadrature, the teacher-student gap experiment and the invariant suites.
//!
//! The crate is `no_std` and only needs `alloc`. IO, configuration files and
//! the command line live in the companion `hybound` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod empirical;
mod error;
pub mod hybrid;
pub(crate) mod math;
pub mod net;
pub mod qcore;

pub use error::{Error, Result};
