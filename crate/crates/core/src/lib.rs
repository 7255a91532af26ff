//! Desk-scale quantum supervised learning on an exact statevector simulator.
//!
//! The crate is split along the two pipelines it implements:
//!
//! * fault-tolerant style: [`hhl`] (phase-estimation linear solver), [`qsplines`]
//!   (piecewise-linear splines solved block by block with HHL and read out through
//!   the swap test) and [`qsvm`] (least-squares SVM trained by one bordered solve);
//! * hybrid style: [`vqc`] (feature map + layered ansatz, parameter-shift gradients,
//!   gradient descent, barren-plateau diagnostic).
//!
//! Every quantum route has a classical counterpart in [`linalg`] or [`baselines`]
//! that the tests use as an oracle.
//!
//! Qubit ordering is little-endian throughout: qubit `q` is bit `q` of the
//! amplitude index.

pub mod baselines;
pub mod dataset;
pub mod error;
pub mod hhl;
pub mod linalg;
pub mod qsplines;
pub mod qsvm;
pub mod sim;
pub mod vqc;

pub use error::{Error, Result};
pub use nalgebra;
pub use num_complex::Complex64;
