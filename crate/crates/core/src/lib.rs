//! Pointwise multiplication operators M_u f = u·f on spaces of analytic
//! functions on the disk and ball: spectra, essential spectra, Fredholm
//! index, multiplier membership and peak-function asymptotics.
//!
//! The `multspec` binary exposes the same operations; see [`cli`].

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod error;
pub mod multipliers;
pub mod numerics;
pub mod peaks;
pub mod roots;
pub mod series;
pub mod spaces;
pub mod spectra;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
