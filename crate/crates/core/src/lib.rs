//! Nodal-volume statistics of Laplace eigenfunctions in dimension `s >= 2`.
//!
//! Two model systems are covered:
//!
//! * [`cuboid`]: the separable Dirichlet cuboid, where every eigenmode and its
//!   nodal volume is known exactly. Windowed spectral averages are compared
//!   with Weyl-type asymptotics and with the limiting distribution of the
//!   rescaled nodal volume.
//! * [`rwave`] and [`mcwave`]: Gaussian random waves made to vanish on a
//!   hyperplane. [`rwave`] evaluates the analytic nodal density and its
//!   boundary constants; [`mcwave`] simulates finite plane-wave superpositions
//!   and measures the same quantities directly.
//!
//! [`specfun`], [`quad`] and [`stats`] hold the shared numerical machinery.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cuboid;
pub mod error;
pub mod mcwave;
pub mod quad;
pub mod rwave;
pub mod specfun;
pub mod stats;

mod par;

pub use error::{Error, Result};
