//! Gaussian continuous entanglement renormalization (cMERA) states for the
//! free boson, on the infinite line and on compact geometries obtained from
//! it by the method of images: the circle, the 2-torus and the half-line.
//!
//! The library is organised around a small set of objects:
//!
//! * [`geometry::Geometry`] — the spatial domain, which owns the momentum
//!   discretization (continuous momenta on the line, modes `k_n = 2πn/l_c`
//!   on the circle).
//! * [`profiles::EntanglingProfile`] — the entangling kernel `g` in real and
//!   momentum representation, in the fixed-scale or rescaled picture, plus
//!   its wrapped (circle, torus) and folded (half-line) variants.
//! * [`scale_evolution::BetaFunction`] — the positive coefficient `β̃(s,k)`
//!   defining the annihilation operators of the state, obtained either from
//!   the closed form of the magic profile or by integrating the scale ODE
//!   `∂_s β̃ = -2 g̃ β̃`.
//! * [`correlators`] — two-point functions in momentum and real space, with
//!   two independent routes on the circle (mode sums and image sums).
//! * [`analysis`] — relative-error scans against exact ground states, the
//!   error-transfer check from the line to the circle, and scaling fits.
//!
//! Everything is plain `f64` arithmetic with explicit error control; there
//! are no external special-function or quadrature dependencies. All public
//! values are immutable after construction and evaluation is pure, so any
//! of these objects may be shared freely across threads.

// Validation guards use `!(x > 0.0)` on purpose: unlike `x <= 0.0` it
// also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod correlators;
pub mod error;
pub mod geometry;
pub mod images;
pub mod profiles;
pub mod quad;
pub mod scale_evolution;
pub mod special;

pub use error::{Error, Result};
