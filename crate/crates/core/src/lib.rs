//! Numerical lab for fully nonlinear self-shrinker potential equations
//! `F_τ(λ(D²u)) = −u + ½⟨x, Du⟩`.
//!
//! * [`tau`] and [`operators`]: the operator family, its cones and residuals.
//! * [`geometry`]: the gradient graph in the pseudo-Euclidean ambient space.
//! * [`quadratics`]: exact quadratic solutions.
//! * [`transforms`]: Legendre duality and the branch-to-branch transforms.
//! * [`construct`]: ODE constructions of non-quadratic entire solutions.
//! * [`radial`]: radial shooting from the origin.

// `!(x > 0.0)` is the idiom for rejecting NaN along with the bound.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod construct;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod operators;
pub mod quadratics;
pub mod radial;
pub mod sampling;
pub mod tau;
pub mod transforms;

pub use error::{Error, Result, Stage};
pub use numerics::{Backend, EigenSpectrum, Grid1D, GridField1D, ScalarField, SymMatrix};
pub use tau::{Branch, Component, ConeSide, ConeSpec, TauParams};
