//! Numerical primitives: symmetric eigensolver, finite differences, ODE
//! integration, quadrature, grids and the scalar-field abstraction.

pub mod fd;
pub mod field;
pub mod grid;
pub mod linalg;
pub mod ode;
pub mod quadrature;

pub use fd::{default_step, fd_derivative, fd_gradient, fd_hessian};
pub use field::{check_point, AnalyticField, Backend, QuadraticField, ScalarField};
pub use grid::{Grid1D, GridField1D};
pub use linalg::{dot, eig_sym, eigh_sym, norm, DenseMatrix, EigenSpectrum, SymMatrix};
pub use ode::{integrate_ode, integrate_with_events, DenseTrajectory, OdeOptions, Outcome};
pub use quadrature::{Antiderivative, SecondAntiderivative};
