//! ODE constructions of entire non-quadratic solutions.
//!
//! The NEG branch is normalized to `Σ ln(μ_i/(1−μ_i)) = −w + ½⟨x, Dw⟩`,
//! whose one-dimensional solutions are generated by the phase ODE
//! `φ'' = t φ' eᵠ/(2(1+eᵠ)²)` through `w₁'' = σ(φ)`. A product with
//! `|x'|²/4` gives solutions in every dimension.

mod certificate;
mod counterexample;
mod mss;
mod phase_ode;
mod w1;

pub use certificate::{BoundCheck, Certificate, ConeCheck, SampleCloud, Witness};
pub use counterexample::{
    build_counterexample, Counterexample, CounterexampleConfig, CounterexampleField, CERTIFICATE_THRESHOLD,
};
pub use mss::{build_mss_counterexample, sech2, MssConfig, MssCounterexample, MssField};
pub use phase_ode::{logistic, logistic_slope, phase_rhs, solve_phase_ode, PhaseOdeConfig, PhaseTrajectory};
pub use w1::{assemble_nd, assemble_w1, NdAssembly, W1Field, DEFAULT_DELTA, PHASE_IDENTITY_TOL};
