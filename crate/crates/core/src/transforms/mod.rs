//! Transforms between branches and charts: Legendre duality, the cone
//! symmetry, shifts to convex form, the ATAN→SLAG reduction, the NEG
//! normalization and self-similar extension in time.

mod legendre;
mod similarity;
mod views;

pub use legendre::{legendre_1d, legendre_dual_residual, DualPipelineReport, LegendreDual1D, Transform1DResult};
pub use similarity::{self_similar_extension, SelfSimilarSample};
pub use views::{
    convexify_shift, effective_logit_residual, effective_residual, neg_eigen_from_unit, neg_eigen_to_unit,
    normalize_counterexample_branch, reduce_to_special_lagrangian, symmetry_negate, ConvexShift, NegChart,
    NegNormalization, SlagReduction, SymmetryNegate,
};
