//! Riesz-basis diagnostics for finite vector systems.
//!
//! A truncated sequence `(f_k)` in a Hilbert space is modeled as the columns of
//! a complex matrix. From it the crate computes optimal Bessel and lower Riesz
//! bounds, completeness defects, minimal biorthogonal duals and the
//! reconstruction identity `T_F T_G* = I`, and classifies the system while
//! cross-checking the equivalent criteria against each other. The [`scaling`]
//! module runs generator families over growing truncations to expose
//! infinite-dimensional behaviour (non-Bessel duals, completeness in the limit).

pub mod diagnostics;
pub mod duals;
pub mod error;
pub mod generators;
pub mod par;
pub mod scaling;
pub mod seqcore;
pub mod spectral;

pub use diagnostics::{
    bessel_bound, biorthogonality_residual, bounds_report, classify, completeness_defect, equivalent_inner_product,
    gram_spectrum, riesz_bounds, span_distance, weighted_gram, BoundsReport, GramSpectrum, Verdict, VerdictKind,
};
pub use duals::{co_completeness_check, duality_identity_residual, injectivity_witness, minimal_dual, CoCompleteness};
pub use error::{Error, Result};
pub use generators::{GaborDiscretization, GeneratedPair, PointSet2D, TfNode};
pub use par::Execution;
pub use scaling::{FamilySpec, GeneratorId, ScalingReport};
pub use seqcore::{
    analysis, frame_apply, gram, inner, synthesis, AmbientSpace, CMatrix, CVector, CoefficientVector, GramMatrix,
    VectorSequence, C64,
};

/// Classifies every system, in input order.
pub fn classify_batch(systems: &[VectorSequence], exec: Execution) -> Vec<Result<Verdict>> {
    par::map(systems, exec, classify)
}
