//! Extraction of the universal g-function and transition parameters.
//!
//! [`fit`] holds the linear `S_SE = αL − s₀` fits, the 1/L extrapolation of
//! `s₀` and log–log power-law fits; [`collapse`] the finite-size-scaling
//! collapse `e^{s₀} = L^{ζ/ν} g((p − p_c) L^{1/ν})` with a local
//! master-curve quality function and multi-start simplex descent;
//! [`reference`] the closed-form g-function targets; [`phase`] the
//! correlator-threshold phase labels.

pub mod collapse;
pub mod fit;
pub mod phase;
pub mod reference;

pub use collapse::{
    fss_collapse, CollapseBounds, CollapseParams, CollapseResult, CurvePoint, SizeCurve,
};
pub use fit::{
    chord_distance, extrapolate_s0, fit_linear_s0, fit_power_law, BackendKind, FitError,
    FitResult, SeeSample,
};
pub use phase::{classify_phase, PhaseLabel, PhaseThresholds};
pub use reference::{luttinger_k, reference_g_value};
