//! Closed-form g-function references at maximal decoherence.

use super::fit::FitError;
use crate::doubled::ChannelKind;
use crate::model::Model;

/// Tomonaga–Luttinger parameter of the critical XXZ chain,
/// `K = π / (2(π − arccos Δ))`, valid for |Δ| < 1 (K > 1/2).
pub fn luttinger_k(delta: f64) -> Result<f64, FitError> {
    if !(delta.abs() < 1.0) {
        return Err(FitError::DegenerateInput);
    }
    Ok(std::f64::consts::PI / (2.0 * (std::f64::consts::PI - delta.acos())))
}

/// Reference `e^{s₀}` at maximal decoherence:
///
/// * TFIM under ZZ    → 1,
/// * XXZ  under ZZ    → `2√(2K(Δ))`,
/// * TFIM under X+ZZ  → 2.
///
/// Other combinations have no closed-form target here.
pub fn reference_g_value(
    model: Model,
    delta: f64,
    channel: ChannelKind,
) -> Result<f64, FitError> {
    match (model, channel) {
        (Model::Tfim, ChannelKind::Zz) => Ok(1.0),
        (Model::Tfim, ChannelKind::XplusZz) => Ok(2.0),
        (Model::Xxz, ChannelKind::Zz) => Ok(2.0 * (2.0 * luttinger_k(delta)?).sqrt()),
        _ => Err(FitError::DegenerateInput),
    }
}
