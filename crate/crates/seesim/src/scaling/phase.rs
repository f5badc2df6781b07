//! Threshold-based phase labels from the long-distance correlator pair.

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PhaseLabel {
    Symmetric,
    Swssb,
    StrongToTrivial,
}

/// Declared heuristics: long-range order in C^II above `c2_min`, weak-order
/// absence below `c1_max`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseThresholds {
    pub c2_min: f64,
    pub c1_max: f64,
}

impl Default for PhaseThresholds {
    fn default() -> Self {
        PhaseThresholds { c2_min: 0.5, c1_max: 0.1 }
    }
}

/// Diagnosis from the long-distance (r = L/2) values of C^II and |C^I|.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PhaseDiagnosis {
    pub label: PhaseLabel,
    pub c2_longrange: f64,
    pub c1_longrange: f64,
}

/// Strong-symmetry order with no weak order is SWSSB; strong plus weak order
/// is strong-to-trivial; everything else stays symmetric.
pub fn classify_phase(
    c2_longrange: f64,
    c1_longrange: f64,
    thresholds: PhaseThresholds,
) -> PhaseDiagnosis {
    let label = if c2_longrange >= thresholds.c2_min {
        if c1_longrange.abs() <= thresholds.c1_max {
            PhaseLabel::Swssb
        } else {
            PhaseLabel::StrongToTrivial
        }
    } else {
        PhaseLabel::Symmetric
    };
    PhaseDiagnosis { label, c2_longrange, c1_longrange }
}
