//! Pure chain states in the Z product basis.
//!
//! Amplitudes are stored as reals: both model Hamiltonians are real in this
//! basis, which halves memory and keeps the doubled-space work at L = 12
//! inside desk-scale RAM. The global spin flip `U_X = Π_j X_j` acts as the
//! bitwise complement of the configuration index.

use thiserror::Error;

#[derive(Debug, Clone)]
pub struct PureState {
    l: usize,
    pub amps: Vec<f64>,
    /// Set by the ground-state solver.
    pub energy: Option<f64>,
}

#[derive(Debug, Error)]
pub enum StateError {
    #[error("amplitude vector has length {got}, expected 2^{l}")]
    BadLength { l: usize, got: usize },
    #[error("site {0} out of range")]
    SiteOutOfRange(usize),
    #[error("site {0} appears with conflicting Pauli axes")]
    ConflictingAxes(usize),
    #[error("state has zero norm")]
    ZeroNorm,
}

impl PureState {
    pub fn new(l: usize, amps: Vec<f64>) -> Result<Self, StateError> {
        if amps.len() != 1usize << l {
            return Err(StateError::BadLength { l, got: amps.len() });
        }
        Ok(PureState { l, amps, energy: None })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn norm(&self) -> f64 {
        crate::doubled::sum_sq(&self.amps).sqrt()
    }

    pub fn normalize(&mut self) -> Result<(), StateError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }
}

/// Global spin flip: the amplitude at `c` moves to the complement `c̄`.
/// An involution; applying it twice restores the input.
pub fn apply_parity(state: &PureState) -> PureState {
    let l = state.l();
    let mask = (1usize << l) - 1;
    let mut flipped = vec![0.0; state.amps.len()];
    for (c, &a) in state.amps.iter().enumerate() {
        flipped[c ^ mask] = a;
    }
    PureState { l, amps: flipped, energy: state.energy }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// ⟨φ|P|φ⟩ / ⟨φ|φ⟩ for a Pauli string `P = Π_k σ_{axis_k}(site_k)`.
///
/// Repeated sites with the same axis square away to the identity; the same
/// site with two different axes is rejected rather than resolved into a
/// third Pauli. For a real state the result is exactly zero when the string
/// carries an odd number of Y factors.
pub fn expectation_pauli_string(
    state: &PureState,
    ops: &[(usize, Axis)],
) -> Result<f64, StateError> {
    let l = state.l();
    let mut axis_at: Vec<Option<Axis>> = vec![None; l];
    let mut parity_at = vec![false; l];
    for &(site, axis) in ops {
        if site >= l {
            return Err(StateError::SiteOutOfRange(site));
        }
        match axis_at[site] {
            None => axis_at[site] = Some(axis),
            Some(prev) if prev == axis => {}
            Some(_) => return Err(StateError::ConflictingAxes(site)),
        }
        parity_at[site] = !parity_at[site];
    }

    let mut flip_mask = 0usize;
    let mut z_mask = 0usize;
    let mut n_y = 0usize;
    for site in 0..l {
        if !parity_at[site] {
            continue;
        }
        match axis_at[site].unwrap() {
            Axis::X => flip_mask |= 1 << site,
            Axis::Y => {
                flip_mask |= 1 << site;
                z_mask |= 1 << site;
                n_y += 1;
            }
            Axis::Z => z_mask |= 1 << site,
        }
    }

    let norm_sq: f64 = state.amps.iter().map(|a| a * a).sum();
    if norm_sq == 0.0 {
        return Err(StateError::ZeroNorm);
    }
    // P|c⟩ = i^{n_Y} · (Π z-signs) |c ^ flip⟩; odd n_Y leaves a purely
    // imaginary element, which a real state cannot see.
    if n_y % 2 == 1 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for (c, &a) in state.amps.iter().enumerate() {
        let sign = if ((c & z_mask).count_ones() & 1) == 1 { -1.0 } else { 1.0 };
        acc += state.amps[c ^ flip_mask] * sign * a;
    }
    if n_y % 4 == 2 {
        acc = -acc;
    }
    Ok(acc / norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polarized_up(l: usize) -> PureState {
        let mut amps = vec![0.0; 1 << l];
        amps[0] = 1.0;
        PureState::new(l, amps).unwrap()
    }

    #[test]
    fn parity_flips_polarized_state() {
        let up = polarized_up(4);
        let down = apply_parity(&up);
        assert_eq!(down.amps[0b1111], 1.0);
        assert_eq!(down.amps.iter().map(|a| a * a).sum::<f64>(), 1.0);
        let back = apply_parity(&down);
        assert_eq!(back.amps, up.amps);
    }

    #[test]
    fn z_squared_is_identity() {
        let up = polarized_up(3);
        let v = expectation_pauli_string(&up, &[(1, Axis::Z), (1, Axis::Z)]).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn polarized_zz_expectation() {
        let up = polarized_up(3);
        let v = expectation_pauli_string(&up, &[(0, Axis::Z), (1, Axis::Z)]).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn conflicting_axes_rejected() {
        let up = polarized_up(2);
        let r = expectation_pauli_string(&up, &[(0, Axis::Z), (0, Axis::X)]);
        assert!(matches!(r, Err(StateError::ConflictingAxes(0))));
    }

    #[test]
    fn single_y_vanishes_on_real_state() {
        let mut amps = vec![0.5; 4];
        amps[2] = -0.5;
        let s = PureState::new(2, amps).unwrap();
        let v = expectation_pauli_string(&s, &[(0, Axis::Y)]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn yy_on_bell_pair() {
        // (|↑↑⟩ + |↓↓⟩)/√2: ⟨Y₀Y₁⟩ = −1, ⟨X₀X₁⟩ = +1, ⟨Z₀Z₁⟩ = +1.
        let s = 0.5f64.sqrt();
        let bell = PureState::new(2, vec![s, 0.0, 0.0, s]).unwrap();
        let yy = expectation_pauli_string(&bell, &[(0, Axis::Y), (1, Axis::Y)]).unwrap();
        let xx = expectation_pauli_string(&bell, &[(0, Axis::X), (1, Axis::X)]).unwrap();
        let zz = expectation_pauli_string(&bell, &[(0, Axis::Z), (1, Axis::Z)]).unwrap();
        assert!((yy + 1.0).abs() < 1e-15);
        assert!((xx - 1.0).abs() < 1e-15);
        assert!((zz - 1.0).abs() < 1e-15);
    }
}
