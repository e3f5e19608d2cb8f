//! Semiclassical route: the Kerr orbit frequencies divided by hbar become
//! level energies `1/E_pm = a/hbar ± 1/(hbar w_k)`, each level carries a rotor
//! state `A exp(i m phi) exp(-i E t / hbar)`, and the orbital period is the
//! smallest `T > 0` for which the state is unchanged under
//! `(t, phi) -> (t + T, phi + 2 pi)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::constants::PhysicalConstants;
use crate::error::{GceError, Result};
use crate::kerr::{reciprocal_frequencies, ClockEffectReport, Method, OrbitSense};
use crate::numeric::{two_sum, Compensated};

/// A level of energy `energy` with `L_z = lz.sign() * hbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalLevel {
    pub energy: f64,
    pub lz: OrbitSense,
    /// `hbar / energy` in seconds, unrounded.
    reciprocal: Compensated,
}

impl SemiclassicalLevel {
    pub fn new(energy: f64, lz: OrbitSense, consts: &PhysicalConstants) -> Self {
        Self {
            energy,
            lz,
            reciprocal: two_sum(consts.hbar / energy, 0.0),
        }
    }

    /// `hbar / E`, which equals `1 / w` of the matching Kerr orbit.
    pub fn reciprocal_frequency(&self) -> Compensated {
        self.reciprocal
    }
}

/// `psi(t, phi) = amplitude * exp(i m phi) * exp(-i energy t / hbar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorState {
    pub amplitude: Complex64,
    pub m: i32,
    pub energy: f64,
}

impl RotorState {
    pub fn new(amplitude: Complex64, m: i32, energy: f64) -> Result<Self> {
        if m != 1 && m != -1 {
            return Err(GceError::InvalidInput(format!(
                "azimuthal number must be +1 or -1, got {m}"
            )));
        }
        let modulus = amplitude.norm();
        if !(modulus > 0.0 && modulus.is_finite()) {
            return Err(GceError::InvalidInput(format!(
                "rotor amplitude must be non-zero and finite, got {amplitude}"
            )));
        }
        if !energy.is_finite() {
            return Err(GceError::InvalidInput(format!(
                "energy must be finite, got {energy}"
            )));
        }
        Ok(Self {
            amplitude,
            m,
            energy,
        })
    }

    /// Unit-amplitude state for a level; the amplitude never enters a period.
    pub fn from_level(level: &SemiclassicalLevel) -> Self {
        Self {
            amplitude: Complex64::new(1.0, 0.0),
            m: level.lz.azimuthal_number(),
            energy: level.energy,
        }
    }
}

/// Solution of the closure condition `psi(t + T, phi + 2 pi) = psi(t, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closure {
    /// The integer `k` in `2 pi m - E T / hbar = 2 pi k`.
    pub k: i64,
    /// Net winding `m - k`; `T = 2 pi hbar (m - k) / E`.
    pub winding: i64,
    pub period: f64,
}

pub fn level_energies(
    a: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<(SemiclassicalLevel, SemiclassicalLevel)> {
    let (recip_plus, recip_minus) = reciprocal_frequencies(a, omega_k)?;
    let level = |reciprocal: Compensated, lz| SemiclassicalLevel {
        energy: consts.hbar / reciprocal.value(),
        lz,
        reciprocal,
    };
    Ok((
        level(recip_plus, OrbitSense::Prograde),
        level(recip_minus, OrbitSense::Retrograde),
    ))
}

pub fn evaluate_state(
    state: &RotorState,
    t: f64,
    phi: f64,
    consts: &PhysicalConstants,
) -> Complex64 {
    let phase = f64::from(state.m) * phi - state.energy * t / consts.hbar;
    state.amplitude * Complex64::from_polar(1.0, phase)
}

/// Solves the single-valuedness condition in closed form.
///
/// Shifting `phi` by `2 pi` multiplies the state by `exp(2 pi i m) = 1`,
/// and shifting `t` by `T` multiplies it by `exp(-i E T / hbar)`. Closure
/// therefore needs `2 pi m - E T / hbar = 2 pi k`, i.e.
/// `T = 2 pi hbar (m - k) / E`. `T > 0` requires `m - k` to carry the sign of
/// `E`, and the smallest such `T` has `|m - k| = 1`.
pub fn closure(state: &RotorState, consts: &PhysicalConstants) -> Result<Closure> {
    if state.energy == 0.0 || !state.energy.is_finite() {
        return Err(GceError::NoClosure);
    }
    let winding: i64 = if state.energy > 0.0 { 1 } else { -1 };
    let k = i64::from(state.m) - winding;
    let period = TAU * consts.hbar * (winding as f64) / state.energy;
    Ok(Closure { k, winding, period })
}

pub fn closure_period(state: &RotorState, consts: &PhysicalConstants) -> Result<f64> {
    closure(state, consts).map(|c| c.period)
}

pub fn quantum_clock_effect(
    a: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<ClockEffectReport> {
    let (plus, minus) = level_energies(a, omega_k, consts)?;
    let closure_plus = closure(&RotorState::from_level(&plus), consts)?;
    let closure_minus = closure(&RotorState::from_level(&minus), consts)?;

    // T = 2 pi winding (hbar / E); difference taken on the unrounded reciprocals
    let wound_plus = plus.reciprocal.scale(closure_plus.winding as f64);
    let wound_minus = minus.reciprocal.scale(closure_minus.winding as f64);
    Ok(ClockEffectReport {
        t_plus: closure_plus.period,
        t_minus: closure_minus.period,
        delta_t: TAU * wound_plus.diff(wound_minus),
        method: Method::Semiclassical,
        unexpanded: None,
    })
}

/// Maps a level onto the bound-state sign convention of the GEM energies:
/// the `L_z = +hbar` energy is negated, the `L_z = -hbar` energy is already
/// bound and is returned unchanged.
///
/// This is a relabelling only; `quantum_clock_effect` never applies it.
pub fn bound_state_adjustment(level: &SemiclassicalLevel) -> SemiclassicalLevel {
    match level.lz {
        OrbitSense::Prograde => SemiclassicalLevel {
            energy: -level.energy,
            lz: level.lz,
            reciprocal: level.reciprocal.negated(),
        },
        OrbitSense::Retrograde => *level,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kerr::kerr_frequencies;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Smallest T in (0, t_max] with |psi(t+T, phi+2pi) - psi(t, phi)| < tol,
    /// found by scanning a grid and polishing each local minimum of the
    /// mismatch by golden-section search.
    fn brute_force_closure(
        state: &RotorState,
        consts: &PhysicalConstants,
        t_max: f64,
    ) -> Option<f64> {
        let samples = [(0.0, 0.0), (0.37, 1.1), (-2.5, 4.0), (11.0, -0.3)];
        let mismatch = |period: f64| {
            samples
                .iter()
                .map(|&(t, phi)| {
                    (evaluate_state(state, t + period, phi + TAU, consts)
                        - evaluate_state(state, t, phi, consts))
                    .norm()
                })
                .fold(0.0, f64::max)
        };
        let n = 20_000;
        let step = t_max / n as f64;
        let values: Vec<f64> = (0..=n).map(|i| mismatch(i as f64 * step)).collect();
        for i in 1..n {
            if values[i] <= values[i - 1] && values[i] <= values[i + 1] {
                let (mut lo, mut hi) = ((i - 1) as f64 * step, (i + 1) as f64 * step);
                let g = (5f64.sqrt() - 1.0) / 2.0;
                for _ in 0..200 {
                    let x1 = hi - g * (hi - lo);
                    let x2 = lo + g * (hi - lo);
                    if mismatch(x1) < mismatch(x2) {
                        hi = x2;
                    } else {
                        lo = x1;
                    }
                }
                let t = 0.5 * (lo + hi);
                if mismatch(t) < 1e-12 {
                    return Some(t);
                }
            }
        }
        None
    }

    #[test]
    fn symmetric_levels_without_spin() {
        let consts = PhysicalConstants::default();
        let (p, m) = level_energies(0.0, 1e-3, &consts).unwrap();
        assert!(rel(p.energy, consts.hbar * 1e-3) < 1e-15);
        assert!(rel(m.energy, -consts.hbar * 1e-3) < 1e-15);
        assert_eq!(p.lz, OrbitSense::Prograde);
        assert_eq!(m.lz, OrbitSense::Retrograde);
    }

    #[test]
    fn scaled_unit_levels() {
        let (p, m) = level_energies(1.0, 0.5, &PhysicalConstants::unit()).unwrap();
        assert!(rel(p.energy, 1.0 / 3.0) < 1e-15);
        assert!(rel(m.energy, -1.0) < 1e-15);
    }

    #[test]
    fn energies_are_hbar_times_kerr_frequencies() {
        let consts = PhysicalConstants::default();
        for &(a, w) in &[(1.3e-8, 1.2e-3), (0.2, 3.0), (5.0, 0.01)] {
            let (p, m) = level_energies(a, w, &consts).unwrap();
            let f = kerr_frequencies(a, w).unwrap();
            assert!(rel(p.energy, consts.hbar * f.w_plus) < 1e-15);
            assert!(rel(m.energy, consts.hbar * f.w_minus) < 1e-15);
            assert!(p.energy > 0.0 && m.energy < 0.0);
        }
    }

    #[test]
    fn degenerate_level_is_rejected() {
        assert!(matches!(
            level_energies(2.0, 0.5, &PhysicalConstants::unit()),
            Err(GceError::DegenerateOrbit { .. })
        ));
    }

    #[test]
    fn state_values() {
        let consts = PhysicalConstants::unit();
        let a = Complex64::new(0.6, -0.8);
        let s = RotorState::new(a, 1, 0.7).unwrap();
        assert_eq!(evaluate_state(&s, 0.0, 0.0, &consts), a);
        let half_turn = evaluate_state(&s, 0.0, PI, &consts);
        assert!((half_turn + a).norm() < 1e-15);
        for &(t, phi) in &[(1.0, 2.0), (-40.0, 0.1), (1e3, -7.0)] {
            let v = evaluate_state(&s, t, phi, &consts);
            assert!((v.norm() - a.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn rotor_state_validation() {
        assert!(RotorState::new(Complex64::new(1.0, 0.0), 0, 1.0).is_err());
        assert!(RotorState::new(Complex64::new(1.0, 0.0), 2, 1.0).is_err());
        assert!(RotorState::new(Complex64::new(0.0, 0.0), 1, 1.0).is_err());
    }

    #[test]
    fn unit_rotor_periods() {
        let consts = PhysicalConstants::unit();
        let up = RotorState::new(Complex64::new(1.0, 0.0), 1, 1.0).unwrap();
        assert!(rel(closure_period(&up, &consts).unwrap(), TAU) < 1e-15);

        let down = RotorState::new(Complex64::new(1.0, 0.0), -1, -1.0).unwrap();
        let c = closure(&down, &consts).unwrap();
        assert!(rel(c.period, TAU) < 1e-15);
        assert_eq!((c.k, c.winding), (0, -1));
    }

    #[test]
    fn closure_matches_brute_force_scan() {
        let consts = PhysicalConstants::unit();
        for &(m, e) in &[
            (1, 1.0),
            (-1, -1.0),
            (1, 1.0 / 3.0),
            (-1, -0.75),
            (1, -2.0),
            (-1, 0.4),
        ] {
            let s = RotorState::new(Complex64::new(1.0, 0.0), m, e).unwrap();
            let scanned = brute_force_closure(&s, &consts, 3.0 * TAU / e.abs()).unwrap();
            let solved = closure_period(&s, &consts).unwrap();
            assert!(
                rel(scanned, solved) < 1e-9,
                "m={m} E={e}: {scanned} vs {solved}"
            );
        }
    }

    #[test]
    fn zero_energy_has_no_closure() {
        let s = RotorState::new(Complex64::new(1.0, 0.0), 1, 0.0).unwrap();
        assert_eq!(
            closure_period(&s, &PhysicalConstants::unit()),
            Err(GceError::NoClosure)
        );
    }

    #[test]
    fn unit_clock_effect_is_four_pi() {
        let consts = PhysicalConstants::unit();
        let r = quantum_clock_effect(1.0, 0.5, &consts).unwrap();
        assert!(rel(r.t_plus - r.t_minus, 4.0 * PI) < 1e-14);
        assert!(rel(r.delta_t, 4.0 * PI) < 1e-15);
        assert_eq!(r.method, Method::Semiclassical);

        let still = quantum_clock_effect(0.0, 0.5, &consts).unwrap();
        assert_eq!(still.delta_t, 0.0);
    }

    #[test]
    fn earth_scale_quantum_clock_effect() {
        let r = quantum_clock_effect(1.317e-8, 1.2396e-3, &PhysicalConstants::default()).unwrap();
        assert!(rel(r.delta_t, 1.654_991_009_911_103e-7) < 1e-13);
    }

    #[test]
    fn bound_state_adjustment_signs() {
        let consts = PhysicalConstants::default();
        let w = 1e-3;
        let up = SemiclassicalLevel::new(consts.hbar * w, OrbitSense::Prograde, &consts);
        let adjusted = bound_state_adjustment(&up);
        assert_eq!(adjusted.energy, -consts.hbar * w);
        assert_eq!(adjusted.lz, OrbitSense::Prograde);

        let down = SemiclassicalLevel::new(-consts.hbar * w, OrbitSense::Retrograde, &consts);
        assert_eq!(bound_state_adjustment(&down), down);
        assert_eq!(bound_state_adjustment(&bound_state_adjustment(&down)), down);
    }
}
