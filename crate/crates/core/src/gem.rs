//! Gravitoelectromagnetic route.
//!
//! A spinning ball produces an equatorial gravitomagnetic field
//! `B = (4/5) G R^2 M omega / (c^2 r^3) = 2 J w_k^2 / (M c^2)`. An orbiting
//! spin-zero mass carries the moment `mu = -L/2`, so the `L_z = ±hbar` levels
//! shift by `-mu.B = ±hbar w_k^2 J / (M c^2)` about the Keplerian level
//! `-hbar w_k`. Reading the shifted levels as orbital frequencies gives
//! periods whose difference is again `4 pi J / (M c^2)`.

use std::f64::consts::TAU;

use crate::constants::{spin_parameter, CentralBody, PhysicalConstants};
use crate::error::{ensure_finite, ensure_positive, GceError, Result};
use crate::kerr::{clock_effect_exact, ClockEffectReport, Method, OrbitSense, UnexpandedPeriods};
use crate::numeric::two_sum;

/// Above this `epsilon = J w_k / (M c^2)` the dropped quadratic term exceeds
/// 1e-4 of the periods.
pub const FIRST_ORDER_WARN_EPSILON: f64 = 1e-2;

/// Equatorial gravitomagnetic field at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GemFieldSample {
    /// |B| in s^-1.
    pub magnitude: f64,
    /// +1 or -1: the field is along `direction * z`. Zero field reports +1.
    pub direction: f64,
    pub r: f64,
}

impl GemFieldSample {
    pub fn z_component(&self) -> f64 {
        self.direction * self.magnitude
    }
}

/// Split levels and the orbital frequencies read off from them.
/// `delta_e` equals `e_plus - e_minus` up to the rounding of the levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPair {
    pub e_plus: f64,
    pub e_minus: f64,
    pub delta_e: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

pub fn equatorial_field(
    body: &CentralBody,
    r: f64,
    consts: &PhysicalConstants,
) -> Result<GemFieldSample> {
    body.validate()?;
    ensure_positive("field radius", r)?;
    // 2 * inertia_factor is the 4/5 of a uniform sphere
    let magnitude = 2.0
        * body.inertia_factor
        * consts.g
        * body.radius
        * body.radius
        * body.mass
        * body.spin_omega.abs()
        / (consts.c_squared() * r * r * r);
    Ok(GemFieldSample {
        magnitude,
        direction: if body.spin_omega < 0.0 { -1.0 } else { 1.0 },
        r,
    })
}

/// `2 J w_k^2 / (M c^2)`, signed with `J`.
pub fn rewritten_field(
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_finite("J", spin_j)?;
    ensure_finite("omega_k", omega_k)?;
    Ok(2.0 * spin_j * omega_k * omega_k / (mass * consts.c_squared()))
}

/// z-component of `mu = -L/2` for `L_z = sense.sign() * hbar`.
pub fn gravitomagnetic_moment(sense: OrbitSense, consts: &PhysicalConstants) -> f64 {
    -0.5 * sense.sign() * consts.hbar
}

/// `-mu . B`, both along z.
pub fn potential_energy(
    sense: OrbitSense,
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let field = rewritten_field(spin_j, mass, omega_k, consts)?;
    Ok(-gravitomagnetic_moment(sense, consts) * field)
}

/// `L_z J w_k^2 / (M c^2)` written out directly, for auditing the sign of the
/// `-mu.B` composition.
pub fn potential_energy_closed_form(
    sense: OrbitSense,
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("mass", mass)?;
    Ok(sense.sign() * consts.hbar * omega_k * omega_k * spin_j / (mass * consts.c_squared()))
}

/// Keplerian level `-hbar w_k` split by the gravitomagnetic coupling.
pub fn level_pair(
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<LevelPair> {
    ensure_positive("omega_k", omega_k)?;
    let kepler = -consts.hbar * omega_k;
    let coupling_plus = potential_energy(OrbitSense::Prograde, spin_j, mass, omega_k, consts)?;
    let coupling_minus = potential_energy(OrbitSense::Retrograde, spin_j, mass, omega_k, consts)?;
    let shift = frequency_shift(spin_j, mass, omega_k, consts);
    Ok(LevelPair {
        e_plus: kepler + coupling_plus,
        e_minus: kepler + coupling_minus,
        // the Keplerian term cancels; subtracting the rounded levels would
        // lose the splitting entirely at Earth scale
        delta_e: coupling_plus - coupling_minus,
        omega_plus: omega_k - shift,
        omega_minus: omega_k + shift,
    })
}

/// `w_k^2 J / (M c^2) = epsilon * w_k`.
fn frequency_shift(spin_j: f64, mass: f64, omega_k: f64, consts: &PhysicalConstants) -> f64 {
    omega_k * omega_k * spin_j / (mass * consts.c_squared())
}

/// `epsilon = J w_k / (M c^2)`, the expansion parameter of the periods.
pub fn first_order_epsilon(
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> f64 {
    spin_parameter(spin_j, mass, consts) * omega_k
}

/// Periods `T_pm = 2 pi / w_k ± 2 pi J / (M c^2)` (first order in epsilon),
/// with the unexpanded `2 pi / w_pm` attached for truncation studies.
pub fn periods_first_order(
    pair: &LevelPair,
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<ClockEffectReport> {
    ensure_positive("mass", mass)?;
    ensure_positive("omega_k", omega_k)?;
    if !(pair.omega_plus > 0.0 && pair.omega_minus > 0.0) {
        return Err(GceError::Regime(format!(
            "split frequencies must stay positive (omega+ = {}, omega- = {}); epsilon = {}",
            pair.omega_plus,
            pair.omega_minus,
            first_order_epsilon(spin_j, mass, omega_k, consts)
        )));
    }

    let kepler_period = TAU / omega_k;
    let offset = TAU * spin_parameter(spin_j, mass, consts);
    let plus = two_sum(kepler_period, offset);
    let minus = two_sum(kepler_period, -offset);

    let shift = frequency_shift(spin_j, mass, omega_k, consts);
    let unexpanded = UnexpandedPeriods {
        t_plus: TAU / pair.omega_plus,
        t_minus: TAU / pair.omega_minus,
        // 2pi/w+ - 2pi/w- = 2pi (w- - w+) / (w+ w-), with w- - w+ = 2 shift
        delta_t: TAU * (2.0 * shift) / (pair.omega_plus * pair.omega_minus),
    };

    Ok(ClockEffectReport {
        t_plus: plus.value(),
        t_minus: minus.value(),
        delta_t: plus.diff(minus),
        method: Method::Gem,
        unexpanded: Some(unexpanded),
    })
}

/// `4 pi J / (M c^2)`; identical to `clock_effect_exact(J / (M c^2))`.
pub fn clock_effect_gem(spin_j: f64, mass: f64, consts: &PhysicalConstants) -> f64 {
    clock_effect_exact(spin_parameter(spin_j, mass, consts))
}

pub fn gem_clock_effect(
    spin_j: f64,
    mass: f64,
    omega_k: f64,
    consts: &PhysicalConstants,
) -> Result<ClockEffectReport> {
    let pair = level_pair(spin_j, mass, omega_k, consts)?;
    periods_first_order(&pair, spin_j, mass, omega_k, consts)
}
