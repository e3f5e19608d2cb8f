//! Exact classical route: circular equatorial orbit frequencies around a Kerr
//! source, `1/w = a + 1/w_k` (co-rotating) and `1/w = a - 1/w_k`
//! (counter-rotating), and the resulting period difference `4 pi a`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_positive, GceError, Result};
use crate::numeric::{two_sum, Compensated};

/// `|1 - a w_k|` below this is treated as the divergent counter-rotating orbit.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Sense of a circular orbit relative to the source spin. Identified with the
/// quantum label `L_z = +hbar` (prograde) and `L_z = -hbar` (retrograde).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitSense {
    Prograde,
    Retrograde,
}

impl OrbitSense {
    pub fn sign(self) -> f64 {
        match self {
            OrbitSense::Prograde => 1.0,
            OrbitSense::Retrograde => -1.0,
        }
    }

    /// Azimuthal quantum number m = L_z / hbar.
    pub fn azimuthal_number(self) -> i32 {
        match self {
            OrbitSense::Prograde => 1,
            OrbitSense::Retrograde => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Kerr,
    Semiclassical,
    Gem,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Kerr,
        Method::Semiclassical,
        Method::Gem,
        Method::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Kerr => "kerr",
            Method::Semiclassical => "semiclassical",
            Method::Gem => "gem",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = GceError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                GceError::InvalidInput(format!(
                    "unknown method '{s}' (expected kerr, semiclassical, gem or oracle)"
                ))
            })
    }
}

/// Periods `2 pi / w_pm` computed without the first-order expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnexpandedPeriods {
    pub t_plus: f64,
    pub t_minus: f64,
    pub delta_t: f64,
}

/// Co- and counter-rotating periods and their difference.
///
/// `delta_t` is evaluated from the reciprocal frequencies without
/// cancellation, so it can differ from `t_plus - t_minus` by the rounding of
/// the periods themselves (an ulp of T, which at Earth scale is ~1e-5 of the
/// effect).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockEffectReport {
    pub t_plus: f64,
    pub t_minus: f64,
    pub delta_t: f64,
    pub method: Method,
    /// Only the GEM route fills this in.
    pub unexpanded: Option<UnexpandedPeriods>,
}

/// Signed circular-orbit frequencies. `w_minus` is negative (the orbit runs
/// clockwise) whenever `a w_k < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrFrequencies {
    pub w_plus: f64,
    pub w_minus: f64,
    pub a: f64,
    pub omega_k: f64,
    recip_plus: Compensated,
    recip_minus: Compensated,
}

impl KerrFrequencies {
    /// `1 / w_plus = a + 1/w_k`, carried without rounding the sum.
    pub fn reciprocal_plus(&self) -> Compensated {
        self.recip_plus
    }

    /// `1 / w_minus = a - 1/w_k`.
    pub fn reciprocal_minus(&self) -> Compensated {
        self.recip_minus
    }
}

/// Checks the common domain of the Kerr and semiclassical routes and returns
/// the exact reciprocals `a + 1/w_k` and `a - 1/w_k`.
pub(crate) fn reciprocal_frequencies(a: f64, omega_k: f64) -> Result<(Compensated, Compensated)> {
    ensure_positive("omega_k", omega_k)?;
    if !a.is_finite() || a < 0.0 {
        return Err(GceError::InvalidInput(format!(
            "spin parameter a must be finite and >= 0, got {a}"
        )));
    }
    let product = a * omega_k;
    if (1.0 - product).abs() < DEGENERACY_TOLERANCE {
        return Err(GceError::DegenerateOrbit {
            a,
            omega_k,
            product,
        });
    }
    if product > 1.0 {
        return Err(GceError::Regime(format!(
            "a*omega_k = {product} > 1: no counter-rotating circular orbit"
        )));
    }
    let inv = 1.0 / omega_k;
    Ok((two_sum(a, inv), two_sum(a, -inv)))
}

pub fn kerr_frequencies(a: f64, omega_k: f64) -> Result<KerrFrequencies> {
    let (recip_plus, recip_minus) = reciprocal_frequencies(a, omega_k)?;
    Ok(KerrFrequencies {
        w_plus: 1.0 / recip_plus.value(),
        w_minus: 1.0 / recip_minus.value(),
        a,
        omega_k,
        recip_plus,
        recip_minus,
    })
}

/// Periods are `2 pi / |w|`: the counter-rotating frequency is negative but
/// both orbits take a positive time to close.
pub fn periods_from_frequencies(f: &KerrFrequencies) -> ClockEffectReport {
    let gap = f.recip_plus.abs().diff(f.recip_minus.abs());
    ClockEffectReport {
        t_plus: TAU / f.w_plus.abs(),
        t_minus: TAU / f.w_minus.abs(),
        delta_t: TAU * gap,
        method: Method::Kerr,
        unexpanded: None,
    }
}

/// `T+ - T- = 4 pi a`.
pub fn clock_effect_exact(a: f64) -> f64 {
    2.0 * TAU * a
}

pub fn kerr_clock_effect(a: f64, omega_k: f64) -> Result<ClockEffectReport> {
    Ok(periods_from_frequencies(&kerr_frequencies(a, omega_k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn non_rotating_source_is_symmetric() {
        let f = kerr_frequencies(0.0, 2.5e-3).unwrap();
        assert_eq!(f.w_plus, 2.5e-3);
        assert_eq!(f.w_minus, -2.5e-3);
        let r = periods_from_frequencies(&f);
        assert_eq!(r.delta_t, 0.0);
        assert_eq!(r.t_plus, r.t_minus);
    }

    #[test]
    fn unit_example() {
        let f = kerr_frequencies(1.0, 0.5).unwrap();
        assert!(rel(f.w_plus, 1.0 / 3.0) < 1e-15);
        assert!(rel(f.w_minus, -1.0) < 1e-15);
        let r = periods_from_frequencies(&f);
        assert!(rel(r.t_plus, 6.0 * PI) < 1e-15);
        assert!(rel(r.t_minus, 2.0 * PI) < 1e-15);
        assert!(rel(r.delta_t, 4.0 * PI) < 1e-15);
        assert_eq!(r.method, Method::Kerr);
    }

    #[test]
    fn earth_scale_matches_first_order_series() {
        let (a, w) = (1.317e-8, 1.2396e-3);
        let f = kerr_frequencies(a, w).unwrap();
        // w+ = w (1 - a w + (a w)^2 - ...); the quadratic term is ~3e-22 relative
        assert!(rel(f.w_plus, w * (1.0 - a * w)) < 1e-15);
        assert!(rel(f.w_minus, -w * (1.0 + a * w)) < 1e-15);
    }

    #[test]
    fn earth_scale_clock_effect() {
        // 4 pi * 1.317e-8 in 40-digit arithmetic
        assert!(rel(clock_effect_exact(1.317e-8), 1.654_991_009_911_103e-7) < 1e-15);
        let r = kerr_clock_effect(1.317e-8, 1.2396e-3).unwrap();
        assert!(rel(r.delta_t, clock_effect_exact(1.317e-8)) < 1e-13);
    }

    #[test]
    fn reciprocal_invariants() {
        let (a, w) = (0.3, 1.7);
        let f = kerr_frequencies(a, w).unwrap();
        assert!(rel(1.0 / f.w_plus, a + 1.0 / w) < 1e-15);
        assert!(rel(1.0 / f.w_minus, a - 1.0 / w) < 1e-15);
        assert!(f.w_minus < 0.0);
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        assert!(matches!(
            kerr_frequencies(2.0, 0.5),
            Err(GceError::DegenerateOrbit { .. })
        ));
        assert!(matches!(
            kerr_frequencies(2.0 * (1.0 + 1e-14), 0.5),
            Err(GceError::DegenerateOrbit { .. })
        ));
        assert!(matches!(
            kerr_frequencies(3.0, 0.5),
            Err(GceError::Regime(_))
        ));
        assert!(matches!(
            kerr_frequencies(1.0, 0.0),
            Err(GceError::InvalidInput(_))
        ));
        assert!(matches!(
            kerr_frequencies(1.0, -1.0),
            Err(GceError::InvalidInput(_))
        ));
        assert!(matches!(
            kerr_frequencies(-1.0, 0.5),
            Err(GceError::InvalidInput(_))
        ));
    }

    #[test]
    fn method_round_trips_through_text() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("lense".parse::<Method>().is_err());
    }
}
