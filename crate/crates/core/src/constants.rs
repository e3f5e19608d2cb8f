//! Physical constants and the rotating central body.
//!
//! All quantities are SI. The Kerr spin parameter `a = J / (M c^2)` is
//! therefore a time, in seconds, and `4 pi a` is directly a period
//! difference.

use crate::error::{ensure_finite, ensure_positive, GceError, Result};

/// Newtonian constant of gravitation, CODATA 2018 (m^3 kg^-1 s^-2).
pub const CODATA_G: f64 = 6.674_30e-11;
/// Speed of light in vacuum, exact (m s^-1).
pub const CODATA_C: f64 = 299_792_458.0;
/// Reduced Planck constant, CODATA 2018 (J s).
pub const CODATA_HBAR: f64 = 1.054_571_817e-34;

/// Moment-of-inertia factor `I / (M R^2)` of a uniform-density sphere.
pub const UNIFORM_SPHERE_INERTIA_FACTOR: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub g: f64,
    pub c: f64,
    pub hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            g: CODATA_G,
            c: CODATA_C,
            hbar: CODATA_HBAR,
        }
    }
}

impl PhysicalConstants {
    pub fn new(g: f64, c: f64, hbar: f64) -> Result<Self> {
        Ok(Self {
            g: ensure_positive("G", g)?,
            c: ensure_positive("c", c)?,
            hbar: ensure_positive("hbar", hbar)?,
        })
    }

    /// `G = c = hbar = 1`.
    pub fn unit() -> Self {
        Self {
            g: 1.0,
            c: 1.0,
            hbar: 1.0,
        }
    }

    pub(crate) fn c_squared(&self) -> f64 {
        self.c * self.c
    }
}

/// A rigidly rotating sphere spinning about the z axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralBody {
    pub mass: f64,
    pub radius: f64,
    /// Signed spin rate about +z (rad/s).
    pub spin_omega: f64,
    /// `I / (M R^2)`; 2/5 unless overridden.
    pub inertia_factor: f64,
}

impl CentralBody {
    pub fn new(mass: f64, radius: f64, spin_omega: f64) -> Result<Self> {
        let body = Self {
            mass,
            radius,
            spin_omega,
            inertia_factor: UNIFORM_SPHERE_INERTIA_FACTOR,
        };
        body.validate()?;
        Ok(body)
    }

    /// Replaces the uniform-sphere factor with a measured one (Earth is about 0.3307).
    pub fn with_inertia_factor(mut self, factor: f64) -> Result<Self> {
        self.inertia_factor = factor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("mass", self.mass)?;
        ensure_finite("radius", self.radius)?;
        if self.radius < 0.0 {
            return Err(GceError::InvalidInput(format!(
                "radius must be >= 0, got {}",
                self.radius
            )));
        }
        ensure_finite("spin_omega", self.spin_omega)?;
        ensure_positive("inertia factor", self.inertia_factor)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedBody {
    /// kg m^2
    pub moment_of_inertia: f64,
    /// Spin angular momentum J = I omega (kg m^2 s^-1), signed.
    pub spin_j: f64,
    /// a = J / (M c^2), in seconds.
    pub spin_parameter_a: f64,
}

pub fn derive_body(body: &CentralBody, consts: &PhysicalConstants) -> Result<DerivedBody> {
    body.validate()?;
    let moment_of_inertia = body.inertia_factor * body.mass * body.radius * body.radius;
    let spin_j = moment_of_inertia * body.spin_omega;
    Ok(DerivedBody {
        moment_of_inertia,
        spin_j,
        spin_parameter_a: spin_parameter(spin_j, body.mass, consts),
    })
}

/// `J / (M c^2)`. Shared by every route so that equal inputs give bit-equal `a`.
pub fn spin_parameter(spin_j: f64, mass: f64, consts: &PhysicalConstants) -> f64 {
    spin_j / (mass * consts.c_squared())
}

/// Newtonian circular-orbit angular frequency `sqrt(G M / r^3)`.
pub fn keplerian_frequency(mass: f64, r: f64, consts: &PhysicalConstants) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("orbital radius", r)?;
    Ok((consts.g * mass / (r * r * r)).sqrt())
}
