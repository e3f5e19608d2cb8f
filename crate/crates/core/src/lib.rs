//! Gravitomagnetic clock effect: the period difference between co- and
//! counter-rotating circular orbits around a spinning mass, computed along
//! three analytic routes (exact Kerr frequencies, semiclassical rotor levels,
//! gravitomagnetic level splitting) and checked against direct orbit
//! integration.

pub mod constants;
pub mod error;
pub mod gem;
pub mod kerr;
pub mod numeric;
pub mod oracle;
pub mod report;
pub mod scenario;
pub mod semiclassical;

pub use constants::{
    derive_body, keplerian_frequency, CentralBody, DerivedBody, PhysicalConstants,
};
pub use error::{GceError, Result};
pub use kerr::{clock_effect_exact, ClockEffectReport, Method, OrbitSense};
