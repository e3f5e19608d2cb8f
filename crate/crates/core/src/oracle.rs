//! Numerical cross-check of the clock effect.
//!
//! A test particle moves in the equatorial plane under Newtonian gravity plus
//! a gravitomagnetic Lorentz-type acceleration `v x (B_g z)`, with
//! `B_g(r) = 2 G J / (c^2 r^3)` (the rewritten equatorial field with
//! `w_k^2 = G M / r^3`). For a circular orbit of angular speed `W` the radial
//! balance reads `W^2 ± W B_g - w_k^2 = 0` (upper sign co-rotating), so
//! `W_pm ≈ w_k ∓ G J / (c^2 r^3)`: the co-rotating orbit is the slower one.
//! The two periods are measured by integrating whole revolutions and timing
//! the azimuth crossings.
//!
//! Because the gravitomagnetic term is perpendicular to `v` it does no work,
//! and the specific energy `v^2/2 - G M / r` is conserved exactly. Its drift
//! is reported as an integration-quality diagnostic.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::TAU;
use std::io::Write;

use crate::constants::{derive_body, CentralBody, PhysicalConstants};
use crate::error::{ensure_positive, GceError, Result};
use crate::kerr::{ClockEffectReport, Method, OrbitSense};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub position: [f64; 2],
    pub velocity: [f64; 2],
    pub time: f64,
}

impl ParticleState {
    fn radius(&self) -> f64 {
        self.position[0].hypot(self.position[1])
    }

    /// `x v_y - y v_x`, the z component of specific angular momentum.
    fn angular_momentum(&self) -> f64 {
        self.position[0] * self.velocity[1] - self.position[1] * self.velocity[0]
    }

    fn angular_rate(&self) -> f64 {
        let r = self.radius();
        self.angular_momentum() / (r * r)
    }

    fn to_vector(self) -> [f64; 4] {
        [
            self.position[0],
            self.position[1],
            self.velocity[0],
            self.velocity[1],
        ]
    }

    fn from_vector(y: [f64; 4], time: f64) -> Self {
        Self {
            position: [y[0], y[1]],
            velocity: [y[2], y[3]],
            time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Local error target per step, relative to |r| and |v|. In (0, 1e-6].
    pub relative_tolerance: f64,
    pub max_steps: usize,
    /// Crossing times are refined until the Newton update is below this (s),
    /// or below a few ulps of the time itself.
    pub crossing_tolerance: f64,
    /// Whole revolutions timed per orbit sense by `measure_clock_effect`.
    pub revolutions: u32,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-12,
            max_steps: 5_000_000,
            crossing_tolerance: 1e-12,
            revolutions: 10,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerance(relative_tolerance: f64) -> Result<Self> {
        let config = Self {
            relative_tolerance,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance <= 1e-6) {
            return Err(GceError::InvalidInput(format!(
                "relative tolerance must lie in (0, 1e-6], got {}",
                self.relative_tolerance
            )));
        }
        if self.max_steps == 0 {
            return Err(GceError::InvalidInput("max_steps must be > 0".into()));
        }
        if !(self.crossing_tolerance >= 0.0) {
            return Err(GceError::InvalidInput(format!(
                "crossing tolerance must be >= 0, got {}",
                self.crossing_tolerance
            )));
        }
        if self.revolutions == 0 {
            return Err(GceError::InvalidInput("revolutions must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationSpan {
    Duration(f64),
    /// Stop exactly at the n-th full revolution.
    Revolutions(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Accepted steps in time order, starting with the initial state.
    pub samples: Vec<ParticleState>,
    /// Times at which the accumulated azimuth reached each multiple of 2 pi,
    /// refined inside the step.
    pub crossings: Vec<f64>,
    /// Largest relative deviation of `v^2/2 - GM/r` from its initial value.
    pub energy_drift: Option<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    /// Wraps externally produced samples; crossings are recovered by
    /// interpolation in `azimuthal_period`.
    pub fn from_samples(samples: Vec<ParticleState>) -> Self {
        Self {
            samples,
            crossings: Vec::new(),
            energy_drift: None,
            accepted_steps: 0,
            rejected_steps: 0,
        }
    }

    /// Writes `t x y vx vy`, one sample per line, after a `#` header line.
    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# t_s x_m y_m vx_m_s vy_m_s")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
                s.time, s.position[0], s.position[1], s.velocity[0], s.velocity[1]
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodMeasurement {
    pub period: f64,
    pub revolutions_used: usize,
    pub energy_drift: Option<f64>,
}

/// Both senses measured at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMeasurement {
    pub report: ClockEffectReport,
    pub prograde: PeriodMeasurement,
    pub retrograde: PeriodMeasurement,
}

impl OracleMeasurement {
    pub fn max_energy_drift(&self) -> Option<f64> {
        match (self.prograde.energy_drift, self.retrograde.energy_drift) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Force model with the body reduced to the three numbers the dynamics need.
#[derive(Debug, Clone, Copy)]
struct OrbitModel {
    gm: f64,
    /// `2 G J / c^2`; the field is this over `r^3`.
    field_coefficient: f64,
    source_radius: f64,
}

impl OrbitModel {
    fn new(body: &CentralBody, consts: &PhysicalConstants) -> Result<Self> {
        let derived = derive_body(body, consts)?;
        Ok(Self {
            gm: consts.g * body.mass,
            field_coefficient: 2.0 * consts.g * derived.spin_j / consts.c_squared(),
            source_radius: body.radius,
        })
    }

    fn field(&self, r: f64) -> f64 {
        self.field_coefficient / (r * r * r)
    }

    fn acceleration(&self, position: [f64; 2], velocity: [f64; 2]) -> Result<[f64; 2]> {
        let r = position[0].hypot(position[1]);
        if !(r > self.source_radius) {
            return Err(GceError::InsideSource {
                r,
                radius: self.source_radius,
            });
        }
        let newton = -self.gm / (r * r * r);
        let b = self.field(r);
        // v x (b z) = (v_y b, -v_x b)
        Ok([
            newton * position[0] + velocity[1] * b,
            newton * position[1] - velocity[0] * b,
        ])
    }

    fn derivative(&self, y: &[f64; 4]) -> Result<[f64; 4]> {
        let a = self.acceleration([y[0], y[1]], [y[2], y[3]])?;
        Ok([y[2], y[3], a[0], a[1]])
    }

    fn specific_energy(&self, s: &ParticleState) -> f64 {
        let v2 = s.velocity[0] * s.velocity[0] + s.velocity[1] * s.velocity[1];
        0.5 * v2 - self.gm / s.radius()
    }
}

pub fn acceleration(
    state: &ParticleState,
    body: &CentralBody,
    consts: &PhysicalConstants,
) -> Result<[f64; 2]> {
    OrbitModel::new(body, consts)?.acceleration(state.position, state.velocity)
}

/// Launches from `(r, 0)` with the tangential speed of an exactly circular
/// orbit: the positive root of `W^2 + s W B_g - w_k^2 = 0`, `s = +1` for a
/// co-rotating orbit.
pub fn circular_launch(
    r: f64,
    sense: OrbitSense,
    body: &CentralBody,
    consts: &PhysicalConstants,
) -> Result<ParticleState> {
    let model = OrbitModel::new(body, consts)?;
    ensure_positive("launch radius", r)?;
    if r <= body.radius {
        return Err(GceError::InsideSource {
            r,
            radius: body.radius,
        });
    }
    let kepler_sq = model.gm / (r * r * r);
    let sb = sense.sign() * model.field(r);
    let disc = (sb * sb + 4.0 * kepler_sq).sqrt();
    // pick the cancellation-free form of the positive root
    let speed = if sb > 0.0 {
        2.0 * kepler_sq / (sb + disc)
    } else {
        0.5 * (disc - sb)
    };
    if !(speed.is_finite() && speed > 0.0) {
        return Err(GceError::Regime(format!(
            "no positive circular angular speed at r = {r} m"
        )));
    }
    Ok(ParticleState {
        position: [r, 0.0],
        velocity: [0.0, sense.sign() * speed * r],
        time: 0.0,
    })
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Step {
    y: [f64; 4],
    error: [f64; 4],
}

fn dp_step(model: &OrbitModel, y0: &[f64; 4], h: f64) -> Result<Step> {
    debug_assert_eq!(C[0], 0.0);
    let mut k = [[0.0; 4]; 7];
    k[0] = model.derivative(y0)?;
    for stage in 1..7 {
        let mut y = *y0;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                for i in 0..4 {
                    y[i] += h * a * kj[i];
                }
            }
        }
        k[stage] = model.derivative(&y)?;
    }
    let mut y = *y0;
    let mut error = [0.0; 4];
    for (s, ks) in k.iter().enumerate() {
        for i in 0..4 {
            y[i] += h * B5[s] * ks[i];
            error[i] += h * E[s] * ks[i];
        }
    }
    Ok(Step { y, error })
}

fn error_norm(y0: &[f64; 4], step: &Step, rtol: f64) -> f64 {
    let pos_scale = rtol * y0[0].hypot(y0[1]).max(step.y[0].hypot(step.y[1]));
    let vel_scale = rtol
        * y0[2]
            .hypot(y0[3])
            .max(step.y[2].hypot(step.y[3]))
            .max(f64::MIN_POSITIVE);
    let pos = step.error[0].hypot(step.error[1]) / pos_scale;
    let vel = step.error[2].hypot(step.error[3]) / vel_scale;
    pos.max(vel)
}

fn turn_angle(from: [f64; 2], to: [f64; 2]) -> f64 {
    let cross = from[0] * to[1] - from[1] * to[0];
    let dot = from[0] * to[0] + from[1] * to[1];
    cross.atan2(dot)
}

/// Newton iteration on the step length `h` from `start` so that the azimuth
/// gained, `phi_start + turn(h)`, equals `target`.
fn refine_crossing(
    model: &OrbitModel,
    start: &ParticleState,
    phi_start: f64,
    target: f64,
    h_full: f64,
    phi_end: f64,
    crossing_tolerance: f64,
) -> Result<ParticleState> {
    let y0 = start.to_vector();
    let mut h = h_full * (target - phi_start) / (phi_end - phi_start);
    let mut state = ParticleState::from_vector(dp_step(model, &y0, h)?.y, start.time + h);
    for _ in 0..60 {
        let phi = phi_start + turn_angle(start.position, state.position);
        let rate = state.angular_rate();
        let dh = (target - phi) / rate;
        h = (h + dh).clamp(0.0, h_full);
        state = ParticleState::from_vector(dp_step(model, &y0, h)?.y, start.time + h);
        let floor = 4.0 * f64::EPSILON * state.time.abs();
        if dh.abs() <= crossing_tolerance.max(floor) {
            break;
        }
    }
    Ok(state)
}

pub fn integrate_orbit(
    state: &ParticleState,
    body: &CentralBody,
    config: &IntegratorConfig,
    span: IntegrationSpan,
    consts: &PhysicalConstants,
) -> Result<Trajectory> {
    config.validate()?;
    let model = OrbitModel::new(body, consts)?;
    model.acceleration(state.position, state.velocity)?;
    let (t_end, revolutions_wanted) = match span {
        IntegrationSpan::Duration(d) => {
            if !(d.is_finite() && d >= 0.0) {
                return Err(GceError::InvalidInput(format!(
                    "duration must be >= 0, got {d}"
                )));
            }
            (state.time + d, None)
        }
        IntegrationSpan::Revolutions(0) => {
            return Err(GceError::InvalidInput(
                "revolution count must be > 0".into(),
            ));
        }
        IntegrationSpan::Revolutions(n) => (f64::INFINITY, Some(n as usize)),
    };

    let r0 = state.radius();
    let local_period = TAU / (model.gm / (r0 * r0 * r0)).sqrt();
    let h_max = local_period / 16.0;
    let mut h = (local_period * 1e-3).min(h_max);
    // orbit sense from the initial angular momentum; radial launches count +
    let direction = if state.angular_momentum() < 0.0 {
        -1.0
    } else {
        1.0
    };

    let e0 = model.specific_energy(state);
    let mut drift: f64 = 0.0;
    let mut samples = vec![*state];
    let mut crossings = Vec::new();
    let mut current = *state;
    let mut phi = 0.0;
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    while current.time < t_end {
        if accepted + rejected >= config.max_steps {
            return Err(GceError::StepBudget {
                max_steps: config.max_steps,
                t: current.time,
            });
        }
        let mut last = false;
        if current.time + h >= t_end {
            h = t_end - current.time;
            last = true;
        }
        let y0 = current.to_vector();
        let step = dp_step(&model, &y0, h)?;
        let err = error_norm(&y0, &step, config.relative_tolerance);
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if !(err <= 1.0) {
            rejected += 1;
            h *= factor.min(1.0);
            continue;
        }
        accepted += 1;

        let next = ParticleState::from_vector(step.y, if last { t_end } else { current.time + h });
        let phi_next = phi + turn_angle(current.position, next.position);

        let mut stop = None;
        let target = direction * TAU * (crossings.len() + 1) as f64;
        if direction * (phi_next - target) >= 0.0 {
            let event = refine_crossing(
                &model,
                &current,
                phi,
                target,
                h,
                phi_next,
                config.crossing_tolerance,
            )?;
            crossings.push(event.time);
            if revolutions_wanted == Some(crossings.len()) {
                stop = Some(event);
            }
        }

        let recorded = stop.unwrap_or(next);
        let e = model.specific_energy(&recorded);
        drift = drift.max(((e - e0) / e0).abs());
        samples.push(recorded);
        if stop.is_some() {
            break;
        }
        current = next;
        phi = phi_next;
        h = (h * factor).min(h_max);
        if last {
            break;
        }
    }

    Ok(Trajectory {
        samples,
        crossings,
        energy_drift: Some(drift),
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

/// Solves `phi(t) = target` on `[t0, t1]` for the cubic Hermite interpolant
/// of the accumulated azimuth, using the angular rates as end slopes.
fn hermite_crossing(
    t0: f64,
    t1: f64,
    phi0: f64,
    phi1: f64,
    rate0: f64,
    rate1: f64,
    target: f64,
) -> f64 {
    let dt = t1 - t0;
    let eval = |s: f64| {
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * phi0
            + (s3 - 2.0 * s2 + s) * dt * rate0
            + (-2.0 * s3 + 3.0 * s2) * phi1
            + (s3 - s2) * dt * rate1
    };
    let rising = phi1 >= phi0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (eval(mid) < target) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    t0 + 0.5 * (lo + hi) * dt
}

fn crossings_from_samples(samples: &[ParticleState]) -> Vec<f64> {
    let Some(first) = samples.first() else {
        return Vec::new();
    };
    let direction = if first.angular_momentum() < 0.0 {
        -1.0
    } else {
        1.0
    };
    let mut crossings = Vec::new();
    let mut phi = 0.0;
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let phi_next = phi + turn_angle(a.position, b.position);
        let target = direction * TAU * (crossings.len() + 1) as f64;
        if direction * (phi_next - target) >= 0.0 {
            crossings.push(hermite_crossing(
                a.time,
                b.time,
                phi,
                phi_next,
                a.angular_rate(),
                b.angular_rate(),
                target,
            ));
        }
        phi = phi_next;
    }
    crossings
}

/// Mean time per full revolution, from the start of the trajectory to the
/// last completed revolution.
pub fn azimuthal_period(trajectory: &Trajectory) -> Result<PeriodMeasurement> {
    let Some(start) = trajectory.samples.first() else {
        return Err(GceError::InsufficientSpan { revolutions: 0.0 });
    };
    let recovered;
    let crossings = if trajectory.crossings.is_empty() {
        recovered = crossings_from_samples(&trajectory.samples);
        &recovered
    } else {
        &trajectory.crossings
    };
    let Some(&last) = crossings.last() else {
        let mut phi = 0.0;
        for pair in trajectory.samples.windows(2) {
            phi += turn_angle(pair[0].position, pair[1].position);
        }
        return Err(GceError::InsufficientSpan {
            revolutions: phi.abs() / TAU,
        });
    };
    let n = crossings.len();
    Ok(PeriodMeasurement {
        period: (last - start.time) / n as f64,
        revolutions_used: n,
        energy_drift: trajectory.energy_drift,
    })
}

pub fn measure_period(
    body: &CentralBody,
    r: f64,
    sense: OrbitSense,
    config: &IntegratorConfig,
    consts: &PhysicalConstants,
) -> Result<PeriodMeasurement> {
    let launch = circular_launch(r, sense, body, consts)?;
    let trajectory = integrate_orbit(
        &launch,
        body,
        config,
        IntegrationSpan::Revolutions(config.revolutions),
        consts,
    )?;
    azimuthal_period(&trajectory)
}

/// Integrates a co-rotating and a counter-rotating circular orbit at `r` and
/// reports `T+ - T-` as measured.
pub fn measure_clock_effect(
    body: &CentralBody,
    r: f64,
    config: &IntegratorConfig,
    consts: &PhysicalConstants,
) -> Result<OracleMeasurement> {
    let prograde = measure_period(body, r, OrbitSense::Prograde, config, consts)?;
    let retrograde = measure_period(body, r, OrbitSense::Retrograde, config, consts)?;
    Ok(OracleMeasurement {
        report: ClockEffectReport {
            t_plus: prograde.period,
            t_minus: retrograde.period,
            delta_t: prograde.period - retrograde.period,
            method: Method::Oracle,
            unexpanded: None,
        },
        prograde,
        retrograde,
    })
}
