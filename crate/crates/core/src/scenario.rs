//! Scenario files.
//!
//! ```text
//! # comment
//! [body]
//! preset = earth-uniform        # or mass_kg / radius_m / spin_omega_rad_s
//! [orbit]
//! radii_m = 7.0e6, 4.2164e7
//! [run]
//! methods = kerr, semiclassical, gem, oracle
//! rel_tol = 1e-12
//! ```
//!
//! One `key = value` per line. `#` starts a comment anywhere on a line.
//! Explicit body keys override the preset's values. Unknown sections and
//! keys are rejected with their line number.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::constants::{CentralBody, PhysicalConstants};
use crate::error::{GceError, Result};
use crate::kerr::Method;
use crate::oracle::IntegratorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Uniform-density Earth with CODATA constants.
    EarthUniform,
    /// M = R = omega = 1 with G = c = hbar = 1.
    ToyUnit,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::EarthUniform, Preset::ToyUnit];

    pub fn name(self) -> &'static str {
        match self {
            Preset::EarthUniform => "earth-uniform",
            Preset::ToyUnit => "toy-unit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn body(self) -> CentralBody {
        let (mass, radius, spin) = match self {
            Preset::EarthUniform => (5.972e24, 6.371e6, 7.2921e-5),
            Preset::ToyUnit => (1.0, 1.0, 1.0),
        };
        CentralBody::new(mass, radius, spin).expect("preset bodies are valid")
    }

    pub fn constants(self) -> PhysicalConstants {
        match self {
            Preset::EarthUniform => PhysicalConstants::default(),
            Preset::ToyUnit => PhysicalConstants::unit(),
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::EarthUniform => "M = 5.972e24 kg, R = 6.371e6 m, omega = 7.2921e-5 rad/s, I = (2/5) M R^2, CODATA 2018 constants",
            Preset::ToyUnit => "M = 1, R = 1, omega = 1, I = 2/5, G = c = hbar = 1",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub body: CentralBody,
    pub constants: PhysicalConstants,
    pub radii: Vec<f64>,
    pub methods: Vec<Method>,
    pub integrator: IntegratorConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.body
            .validate()
            .map_err(|e| GceError::Validation(format!("body: {e}")))?;
        if self.radii.is_empty() {
            return Err(GceError::Validation("radii must be non-empty".into()));
        }
        for &r in &self.radii {
            if !(r.is_finite() && r > self.body.radius) {
                return Err(GceError::Validation(format!(
                    "every radius must exceed the body radius {} m, got {r}",
                    self.body.radius
                )));
            }
        }
        if self.methods.is_empty() {
            return Err(GceError::Validation("methods must be non-empty".into()));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(GceError::Validation(format!("method '{m}' listed twice")));
            }
        }
        self.integrator
            .validate()
            .map_err(|e| GceError::Validation(format!("integrator: {e}")))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Body,
    Orbit,
    Run,
}

#[derive(Default)]
struct RawScenario {
    preset: Option<Preset>,
    mass: Option<f64>,
    radius: Option<f64>,
    spin: Option<f64>,
    radii: Option<Vec<f64>>,
    methods: Option<Vec<Method>>,
    rel_tol: Option<f64>,
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GceError::Io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    parse_scenario(&text, &name, path)
}

/// Parses scenario text; `origin` only labels error messages.
pub fn parse_scenario(text: &str, name: &str, origin: &Path) -> Result<Scenario> {
    let parse_err = |line: usize, message: String| GceError::Parse {
        path: PathBuf::from(origin),
        line,
        message,
    };

    let mut raw = RawScenario::default();
    let mut section = None;
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = full_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line_no, format!("malformed section header '{line}'")))?
                .trim();
            section = Some(match header {
                "body" => Section::Body,
                "orbit" => Section::Orbit,
                "run" => Section::Run,
                other => return Err(parse_err(line_no, format!("unknown section [{other}]"))),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let section = section
            .ok_or_else(|| parse_err(line_no, format!("key '{key}' appears before any section")))?;

        let number = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(line_no, format!("'{key}': '{v}' is not a finite number")))
        };
        let duplicate = || parse_err(line_no, format!("duplicate key '{key}'"));

        match (section, key) {
            (Section::Body, "preset") => {
                let preset = Preset::from_name(value)
                    .ok_or_else(|| parse_err(line_no, format!("unknown preset '{value}'")))?;
                if raw.preset.replace(preset).is_some() {
                    return Err(duplicate());
                }
            }
            (Section::Body, "mass_kg") => {
                if raw.mass.replace(number(value)?).is_some() {
                    return Err(duplicate());
                }
            }
            (Section::Body, "radius_m") => {
                if raw.radius.replace(number(value)?).is_some() {
                    return Err(duplicate());
                }
            }
            (Section::Body, "spin_omega_rad_s") => {
                if raw.spin.replace(number(value)?).is_some() {
                    return Err(duplicate());
                }
            }
            (Section::Orbit, "radii_m") => {
                let radii = split_list(value)
                    .into_iter()
                    .map(number)
                    .collect::<Result<Vec<_>>>()?;
                if raw.radii.replace(radii).is_some() {
                    return Err(duplicate());
                }
            }
            (Section::Run, "methods") => {
                let methods = split_list(value)
                    .into_iter()
                    .map(|m| {
                        m.parse::<Method>()
                            .map_err(|e| parse_err(line_no, e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if raw.methods.replace(methods).is_some() {
                    return Err(duplicate());
                }
            }
            (Section::Run, "rel_tol") => {
                if raw.rel_tol.replace(number(value)?).is_some() {
                    return Err(duplicate());
                }
            }
            (section, key) => {
                return Err(parse_err(
                    line_no,
                    format!("unknown key '{key}' in [{}]", section_name(section)),
                ));
            }
        }
    }

    let scenario = raw.into_scenario(name)?;
    scenario.validate()?;
    Ok(scenario)
}

fn section_name(section: Section) -> &'static str {
    match section {
        Section::Body => "body",
        Section::Orbit => "orbit",
        Section::Run => "run",
    }
}

/// Comma-separated items, optionally wrapped in brackets; `[]` is empty.
fn split_list(value: &str) -> Vec<&str> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .unwrap_or(value)
        .trim();
    if inner.is_empty() {
        return Vec::new();
    }
    inner.split(',').map(str::trim).collect()
}

impl RawScenario {
    fn into_scenario(self, name: &str) -> Result<Scenario> {
        let (base, constants) = match self.preset {
            Some(p) => (Some(p.body()), p.constants()),
            None => (None, PhysicalConstants::default()),
        };
        let missing = |key: &str| GceError::Validation(format!("[body] needs '{key}' or a preset"));
        let body = CentralBody {
            mass: self
                .mass
                .or(base.map(|b| b.mass))
                .ok_or_else(|| missing("mass_kg"))?,
            radius: self
                .radius
                .or(base.map(|b| b.radius))
                .ok_or_else(|| missing("radius_m"))?,
            spin_omega: self
                .spin
                .or(base.map(|b| b.spin_omega))
                .ok_or_else(|| missing("spin_omega_rad_s"))?,
            inertia_factor: crate::constants::UNIFORM_SPHERE_INERTIA_FACTOR,
        };
        let mut integrator = IntegratorConfig::default();
        if let Some(tol) = self.rel_tol {
            integrator.relative_tolerance = tol;
        }
        Ok(Scenario {
            name: name.to_string(),
            body,
            constants,
            radii: self
                .radii
                .ok_or_else(|| GceError::Validation("[orbit] needs 'radii_m'".into()))?,
            methods: self
                .methods
                .ok_or_else(|| GceError::Validation("[run] needs 'methods'".into()))?,
            integrator,
        })
    }
}
