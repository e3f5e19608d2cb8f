//! Scenario orchestration and tabular output.

use std::io::Write;
use std::str::FromStr;

use crate::constants::{derive_body, keplerian_frequency, DerivedBody};
use crate::error::{GceError, Result};
use crate::gem::{first_order_epsilon, gem_clock_effect, level_pair, FIRST_ORDER_WARN_EPSILON};
use crate::kerr::{kerr_clock_effect, Method};
use crate::oracle::measure_clock_effect;
use crate::scenario::Scenario;
use crate::semiclassical::{level_energies, quantum_clock_effect};

pub const CSV_HEADER: [&str; 11] = [
    "scenario",
    "method",
    "r_m",
    "omega_k_rad_s",
    "t_plus_s",
    "t_minus_s",
    "delta_t_s",
    "delta_e_j",
    "epsilon",
    "energy_drift",
    "status",
];

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Warning(String),
    Error(String),
}

impl RowStatus {
    pub fn is_error(&self) -> bool {
        matches!(self, RowStatus::Error(_))
    }

    fn render(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::Warning(m) => format!("warning: {m}"),
            RowStatus::Error(m) => format!("error: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scenario: String,
    pub method: Method,
    pub r: f64,
    pub omega_k: Option<f64>,
    pub t_plus: Option<f64>,
    pub t_minus: Option<f64>,
    pub delta_t: Option<f64>,
    /// E+ - E- for the semiclassical and GEM routes.
    pub delta_e: Option<f64>,
    pub epsilon: Option<f64>,
    /// Oracle rows only.
    pub energy_drift: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = GceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(GceError::InvalidInput(format!(
                "unknown format '{other}' (csv or text)"
            ))),
        }
    }
}

/// One row per (method, radius): methods in scenario order, radii ascending.
/// Rows are computed on separate threads; a failing row is reported in its
/// status and does not stop the others.
pub fn run_scenario(scenario: &Scenario) -> Vec<ReportRow> {
    let mut radii = scenario.radii.clone();
    radii.sort_by(f64::total_cmp);
    let jobs: Vec<(Method, f64)> = scenario
        .methods
        .iter()
        .flat_map(|&m| radii.iter().map(move |&r| (m, r)))
        .collect();

    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(method, r)| scope.spawn(move || compute_row(scenario, method, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("report row computation panicked"))
            .collect()
    })
}

pub fn compute_row(scenario: &Scenario, method: Method, r: f64) -> ReportRow {
    let mut row = ReportRow {
        scenario: scenario.name.clone(),
        method,
        r,
        omega_k: None,
        t_plus: None,
        t_minus: None,
        delta_t: None,
        delta_e: None,
        epsilon: None,
        energy_drift: None,
        status: RowStatus::Ok,
    };
    if let Err(e) = fill_row(scenario, &mut row) {
        row.status = RowStatus::Error(e.to_string());
    }
    row
}

fn fill_row(scenario: &Scenario, row: &mut ReportRow) -> Result<()> {
    let consts = &scenario.constants;
    let body = &scenario.body;
    let derived: DerivedBody = derive_body(body, consts)?;
    let omega_k = keplerian_frequency(body.mass, row.r, consts)?;
    let epsilon = first_order_epsilon(derived.spin_j, body.mass, omega_k, consts);
    row.omega_k = Some(omega_k);
    row.epsilon = Some(epsilon);

    let report = match row.method {
        Method::Kerr => kerr_clock_effect(derived.spin_parameter_a, omega_k)?,
        Method::Semiclassical => {
            let (plus, minus) = level_energies(derived.spin_parameter_a, omega_k, consts)?;
            row.delta_e = Some(plus.energy - minus.energy);
            quantum_clock_effect(derived.spin_parameter_a, omega_k, consts)?
        }
        Method::Gem => {
            row.delta_e = Some(level_pair(derived.spin_j, body.mass, omega_k, consts)?.delta_e);
            if epsilon.abs() > FIRST_ORDER_WARN_EPSILON {
                row.status = RowStatus::Warning(format!(
                    "epsilon {epsilon:.3e} exceeds the first-order threshold {FIRST_ORDER_WARN_EPSILON:e}"
                ));
            }
            gem_clock_effect(derived.spin_j, body.mass, omega_k, consts)?
        }
        Method::Oracle => {
            let m = measure_clock_effect(body, row.r, &scenario.integrator, consts)?;
            row.energy_drift = m.max_energy_drift();
            m.report
        }
    };
    if !report.delta_t.is_finite() {
        return Err(GceError::Regime(format!(
            "non-finite period difference {}",
            report.delta_t
        )));
    }
    row.t_plus = Some(report.t_plus);
    row.t_minus = Some(report.t_minus);
    row.delta_t = Some(report.delta_t);
    Ok(())
}

/// 12 significant digits in scientific notation; empty when absent.
pub fn format_value(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.11e}"),
        None => String::new(),
    }
}

fn row_fields(row: &ReportRow) -> [String; 11] {
    [
        row.scenario.clone(),
        row.method.to_string(),
        format_value(Some(row.r)),
        format_value(row.omega_k),
        format_value(row.t_plus),
        format_value(row.t_minus),
        format_value(row.delta_t),
        format_value(row.delta_e),
        format_value(row.epsilon),
        format_value(row.energy_drift),
        row.status.render(),
    ]
}

pub fn emit_report<W: Write>(rows: &[ReportRow], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => emit_csv(rows, out),
        Format::Text => emit_text(rows, out),
    }
}

fn emit_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row_fields(row))?;
    }
    writer.flush()?;
    Ok(())
}

fn emit_text<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    let cells: Vec<[String; 11]> = rows
        .iter()
        .map(|r| {
            let mut f = row_fields(r);
            for cell in f.iter_mut() {
                if cell.is_empty() {
                    *cell = "-".into();
                }
            }
            f
        })
        .collect();
    let mut widths = CSV_HEADER.map(str::len);
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let last = CSV_HEADER.len() - 1;
    let line = |fields: &[&str]| -> String {
        let mut s = String::new();
        for (i, (field, width)) in fields.iter().zip(widths).enumerate() {
            if i == last {
                s.push_str(field);
            } else if i < 2 {
                s.push_str(&format!("{field:<width$}  "));
            } else {
                s.push_str(&format!("{field:>width$}  "));
            }
        }
        s
    };
    writeln!(out, "{}", line(&CSV_HEADER))?;
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        writeln!(out, "{}", line(&refs))?;
    }
    Ok(())
}
