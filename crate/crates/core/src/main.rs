use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gmclock::oracle::{circular_launch, integrate_orbit, IntegrationSpan};
use gmclock::report::{emit_report, run_scenario, Format, ReportRow};
use gmclock::scenario::{load_scenario, Preset, Scenario};
use gmclock::{CentralBody, GceError, Method, OrbitSense, PhysicalConstants};

const EXIT_ROW_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "gmclock",
    version,
    about = "Gravitomagnetic clock effect calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Kerr circular-orbit periods
    Kerr(AnalyticArgs),
    /// Semiclassical rotor levels and closure periods
    Semiclassical(AnalyticArgs),
    /// Gravitomagnetic level splitting, first-order periods
    Gem(AnalyticArgs),
    /// Integrate co- and counter-rotating orbits and time them
    Integrate(IntegrateArgs),
    /// Scenario files
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Built-in bodies
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run every method and radius listed in a scenario file
    Run {
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
        /// Overrides the file's rel_tol
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

#[derive(Args)]
struct BodyArgs {
    /// Start from a built-in body (earth-uniform, toy-unit)
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    mass_kg: Option<f64>,
    #[arg(long)]
    radius_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    spin_omega_rad_s: Option<f64>,
    /// Orbital radii in metres (or scaled units), comma-separated
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    radii_m: Vec<f64>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    #[command(flatten)]
    body: BodyArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    body: BodyArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Integrator relative tolerance, in (0, 1e-6]
    #[arg(long)]
    tolerance: Option<f64>,
    /// Whole revolutions timed per orbit
    #[arg(long)]
    revolutions: Option<u32>,
    /// Directory for `t x y vx vy` trajectory tables, one file per radius and sense
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gmclock: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, GceError> {
    match cli.command {
        Command::Kerr(args) => analytic(Method::Kerr, args),
        Command::Semiclassical(args) => analytic(Method::Semiclassical, args),
        Command::Gem(args) => analytic(Method::Gem, args),
        Command::Integrate(args) => integrate(args),
        Command::Scenario {
            action:
                ScenarioAction::Run {
                    file,
                    output,
                    tolerance,
                },
        } => {
            let mut scenario = load_scenario(&file)?;
            if let Some(tol) = tolerance {
                scenario.integrator.relative_tolerance = tol;
                scenario.validate()?;
            }
            report(&scenario, &output)
        }
        Command::Presets {
            action: PresetAction::List,
        } => {
            for p in Preset::ALL {
                println!("{:<14} {}", p.name(), p.description());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn scenario_from_args(method: Method, body: &BodyArgs) -> Result<Scenario, GceError> {
    let (base, constants) = match body.preset.as_deref() {
        Some(name) => {
            let p = Preset::from_name(name)
                .ok_or_else(|| GceError::InvalidInput(format!("unknown preset '{name}'")))?;
            (Some(p.body()), p.constants())
        }
        None => (None, PhysicalConstants::default()),
    };
    let pick = |explicit: Option<f64>, preset: Option<f64>, flag: &str| {
        explicit
            .or(preset)
            .ok_or_else(|| GceError::InvalidInput(format!("--{flag} or --preset is required")))
    };
    let body_value = CentralBody::new(
        pick(body.mass_kg, base.map(|b| b.mass), "mass-kg")?,
        pick(body.radius_m, base.map(|b| b.radius), "radius-m")?,
        pick(
            body.spin_omega_rad_s,
            base.map(|b| b.spin_omega),
            "spin-omega-rad-s",
        )?,
    )?;
    let scenario = Scenario {
        name: method.to_string(),
        body: body_value,
        constants,
        radii: body.radii_m.clone(),
        methods: vec![method],
        integrator: Default::default(),
    };
    scenario.validate()?;
    Ok(scenario)
}

fn analytic(method: Method, args: AnalyticArgs) -> Result<ExitCode, GceError> {
    let scenario = scenario_from_args(method, &args.body)?;
    report(&scenario, &args.output)
}

fn integrate(args: IntegrateArgs) -> Result<ExitCode, GceError> {
    let mut scenario = scenario_from_args(Method::Oracle, &args.body)?;
    if let Some(tol) = args.tolerance {
        scenario.integrator.relative_tolerance = tol;
    }
    if let Some(n) = args.revolutions {
        scenario.integrator.revolutions = n;
    }
    scenario.validate()?;
    if let Some(dir) = &args.dump {
        dump_trajectories(&scenario, dir)?;
    }
    report(&scenario, &args.output)
}

fn dump_trajectories(scenario: &Scenario, dir: &Path) -> Result<(), GceError> {
    std::fs::create_dir_all(dir)?;
    for &r in &scenario.radii {
        for sense in [OrbitSense::Prograde, OrbitSense::Retrograde] {
            let launch = circular_launch(r, sense, &scenario.body, &scenario.constants)?;
            let trajectory = integrate_orbit(
                &launch,
                &scenario.body,
                &scenario.integrator,
                IntegrationSpan::Revolutions(scenario.integrator.revolutions),
                &scenario.constants,
            )?;
            let label = match sense {
                OrbitSense::Prograde => "prograde",
                OrbitSense::Retrograde => "retrograde",
            };
            let path = dir.join(format!("r_{r:e}_{label}.txt"));
            trajectory.write_table(BufWriter::new(File::create(path)?))?;
        }
    }
    Ok(())
}

fn report(scenario: &Scenario, output: &OutputArgs) -> Result<ExitCode, GceError> {
    let rows = run_scenario(scenario);
    write_rows(&rows, output)?;
    Ok(if rows.iter().any(|r| r.status.is_error()) {
        ExitCode::from(EXIT_ROW_ERROR)
    } else {
        ExitCode::SUCCESS
    })
}

fn write_rows(rows: &[ReportRow], output: &OutputArgs) -> Result<(), GceError> {
    match &output.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            emit_report(rows, output.format.into(), &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit_report(rows, output.format.into(), &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}
