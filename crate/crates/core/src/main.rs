//! Command-line front end: sweeps, coalescence location, single-point
//! evaluation, self-validation, and preset listing.
//!
//! Exit codes are stable: 0 success, 1 usage error, 2 data or
//! I/O error, 3 validation failure.

use clap::{Args, Parser, Subcommand};
use epspectra::config;
use epspectra::ep;
use epspectra::output::csv;
use epspectra::output::json;
use epspectra::output::svg::{self, Quantity};
use epspectra::sweep::{self, SweepScenario};
use epspectra::validate;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "epspectra",
    version,
    about = "Spectral analysis of dissipative two-level Hamiltonians: \
             eigenvalue sweeps, coalescence location, phase rigidity, and plots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write CSV/JSON/SVG files
    Sweep(SweepArgs),
    /// Locate coalescence candidates inside the scenario window
    EpFind(EpFindArgs),
    /// Evaluate every recorded quantity at a single parameter value
    Point(PointArgs),
    /// Run the randomized self-validation suite
    Validate(ValidateArgs),
    /// List the built-in presets
    Presets,
}

/// Exactly one scenario source must be given.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScenarioSource {
    /// Built-in preset name (fig1l, fig1r, fig2l, fig2r, fig3l, fig3r)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Path to a scenario description file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args, Default)]
struct WindowOverrides {
    /// Override the sweep window start
    #[arg(long, value_name = "A", allow_hyphen_values = true)]
    a_min: Option<f64>,
    /// Override the sweep window end
    #[arg(long, value_name = "A", allow_hyphen_values = true)]
    a_max: Option<f64>,
    /// Override the number of grid points
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatKind {
    Csv,
    Json,
    Svg,
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    Quantity::parse(s).ok_or_else(|| {
        format!(
            "unknown quantity `{s}` (expected one of: energies, widths, rigidity, \
             one_minus_rigidity, mixing, alignment, source_term)"
        )
    })
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: ScenarioSource,
    #[command(flatten)]
    window: WindowOverrides,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Output formats, comma-separated
    #[arg(long, value_name = "LIST", default_value = "csv", value_delimiter = ',')]
    format: Vec<FormatKind>,
    /// SVG quantities to draw, comma-separated (default: all)
    #[arg(long, value_name = "LIST", value_delimiter = ',', value_parser = parse_quantity)]
    quantity: Option<Vec<Quantity>>,
}

#[derive(Args)]
struct EpFindArgs {
    #[command(flatten)]
    source: ScenarioSource,
    #[command(flatten)]
    window: WindowOverrides,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    source: ScenarioSource,
    /// Parameter value to evaluate at
    #[arg(long, value_name = "A", allow_hyphen_values = true)]
    a: f64,
}

#[derive(Args)]
struct ValidateArgs {
    /// RNG seed
    #[arg(long, default_value_t = validate::DEFAULT_SEED)]
    seed: u64,
    /// Number of random draws
    #[arg(long, default_value_t = validate::DEFAULT_SAMPLES)]
    samples: usize,
    /// Scale on the coalescence |Z| tolerance; 0 forces a failure
    /// (negative-control hook)
    #[arg(long, default_value_t = 1.0, hide = true)]
    ep_tol_scale: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Sweep(args) => {
            cmd_sweep(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EpFind(args) => {
            cmd_ep_find(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Point(args) => {
            cmd_point(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => Ok(cmd_validate(args)),
        Command::Presets => {
            cmd_presets();
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn resolve_scenario(
    source: &ScenarioSource,
    window: &WindowOverrides,
) -> Result<SweepScenario, String> {
    let mut scenario = if let Some(name) = &source.preset {
        sweep::preset(name).map_err(|e| e.to_string())?
    } else if let Some(path) = &source.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        config::parse_config(&text).map_err(|e| e.to_string())?
    } else {
        unreachable!("the argument group requires exactly one source")
    };
    if let Some(v) = window.a_min {
        scenario.a_min = v;
    }
    if let Some(v) = window.a_max {
        scenario.a_max = v;
    }
    if let Some(v) = window.steps {
        scenario.n_steps = v;
    }
    scenario.validate().map_err(|e| e.to_string())?;
    Ok(scenario)
}

/// Output file stem: the scenario name restricted to [A-Za-z0-9_-],
/// so a hostile name cannot escape the output directory.
fn sanitize_name(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if cleaned.is_empty() {
        "scenario".to_string()
    } else {
        cleaned
    }
}

fn write_output(path: &std::path::Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), String> {
    let scenario = resolve_scenario(&args.source, &args.window)?;
    let records = sweep::run_sweep(&scenario);
    let stem = sanitize_name(&scenario.name);
    std::fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;

    let mut formats: Vec<FormatKind> = Vec::new();
    for f in args.format {
        if !formats.contains(&f) {
            formats.push(f);
        }
    }
    let quantities = args
        .quantity
        .clone()
        .unwrap_or_else(|| Quantity::ALL.to_vec());

    for format in formats {
        match format {
            FormatKind::Csv => {
                let text = csv::to_csv(&records).map_err(|e| e.to_string())?;
                write_output(&args.out.join(format!("{stem}.csv")), &text)?;
            }
            FormatKind::Json => {
                let text = json::to_json(&records).map_err(|e| e.to_string())?;
                write_output(&args.out.join(format!("{stem}.json")), &text)?;
            }
            FormatKind::Svg => {
                for q in &quantities {
                    let text =
                        svg::to_svg(&scenario, &records, *q).map_err(|e| e.to_string())?;
                    write_output(
                        &args.out.join(format!("{stem}_{}.svg", q.as_str())),
                        &text,
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_ep_find(args: EpFindArgs) -> Result<(), String> {
    let scenario = resolve_scenario(&args.source, &args.window)?;
    let reports = ep::locate_eps(&scenario, (scenario.a_min, scenario.a_max))
        .map_err(|e| e.to_string())?;
    let text = serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn cmd_point(args: PointArgs) -> Result<(), String> {
    let scenario = resolve_scenario(&args.source, &WindowOverrides::default())?;
    if !args.a.is_finite() {
        return Err(format!("parameter value must be finite, got {}", args.a));
    }
    let record = sweep::evaluate_point(&scenario, args.a);
    let text = serde_json::to_string_pretty(&record).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> ExitCode {
    let report = validate::run_validate(args.seed, args.samples, args.ep_tol_scale);
    println!("{report}");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn preset_blurb(name: &str) -> &'static str {
    match name {
        "fig1l" => "crossing levels, equal widths, imaginary coupling: coalescences at a = 0.4, 0.6",
        "fig1r" => "crossing levels, unequal widths, complex coupling",
        "fig2l" => "equal levels, counter-varying widths, real coupling: coalescences at a = -2, 2",
        "fig2r" => "slightly detuned levels, counter-varying widths, complex coupling",
        "fig3l" => "fixed detuning, imaginary coupling swept in strength: coalescence at a = 1",
        "fig3r" => "equal levels, unequal widths, real coupling swept: coalescence at a = 0.5",
        _ => "",
    }
}

fn cmd_presets() {
    println!(
        "{:<8} {:>8} {:>8} {:>7}  description",
        "name", "a_min", "a_max", "steps"
    );
    for name in sweep::PRESET_NAMES {
        let s = sweep::preset(name).expect("built-in presets are valid");
        println!(
            "{:<8} {:>8} {:>8} {:>7}  {}",
            s.name,
            s.a_min,
            s.a_max,
            s.n_steps,
            preset_blurb(name)
        );
    }
}
