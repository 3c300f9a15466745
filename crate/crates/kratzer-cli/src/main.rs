//! `kratzer`: classify couplings, tabulate spectra, sample eigenfunctions,
//! potentials and Green functions, and run the verification suite.

mod args;
mod output;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kratzer::greens::green;
use kratzer::model::{classify, potential_profile, CouplingParams, ExtensionParam, MuValue, RangeId};
use kratzer::spectral::{
    assemble_spectrum, discrete_spectrum, eigenfunction, theta_level, threshold_param, DiscreteLevel,
};
use kratzer::{Complex64, Error};

use args::{parse_angle, parse_grid, Grid};
use output::{csv, emit, json, num};

#[derive(Parser)]
#[command(name = "kratzer", version, about = "Spectral data of the generalized Kratzer operator -d²/dx² + g1/x + g2/x²")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Coupling {
    #[arg(long, allow_hyphen_values = true)]
    g1: f64,
    #[arg(long, allow_hyphen_values = true)]
    g2: f64,
    /// Reference scale of the boundary conditions.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    k0: f64,
}

#[derive(Args, Clone)]
struct Extension {
    /// Extension angle in radians; `pi` fractions allowed (`-pi/2`, `3pi/4`).
    /// Defaults to 0; not accepted when g2 >= 3/4.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angle)]
    angle: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Range, μ, deficiency indices, extension family and threshold angle.
    Classify {
        #[command(flatten)]
        coupling: Coupling,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectrum report (JSON) with density and level tables (CSV).
    Spectrum {
        #[command(flatten)]
        coupling: Coupling,
        #[command(flatten)]
        ext: Extension,
        /// Lower end of the level window [default: -1e4·max(g1², k0²)].
        #[arg(long, allow_hyphen_values = true)]
        emin: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        emax: f64,
        /// Maximum number of discrete levels listed.
        #[arg(long, default_value_t = 20)]
        levels: usize,
        /// Energies E >= 0 at which the density is sampled.
        #[arg(long, default_value = "log:1e-3:1e2:51", value_parser = parse_grid)]
        grid: Grid,
        /// Output directory for spectrum.json, density.csv and levels.csv;
        /// without it the report is printed.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The potential g1/x + g2/x² on a grid.
    Profile {
        #[command(flatten)]
        coupling: Coupling,
        #[arg(long, default_value = "0.1:5:50", value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The normalized eigenfunction of discrete level n on a grid.
    Eigenfunction {
        #[command(flatten)]
        coupling: Coupling,
        #[command(flatten)]
        ext: Extension,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Lower end of the level search [default: -1e4·max(g1², k0²)].
        #[arg(long, allow_hyphen_values = true)]
        emin: Option<f64>,
        #[arg(long, default_value = "log:1e-3:50:200", value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// G(x, y; W) on every pair of grid points.
    Green {
        #[command(flatten)]
        coupling: Coupling,
        #[command(flatten)]
        ext: Extension,
        #[arg(long, allow_hyphen_values = true)]
        w_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        w_im: f64,
        #[arg(long, default_value = "0.1:3:8", value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded self-checks; exit status 1 names the failing checks.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Ranges to check (1-5), comma separated [default: all].
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=5))]
        range: Vec<u8>,
        /// Levels per orthonormality, interlacing and oracle check.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Threshold replacing every per-check tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// Invalid input: exit 2.
    Usage(String),
    /// Computation or verification failure: exit 1.
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidCoupling(_) | Error::InvalidExtension(_) => Failure::Usage(e.to_string()),
            e => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(format!("i/o: {e}"))
    }
}

type Outcome = Result<(), Failure>;

impl Coupling {
    fn params(self) -> Result<CouplingParams, Failure> {
        CouplingParams::new(self.g1, self.g2, self.k0).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn default_emin(self) -> f64 {
        -1e4 * self.g1.abs().max(self.k0).powi(2)
    }
}

fn extension(p: &CouplingParams, ext: &Extension) -> Result<ExtensionParam, Failure> {
    let r = classify(p)?.range_id;
    let angle = match (r, ext.angle) {
        (RangeId::R1, None) => None,
        (RangeId::R1, Some(_)) => {
            return Err(Failure::Usage("g2 >= 3/4 has a unique extension; --angle is not accepted".into()))
        }
        (_, a) => Some(a.unwrap_or(0.0)),
    };
    Ok(ExtensionParam::new(r, angle)?)
}

#[derive(Serialize)]
struct Classification {
    params: CouplingParams,
    range: RangeId,
    mu: MuValue,
    deficiency: (u8, u8),
    /// `unique`, or the name of the extension angle.
    family: String,
    angle_interval: Option<(f64, f64)>,
    /// Extension angle carrying the E = 0 eigenvalue (g1 > 0 only).
    threshold_angle: Option<f64>,
}

fn cmd_classify(c: Coupling, format: Format, out: Option<&Path>) -> Outcome {
    let p = c.params()?;
    let class = classify(&p)?;
    let r = class.range_id;
    let threshold_angle = if p.g1 > 0.0 && r != RangeId::R1 { Some(threshold_param(&p)?) } else { None };
    let report = Classification {
        params: p,
        range: r,
        mu: class.mu,
        deficiency: class.deficiency,
        family: r.angle_name().unwrap_or("unique").to_string(),
        angle_interval: r.angle_interval(),
        threshold_angle,
    };
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
            let (lo, hi) = report.angle_interval.unzip();
            let rows = [
                ("range", format!("{r:?}")),
                ("mu_kind", format!("{:?}", class.mu.kind).to_lowercase()),
                ("mu_magnitude", num(class.mu.magnitude)),
                ("deficiency", format!("({};{})", class.deficiency.0, class.deficiency.1)),
                ("family", report.family.clone()),
                ("angle_min", opt(lo)),
                ("angle_max", opt(hi)),
                ("threshold_angle", opt(threshold_angle)),
            ];
            csv(&["key", "value"], &rows.map(|(k, v)| vec![k.to_string(), v]))
        }
    };
    Ok(emit(out, &text)?)
}

fn check_window(emin: f64, emax: f64) -> Result<(), Failure> {
    if emin.is_finite() && emin < emax && emax <= 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("level window needs emin < emax <= 0, got ({emin}, {emax})")))
    }
}

fn cmd_spectrum(
    c: Coupling,
    ext: &Extension,
    emin: Option<f64>,
    emax: f64,
    levels: usize,
    grid: &[f64],
    out: Option<&Path>,
) -> Outcome {
    let p = c.params()?;
    let ext = extension(&p, ext)?;
    let emin = emin.unwrap_or(c.default_emin());
    check_window(emin, emax)?;
    if let Some(e) = grid.iter().find(|e| !(**e >= 0.0)) {
        return Err(Failure::Usage(format!("density energies must be >= 0, got {e}")));
    }
    let report = assemble_spectrum(&p, &ext, (emin, emax), grid, levels)?;
    let Some(dir) = out else {
        return Ok(emit(None, &json(&report))?);
    };
    fs::create_dir_all(dir)?;
    fs::write(dir.join("spectrum.json"), json(&report))?;
    let rows: Vec<Vec<String>> =
        report.continuum.samples.iter().map(|s| vec![num(s.energy), num(s.density)]).collect();
    fs::write(dir.join("density.csv"), csv(&["energy", "density"], &rows))?;
    let rows: Vec<Vec<String>> =
        report.discrete.iter().map(|l| vec![l.n.to_string(), num(l.energy), num(l.weight_q)]).collect();
    fs::write(dir.join("levels.csv"), csv(&["n", "energy", "weight_q"], &rows))?;
    Ok(())
}

#[derive(Serialize)]
struct Point {
    x: f64,
    value: f64,
}

fn points(xs: &[f64], vs: &[f64], header: &str, format: Format) -> String {
    match format {
        Format::Csv => csv(&["x", header], &xs.iter().zip(vs).map(|(x, v)| vec![num(*x), num(*v)]).collect::<Vec<_>>()),
        Format::Json => json(&xs.iter().zip(vs).map(|(&x, &value)| Point { x, value }).collect::<Vec<_>>()),
    }
}

fn check_positions(xs: &[f64]) -> Result<(), Failure> {
    match xs.iter().find(|x| !(**x > 0.0)) {
        Some(x) => Err(Failure::Usage(format!("positions must satisfy x > 0, got {x}"))),
        None => Ok(()),
    }
}

fn cmd_profile(c: Coupling, grid: &[f64], format: Format, out: Option<&Path>) -> Outcome {
    let p = c.params()?;
    check_positions(grid)?;
    let v = potential_profile(&p, grid)?;
    Ok(emit(out, &points(grid, &v, "potential", format))?)
}

/// Level n: directly by index in the θ family, otherwise searched in
/// (emin, 0).
fn find_level(p: &CouplingParams, ext: &ExtensionParam, n: i64, emin: f64) -> Result<DiscreteLevel, Failure> {
    if ext.range_id == RangeId::R4 {
        return Ok(theta_level(p, ext, n)?);
    }
    if n < 0 {
        return Err(Failure::Usage(format!("level index must be >= 0 outside g2 < -1/4, got {n}")));
    }
    // levels are finite in number for g1 > 0; for g1 < 0 the lowest n + 1 suffice
    let limit = if p.g1 > 0.0 { 10_000 } else { n as usize + 1 };
    discrete_spectrum(p, ext, (emin, 0.0), limit)?
        .into_iter()
        .find(|l| l.n == n)
        .ok_or_else(|| Failure::Run(format!("no level n = {n} in ({emin}, 0)")))
}

#[derive(Serialize)]
struct EigenDump {
    level: DiscreteLevel,
    samples: Vec<Point>,
}

fn cmd_eigenfunction(
    c: Coupling,
    ext: &Extension,
    n: i64,
    emin: Option<f64>,
    grid: &[f64],
    format: Format,
    out: Option<&Path>,
) -> Outcome {
    let p = c.params()?;
    let ext = extension(&p, ext)?;
    check_positions(grid)?;
    let emin = emin.unwrap_or(c.default_emin());
    check_window(emin, 0.0)?;
    let level = find_level(&p, &ext, n, emin)?;
    let vs = grid.iter().map(|&x| eigenfunction(&p, &ext, &level, x)).collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Csv => points(grid, &vs, "eigenfunction", format),
        Format::Json => json(&EigenDump {
            level,
            samples: grid.iter().zip(&vs).map(|(&x, &value)| Point { x, value }).collect(),
        }),
    };
    Ok(emit(out, &text)?)
}

fn cmd_green(c: Coupling, ext: &Extension, w: Complex64, grid: &[f64], format: Format, out: Option<&Path>) -> Outcome {
    let p = c.params()?;
    let ext = extension(&p, ext)?;
    check_positions(grid)?;
    let mut samples = Vec::with_capacity(grid.len() * grid.len());
    for &x in grid {
        for &y in grid {
            samples.push(green(&p, &ext, x, y, w)?);
        }
    }
    let text = match format {
        Format::Json => json(&samples),
        Format::Csv => {
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|s| vec![num(s.x), num(s.y), num(s.value.re), num(s.value.im)])
                .collect();
            csv(&["x", "y", "re", "im"], &rows)
        }
    };
    Ok(emit(out, &text)?)
}

fn cmd_verify(seed: u64, range: &[u8], levels: usize, tol: Option<f64>, out: Option<&Path>) -> Outcome {
    if let Some(t) = tol.filter(|t| !(*t >= 0.0)) {
        return Err(Failure::Usage(format!("--tol must be >= 0, got {t}")));
    }
    let ranges = if range.is_empty() {
        verify::ALL_RANGES.to_vec()
    } else {
        verify::ALL_RANGES.into_iter().filter(|r| range.contains(&r.index())).collect()
    };
    let summary = verify::run(&verify::VerifyConfig { seed, ranges, levels, tol });
    emit(out, &json(&summary))?;
    if summary.passed {
        Ok(())
    } else {
        Err(Failure::Run(format!("failed checks: {}", summary.failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Classify { coupling, format, out } => cmd_classify(*coupling, *format, out.as_deref()),
        Cmd::Spectrum { coupling, ext, emin, emax, levels, grid, out } => {
            cmd_spectrum(*coupling, ext, *emin, *emax, *levels, &grid.0, out.as_deref())
        }
        Cmd::Profile { coupling, grid, format, out } => cmd_profile(*coupling, &grid.0, *format, out.as_deref()),
        Cmd::Eigenfunction { coupling, ext, n, emin, grid, format, out } => {
            cmd_eigenfunction(*coupling, ext, *n, *emin, &grid.0, *format, out.as_deref())
        }
        Cmd::Green { coupling, ext, w_re, w_im, grid, format, out } => {
            cmd_green(*coupling, ext, Complex64::new(*w_re, *w_im), &grid.0, *format, out.as_deref())
        }
        Cmd::Verify { seed, range, levels, tol, out } => cmd_verify(*seed, range, *levels, *tol, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
