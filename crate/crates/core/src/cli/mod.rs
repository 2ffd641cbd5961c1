//! Command-line front end: `spectrum`, `critical`, `sweep`, `wavefunction`
//! and `verify` subcommands.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or validation error.

pub mod output;
pub mod svg;
pub mod sweep;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::model::{ModelError, RawConfig, WellConfig};
use crate::oracle::{
    self, OracleError, RandomRanges, ValidationReport, DEFAULT_POINTS, MIN_POINTS,
};
use crate::spectrum::{self, SpectrumError};
use crate::wavefunction;
use output::{fixed4, sig12, write_atomic, CsvTable};
use svg::LinePlot;
use sweep::{run_sweep, SweepParameter, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pdmwell",
    version,
    about = "Bound states of square wells with a position-dependent (step) mass, in units with hbar^2 = 2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels of one well.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Critical widths or inside masses at which levels appear.
    #[command(allow_negative_numbers = true)]
    Critical(CriticalArgs),
    /// Energy levels as one parameter is swept.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Tabulate psi and phi = psi/sqrt(m) of one level.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Cross-check the transcendental solver against the numerical oracles.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

/// Well parameters; flags override values read from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct WellArgs {
    /// Outside mass.
    #[arg(long)]
    pub m1: Option<f64>,
    /// Inside mass.
    #[arg(long)]
    pub m2: Option<f64>,
    /// Left barrier height.
    #[arg(long = "V1")]
    pub v1: Option<f64>,
    /// Right barrier height (>= V1).
    #[arg(long = "V2")]
    pub v2: Option<f64>,
    /// Half-width of the well.
    #[arg(long)]
    pub a: Option<f64>,
    /// `key = value` file with keys m1, m2, V1, V2, a.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriticalKind {
    /// Half-width `a`, given m1, m2, V1, V2.
    Width,
    /// Inside mass `m2`, given m1, V1, V2, a.
    InsideMass,
    /// Inside mass of a symmetric well, given V (= V1) and a.
    SymmetricMass,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[arg(long, value_enum)]
    pub which: CriticalKind,
    /// Highest level index to report.
    #[arg(long, default_value_t = 6)]
    pub nmax: i64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Swept parameter: a, m1, m2, V1 or V2.
    #[arg(long)]
    pub param: SweepParameter,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Tie m1 to m2 at every point.
    #[arg(long)]
    pub constant_mass: bool,
    /// Extra dashed curves with m1 replaced by each value (SVG only).
    #[arg(long, value_delimiter = ',')]
    pub overlay_m1: Vec<f64>,
    /// Extra dashed constant-mass curves (SVG only).
    #[arg(long)]
    pub overlay_constant_mass: bool,
    /// CSV output; printed to stdout when neither --csv nor --svg is given.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Level index, starting at 1.
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    /// Left end of the table; defaults to a + 5 decay lengths on each side.
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Seed of the randomized configs (used when no well is given).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Oracle grid points.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Error carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e.key() {
            Some(key) => Failure::usage(format!("invalid `{key}`: {e}")),
            None => Failure::usage(e.to_string()),
        }
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Model(m) => m.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<sweep::SweepError> for Failure {
    fn from(e: sweep::SweepError) -> Self {
        match e.key() {
            Some(key) => Failure::usage(format!("invalid `{key}`: {e}")),
            None => Failure::usage(e.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Critical(a) => cmd_critical(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Wavefunction(a) => cmd_wavefunction(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

impl WellArgs {
    fn flags(&self) -> RawConfig {
        RawConfig {
            m1: self.m1,
            m2: self.m2,
            v1: self.v1,
            v2: self.v2,
            a: self.a,
        }
    }

    fn is_empty(&self) -> bool {
        self.config.is_none() && self.flags() == RawConfig::default()
    }

    /// Flags merged over the config file, not yet validated.
    fn raw(&self) -> Result<RawConfig, Failure> {
        let flags = self.flags();
        match &self.config {
            None => Ok(flags),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                let file: RawConfig = text.parse()?;
                Ok(flags.or(file))
            }
        }
    }

    fn resolve(&self) -> Result<WellConfig, Failure> {
        Ok(self.raw()?.validate()?)
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    write_atomic(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn print(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

fn cmd_spectrum(args: &SpectrumArgs, out: &mut dyn Write) -> CmdResult {
    let config = args.well.resolve()?;
    let s = spectrum::energy_levels(&config)?;

    let mut text = String::new();
    let _ = writeln!(text, "# {config}");
    let _ = writeln!(text, "N = {}", s.len());
    if !s.is_empty() {
        let _ = writeln!(
            text,
            "{:>3}  {:<6}  {:>16}  {:>16}  {:>16}  {:>16}  {:>16}",
            "n", "parity", "E", "k1", "k2", "k3", "theta"
        );
    }
    let mut csv = CsvTable::new(&["n", "parity", "E", "k1", "k2", "k3", "theta"]);
    for st in &s.states {
        let fields = [
            st.n.to_string(),
            st.parity.token().to_string(),
            sig12(st.energy),
            sig12(st.k1),
            sig12(st.k2),
            sig12(st.k3),
            sig12(st.theta),
        ];
        let _ = writeln!(
            text,
            "{:>3}  {:<6}  {:>16}  {:>16}  {:>16}  {:>16}  {:>16}",
            fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], fields[6]
        );
        csv.push_row(fields);
    }
    if let Some(path) = &args.csv {
        write_file(path, &csv.into_string())?;
    }
    print(out, &text)?;
    Ok(EXIT_OK)
}

/// Critical values for levels `1..=nmax`.
pub fn critical_values(
    which: CriticalKind,
    raw: RawConfig,
    nmax: usize,
) -> Result<Vec<f64>, SpectrumError> {
    let need = |v: Option<f64>, key| v.ok_or(SpectrumError::Model(ModelError::MissingKey(key)));
    (1..=nmax)
        .map(|n| match which {
            CriticalKind::Width => spectrum::critical_width(
                need(raw.m1, "m1")?,
                need(raw.m2, "m2")?,
                need(raw.v1, "V1")?,
                need(raw.v2, "V2")?,
                n,
            ),
            CriticalKind::InsideMass => spectrum::critical_inside_mass(
                need(raw.m1, "m1")?,
                need(raw.v1, "V1")?,
                need(raw.v2, "V2")?,
                need(raw.a, "a")?,
                n,
            ),
            CriticalKind::SymmetricMass => {
                let v = need(raw.v1.or(raw.v2), "V1")?;
                if let (Some(v1), Some(v2)) = (raw.v1, raw.v2) {
                    if v1 != v2 {
                        return Err(SpectrumError::NotSymmetric);
                    }
                }
                spectrum::critical_mass_symmetric(v, need(raw.a, "a")?, n)
            }
        })
        .collect()
}

fn cmd_critical(args: &CriticalArgs, out: &mut dyn Write) -> CmdResult {
    if args.nmax < 1 {
        return Err(Failure::usage(format!(
            "invalid `nmax`: must be >= 1, got {}",
            args.nmax
        )));
    }
    let raw = args.well.raw()?;
    let values = critical_values(args.which, raw, args.nmax as usize)?;
    let label = match args.which {
        CriticalKind::Width => "a",
        CriticalKind::InsideMass | CriticalKind::SymmetricMass => "m2",
    };

    let mut text = format!("{:>3}  {:>12}\n", "N", label);
    let mut csv = CsvTable::new(&["N", label]);
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(text, "{:>3}  {:>12}", i + 1, fixed4(*v));
        csv.push_row([(i + 1).to_string(), sig12(*v)]);
    }
    if let Some(path) = &args.csv {
        write_file(path, &csv.into_string())?;
    }
    print(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let fixed = args.well.raw()?;
    let spec = SweepSpec {
        parameter: args.param,
        start: args.start,
        stop: args.stop,
        steps: args.steps,
        fixed,
        constant_mass: args.constant_mass,
    };
    let main = run_sweep(&spec)?;

    let mut overlays = Vec::new();
    for &m1 in &args.overlay_m1 {
        let overlay = SweepSpec {
            fixed: RawConfig {
                m1: Some(m1),
                ..fixed
            },
            constant_mass: false,
            ..spec.clone()
        };
        overlays.push((format!("m1={}", sig12(m1)), run_sweep(&overlay)?));
    }
    if args.overlay_constant_mass {
        let overlay = SweepSpec {
            constant_mass: true,
            ..spec.clone()
        };
        overlays.push(("m1=m2".to_string(), run_sweep(&overlay)?));
    }

    let csv = main.to_csv();
    if let Some(path) = &args.svg {
        let mut plot: LinePlot = main.to_plot();
        for (label, result) in &overlays {
            plot.series.extend(result.series(label, true));
        }
        write_file(path, &plot.render())?;
    }
    match (&args.csv, &args.svg) {
        (Some(path), _) => write_file(path, &csv.into_string())?,
        (None, None) => print(out, &csv.into_string())?,
        (None, Some(_)) => {}
    }
    Ok(EXIT_OK)
}

fn cmd_wavefunction(args: &WavefunctionArgs, out: &mut dyn Write) -> CmdResult {
    let config = args.well.resolve()?;
    let s = spectrum::energy_levels(&config)?;
    if args.level == 0 || args.level > s.len() {
        return Err(Failure::usage(format!(
            "invalid `level`: well has {} bound state(s), got {}",
            s.len(),
            args.level
        )));
    }
    if args.points < 2 {
        return Err(Failure::usage("invalid `points`: need at least 2"));
    }
    let state = &s.states[args.level - 1];
    let wf = wavefunction::build(&config, state)
        .map_err(|e| Failure::usage(format!("cannot build level {}: {e}", args.level)))?;
    let reach = config.a() + 5.0 / wf.slowest_decay();
    let x_min = args.start.unwrap_or(-reach);
    let x_max = args.stop.unwrap_or(reach);
    if !(x_min < x_max) {
        return Err(Failure::usage(format!(
            "invalid range: start ({x_min}) must be below stop ({x_max})"
        )));
    }
    let mut csv = CsvTable::new(&["x", "psi", "phi"]);
    for (x, psi, phi) in wf.tabulate(x_min, x_max, args.points) {
        csv.push_row([sig12(x), sig12(psi), sig12(phi)]);
    }
    emit(out, args.csv.as_deref(), &csv.into_string())?;
    Ok(EXIT_OK)
}

fn opt_sig12(v: Option<f64>) -> String {
    v.map(sig12).unwrap_or_else(|| "nan".to_string())
}

/// Appends one CSV row per level of `report`.
fn push_report(csv: &mut CsvTable, report: &ValidationReport) {
    let c = &report.config;
    for level in &report.levels {
        csv.push_row([
            sig12(c.m1()),
            sig12(c.m2()),
            sig12(c.v1()),
            sig12(c.v2()),
            sig12(c.a()),
            level.n.to_string(),
            opt_sig12(level.transcendental),
            opt_sig12(level.finite_difference),
            opt_sig12(level.shooting),
            sig12(level.max_delta()),
        ]);
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if !(args.tol > 0.0) {
        return Err(Failure::usage(format!(
            "invalid `tol`: must be positive, got {}",
            args.tol
        )));
    }
    if args.points < MIN_POINTS {
        return Err(Failure::usage(format!(
            "invalid `points`: need at least {MIN_POINTS}, got {}",
            args.points
        )));
    }
    let configs = match (args.well.is_empty(), args.seed) {
        (false, None) => vec![args.well.resolve()?],
        (true, Some(seed)) => {
            if args.count == 0 {
                return Err(Failure::usage("invalid `count`: must be >= 1"));
            }
            oracle::random_configs(seed, args.count, &RandomRanges::default())
        }
        (false, Some(_)) => {
            return Err(Failure::usage(
                "give either a well (flags or --config) or --seed, not both",
            ))
        }
        (true, None) => return Err(Failure::usage("give a well (flags or --config) or --seed")),
    };

    let outcomes: Vec<Result<ValidationReport, OracleError>> = configs
        .par_iter()
        .map(|c| oracle::cross_validate_with(c, args.tol, args.points))
        .collect();

    let mut csv = CsvTable::new(&[
        "m1",
        "m2",
        "V1",
        "V2",
        "a",
        "n",
        "E_trans",
        "E_fd",
        "E_shoot",
        "max_delta",
    ]);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for (config, outcome) in configs.iter().zip(&outcomes) {
        match outcome {
            Ok(report) => {
                worst = worst.max(report.max_delta());
                push_report(&mut csv, report);
            }
            Err(OracleError::ValidationMismatch(report)) => {
                failures += 1;
                worst = worst.max(report.max_delta());
                push_report(&mut csv, report);
                let _ = writeln!(
                    err,
                    "mismatch: {config}: counts {}/{}/{}, max |dE| = {:e}",
                    report.transcendental_count,
                    report.fd_count,
                    report.shooting_count,
                    report.max_delta()
                );
            }
            Err(e) => {
                failures += 1;
                let _ = writeln!(err, "failed: {config}: {e}");
            }
        }
    }

    emit(out, args.csv.as_deref(), &csv.into_string())?;
    let _ = writeln!(
        err,
        "verified {} config(s): {} mismatch(es), worst |dE| = {:e}, tol = {:e}",
        configs.len(),
        failures,
        worst,
        args.tol
    );
    Ok(if failures == 0 {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}
