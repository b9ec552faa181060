//! `multibrot` command line.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check or a
//! command fails at runtime, 2 on usage errors.

use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{compute_orbit, default_escape_radius, Complex, MultibrotParams, OrbitOutcome};
use crate::error::Error;
use crate::formats::{
    write_boundary_csv, write_boundary_svg, write_indents_csv, write_orbit_csv, write_ppm, BoundaryFormat, Colormap,
};
use crate::lobe::{indent_points, sample_boundary, DEFAULT_SAMPLES_PER_LOBE};
use crate::render::{default_view, render, GridSpec};
use crate::verify::verify_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "multibrot", version, about = "Higher-degree Mandelbrot sets: rendering, main-lobe geometry, orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render an escape-time image of the degree-n set as binary PPM.
    Render(RenderArgs),
    /// Sample the main-lobe boundary and write it as CSV or SVG.
    Boundary(BoundaryArgs),
    /// Iterate z^n + c from a seed and write the orbit as CSV.
    Orbit(OrbitArgs),
    /// List the indent points (lobe junctions) as CSV.
    Indents(IndentArgs),
    /// Run the verification suite and write a JSON report.
    Verify(VerifyArgs),
}

fn degree_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..)
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, value_parser = degree_parser())]
    pub degree: u32,
    #[arg(long, default_value_t = 800, value_parser = clap::value_parser!(u32).range(1..))]
    pub width: u32,
    #[arg(long, default_value_t = 800, value_parser = clap::value_parser!(u32).range(1..))]
    pub height: u32,
    /// Viewport centre as RE,IM. Defaults to the origin.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub center: Option<Complex>,
    /// Complex-plane units per pixel. Defaults to framing the main lobe.
    #[arg(long, value_parser = parse_positive, allow_hyphen_values = true)]
    pub scale: Option<f64>,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iter: u32,
    /// Worker threads. Defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[arg(long, value_enum, default_value_t = ColormapArg::Gray)]
    pub colormap: ColormapArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ColormapArg {
    Gray,
    Loggray,
}

impl From<ColormapArg> for Colormap {
    fn from(c: ColormapArg) -> Self {
        match c {
            ColormapArg::Gray => Colormap::Grayscale,
            ColormapArg::Loggray => Colormap::LogGrayscale,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long, value_parser = degree_parser())]
    pub degree: u32,
    /// Samples per lobe.
    #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_LOBE as u32, value_parser = clap::value_parser!(u32).range(8..))]
    pub samples: u32,
    /// Output format. Defaults to svg for a `.svg` path, csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, value_parser = degree_parser())]
    pub degree: u32,
    /// Parameter c as RE,IM.
    #[arg(long = "c", value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: Complex,
    /// Seed z0 as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub z0: Complex,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iter: u32,
    /// Output file. Defaults to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndentArgs {
    #[arg(long, value_parser = degree_parser())]
    pub degree: u32,
    /// Output file. Defaults to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Degrees as `A..B` (inclusive), a single value, or a comma-separated list of those.
    #[arg(long, value_parser = parse_degrees)]
    pub degrees: DegreeList,
    /// Where to write the JSON report. Defaults to standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeList(pub Vec<u32>);

pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    let z = Complex::new(re, im);
    if !z.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(z)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

pub fn parse_degrees(s: &str) -> Result<DegreeList, String> {
    let one = |t: &str| -> Result<u32, String> {
        let n: u32 = t.trim().parse().map_err(|_| format!("bad degree {t:?}"))?;
        if n < 2 {
            return Err(format!("degree must be at least 2, got {n}"));
        }
        Ok(n)
    };
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (one(a)?, one(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(one(part)?),
        }
    }
    Ok(DegreeList(out))
}

/// Opens the output before any work starts, so an unwritable path is a usage error.
fn open_output(path: &Path) -> Result<BufWriter<File>, String> {
    OpenOptions::new()
        .write(true)
        .create(true)
        .truncate(true)
        .open(path)
        .map(BufWriter::new)
        .map_err(|e| format!("--out/--report: cannot write {}: {e}", path.display()))
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::CapExceeded { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn io_failure(path: Option<&Path>) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| match path {
        Some(p) => Failure::Runtime(format!("{}: {e}", p.display())),
        None => Failure::Runtime(e.to_string()),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Render(args) => run_render(args, stderr),
        Command::Boundary(args) => run_boundary(args),
        Command::Orbit(args) => run_orbit(args, stdout, stderr),
        Command::Indents(args) => run_indents(args, stdout),
        Command::Verify(args) => run_verify(args, stdout, stderr),
    }
}

fn run_render(args: RenderArgs, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let mut spec: GridSpec = default_view(args.degree, args.width, args.height, args.max_iter)?;
    if let Some(center) = args.center {
        spec.center = center;
    }
    if let Some(scale) = args.scale {
        spec.scale = scale;
    }
    spec.validate(crate::render::DEFAULT_PIXEL_CAP)?;
    let threads = args
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut out = open_output(&args.out).map_err(Failure::Usage)?;

    let buffer = render(args.degree, &spec, threads)?;
    write_ppm(&buffer, args.colormap.into(), &mut out)
        .and_then(|_| out.flush())
        .map_err(io_failure(Some(&args.out)))?;
    let members = buffer.dwell().iter().filter(|&&d| d == crate::render::NOT_ESCAPED).count();
    let _ = writeln!(
        stderr,
        "rendered {}x{} (degree {}, {} threads, {} interior pixels) to {}",
        spec.width,
        spec.height,
        args.degree,
        threads,
        members,
        args.out.display()
    );
    Ok(EXIT_OK)
}

fn run_boundary(args: BoundaryArgs) -> Result<i32, Failure> {
    let format = match args.format {
        Some(FormatArg::Svg) => BoundaryFormat::Svg,
        Some(FormatArg::Csv) => BoundaryFormat::Csv,
        None if args.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")) => BoundaryFormat::Svg,
        None => BoundaryFormat::Csv,
    };
    let mut out = open_output(&args.out).map_err(Failure::Usage)?;
    let boundary = sample_boundary(args.degree, args.samples as usize)?;
    match format {
        BoundaryFormat::Csv => write_boundary_csv(&boundary, &mut out),
        BoundaryFormat::Svg => write_boundary_svg(&boundary, &mut out),
    }
    .and_then(|_| out.flush())
    .map_err(io_failure(Some(&args.out)))?;
    Ok(EXIT_OK)
}

fn run_orbit(args: OrbitArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let params = MultibrotParams::new(args.degree, args.c)?;
    let mut file = args.out.as_deref().map(open_output).transpose().map_err(Failure::Usage)?;
    let orbit = compute_orbit(&params, args.z0, args.max_iter, default_escape_radius(&params))?;
    match file.as_mut() {
        Some(f) => write_orbit_csv(&orbit, f).and_then(|_| f.flush()),
        None => write_orbit_csv(&orbit, stdout),
    }
    .map_err(io_failure(args.out.as_deref()))?;
    let summary = match orbit.outcome() {
        OrbitOutcome::Escaped { step, modulus } => format!("escaped at step {step} with |z| = {modulus}"),
        OrbitOutcome::BudgetExhausted => format!("bounded for {} steps", args.max_iter),
    };
    let _ = writeln!(stderr, "{summary}");
    Ok(EXIT_OK)
}

fn run_indents(args: IndentArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut file = args.out.as_deref().map(open_output).transpose().map_err(Failure::Usage)?;
    let indents = indent_points(args.degree)?;
    match file.as_mut() {
        Some(f) => write_indents_csv(&indents, f).and_then(|_| f.flush()),
        None => write_indents_csv(&indents, stdout),
    }
    .map_err(io_failure(args.out.as_deref()))?;
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let mut file = args.report.as_deref().map(open_output).transpose().map_err(Failure::Usage)?;
    let report = verify_suite(&args.degrees.0)?;
    let json = report.to_json();
    match file.as_mut() {
        Some(f) => writeln!(f, "{json}").and_then(|_| f.flush()),
        None => writeln!(stdout, "{json}"),
    }
    .map_err(io_failure(args.report.as_deref()))?;
    for d in &report.degrees {
        let _ = writeln!(stderr, "degree {:>3}: {}", d.degree, if d.pass { "pass" } else { "FAIL" });
    }
    Ok(if report.overall_pass { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("2..6").unwrap(), DegreeList(vec![2, 3, 4, 5, 6]));
        assert_eq!(parse_degrees("7").unwrap(), DegreeList(vec![7]));
        assert_eq!(parse_degrees("2..3,100").unwrap(), DegreeList(vec![2, 3, 100]));
        assert!(parse_degrees("1..4").is_err());
        assert!(parse_degrees("5..3").is_err());
        assert!(parse_degrees("2..").is_err());
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("-0.75,0.1").unwrap(), Complex::new(-0.75, 0.1));
        assert!(parse_complex("1").is_err());
        assert!(parse_complex("nan,0").is_err());
    }
}
