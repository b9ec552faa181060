//! File formats: orbit and boundary CSV, boundary SVG, binary PPM, and the
//! CSV tables for indents and membership checks.
//!
//! Real numbers are written in the shortest decimal form that parses back to
//! the same `f64` (never more than 17 significant digits). Lines end in LF.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::dynamics::{Complex, Orbit};
use crate::error::{Error, Result};
use crate::lobe::{IndentSet, LobeBoundary};
use crate::render::{DwellBuffer, Expectation, Membership, MembershipCheckReport, NOT_ESCAPED};

pub const ORBIT_CSV_HEADER: &str = "k,re,im";
pub const BOUNDARY_CSV_HEADER: &str = "phi,x,y";
pub const INDENT_CSV_HEADER: &str = "k,theta,re,im";
pub const CHECK_CSV_HEADER: &str = "n,theta,radius,expected,actual,pass";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryFormat {
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Colormap {
    #[default]
    Grayscale,
    LogGrayscale,
}

/// Shortest round-trip decimal, always with a fractional part or exponent.
pub fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn to_file(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<()> {
    let mut out = create(path)?;
    write(&mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

/// One row per stored iterate. When the orbit outgrew its storage cap, the
/// terminating iterate is appended with its true step index.
pub fn write_orbit_csv<W: Write + ?Sized>(orbit: &Orbit, out: &mut W) -> io::Result<()> {
    writeln!(out, "{ORBIT_CSV_HEADER}")?;
    for (k, z) in orbit.iterates().iter().enumerate() {
        writeln!(out, "{k},{},{}", fmt_real(z.re), fmt_real(z.im))?;
    }
    if orbit.is_truncated() {
        let z = orbit.last();
        writeln!(out, "{},{},{}", orbit.last_step(), fmt_real(z.re), fmt_real(z.im))?;
    }
    Ok(())
}

pub fn export_orbit_csv(orbit: &Orbit, path: &Path) -> Result<()> {
    to_file(path, |w| write_orbit_csv(orbit, w))
}

pub fn write_boundary_csv<W: Write + ?Sized>(boundary: &LobeBoundary, out: &mut W) -> io::Result<()> {
    writeln!(out, "{BOUNDARY_CSV_HEADER}")?;
    for s in boundary.samples() {
        writeln!(out, "{},{},{}", fmt_real(s.phi), fmt_real(s.point.re), fmt_real(s.point.im))?;
    }
    Ok(())
}

/// A single closed path through every sample, in a fixed `[-1.1, 1.1]^2`
/// viewBox. SVG's y axis points down, so the imaginary part is negated.
pub fn write_boundary_svg<W: Write + ?Sized>(boundary: &LobeBoundary, out: &mut W) -> io::Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.1 -1.1 2.2 2.2" width="800" height="800">"#
    )?;
    write!(out, r#"<path d=""#)?;
    for (k, s) in boundary.samples().iter().enumerate() {
        let cmd = if k == 0 { "M" } else { " L" };
        write!(out, "{cmd}{},{}", fmt_real(s.point.re), fmt_real(-s.point.im))?;
    }
    writeln!(out, r#" Z" fill="none" stroke="black" stroke-width="0.002"/>"#)?;
    writeln!(out, "</svg>")
}

pub fn export_boundary(boundary: &LobeBoundary, format: BoundaryFormat, path: &Path) -> Result<()> {
    if boundary.samples().is_empty() {
        return Err(Error::invalid("boundary has no samples"));
    }
    to_file(path, |w| match format {
        BoundaryFormat::Csv => write_boundary_csv(boundary, w),
        BoundaryFormat::Svg => write_boundary_svg(boundary, w),
    })
}

pub fn write_indents_csv<W: Write + ?Sized>(indents: &IndentSet, out: &mut W) -> io::Result<()> {
    writeln!(out, "{INDENT_CSV_HEADER}")?;
    for (k, (theta, p)) in indents.arguments.iter().zip(&indents.points).enumerate() {
        writeln!(out, "{k},{},{},{}", fmt_real(*theta), fmt_real(p.re), fmt_real(p.im))?;
    }
    Ok(())
}

pub fn write_check_csv<W: Write + ?Sized>(reports: &[MembershipCheckReport], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CHECK_CSV_HEADER}")?;
    for p in reports.iter().flat_map(|r| &r.points) {
        let expected = match p.expected {
            Expectation::Member => "member",
            Expectation::Escaped => "escaped",
        };
        let actual = match p.actual {
            Membership::Member => "member",
            Membership::Escaped(_) => "escaped",
        };
        writeln!(
            out,
            "{},{},{},{expected},{actual},{}",
            p.degree,
            fmt_real(p.theta),
            fmt_real(p.radius),
            p.pass
        )?;
    }
    Ok(())
}

/// Gray level for one dwell value.
///
/// Members are black. Escape step `k` maps to `round(255 (1 - k/K))`, or with
/// the log map `round(255 (1 - ln k / ln K))`, for budget `K`. With `K = 1` the
/// log map is undefined and every escaped pixel is black.
pub fn gray_level(dwell: u32, max_iter: u32, colormap: Colormap) -> u8 {
    if dwell == NOT_ESCAPED {
        return 0;
    }
    let k = dwell as f64;
    let budget = max_iter as f64;
    let frac = match colormap {
        Colormap::Grayscale => k / budget,
        Colormap::LogGrayscale if max_iter <= 1 => 1.0,
        Colormap::LogGrayscale => k.ln() / budget.ln(),
    };
    (255.0 * (1.0 - frac)).round().clamp(0.0, 255.0) as u8
}

/// Binary PPM (P6), top row first.
pub fn write_ppm<W: Write + ?Sized>(buffer: &DwellBuffer, colormap: Colormap, out: &mut W) -> io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", buffer.width(), buffer.height())?;
    let max_iter = buffer.max_iter();
    let mut row = Vec::with_capacity(buffer.width() as usize * 3);
    for j in 0..buffer.height() {
        row.clear();
        for &d in buffer.row(j) {
            let g = gray_level(d, max_iter, colormap);
            row.extend_from_slice(&[g, g, g]);
        }
        out.write_all(&row)?;
    }
    Ok(())
}

pub fn ppm_bytes(buffer: &DwellBuffer, colormap: Colormap) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(32 + buffer.dwell().len() * 3);
    write_ppm(buffer, colormap, &mut bytes).expect("writing to a Vec cannot fail");
    bytes
}

pub fn export_ppm(buffer: &DwellBuffer, colormap: Colormap, path: &Path) -> Result<()> {
    to_file(path, |w| write_ppm(buffer, colormap, w))
}

// Readers, used to check that written files parse back to the values in memory.

fn bad_data(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

fn parse_field<T: FromStr>(field: Option<&str>, line: usize) -> io::Result<T> {
    field
        .and_then(|f| f.trim().parse().ok())
        .ok_or_else(|| bad_data(format!("line {line}: malformed field")))
}

fn read_rows<R: BufRead>(input: R, header: &str) -> io::Result<Vec<[String; 3]>> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h == header => {}
        Some(Ok(h)) => return Err(bad_data(format!("expected header {header:?}, found {h:?}"))),
        Some(Err(e)) => return Err(e),
        None => return Err(bad_data("empty file")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let mut f = line.split(',');
        let row = [f.next(), f.next(), f.next()];
        if f.next().is_some() || row.iter().any(Option::is_none) {
            return Err(bad_data(format!("line {}: expected 3 fields", i + 2)));
        }
        rows.push(row.map(|x| x.unwrap_or_default().to_owned()));
    }
    Ok(rows)
}

pub fn read_orbit_csv<R: BufRead>(input: R) -> io::Result<Vec<(u32, Complex)>> {
    read_rows(input, ORBIT_CSV_HEADER)?
        .iter()
        .enumerate()
        .map(|(i, [k, re, im])| {
            let line = i + 2;
            Ok((
                parse_field(Some(k), line)?,
                Complex::new(parse_field(Some(re), line)?, parse_field(Some(im), line)?),
            ))
        })
        .collect()
}

pub fn read_boundary_csv<R: BufRead>(input: R) -> io::Result<Vec<(f64, Complex)>> {
    read_rows(input, BOUNDARY_CSV_HEADER)?
        .iter()
        .enumerate()
        .map(|(i, [phi, x, y])| {
            let line = i + 2;
            Ok((
                parse_field(Some(phi), line)?,
                Complex::new(parse_field(Some(x), line)?, parse_field(Some(y), line)?),
            ))
        })
        .collect()
}

/// Parsed P6 image: width, height and RGB bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpmImage {
    pub width: u32,
    pub height: u32,
    pub rgb: Vec<u8>,
}

/// Reads the `P6\n<w> <h>\n255\n` layout this crate writes.
pub fn read_ppm<R: Read>(mut input: R) -> io::Result<PpmImage> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut header_end = 0;
    let mut newlines = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'\n' {
            newlines += 1;
            if newlines == 3 {
                header_end = i + 1;
                break;
            }
        }
    }
    if newlines < 3 {
        return Err(bad_data("truncated PPM header"));
    }
    let header = std::str::from_utf8(&bytes[..header_end]).map_err(|_| bad_data("non-ASCII PPM header"))?;
    let mut parts = header.split_ascii_whitespace();
    if parts.next() != Some("P6") {
        return Err(bad_data("not a binary PPM"));
    }
    let width: u32 = parse_field(parts.next(), 2)?;
    let height: u32 = parse_field(parts.next(), 2)?;
    let maxval: u32 = parse_field(parts.next(), 3)?;
    if maxval != 255 {
        return Err(bad_data(format!("unsupported maxval {maxval}")));
    }
    let rgb = bytes[header_end..].to_vec();
    if rgb.len() != width as usize * height as usize * 3 {
        return Err(bad_data(format!(
            "pixel data has {} bytes, expected {}",
            rgb.len(),
            width as usize * height as usize * 3
        )));
    }
    Ok(PpmImage { width, height, rgb })
}
