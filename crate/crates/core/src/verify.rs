//! The verification suite behind `multibrot verify`: runs the geometric and
//! dynamical checks for a list of degrees and aggregates them into one report.

use std::f64::consts::{PI, TAU};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dynamics::Complex;
use crate::error::{check_degree, Error, Result};
use crate::formats::{ppm_bytes, Colormap};
use crate::lobe::{boundary_point, c_extrema, convergence_report, indent_points, locate_extrema, r_base};
use crate::render::{boundary_membership_check, default_view, render, Expectation, DEFAULT_SHRINK};

pub const POSITION_TOLERANCE: f64 = 1e-9;
pub const VALUE_TOLERANCE: f64 = 1e-12;
pub const ORACLE_BUDGET: u32 = 10_000;
pub const SCAN_POINTS_PER_LOBE: usize = 4096;

const HASH_GRID: u32 = 64;
const HASH_MAX_ITER: u32 = 200;
const HASH_WORKERS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub degree: u32,

    pub lobe_count: usize,
    pub lobe_count_pass: bool,
    /// Largest distance from a scanned minimum to the nearest `2 pi k`.
    pub minima_position_error: f64,
    pub minima_position_pass: bool,

    /// Only reported for degree 2.
    pub x_intercept_right: Option<f64>,
    pub x_intercept_left: Option<f64>,
    pub x_intercepts_pass: Option<bool>,

    /// `|c_max^2 - (a^2 + b^2 + 2ab)|` with `a = n^(-1/(n-1))`, `b = n^(-n/(n-1))`.
    pub c_max_sq_error: f64,
    /// `|c_min^2 - (a^2 + b^2 - 2ab)|`.
    pub c_min_sq_error: f64,
    pub indent_modulus_error: f64,
    pub extrema_pass: bool,

    pub oracle_interior_pass: bool,
    pub oracle_exterior_pass: bool,
    pub oracle_pass: bool,

    pub r_base: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub gap: f64,

    pub determinism_hash: String,
    pub determinism_pass: bool,

    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub degrees: Vec<DegreeReport>,
    /// The vanishing gap `c_max - c_min` strictly decreases across the listed degrees.
    pub gap_strictly_decreasing: bool,
    pub overall_pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn verify_suite(degrees: &[u32]) -> Result<VerifyReport> {
    if degrees.is_empty() {
        return Err(Error::invalid("no degrees to verify"));
    }
    for &n in degrees {
        check_degree(n)?;
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let reports = sorted.iter().map(|&n| verify_degree(n)).collect::<Result<Vec<_>>>()?;
    let rows = convergence_report(&sorted)?.rows;
    let gap_strictly_decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let overall_pass = gap_strictly_decreasing && reports.iter().all(|r| r.pass);
    Ok(VerifyReport {
        degrees: reports,
        gap_strictly_decreasing,
        overall_pass,
    })
}

fn verify_degree(n: u32) -> Result<DegreeReport> {
    let lobes = (n - 1) as usize;

    let scanned = locate_extrema(n, SCAN_POINTS_PER_LOBE)?;
    let lobe_count = scanned.minima.len();
    let minima_position_error = scanned
        .minima
        .iter()
        .map(|phi| {
            let k = (phi / TAU).round();
            (phi - TAU * k).abs()
        })
        .fold(0.0, f64::max);
    let lobe_count_pass = lobe_count == lobes;
    let minima_position_pass = lobe_count_pass && minima_position_error <= POSITION_TOLERANCE;

    let (x_intercept_right, x_intercept_left, x_intercepts_pass) = if n == 2 {
        let right = boundary_point(2, 0.0)?;
        let left = boundary_point(2, PI)?;
        let ok = (right - Complex::new(0.25, 0.0)).norm() <= VALUE_TOLERANCE
            && (left - Complex::new(-0.75, 0.0)).norm() <= VALUE_TOLERANCE;
        (Some(right.re), Some(left.re), Some(ok))
    } else {
        (None, None, None)
    };

    let (c_min, c_max) = c_extrema(n)?;
    let nf = n as f64;
    let a = nf.powf(-1.0 / (nf - 1.0));
    let b = nf.powf(-nf / (nf - 1.0));
    let c_max_sq_error = (c_max * c_max - (a * a + b * b + 2.0 * a * b)).abs();
    let c_min_sq_error = (c_min * c_min - (a * a + b * b - 2.0 * a * b)).abs();
    let indent_modulus_error = (indent_points(n)?.modulus - c_min).abs();
    let extrema_pass = c_max_sq_error <= VALUE_TOLERANCE
        && c_min_sq_error <= VALUE_TOLERANCE
        && indent_modulus_error <= VALUE_TOLERANCE;

    let check = boundary_membership_check(n, DEFAULT_SHRINK, ORACLE_BUDGET)?;
    let side_pass = |e: Expectation| check.points.iter().filter(|p| p.expected == e).all(|p| p.pass);
    let oracle_interior_pass = side_pass(Expectation::Member);
    let oracle_exterior_pass = side_pass(Expectation::Escaped);

    let spec = default_view(n, HASH_GRID, HASH_GRID, HASH_MAX_ITER)?;
    let serial = ppm_bytes(&render(n, &spec, 1)?, Colormap::Grayscale);
    let parallel = ppm_bytes(&render(n, &spec, HASH_WORKERS)?, Colormap::Grayscale);
    let determinism_pass = serial == parallel;
    let determinism_hash = hex(&Sha256::digest(&serial));

    let r = r_base(n)?;
    let pass = lobe_count_pass
        && minima_position_pass
        && x_intercepts_pass.unwrap_or(true)
        && extrema_pass
        && oracle_interior_pass
        && oracle_exterior_pass
        && determinism_pass;

    Ok(DegreeReport {
        degree: n,
        lobe_count,
        lobe_count_pass,
        minima_position_error,
        minima_position_pass,
        x_intercept_right,
        x_intercept_left,
        x_intercepts_pass,
        c_max_sq_error,
        c_min_sq_error,
        indent_modulus_error,
        extrema_pass,
        oracle_interior_pass,
        oracle_exterior_pass,
        oracle_pass: oracle_interior_pass && oracle_exterior_pass,
        r_base: r,
        c_min,
        c_max,
        gap: c_max - c_min,
        determinism_hash,
        determinism_pass,
        pass,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
