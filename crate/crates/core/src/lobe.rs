//! Analytic geometry of the main lobe (the period-1 component) of the degree-`n`
//! Multibrot set.
//!
//! The boundary is the locus of parameters whose map has a neutral fixed
//! point. With `n z^(n-1) = cis(phi)` the fixed point is
//! `z = n^(-1/(n-1)) cis(phi/(n-1))` and the parameter is `c = z - z^n`.
//! Because of the `phi/(n-1)` the curve closes only after `phi` has advanced by
//! `2(n-1)pi`; each `2pi` of that traces one of the `n-1` lobes.
//!
//! Powers `n^(k/(n-1))` are evaluated as `exp(k ln(n)/(n-1))`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::dynamics::Complex;
use crate::error::{check_degree, Error, Result};

/// Scan density used by [`radial_profile`] to cross-check the analytic extrema.
pub const VERIFY_POINTS_PER_LOBE: usize = 4096;

/// Samples per lobe used when exporting boundaries.
pub const DEFAULT_SAMPLES_PER_LOBE: usize = 1024;

pub const MIN_SAMPLES_PER_LOBE: usize = 8;

/// `n^(-k/(n-1))`.
fn inv_root_power(n: u32, k: f64) -> f64 {
    let n = n as f64;
    (-k * n.ln() / (n - 1.0)).exp()
}

/// `n^(-1/(n-1))`, the modulus of every neutral fixed point. Tends to 1 from
/// below as `n` grows.
pub fn r_base(n: u32) -> Result<f64> {
    check_degree(n)?;
    Ok(inv_root_power(n, 1.0))
}

/// Parameter period `2(n-1)pi` of the boundary curve.
pub fn period(n: u32) -> Result<f64> {
    check_degree(n)?;
    Ok(TAU * (n - 1) as f64)
}

/// The neutral fixed point `n^(-1/(n-1)) cis(phi/(n-1))`, i.e. the solution of
/// `n z^(n-1) = cis(phi)` on the principal branch continued in `phi`.
pub fn neutral_fixed_point(n: u32, phi: f64) -> Result<Complex> {
    check_degree(n)?;
    Ok(Complex::from_polar(inv_root_power(n, 1.0), phi / (n - 1) as f64))
}

/// Point of the main-lobe boundary at curve parameter `phi`.
pub fn boundary_point(n: u32, phi: f64) -> Result<Complex> {
    check_degree(n)?;
    if !phi.is_finite() {
        return Err(Error::invalid(format!("phi must be finite, got {phi}")));
    }
    let m = (n - 1) as f64;
    let a = inv_root_power(n, 1.0);
    let b = inv_root_power(n, n as f64);
    let inner = phi / m;
    let outer = n as f64 * phi / m;
    Ok(Complex::new(
        inner.cos() * a - outer.cos() * b,
        inner.sin() * a - outer.sin() * b,
    ))
}

/// `|boundary_point(n, phi)|^2` in closed form:
/// `n^(-2/(n-1)) + n^(-2n/(n-1)) - 2 cos(phi) n^(-(n+1)/(n-1))`.
pub fn radius_squared(n: u32, phi: f64) -> Result<f64> {
    check_degree(n)?;
    let nf = n as f64;
    Ok(inv_root_power(n, 2.0) + inv_root_power(n, 2.0 * nf) - 2.0 * phi.cos() * inv_root_power(n, nf + 1.0))
}

/// `(c_min, c_max)`: the smallest and largest modulus on the boundary.
///
/// `c_min = n^(-1/(n-1)) (1 - 1/n)` is reached at the indents,
/// `c_max = n^(-1/(n-1)) (1 + 1/n)` at the middle of each lobe.
pub fn c_extrema(n: u32) -> Result<(f64, f64)> {
    let r = r_base(n)?;
    let inv = 1.0 / n as f64;
    Ok((r * (1.0 - inv), r * (1.0 + inv)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySample {
    pub phi: f64,
    pub point: Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LobeBoundary {
    degree: u32,
    samples: Vec<BoundarySample>,
}

impl LobeBoundary {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn samples(&self) -> &[BoundarySample] {
        &self.samples
    }

    pub fn period(&self) -> f64 {
        TAU * (self.degree - 1) as f64
    }
}

/// `(n-1) * samples_per_lobe` samples uniform in `phi` over `[0, 2(n-1)pi)`.
pub fn sample_boundary(n: u32, samples_per_lobe: usize) -> Result<LobeBoundary> {
    check_degree(n)?;
    if samples_per_lobe < MIN_SAMPLES_PER_LOBE {
        return Err(Error::invalid(format!(
            "samples per lobe must be at least {MIN_SAMPLES_PER_LOBE}, got {samples_per_lobe}"
        )));
    }
    let total = (n - 1) as usize * samples_per_lobe;
    let period = period(n)?;
    let samples = (0..total)
        .map(|k| {
            let phi = period * k as f64 / total as f64;
            boundary_point(n, phi).map(|point| BoundarySample { phi, point })
        })
        .collect::<Result<_>>()?;
    Ok(LobeBoundary { degree: n, samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub phi: f64,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialProfile {
    pub degree: u32,
    /// Indents, at `phi = 2 pi k`, sorted by `phi`.
    pub minima: Vec<Extremum>,
    /// Lobe midpoints, at `phi = (2k + 1) pi`, sorted by `phi`.
    pub maxima: Vec<Extremum>,
}

/// Minima and maxima of the boundary modulus over one period.
///
/// Positions come from the closed form. They are then checked against a scan
/// of [`radius_squared`] at [`VERIFY_POINTS_PER_LOBE`] points per lobe: every
/// analytic extremum must be a discrete local extremum of the scan within one
/// grid cell, and the scan must find no others.
pub fn radial_profile(n: u32) -> Result<RadialProfile> {
    let (c_min, c_max) = c_extrema(n)?;
    let lobes = n - 1;
    let minima: Vec<Extremum> = (0..lobes)
        .map(|k| Extremum {
            phi: TAU * k as f64,
            modulus: c_min,
        })
        .collect();
    let maxima: Vec<Extremum> = (0..lobes)
        .map(|k| Extremum {
            phi: TAU * k as f64 + PI,
            modulus: c_max,
        })
        .collect();

    let total = lobes as usize * VERIFY_POINTS_PER_LOBE;
    let h = period(n)? / total as f64;
    let values: Vec<f64> = (0..total)
        .map(|j| radius_squared(n, h * j as f64))
        .collect::<Result<_>>()?;
    let (scan_min, scan_max) = discrete_extrema(&values);

    check_scan("minima", &minima, &scan_min, h, total)?;
    check_scan("maxima", &maxima, &scan_max, h, total)?;

    Ok(RadialProfile {
        degree: n,
        minima,
        maxima,
    })
}

/// Indices of discrete local minima and maxima of a periodic sequence.
/// Plateaus count once, at their last index.
fn discrete_extrema(values: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let len = values.len();
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for j in 0..len {
        let prev = values[(j + len - 1) % len];
        let next = values[(j + 1) % len];
        let v = values[j];
        if v <= prev && v < next {
            minima.push(j);
        } else if v >= prev && v > next {
            maxima.push(j);
        }
    }
    (minima, maxima)
}

fn check_scan(kind: &str, analytic: &[Extremum], scanned: &[usize], h: f64, total: usize) -> Result<()> {
    if analytic.len() != scanned.len() {
        return Err(Error::InternalInconsistency(format!(
            "scan found {} {kind}, closed form predicts {}",
            scanned.len(),
            analytic.len()
        )));
    }
    for e in analytic {
        let cell = (e.phi / h).round() as i64;
        let hit = scanned.iter().any(|&j| {
            let d = (j as i64 - cell).rem_euclid(total as i64);
            d <= 1 || d >= total as i64 - 1
        });
        if !hit {
            return Err(Error::InternalInconsistency(format!(
                "no scanned {kind} within one cell of phi = {}",
                e.phi
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScannedExtrema {
    pub minima: Vec<f64>,
    pub maxima: Vec<f64>,
}

/// Locates the extrema of [`radius_squared`] numerically, without using their
/// closed-form positions.
///
/// The scan covers one period shifted back by half a grid cell,
/// `[-h/2, period - h/2)`, so an extremum at `phi = 0` is interior to a cell
/// and may be reported as a tiny negative angle. Sign changes of a central
/// difference of `radius_squared` are bracketed on the grid and refined by
/// bisection.
pub fn locate_extrema(n: u32, points_per_lobe: usize) -> Result<ScannedExtrema> {
    check_degree(n)?;
    if points_per_lobe < MIN_SAMPLES_PER_LOBE {
        return Err(Error::invalid(format!(
            "points per lobe must be at least {MIN_SAMPLES_PER_LOBE}, got {points_per_lobe}"
        )));
    }
    let total = (n - 1) as usize * points_per_lobe;
    let h = period(n)? / total as f64;
    let delta = h / 2.0;
    let slope = |phi: f64| -> f64 {
        // radius_squared cannot fail here; degree was checked above.
        radius_squared(n, phi + delta).unwrap_or(f64::NAN) - radius_squared(n, phi - delta).unwrap_or(f64::NAN)
    };

    let grid = |j: usize| h * j as f64 - h / 2.0;
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    let mut prev = slope(grid(0));
    for j in 0..total {
        let next = slope(grid(j + 1));
        if prev < 0.0 && next >= 0.0 {
            minima.push(bisect(&slope, grid(j), grid(j + 1)));
        } else if prev > 0.0 && next <= 0.0 {
            maxima.push(bisect(&slope, grid(j), grid(j + 1)));
        }
        if next != 0.0 {
            prev = next;
        }
    }
    Ok(ScannedExtrema { minima, maxima })
}

/// Zero of `f` in `[lo, hi]`, given a sign change across the interval.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndentSet {
    pub degree: u32,
    /// Arguments `2 pi k / (n-1)` of the `(n-1)`-th roots of unity.
    pub arguments: Vec<f64>,
    /// `(1 - 1/n) n^(-1/(n-1))`, the same value as `c_min`.
    pub modulus: f64,
    pub points: Vec<Complex>,
}

/// Cusps where adjacent lobes meet: `c = z(1 - z^(n-1))` with `n z^(n-1) = 1`,
/// giving `c = (1 - 1/n) z` along the `(n-1)`-th roots of unity.
pub fn indent_points(n: u32) -> Result<IndentSet> {
    let (modulus, _) = c_extrema(n)?;
    let lobes = n - 1;
    let arguments: Vec<f64> = (0..lobes).map(|k| TAU * k as f64 / lobes as f64).collect();
    let points = arguments.iter().map(|&t| Complex::from_polar(modulus, t)).collect();
    Ok(IndentSet {
        degree: n,
        arguments,
        modulus,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub degree: u32,
    pub r_base: f64,
    pub c_max: f64,
    pub c_min: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// One row per degree, sorted by degree.
pub fn convergence_report(degrees: &[u32]) -> Result<ConvergenceReport> {
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    let rows = degrees
        .into_iter()
        .map(|n| {
            let r = r_base(n)?;
            let (c_min, c_max) = c_extrema(n)?;
            Ok(ConvergenceRow {
                degree: n,
                r_base: r,
                c_max,
                c_min,
                gap: c_max - c_min,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceReport { rows })
}
