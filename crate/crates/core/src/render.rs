//! Escape-time membership over the parameter plane and deterministic parallel
//! rendering of dwell grids.

use std::f64::consts::PI;
use std::sync::Mutex;
use std::thread;

use serde::Serialize;

use crate::dynamics::{default_escape_radius, iterate_step, Complex, MultibrotParams};
use crate::error::{check_degree, Error, Result};
use crate::lobe::{c_extrema, indent_points};

/// Dwell value for pixels whose critical orbit did not escape within the budget.
/// Escaped pixels carry their escape step, which is always at least 1.
pub const NOT_ESCAPED: u32 = 0;

pub const DEFAULT_PIXEL_CAP: u64 = 100_000_000;

pub const DEFAULT_SHRINK: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "step", rename_all = "snake_case")]
pub enum Membership {
    Member,
    Escaped(u32),
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }

    /// Dwell encoding: the escape step, or [`NOT_ESCAPED`].
    pub fn dwell(self) -> u32 {
        match self {
            Membership::Member => NOT_ESCAPED,
            Membership::Escaped(k) => k,
        }
    }
}

/// Iterates the critical orbit `z0 = 0` against the radius `max(|c|, 2)`.
/// The test compares squared moduli.
pub fn membership(params: &MultibrotParams, max_iter: u32) -> Membership {
    let r = default_escape_radius(params);
    let r2 = r * r;
    let mut z = Complex::new(0.0, 0.0);
    for step in 1..=max_iter {
        z = iterate_step(z, params);
        if !z.is_finite() || z.norm_sqr() > r2 {
            return Membership::Escaped(step);
        }
    }
    Membership::Member
}

/// Pixel grid over the parameter plane.
///
/// Pixel `(i, j)`, column `i` and row `j`, maps to
/// `c = center + scale * ((i - width/2) - i_unit * (j - height/2))`,
/// so row 0 is at the top (largest imaginary part).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub width: u32,
    pub height: u32,
    pub center: Complex,
    pub scale: f64,
    pub max_iter: u32,
}

impl GridSpec {
    pub fn validate(&self, pixel_cap: u64) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid(format!(
                "grid dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::invalid(format!("scale must be positive and finite, got {}", self.scale)));
        }
        if !self.center.is_finite() {
            return Err(Error::invalid("center must be finite"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if self.pixel_count() > pixel_cap {
            return Err(Error::CapExceeded {
                width: self.width,
                height: self.height,
                cap: pixel_cap,
            });
        }
        Ok(())
    }

    pub fn pixel_count(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    pub fn pixel_to_c(&self, i: u32, j: u32) -> Complex {
        let dx = i as f64 - self.width as f64 / 2.0;
        let dy = j as f64 - self.height as f64 / 2.0;
        self.center + Complex::new(dx, -dy) * self.scale
    }

    /// Grid of `width x height` pixels covering `[re_min, re_max] x [im_min, im_max]`
    /// with square pixels, sized by the wider of the two spans.
    pub fn spanning(
        width: u32,
        height: u32,
        re: (f64, f64),
        im: (f64, f64),
        max_iter: u32,
    ) -> GridSpec {
        let scale = ((re.1 - re.0) / width as f64).max((im.1 - im.0) / height as f64);
        GridSpec {
            width,
            height,
            center: Complex::new(0.5 * (re.0 + re.1), 0.5 * (im.0 + im.1)),
            scale,
            max_iter,
        }
    }
}

/// Grid centred on the origin whose shorter side spans `2 * 1.3 * c_max(n)`,
/// which frames the whole main lobe.
pub fn default_view(n: u32, width: u32, height: u32, max_iter: u32) -> Result<GridSpec> {
    let (_, c_max) = c_extrema(n)?;
    let side = width.min(height).max(1) as f64;
    Ok(GridSpec {
        width,
        height,
        center: Complex::new(0.0, 0.0),
        scale: 2.0 * 1.3 * c_max / side,
        max_iter,
    })
}

/// Row-major dwell grid, top row first.
#[derive(Clone, Debug, PartialEq)]
pub struct DwellBuffer {
    spec: GridSpec,
    degree: u32,
    dwell: Vec<u32>,
}

impl DwellBuffer {
    pub fn new(degree: u32, spec: GridSpec, dwell: Vec<u32>) -> Result<Self> {
        check_degree(degree)?;
        if dwell.len() as u64 != spec.pixel_count() {
            return Err(Error::invalid(format!(
                "dwell grid has {} cells, spec needs {}",
                dwell.len(),
                spec.pixel_count()
            )));
        }
        if let Some(bad) = dwell.iter().find(|&&d| d > spec.max_iter) {
            return Err(Error::invalid(format!("dwell {bad} exceeds max_iter {}", spec.max_iter)));
        }
        Ok(DwellBuffer { spec, degree, dwell })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn width(&self) -> u32 {
        self.spec.width
    }

    pub fn height(&self) -> u32 {
        self.spec.height
    }

    pub fn max_iter(&self) -> u32 {
        self.spec.max_iter
    }

    pub fn dwell(&self) -> &[u32] {
        &self.dwell
    }

    pub fn get(&self, i: u32, j: u32) -> u32 {
        self.dwell[j as usize * self.spec.width as usize + i as usize]
    }

    pub fn row(&self, j: u32) -> &[u32] {
        let w = self.spec.width as usize;
        &self.dwell[j as usize * w..(j as usize + 1) * w]
    }
}

pub fn render(n: u32, spec: &GridSpec, worker_count: usize) -> Result<DwellBuffer> {
    render_capped(n, spec, worker_count, DEFAULT_PIXEL_CAP)
}

/// Renders the dwell grid with `worker_count` threads.
///
/// Rows are split into bands that workers pull from a shared queue; each band
/// is written into its fixed slot of the output, so the result does not depend
/// on the worker count or on scheduling.
pub fn render_capped(n: u32, spec: &GridSpec, worker_count: usize, pixel_cap: u64) -> Result<DwellBuffer> {
    check_degree(n)?;
    spec.validate(pixel_cap)?;
    if worker_count == 0 {
        return Err(Error::invalid("worker count must be at least 1"));
    }

    let width = spec.width as usize;
    let height = spec.height as usize;
    let mut dwell = vec![NOT_ESCAPED; width * height];

    let bands = (worker_count * 4).min(height).max(1);
    let rows_per_band = height.div_ceil(bands);
    let queue = Mutex::new(dwell.chunks_mut(rows_per_band * width).enumerate());

    let fill_band = |band: usize, out: &mut [u32]| {
        let first_row = band * rows_per_band;
        for (r, row) in out.chunks_mut(width).enumerate() {
            let j = (first_row + r) as u32;
            for (i, cell) in row.iter_mut().enumerate() {
                let c = spec.pixel_to_c(i as u32, j);
                // Pixel coordinates are finite for a validated spec.
                let params = MultibrotParams::new(n, c).expect("finite pixel coordinate");
                *cell = membership(&params, spec.max_iter).dwell();
            }
        }
    };

    let work = || loop {
        let next = queue.lock().expect("band queue poisoned").next();
        match next {
            Some((band, out)) => fill_band(band, out),
            None => break,
        }
    };

    if worker_count == 1 {
        work();
    } else {
        thread::scope(|s| {
            for _ in 0..worker_count {
                s.spawn(work);
            }
        });
    }

    DwellBuffer::new(n, *spec, dwell)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Member,
    Escaped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckPoint {
    pub degree: u32,
    pub theta: f64,
    pub radius: f64,
    pub c: Complex,
    pub expected: Expectation,
    pub actual: Membership,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipCheckReport {
    pub degree: u32,
    pub shrink: f64,
    pub budget: u32,
    pub points: Vec<CheckPoint>,
}

impl MembershipCheckReport {
    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|p| p.pass)
    }
}

/// Tests the analytic lobe geometry against the escape-time definition.
///
/// For each indent argument `theta`, the point `shrink * c_min * cis(theta)` is
/// expected to be a member, and `(c_max / shrink) * cis(theta + pi/(n-1))`,
/// outside the largest boundary radius in the mid-lobe direction, is expected
/// to escape. Failures are reported per point, not raised.
pub fn boundary_membership_check(n: u32, shrink: f64, budget: u32) -> Result<MembershipCheckReport> {
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(Error::invalid(format!("shrink must lie in (0, 1), got {shrink}")));
    }
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    let (c_min, c_max) = c_extrema(n)?;
    let indents = indent_points(n)?;
    let half_lobe = PI / (n - 1) as f64;

    let mut points = Vec::with_capacity(2 * indents.arguments.len());
    let mut probe = |theta: f64, radius: f64, expected: Expectation| -> Result<()> {
        let c = Complex::from_polar(radius, theta);
        let actual = membership(&MultibrotParams::new(n, c)?, budget);
        let pass = match expected {
            Expectation::Member => actual.is_member(),
            Expectation::Escaped => !actual.is_member(),
        };
        points.push(CheckPoint {
            degree: n,
            theta,
            radius,
            c,
            expected,
            actual,
            pass,
        });
        Ok(())
    };
    for &theta in &indents.arguments {
        probe(theta, shrink * c_min, Expectation::Member)?;
        probe(theta + half_lobe, c_max / shrink, Expectation::Escaped)?;
    }

    Ok(MembershipCheckReport {
        degree: n,
        shrink,
        budget,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, re: f64, im: f64) -> MultibrotParams {
        MultibrotParams::new(n, Complex::new(re, im)).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(&params(2, 0.0, 0.0), 1000), Membership::Member);
        assert_eq!(membership(&params(2, -1.0, 0.0), 1000), Membership::Member);
        assert!(!membership(&params(2, 0.26, 0.0), 5000).is_member());
    }

    #[test]
    fn membership_matches_plain_iteration() {
        // z -> z^2 + 0.26 leaves [0, 2] after a fixed number of steps
        let c = 0.26;
        let mut z = 0.0f64;
        let mut k = 0;
        while z.abs() <= 2.0 {
            z = z * z + c;
            k += 1;
        }
        assert_eq!(membership(&params(2, c, 0.0), 5000), Membership::Escaped(k));
    }

    #[test]
    fn pixel_mapping_puts_row_zero_on_top() {
        let spec = GridSpec {
            width: 4,
            height: 2,
            center: Complex::new(1.0, 1.0),
            scale: 0.5,
            max_iter: 10,
        };
        assert_eq!(spec.pixel_to_c(0, 0), Complex::new(0.0, 1.5));
        assert_eq!(spec.pixel_to_c(2, 1), Complex::new(1.0, 1.0));
        assert_eq!(spec.pixel_to_c(3, 1), Complex::new(1.5, 1.0));
    }

    #[test]
    fn single_pixel_at_origin() {
        let spec = GridSpec {
            width: 1,
            height: 1,
            center: Complex::new(0.0, 0.0),
            scale: 1e-3,
            max_iter: 100,
        };
        let buf = render(2, &spec, 1).unwrap();
        assert_eq!(buf.dwell(), &[NOT_ESCAPED]);
    }

    #[test]
    fn render_rejects_bad_input() {
        let mut spec = GridSpec {
            width: 10,
            height: 10,
            center: Complex::new(0.0, 0.0),
            scale: 0.1,
            max_iter: 10,
        };
        assert!(matches!(render_capped(2, &spec, 1, 99), Err(Error::CapExceeded { .. })));
        assert!(render(2, &spec, 0).is_err());
        assert!(render(1, &spec, 1).is_err());
        spec.scale = 0.0;
        assert!(render(2, &spec, 1).is_err());
        spec.scale = 0.1;
        spec.width = 0;
        assert!(render(2, &spec, 1).is_err());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let spec = GridSpec::spanning(37, 23, (-2.0, 0.5), (-1.25, 1.25), 200);
        let one = render(3, &spec, 1).unwrap();
        for workers in [2, 3, 8, 64] {
            assert_eq!(one, render(3, &spec, workers).unwrap());
        }
    }

    #[test]
    fn dwell_buffer_validates_contents() {
        let spec = GridSpec {
            width: 2,
            height: 1,
            center: Complex::new(0.0, 0.0),
            scale: 1.0,
            max_iter: 5,
        };
        assert!(DwellBuffer::new(2, spec, vec![1]).is_err());
        assert!(DwellBuffer::new(2, spec, vec![1, 6]).is_err());
        let buf = DwellBuffer::new(2, spec, vec![0, 5]).unwrap();
        assert_eq!(buf.spec(), spec);
        assert_eq!(buf.row(0), &[0, 5]);
    }

    #[test]
    fn check_rejects_bad_shrink() {
        assert!(boundary_membership_check(2, 1.0, 100).is_err());
        assert!(boundary_membership_check(2, 0.0, 100).is_err());
        assert!(boundary_membership_check(2, 0.9, 0).is_err());
    }

    #[test]
    fn check_probes_indent_rays_inside_the_lobe() {
        for n in [2u32, 4] {
            let rep = boundary_membership_check(n, 0.9, 10_000).unwrap();
            assert_eq!(rep.points.len(), 2 * (n - 1) as usize);
            let interior: Vec<_> = rep.points.iter().filter(|p| p.expected == Expectation::Member).collect();
            assert_eq!(interior.len(), (n - 1) as usize);
            assert!(interior.iter().all(|p| p.pass), "n={n}");
        }
        let rep = boundary_membership_check(2, 0.9, 10_000).unwrap();
        assert!((rep.points[0].c.re - 0.225).abs() < 1e-15);
        assert!((rep.points[1].c.re + 0.75 / 0.9).abs() < 1e-15);
    }
}
