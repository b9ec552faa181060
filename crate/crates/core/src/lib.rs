//! Higher-degree Mandelbrot (Multibrot) sets for `f(z) = z^n + c`.
//!
//! - [`dynamics`]: iteration, orbits, escape radius, fixed points.
//! - [`lobe`]: closed-form geometry of the main lobe boundary, its extrema,
//!   indent points and convergence to the unit circle.
//! - [`render`]: escape-time membership and deterministic parallel rendering.
//! - [`formats`]: CSV, SVG and PPM writers and readers.
//! - [`verify`]: the aggregated verification suite.
//! - [`cli`]: the `multibrot` command line.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod formats;
pub mod lobe;
pub mod render;
pub mod roots;
pub mod verify;

pub use dynamics::{
    classify_fixed_point, compute_orbit, default_escape_radius, fixed_points, iterate_step, pow_int, Complex,
    FixedPointClass, FixedPointReport, MultibrotParams, Orbit, OrbitOutcome,
};
pub use error::{Error, Result};
pub use lobe::{
    boundary_point, c_extrema, convergence_report, indent_points, radial_profile, radius_squared, sample_boundary,
    ConvergenceReport, IndentSet, LobeBoundary, RadialProfile,
};
pub use render::{boundary_membership_check, membership, render, DwellBuffer, GridSpec, Membership, NOT_ESCAPED};
pub use verify::{verify_suite, VerifyReport};
