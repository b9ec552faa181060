//! C ABI for the `multibrot` library.
//!
//! # Conventions
//!
//! - Every fallible function returns an [`MbStatus`]; results go through out
//!   pointers, which are written only on success.
//! - On failure, [`mb_last_error_message`] describes the error. The message
//!   belongs to the calling thread and stays valid until its next failing call.
//! - Orbits, boundaries and dwell buffers are opaque handles created by
//!   `mb_*_compute` / `mb_boundary_sample` / `mb_render` and released with the
//!   matching `*_free`. Passing `NULL` to a free function is a no-op.
//! - Paths are NUL-terminated UTF-8.
//! - Functions writing into caller buffers take a capacity and always report
//!   the required length; a short buffer yields `MB_STATUS_BUFFER_TOO_SMALL`.
//! - Panics never cross the boundary; they surface as `MB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use multibrot::dynamics::{self, Complex, MultibrotParams, Orbit, OrbitOutcome};
use multibrot::formats::{self, BoundaryFormat, Colormap};
use multibrot::lobe::{self, LobeBoundary};
use multibrot::render::{self, DwellBuffer, GridSpec};
use multibrot::{Error, FixedPointClass};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MbComplex {
    pub re: f64,
    pub im: f64,
}

impl From<MbComplex> for Complex {
    fn from(z: MbComplex) -> Self {
        Complex::new(z.re, z.im)
    }
}

impl From<Complex> for MbComplex {
    fn from(z: Complex) -> Self {
        MbComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    NonConvergence = 3,
    InternalInconsistency = 4,
    CapExceeded = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbFixedPointClass {
    Attractor = 0,
    Repellor = 1,
    Neutral = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbColormap {
    Grayscale = 0,
    LogGrayscale = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbBoundaryFormat {
    Csv = 0,
    Svg = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MbGridSpec {
    pub width: u32,
    pub height: u32,
    pub center: MbComplex,
    pub scale: f64,
    pub max_iter: u32,
}

/// Outcome of an orbit computation. `escaped` is false when the iteration
/// budget ran out; `step` and `modulus` are then zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MbOrbitOutcome {
    pub escaped: bool,
    pub step: u32,
    pub modulus: f64,
}

/// Dwell value of pixels that did not escape.
pub const MB_NOT_ESCAPED: u32 = 0;

pub struct MbOrbit {
    inner: Orbit,
}

pub struct MbBoundary {
    inner: LobeBoundary,
}

pub struct MbDwellBuffer {
    inner: DwellBuffer,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg).unwrap_or_else(|e| {
        let mut bytes = e.into_vec();
        bytes.retain(|&b| b != 0);
        CString::new(bytes).unwrap_or_default()
    });
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn fail(status: MbStatus, msg: impl Into<String>) -> MbStatus {
    set_last_error(msg.into());
    status
}

fn from_error(e: Error) -> MbStatus {
    let status = match &e {
        Error::InvalidArgument(_) => MbStatus::InvalidArgument,
        Error::NonConvergence { .. } => MbStatus::NonConvergence,
        Error::InternalInconsistency(_) => MbStatus::InternalInconsistency,
        Error::CapExceeded { .. } => MbStatus::CapExceeded,
        Error::Io { .. } => MbStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> MbStatus) -> MbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MbStatus::Panic, "internal panic"),
    }
}

macro_rules! try_mb {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(MbStatus::NullPointer, concat!("`", stringify!($p), "` is NULL"));
        })+
    };
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, MbStatus> {
    if path.is_null() {
        return Err(fail(MbStatus::NullPointer, "`path` is NULL"));
    }
    // SAFETY: caller guarantees a NUL-terminated string.
    let s = unsafe { CStr::from_ptr(path) };
    s.to_str()
        .map(PathBuf::from)
        .map_err(|_| fail(MbStatus::InvalidArgument, "path is not valid UTF-8"))
}

/// Copies `items` into a caller buffer of `capacity` elements.
unsafe fn fill_buffer<T: Copy>(items: &[T], out: *mut T, capacity: usize, out_len: *mut usize) -> MbStatus {
    // SAFETY: out_len checked non-null by callers.
    unsafe { *out_len = items.len() };
    if items.len() > capacity {
        return fail(
            MbStatus::BufferTooSmall,
            format!("buffer holds {capacity} elements, {} needed", items.len()),
        );
    }
    if !items.is_empty() {
        if out.is_null() {
            return fail(MbStatus::NullPointer, "output buffer is NULL");
        }
        // SAFETY: caller guarantees `out` has room for `capacity >= len` elements.
        unsafe { ptr::copy_nonoverlapping(items.as_ptr(), out, items.len()) };
    }
    MbStatus::Ok
}

/// Message for the last failing call on this thread, or NULL if none.
#[no_mangle]
pub extern "C" fn mb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `out = z^degree + c`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_iterate_step(degree: u32, z: MbComplex, c: MbComplex, out: *mut MbComplex) -> MbStatus {
    guard(|| {
        non_null!(out);
        let params = try_mb!(MultibrotParams::new(degree, c.into()));
        // SAFETY: checked non-null above.
        unsafe { *out = dynamics::iterate_step(z.into(), &params).into() };
        MbStatus::Ok
    })
}

/// `out = max(|c|, 2)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_default_escape_radius(degree: u32, c: MbComplex, out: *mut f64) -> MbStatus {
    guard(|| {
        non_null!(out);
        let params = try_mb!(MultibrotParams::new(degree, c.into()));
        unsafe { *out = dynamics::default_escape_radius(&params) };
        MbStatus::Ok
    })
}

/// Writes the `degree` roots of `z^degree - z + c` into `out`.
///
/// # Safety
/// `out_len` must be valid for writes; `out` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn mb_fixed_points(
    degree: u32,
    c: MbComplex,
    out: *mut MbComplex,
    capacity: usize,
    out_len: *mut usize,
) -> MbStatus {
    guard(|| {
        non_null!(out_len);
        let params = try_mb!(MultibrotParams::new(degree, c.into()));
        let roots: Vec<MbComplex> = try_mb!(dynamics::fixed_points(&params))
            .into_iter()
            .map(Into::into)
            .collect();
        unsafe { fill_buffer(&roots, out, capacity, out_len) }
    })
}

/// Classifies the fixed point `w` by `|f'(w)|`.
///
/// # Safety
/// `out_derivative_modulus` and `out_class` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_classify_fixed_point(
    degree: u32,
    c: MbComplex,
    w: MbComplex,
    out_derivative_modulus: *mut f64,
    out_class: *mut MbFixedPointClass,
) -> MbStatus {
    guard(|| {
        non_null!(out_derivative_modulus, out_class);
        let params = try_mb!(MultibrotParams::new(degree, c.into()));
        let report = try_mb!(dynamics::classify_fixed_point(w.into(), &params));
        unsafe {
            *out_derivative_modulus = report.derivative_modulus;
            *out_class = match report.class {
                FixedPointClass::Attractor => MbFixedPointClass::Attractor,
                FixedPointClass::Repellor => MbFixedPointClass::Repellor,
                FixedPointClass::Neutral => MbFixedPointClass::Neutral,
            };
        }
        MbStatus::Ok
    })
}

/// Computes an orbit from `z0`. `escape_radius <= 0` selects `max(|c|, 2)`.
///
/// # Safety
/// `out` must be valid for writes. The handle must be freed with [`mb_orbit_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_orbit_compute(
    degree: u32,
    c: MbComplex,
    z0: MbComplex,
    max_iter: u32,
    escape_radius: f64,
    out: *mut *mut MbOrbit,
) -> MbStatus {
    guard(|| {
        non_null!(out);
        let params = try_mb!(MultibrotParams::new(degree, c.into()));
        let radius = if escape_radius <= 0.0 {
            dynamics::default_escape_radius(&params)
        } else {
            escape_radius
        };
        let orbit = try_mb!(dynamics::compute_orbit(&params, z0.into(), max_iter, radius));
        unsafe { *out = Box::into_raw(Box::new(MbOrbit { inner: orbit })) };
        MbStatus::Ok
    })
}

/// Number of stored iterates, or 0 for NULL.
///
/// # Safety
/// `orbit` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mb_orbit_len(orbit: *const MbOrbit) -> usize {
    unsafe { orbit.as_ref() }.map_or(0, |o| o.inner.iterates().len())
}

/// Copies stored iterates into `out`.
///
/// # Safety
/// `orbit` must be a live handle, `out_len` valid for writes, `out` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn mb_orbit_iterates(
    orbit: *const MbOrbit,
    out: *mut MbComplex,
    capacity: usize,
    out_len: *mut usize,
) -> MbStatus {
    guard(|| {
        non_null!(orbit, out_len);
        let iterates: Vec<MbComplex> = unsafe { &*orbit }.inner.iterates().iter().map(|&z| z.into()).collect();
        unsafe { fill_buffer(&iterates, out, capacity, out_len) }
    })
}

/// # Safety
/// `orbit` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_orbit_outcome(orbit: *const MbOrbit, out: *mut MbOrbitOutcome) -> MbStatus {
    guard(|| {
        non_null!(orbit, out);
        let outcome = match unsafe { &*orbit }.inner.outcome() {
            OrbitOutcome::Escaped { step, modulus } => MbOrbitOutcome {
                escaped: true,
                step,
                modulus,
            },
            OrbitOutcome::BudgetExhausted => MbOrbitOutcome {
                escaped: false,
                step: 0,
                modulus: 0.0,
            },
        };
        unsafe { *out = outcome };
        MbStatus::Ok
    })
}

/// Writes the orbit as `k,re,im` CSV.
///
/// # Safety
/// `orbit` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mb_orbit_write_csv(orbit: *const MbOrbit, path: *const c_char) -> MbStatus {
    guard(|| {
        non_null!(orbit);
        let path = match unsafe { path_arg(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        try_mb!(formats::export_orbit_csv(&unsafe { &*orbit }.inner, &path));
        MbStatus::Ok
    })
}

/// # Safety
/// `orbit` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_orbit_free(orbit: *mut MbOrbit) {
    if !orbit.is_null() {
        drop(unsafe { Box::from_raw(orbit) });
    }
}

/// Main-lobe boundary point at curve parameter `phi`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_boundary_point(degree: u32, phi: f64, out: *mut MbComplex) -> MbStatus {
    guard(|| {
        non_null!(out);
        let p = try_mb!(lobe::boundary_point(degree, phi));
        unsafe { *out = p.into() };
        MbStatus::Ok
    })
}

/// Squared modulus of the boundary point at `phi`, in closed form.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_radius_squared(degree: u32, phi: f64, out: *mut f64) -> MbStatus {
    guard(|| {
        non_null!(out);
        let r2 = try_mb!(lobe::radius_squared(degree, phi));
        unsafe { *out = r2 };
        MbStatus::Ok
    })
}

/// Smallest and largest boundary modulus.
///
/// # Safety
/// `out_min` and `out_max` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_c_extrema(degree: u32, out_min: *mut f64, out_max: *mut f64) -> MbStatus {
    guard(|| {
        non_null!(out_min, out_max);
        let (lo, hi) = try_mb!(lobe::c_extrema(degree));
        unsafe {
            *out_min = lo;
            *out_max = hi;
        }
        MbStatus::Ok
    })
}

/// Writes the `degree - 1` indent points into `out`.
///
/// # Safety
/// `out_len` must be valid for writes; `out` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn mb_indent_points(
    degree: u32,
    out: *mut MbComplex,
    capacity: usize,
    out_len: *mut usize,
) -> MbStatus {
    guard(|| {
        non_null!(out_len);
        let set = try_mb!(lobe::indent_points(degree));
        let points: Vec<MbComplex> = set.points.into_iter().map(Into::into).collect();
        unsafe { fill_buffer(&points, out, capacity, out_len) }
    })
}

/// Samples the boundary over its full period.
///
/// # Safety
/// `out` must be valid for writes. Free the handle with [`mb_boundary_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_boundary_sample(degree: u32, samples_per_lobe: usize, out: *mut *mut MbBoundary) -> MbStatus {
    guard(|| {
        non_null!(out);
        let b = try_mb!(lobe::sample_boundary(degree, samples_per_lobe));
        unsafe { *out = Box::into_raw(Box::new(MbBoundary { inner: b })) };
        MbStatus::Ok
    })
}

/// Number of samples, or 0 for NULL.
///
/// # Safety
/// `boundary` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mb_boundary_len(boundary: *const MbBoundary) -> usize {
    unsafe { boundary.as_ref() }.map_or(0, |b| b.inner.samples().len())
}

/// # Safety
/// `boundary` must be a live handle; `out_phi` and `out_point` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_boundary_get(
    boundary: *const MbBoundary,
    index: usize,
    out_phi: *mut f64,
    out_point: *mut MbComplex,
) -> MbStatus {
    guard(|| {
        non_null!(boundary, out_phi, out_point);
        let samples = unsafe { &*boundary }.inner.samples();
        let Some(s) = samples.get(index) else {
            return fail(
                MbStatus::InvalidArgument,
                format!("index {index} out of range for {} samples", samples.len()),
            );
        };
        unsafe {
            *out_phi = s.phi;
            *out_point = s.point.into();
        }
        MbStatus::Ok
    })
}

/// # Safety
/// `boundary` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mb_boundary_write(
    boundary: *const MbBoundary,
    format: MbBoundaryFormat,
    path: *const c_char,
) -> MbStatus {
    guard(|| {
        non_null!(boundary);
        let path = match unsafe { path_arg(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let format = match format {
            MbBoundaryFormat::Csv => BoundaryFormat::Csv,
            MbBoundaryFormat::Svg => BoundaryFormat::Svg,
        };
        try_mb!(formats::export_boundary(&unsafe { &*boundary }.inner, format, &path));
        MbStatus::Ok
    })
}

/// # Safety
/// `boundary` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_boundary_free(boundary: *mut MbBoundary) {
    if !boundary.is_null() {
        drop(unsafe { Box::from_raw(boundary) });
    }
}

/// Escape step of the critical orbit, or [`MB_NOT_ESCAPED`] for members.
///
/// # Safety
/// `out_dwell` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mb_membership(degree: u32, c: MbComplex, max_iter: u32, out_dwell: *mut u32) -> MbStatus {
    guard(|| {
        non_null!(out_dwell);
        if max_iter == 0 {
            return fail(MbStatus::InvalidArgument, "max_iter must be at least 1");
        }
        let params = try_mb!(MultibrotParams::new(degree, c.into()));
        unsafe { *out_dwell = render::membership(&params, max_iter).dwell() };
        MbStatus::Ok
    })
}

/// Renders a dwell grid with `workers` threads. Output is identical for any worker count.
///
/// # Safety
/// `out` must be valid for writes. Free the handle with [`mb_dwell_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_render(
    degree: u32,
    spec: MbGridSpec,
    workers: u32,
    out: *mut *mut MbDwellBuffer,
) -> MbStatus {
    guard(|| {
        non_null!(out);
        let spec = GridSpec {
            width: spec.width,
            height: spec.height,
            center: spec.center.into(),
            scale: spec.scale,
            max_iter: spec.max_iter,
        };
        let buf = try_mb!(render::render(degree, &spec, workers as usize));
        unsafe { *out = Box::into_raw(Box::new(MbDwellBuffer { inner: buf })) };
        MbStatus::Ok
    })
}

/// # Safety
/// `buffer` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mb_dwell_width(buffer: *const MbDwellBuffer) -> u32 {
    unsafe { buffer.as_ref() }.map_or(0, |b| b.inner.width())
}

/// # Safety
/// `buffer` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mb_dwell_height(buffer: *const MbDwellBuffer) -> u32 {
    unsafe { buffer.as_ref() }.map_or(0, |b| b.inner.height())
}

/// Row-major dwell values, `width * height` of them, top row first. The
/// pointer is valid until the handle is freed; NULL for a NULL handle.
///
/// # Safety
/// `buffer` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mb_dwell_data(buffer: *const MbDwellBuffer) -> *const u32 {
    unsafe { buffer.as_ref() }.map_or(ptr::null(), |b| b.inner.dwell().as_ptr())
}

/// # Safety
/// `buffer` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mb_dwell_write_ppm(
    buffer: *const MbDwellBuffer,
    colormap: MbColormap,
    path: *const c_char,
) -> MbStatus {
    guard(|| {
        non_null!(buffer);
        let path = match unsafe { path_arg(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let colormap = match colormap {
            MbColormap::Grayscale => Colormap::Grayscale,
            MbColormap::LogGrayscale => Colormap::LogGrayscale,
        };
        try_mb!(formats::export_ppm(&unsafe { &*buffer }.inner, colormap, &path));
        MbStatus::Ok
    })
}

/// # Safety
/// `buffer` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_dwell_free(buffer: *mut MbDwellBuffer) {
    if !buffer.is_null() {
        drop(unsafe { Box::from_raw(buffer) });
    }
}
