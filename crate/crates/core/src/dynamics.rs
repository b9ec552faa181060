//! Iteration of `f(z) = z^n + c`: single steps, orbits, escape detection and
//! fixed points.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_degree, Error, Result};
use crate::roots::{self, MonicPolynomial, SolverOptions};

pub type Complex = Complex64;

/// Default number of iterates an [`Orbit`] keeps in memory.
pub const DEFAULT_ORBIT_CAP: usize = 10_000;

/// Half-width of the band around `|f'(w)| = 1` classified as neutral.
pub const NEUTRAL_TOLERANCE: f64 = 1e-9;

pub const ROOT_ITERATION_CAP: usize = 500;

/// Degree `n >= 2` and parameter `c` of `f(z) = z^n + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultibrotParams {
    degree: u32,
    c: Complex,
}

impl MultibrotParams {
    pub fn new(degree: u32, c: Complex) -> Result<Self> {
        check_degree(degree)?;
        if !c.is_finite() {
            return Err(Error::invalid(format!("parameter c must be finite, got {c}")));
        }
        Ok(MultibrotParams { degree, c })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn c(&self) -> Complex {
        self.c
    }

    /// Same degree, conjugated parameter.
    pub fn conj(&self) -> Self {
        MultibrotParams {
            degree: self.degree,
            c: self.c.conj(),
        }
    }
}

/// `z^n` by binary exponentiation.
#[inline]
pub fn pow_int(z: Complex, n: u32) -> Complex {
    let mut base = z;
    let mut exp = n;
    let mut acc = Complex::new(1.0, 0.0);
    loop {
        if exp & 1 == 1 {
            acc *= base;
        }
        exp >>= 1;
        if exp == 0 {
            return acc;
        }
        base = base * base;
    }
}

#[inline]
pub fn iterate_step(z: Complex, params: &MultibrotParams) -> Complex {
    pow_int(z, params.degree) + params.c
}

/// `max(|c|, 2)`: once an iterate exceeds this modulus the orbit diverges,
/// for every degree `n >= 2`.
pub fn default_escape_radius(params: &MultibrotParams) -> f64 {
    params.c.norm().max(2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitOutcome {
    /// `|z_step| = modulus > escape radius`.
    Escaped { step: u32, modulus: f64 },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    params: MultibrotParams,
    start: Complex,
    iterates: Vec<Complex>,
    last: Complex,
    last_step: u32,
    outcome: OrbitOutcome,
    escape_radius: f64,
}

impl Orbit {
    pub fn params(&self) -> &MultibrotParams {
        &self.params
    }

    pub fn start(&self) -> Complex {
        self.start
    }

    /// Stored iterates `z_0, z_1, ...`. Shorter than [`Orbit::len`] when the
    /// storage cap was reached.
    pub fn iterates(&self) -> &[Complex] {
        &self.iterates
    }

    /// Number of iterates computed, including `z_0` and the terminating one.
    pub fn len(&self) -> usize {
        self.last_step as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_truncated(&self) -> bool {
        self.iterates.len() < self.len()
    }

    /// The terminating iterate, stored even when the sequence was truncated.
    pub fn last(&self) -> Complex {
        self.last
    }

    pub fn last_step(&self) -> u32 {
        self.last_step
    }

    pub fn outcome(&self) -> OrbitOutcome {
        self.outcome
    }

    pub fn escape_radius(&self) -> f64 {
        self.escape_radius
    }
}

/// Iterates from `z0` until an iterate exceeds `escape_radius` or `max_iter`
/// steps have been taken, keeping up to [`DEFAULT_ORBIT_CAP`] iterates.
pub fn compute_orbit(params: &MultibrotParams, z0: Complex, max_iter: u32, escape_radius: f64) -> Result<Orbit> {
    compute_orbit_capped(params, z0, max_iter, escape_radius, DEFAULT_ORBIT_CAP)
}

pub fn compute_orbit_capped(
    params: &MultibrotParams,
    z0: Complex,
    max_iter: u32,
    escape_radius: f64,
    storage_cap: usize,
) -> Result<Orbit> {
    if max_iter < 1 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }
    if !z0.is_finite() {
        return Err(Error::invalid(format!("starting point must be finite, got {z0}")));
    }
    let floor = default_escape_radius(params);
    // NaN fails this comparison too.
    if !(escape_radius >= floor) || escape_radius.is_infinite() {
        return Err(Error::invalid(format!(
            "escape radius {escape_radius} is below max(|c|, 2) = {floor}"
        )));
    }
    let r2 = escape_radius * escape_radius;
    let storage_cap = storage_cap.max(1);

    let mut iterates = Vec::with_capacity((max_iter as usize + 1).min(storage_cap));
    let mut z = z0;
    let mut step = 0u32;
    let outcome = loop {
        if iterates.len() < storage_cap {
            iterates.push(z);
        }
        if !z.is_finite() {
            break OrbitOutcome::Escaped {
                step,
                modulus: escape_radius,
            };
        }
        if z.norm_sqr() > r2 {
            break OrbitOutcome::Escaped {
                step,
                modulus: z.norm(),
            };
        }
        if step == max_iter {
            break OrbitOutcome::BudgetExhausted;
        }
        z = iterate_step(z, params);
        step += 1;
    };

    Ok(Orbit {
        params: *params,
        start: z0,
        iterates,
        last: z,
        last_step: step,
        outcome,
        escape_radius,
    })
}

/// Tolerance on `|w^n - w + c|` for a point to count as fixed.
pub fn fixed_point_tolerance(params: &MultibrotParams) -> f64 {
    1e-10 * params.c.norm().max(1.0)
}

/// All `n` roots of `z^n - z + c = 0`, with multiplicity.
pub fn fixed_points(params: &MultibrotParams) -> Result<Vec<Complex>> {
    let n = params.degree as usize;
    let mut lower = vec![Complex::new(0.0, 0.0); n];
    lower[0] = params.c;
    lower[1] -= 1.0;
    let poly = MonicPolynomial::new(lower);
    roots::solve(
        &poly,
        &SolverOptions {
            initial_radius: params.c.norm().max(1.0).powf(1.0 / n as f64),
            residual_tolerance: fixed_point_tolerance(params),
            max_iterations: ROOT_ITERATION_CAP,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointClass {
    Attractor,
    Repellor,
    Neutral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub point: Complex,
    /// `|f'(w)| = |n w^(n-1)|`.
    pub derivative_modulus: f64,
    pub class: FixedPointClass,
    /// `|w^n - w + c|`.
    pub residual: f64,
}

pub fn classify_fixed_point(w: Complex, params: &MultibrotParams) -> Result<FixedPointReport> {
    let n = params.degree;
    let residual = (pow_int(w, n) - w + params.c).norm();
    let tol = fixed_point_tolerance(params);
    if !(residual <= tol) {
        return Err(Error::invalid(format!(
            "{w} is not a fixed point: residual {residual:e} exceeds {tol:e}"
        )));
    }
    let derivative_modulus = (pow_int(w, n - 1) * n as f64).norm();
    let class = if derivative_modulus < 1.0 - NEUTRAL_TOLERANCE {
        FixedPointClass::Attractor
    } else if derivative_modulus > 1.0 + NEUTRAL_TOLERANCE {
        FixedPointClass::Repellor
    } else {
        FixedPointClass::Neutral
    };
    Ok(FixedPointReport {
        point: w,
        derivative_modulus,
        class,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, re: f64, im: f64) -> MultibrotParams {
        MultibrotParams::new(n, Complex::new(re, im)).unwrap()
    }

    fn sorted_re(mut v: Vec<Complex>) -> Vec<Complex> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn params_reject_low_degree_and_nan() {
        assert!(MultibrotParams::new(1, Complex::new(0.0, 0.0)).is_err());
        assert!(MultibrotParams::new(0, Complex::new(0.0, 0.0)).is_err());
        assert!(MultibrotParams::new(2, Complex::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn pow_int_small_powers() {
        let z = Complex::new(0.7, -0.2);
        let mut naive = Complex::new(1.0, 0.0);
        for n in 0..12 {
            assert!((pow_int(z, n) - naive).norm() < 1e-15, "n={n}");
            naive *= z;
        }
    }

    #[test]
    fn step_examples() {
        assert_eq!(iterate_step(Complex::new(0.0, 0.0), &p(2, 0.3, 0.3)), Complex::new(0.3, 0.3));
        assert_eq!(iterate_step(Complex::new(2.0, 0.0), &p(2, 0.0, 0.0)), Complex::new(4.0, 0.0));
        assert_eq!(iterate_step(Complex::new(0.5, 0.0), &p(2, 0.0, 0.0)), Complex::new(0.25, 0.0));
    }

    #[test]
    fn squaring_sequence_from_two() {
        let params = p(2, 0.0, 0.0);
        let orbit = compute_orbit(&params, Complex::new(2.0, 0.0), 10, 1e6).unwrap();
        let re: Vec<f64> = orbit.iterates().iter().map(|z| z.re).collect();
        assert_eq!(&re[..4], &[2.0, 4.0, 16.0, 256.0]);
    }

    #[test]
    fn escape_radius_examples() {
        assert_eq!(default_escape_radius(&p(2, 0.0, 0.0)), 2.0);
        assert_eq!(default_escape_radius(&p(2, 3.0, 4.0)), 5.0);
        assert_eq!(default_escape_radius(&p(7, 0.1, 0.0)), 2.0);
    }

    #[test]
    fn orbit_escapes_for_unbounded_parameter() {
        let orbit = compute_orbit(&p(2, 0.4, 0.4), Complex::new(0.0, 0.0), 200, 2.0).unwrap();
        match orbit.outcome() {
            OrbitOutcome::Escaped { step, modulus } => {
                assert_eq!(orbit.last_step(), step);
                assert!(modulus > 2.0);
                assert_eq!(orbit.iterates().len(), step as usize + 1);
                assert!(orbit.iterates()[..step as usize].iter().all(|z| z.norm() <= 2.0));
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn orbit_settles_on_attracting_fixed_point() {
        let params = p(2, 0.3, 0.3);
        let orbit = compute_orbit(&params, Complex::new(0.0, 0.0), 200, 2.0).unwrap();
        assert_eq!(orbit.outcome(), OrbitOutcome::BudgetExhausted);
        assert_eq!(orbit.iterates().len(), 201);
        let last = orbit.last();
        let nearest = fixed_points(&params)
            .unwrap()
            .into_iter()
            .map(|w| (w - last).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-6, "{nearest}");
    }

    #[test]
    fn period_two_cycle_is_exact() {
        let orbit = compute_orbit(&p(2, -1.0, 0.0), Complex::new(0.0, 0.0), 1000, 2.0).unwrap();
        assert_eq!(orbit.outcome(), OrbitOutcome::BudgetExhausted);
        for (k, z) in orbit.iterates().iter().enumerate() {
            let expected = if k % 2 == 0 { 0.0 } else { -1.0 };
            assert_eq!(*z, Complex::new(expected, 0.0));
        }
    }

    #[test]
    fn orbit_rejects_small_radius_and_zero_budget() {
        let params = p(2, 3.0, 4.0);
        assert!(matches!(
            compute_orbit(&params, Complex::new(0.0, 0.0), 10, 4.9),
            Err(Error::InvalidArgument(_))
        ));
        assert!(compute_orbit(&params, Complex::new(0.0, 0.0), 10, 5.0).is_ok());
        assert!(compute_orbit(&params, Complex::new(0.0, 0.0), 0, 5.0).is_err());
        assert!(compute_orbit(&params, Complex::new(0.0, 0.0), 10, f64::NAN).is_err());
    }

    #[test]
    fn storage_cap_keeps_running_iterate() {
        let params = p(2, 0.0, 0.0);
        let orbit = compute_orbit_capped(&params, Complex::new(0.5, 0.0), 50, 2.0, 4).unwrap();
        assert_eq!(orbit.iterates().len(), 4);
        assert_eq!(orbit.len(), 51);
        assert!(orbit.is_truncated());
        assert_eq!(orbit.last_step(), 50);
        assert_eq!(orbit.outcome(), OrbitOutcome::BudgetExhausted);
    }

    #[test]
    fn overflow_counts_as_escape_at_the_radius() {
        // A huge radius lets iterates overflow before the modulus test trips.
        let params = p(2, 0.0, 0.0);
        let orbit = compute_orbit(&params, Complex::new(1e200, 0.0), 10, f64::MAX).unwrap();
        assert_eq!(
            orbit.outcome(),
            OrbitOutcome::Escaped {
                step: 1,
                modulus: f64::MAX
            }
        );
    }

    #[test]
    fn start_outside_radius_escapes_at_step_zero() {
        let orbit = compute_orbit(&p(3, 0.0, 0.0), Complex::new(3.0, 0.0), 10, 2.0).unwrap();
        assert_eq!(orbit.outcome(), OrbitOutcome::Escaped { step: 0, modulus: 3.0 });
        assert_eq!(orbit.len(), 1);
    }

    #[test]
    fn fixed_point_examples() {
        let roots = sorted_re(fixed_points(&p(2, 0.0, 0.0)).unwrap());
        assert!((roots[0] - 0.0).norm() < 1e-12 && (roots[1] - 1.0).norm() < 1e-12);

        for w in fixed_points(&p(2, 0.25, 0.0)).unwrap() {
            // double root: linear convergence, residual-level accuracy
            assert!((w - 0.5).norm() < 1e-5, "{w}");
        }

        let roots = sorted_re(fixed_points(&p(3, 0.0, 0.0)).unwrap());
        for (w, e) in roots.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((w - e).norm() < 1e-12, "{w}");
        }
    }

    #[test]
    fn classification_examples() {
        let r = classify_fixed_point(Complex::new(0.0, 0.0), &p(2, 0.0, 0.0)).unwrap();
        assert_eq!(r.class, FixedPointClass::Attractor);
        assert_eq!(r.derivative_modulus, 0.0);

        let r = classify_fixed_point(Complex::new(1.0, 0.0), &p(2, 0.0, 0.0)).unwrap();
        assert_eq!(r.class, FixedPointClass::Repellor);
        assert_eq!(r.derivative_modulus, 2.0);

        let r = classify_fixed_point(Complex::new(0.5, 0.0), &p(2, 0.25, 0.0)).unwrap();
        assert_eq!(r.class, FixedPointClass::Neutral);
        assert_eq!(r.derivative_modulus, 1.0);
    }

    #[test]
    fn classification_rejects_non_fixed_points() {
        assert!(matches!(
            classify_fixed_point(Complex::new(0.3, 0.0), &p(2, 0.0, 0.0)),
            Err(Error::InvalidArgument(_))
        ));
    }
}
