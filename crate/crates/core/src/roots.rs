//! Simultaneous-iteration (Weierstrass / Durand–Kerner) root finder for monic
//! complex polynomials.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A monic polynomial `z^d + a[d-1] z^(d-1) + ... + a[0]`.
///
/// `lower` holds `a[0..d]`, lowest order first; the leading coefficient is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    lower: Vec<Complex64>,
}

impl MonicPolynomial {
    pub fn new(lower: Vec<Complex64>) -> Self {
        MonicPolynomial { lower }
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.lower
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.lower
            .iter()
            .rev()
            .fold(Complex64::new(1.0, 0.0), |acc, &a| acc * z + a)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Radius of the circle the initial guesses are placed on.
    pub initial_radius: f64,
    /// Every root must satisfy `|p(z)| <= residual_tolerance`.
    pub residual_tolerance: f64,
    pub max_iterations: usize,
}

/// Finds all roots of `poly`, with multiplicity.
///
/// Iterates until every residual meets the tolerance and the updates have
/// stalled at rounding level, or the iteration cap is hit. Hitting the cap
/// with an unmet residual is an error.
pub fn solve(poly: &MonicPolynomial, opts: &SolverOptions) -> Result<Vec<Complex64>> {
    let d = poly.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    if !(opts.initial_radius > 0.0 && opts.initial_radius.is_finite()) {
        return Err(Error::invalid("initial radius must be positive and finite"));
    }

    // Distinct angles, offset so no guess lands on the real axis where
    // symmetric polynomials would keep conjugate pairs stuck.
    let mut roots: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(opts.initial_radius, TAU * k as f64 / d as f64 + 0.4))
        .collect();

    let scale = opts.initial_radius.max(1.0);
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mut max_delta: f64 = 0.0;
        for i in 0..d {
            let zi = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm_sqr() == 0.0 {
                // Two estimates collided; nudge and let the next sweep separate them.
                denom = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            let delta = poly.eval(zi) / denom;
            if delta.is_finite() {
                roots[i] = zi - delta;
                max_delta = max_delta.max(delta.norm());
            }
        }
        if max_delta <= 4.0 * f64::EPSILON * scale && worst_residual(poly, &roots) <= opts.residual_tolerance {
            break;
        }
    }

    let residual = worst_residual(poly, &roots);
    if residual <= opts.residual_tolerance {
        Ok(roots)
    } else {
        Err(Error::NonConvergence {
            iterations,
            residual,
        })
    }
}

fn worst_residual(poly: &MonicPolynomial, roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|&z| poly.eval(z).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolverOptions {
        SolverOptions {
            initial_radius: 1.0,
            residual_tolerance: 1e-12,
            max_iterations: 500,
        }
    }

    #[test]
    fn horner_matches_direct() {
        // z^3 - 2z + 1
        let p = MonicPolynomial::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let z = Complex64::new(0.3, -1.2);
        let direct = z * z * z - 2.0 * z + 1.0;
        assert!((p.eval(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = MonicPolynomial::new(vec![Complex64::new(-1.0, 0.0), 0.0.into(), 0.0.into()]);
        let mut roots = solve(&p, &opts()).unwrap();
        roots.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        let expected = [-TAU / 3.0, 0.0, TAU / 3.0];
        for (z, arg) in roots.iter().zip(expected) {
            assert!((z - Complex64::from_polar(1.0, arg)).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn double_root_meets_residual() {
        // (z - 0.5)^2
        let p = MonicPolynomial::new(vec![Complex64::new(0.25, 0.0), Complex64::new(-1.0, 0.0)]);
        let roots = solve(&p, &opts()).unwrap();
        for z in roots {
            assert!((z - 0.5).norm() < 1e-5);
        }
    }

    #[test]
    fn cap_is_reported() {
        let p = MonicPolynomial::new(vec![Complex64::new(-7.0, 3.0), 0.0.into(), 0.0.into(), 0.0.into()]);
        let err = solve(
            &p,
            &SolverOptions {
                max_iterations: 1,
                ..opts()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 1, .. }));
    }

    #[test]
    fn empty_polynomial_has_no_roots() {
        assert!(solve(&MonicPolynomial::new(vec![]), &opts()).unwrap().is_empty());
    }
}
