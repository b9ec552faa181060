use std::f64::consts::TAU;

use multibrot::dynamics::{
    classify_fixed_point, compute_orbit, fixed_points, iterate_step, Complex, FixedPointClass, MultibrotParams,
    OrbitOutcome,
};
use multibrot::lobe::{
    boundary_point, c_extrema, locate_extrema, neutral_fixed_point, period, r_base, radius_squared,
};
use multibrot::render::{membership, render, GridSpec, Membership};
use multibrot::pow_int;
use proptest::prelude::*;

fn params(n: u32, c: Complex) -> MultibrotParams {
    MultibrotParams::new(n, c).unwrap()
}

fn complex_in(r: f64) -> impl Strategy<Value = Complex> {
    (-r..r, -r..r).prop_map(|(re, im)| Complex::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn escape_grows_geometrically(c in complex_in(3.0), mag in 0.0f64..50.0, arg in 0.0..TAU) {
        let p = params(2, c);
        let bound = c.norm().max(2.0);
        let z = Complex::from_polar(bound + 1e-3 + mag, arg);
        let eps = z.norm() - 2.0;
        let next = iterate_step(z, &p);
        prop_assert!(next.norm() >= (1.0 + eps) * z.norm() * (1.0 - 1e-12));
    }

    #[test]
    fn orbit_replays_bit_for_bit(n in 2u32..8, c in complex_in(1.5), z0 in complex_in(1.0), budget in 1u32..300) {
        let p = params(n, c);
        let orbit = compute_orbit(&p, z0, budget, c.norm().max(2.0)).unwrap();
        let it = orbit.iterates();
        prop_assert_eq!(it[0], z0);
        for w in it.windows(2) {
            prop_assert_eq!(w[1], iterate_step(w[0], &p));
        }
        if let OrbitOutcome::Escaped { step, modulus } = orbit.outcome() {
            prop_assert!(modulus > orbit.escape_radius());
            prop_assert!(it[..step as usize].iter().all(|z| z.norm() <= orbit.escape_radius()));
        }
    }

    #[test]
    fn conjugate_parameters_give_conjugate_orbits(n in 2u32..7, c in complex_in(1.2), z0 in complex_in(0.5)) {
        let p = params(n, c);
        let a = compute_orbit(&p, z0, 400, 2f64.max(c.norm())).unwrap();
        let b = compute_orbit(&p.conj(), z0.conj(), 400, 2f64.max(c.norm())).unwrap();
        prop_assert_eq!(a.outcome(), b.outcome());
        for (x, y) in a.iterates().iter().zip(b.iterates()) {
            prop_assert_eq!(x.conj(), *y);
        }
    }

    #[test]
    fn root_symmetric_functions(n in 2u32..9, c in complex_in(1.0)) {
        let roots = fixed_points(&params(n, c)).unwrap();
        prop_assert_eq!(roots.len(), n as usize);
        let sum: Complex = roots.iter().sum();
        let product: Complex = roots.iter().product();
        let expected_sum = if n == 2 { 1.0 } else { 0.0 };
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((sum - expected_sum).norm() < 1e-8);
        prop_assert!((product - sign * c).norm() < 1e-8);
    }

    #[test]
    fn small_parameters_have_exactly_one_attractor(n in 2u32..7, frac in 0.0f64..0.95, arg in 0.0..TAU) {
        let (c_min, _) = c_extrema(n).unwrap();
        let c = Complex::from_polar(frac * c_min, arg);
        let p = params(n, c);
        let classes: Vec<FixedPointClass> = fixed_points(&p)
            .unwrap()
            .into_iter()
            .map(|w| classify_fixed_point(w, &p).unwrap().class)
            .collect();
        prop_assert_eq!(classes.iter().filter(|&&k| k == FixedPointClass::Attractor).count(), 1);
        prop_assert_eq!(classes.iter().filter(|&&k| k == FixedPointClass::Repellor).count(), n as usize - 1);
    }

    #[test]
    fn closed_form_radius_matches_curve(n in 2u32..40, phi in -200.0f64..200.0) {
        let p = boundary_point(n, phi).unwrap();
        prop_assert!((p.norm_sqr() - radius_squared(n, phi).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_neutral_fixed_point_locus(n in 2u32..20, phi in 0.0f64..200.0) {
        let z = neutral_fixed_point(n, phi).unwrap();
        let c = boundary_point(n, phi).unwrap();
        prop_assert!((pow_int(z, n) - z + c).norm() < 1e-12);
        prop_assert!(((pow_int(z, n - 1) * n as f64).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_periodic(n in 2u32..20, phi in 0.0f64..50.0) {
        let a = boundary_point(n, phi).unwrap();
        let b = boundary_point(n, phi + period(n).unwrap()).unwrap();
        prop_assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn boundary_is_conjugate_symmetric(n in 2u32..20, phi in 0.0f64..100.0) {
        let a = boundary_point(n, phi).unwrap();
        let b = boundary_point(n, -phi).unwrap();
        prop_assert!((a.conj() - b).norm() < 1e-15);
    }

    #[test]
    fn each_lobe_is_the_previous_rotated(n in 2u32..20, phi in 0.0f64..100.0) {
        let a = boundary_point(n, phi).unwrap();
        let b = boundary_point(n, phi + TAU).unwrap();
        let rot = Complex::from_polar(1.0, TAU / (n - 1) as f64);
        prop_assert!((a * rot - b).norm() < 1e-12);
    }

    #[test]
    fn membership_is_rotation_invariant(n in 3u32..7, c in complex_in(1.1)) {
        let rot = Complex::from_polar(1.0, TAU / (n - 1) as f64);
        let a = membership(&params(n, c), 300);
        let b = membership(&params(n, c * rot), 300);
        // Rotation rounds differently; orbits far from the escape threshold agree.
        if let (Membership::Escaped(x), Membership::Escaped(y)) = (a, b) {
            prop_assert!(x.abs_diff(y) <= 1, "{} vs {}", x, y);
        } else {
            prop_assert_eq!(a.is_member(), b.is_member());
        }
    }

    #[test]
    fn larger_budget_keeps_escape_step(n in 2u32..7, c in complex_in(1.5), budget in 1u32..200, extra in 0u32..500) {
        let p = params(n, c);
        if let Membership::Escaped(k) = membership(&p, budget) {
            prop_assert_eq!(membership(&p, budget + extra), Membership::Escaped(k));
            prop_assert_eq!(membership(&p, k), Membership::Escaped(k));
        }
    }
}

#[test]
fn rotated_membership_agrees_on_a_fixed_sample() {
    // Deterministic companion to the property above, exact escape steps.
    for n in 3..=6u32 {
        let rot = Complex::from_polar(1.0, TAU / (n - 1) as f64);
        for k in 0..40 {
            let c = Complex::from_polar(0.3 + 0.02 * k as f64, 0.37 * k as f64);
            let a = membership(&params(n, c), 1000);
            let b = membership(&params(n, c * rot), 1000);
            assert_eq!(a, b, "n={n} c={c}");
        }
    }
}

#[test]
fn numerical_lobe_count_is_degree_minus_one() {
    for n in 2..=8u32 {
        let s = locate_extrema(n, 1024).unwrap();
        assert_eq!(s.minima.len(), (n - 1) as usize);
        assert_eq!(s.maxima.len(), (n - 1) as usize);
    }
}

#[test]
fn r_base_approaches_one_like_log_n_over_n() {
    let mut prev = f64::INFINITY;
    for k in 1..=6 {
        let n = 10u32.pow(k);
        let dist = 1.0 - r_base(n).unwrap();
        assert!(dist > 0.0 && dist < prev, "k={k}");
        assert!(dist < 3.0 * (n as f64).ln() / n as f64, "k={k}");
        prev = dist;
    }
}

#[test]
fn gap_vanishes() {
    let mut prev = f64::INFINITY;
    for n in 2..=2000u32 {
        let (lo, hi) = c_extrema(n).unwrap();
        let gap = hi - lo;
        assert!(gap < 4.0 / n as f64 && gap < prev, "n={n}");
        prev = gap;
    }
}

#[test]
fn r_base_increases_from_degree_three() {
    let values: Vec<f64> = (3..=500).map(|n| r_base(n).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
}

#[test]
fn symmetric_grid_renders_mirror_image() {
    for n in [2u32, 3, 5] {
        let spec = GridSpec {
            width: 41,
            height: 40,
            center: Complex::new(-0.2, 0.0),
            scale: 0.06,
            max_iter: 300,
        };
        let buf = render(n, &spec, 3).unwrap();
        // Rows j and height - j map to conjugate imaginary parts.
        for j in 1..spec.height / 2 {
            assert_eq!(buf.row(j), buf.row(spec.height - j), "n={n} row {j}");
        }
    }
}
