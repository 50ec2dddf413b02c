//! Property suite for the measure functionals: quadrature agreement of
//! the Gaussian closed forms, derivative consistency, monotonicity, and
//! convexity.

mod common;

use common::{quad_convexity, quad_tilted_mean_z0, rng, GaussHermite};
use levy_radner::{JumpCovariance, LevyMeasure, Tilt};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn gaussian_tilted_mean_matches_quadrature() {
    // Closed form vs 64-node Gauss-Hermite over the bivariate marginal,
    // for tilts up to norm 5.
    let rule = GaussHermite::new(64);
    let mut r = rng(7);
    for _ in 0..200 {
        let rho = -0.9 + 1.8 * r.random::<f64>();
        let kappa = 0.5 + 1.5 * r.random::<f64>();
        let angle = std::f64::consts::TAU * r.random::<f64>();
        let norm = 5.0 * r.random::<f64>();
        let (u0, ui) = (norm * angle.cos(), norm * angle.sin());

        let m = LevyMeasure::gaussian(JumpCovariance::flat(2, rho).unwrap(), kappa).unwrap();
        let closed = m.tilted_mean_z0(&Tilt::pair(u0, 1, ui).unwrap()).unwrap();
        let quad = quad_tilted_mean_z0(&rule, kappa, rho, u0, ui);
        let scale = closed.abs().max(1e-12);
        assert!(
            (closed - quad).abs() / scale <= 1e-6,
            "closed {closed} vs quadrature {quad} at rho={rho}, u=({u0},{ui})"
        );
    }
}

#[test]
fn gaussian_convexity_matches_quadrature() {
    let rule = GaussHermite::new(64);
    let mut r = rng(8);
    for _ in 0..200 {
        let rho = -0.9 + 1.8 * r.random::<f64>();
        let kappa = 0.5 + 1.5 * r.random::<f64>();
        let b0 = -2.5 + 5.0 * r.random::<f64>();
        let bi = -2.5 + 5.0 * r.random::<f64>();

        let m = LevyMeasure::gaussian(JumpCovariance::flat(2, rho).unwrap(), kappa).unwrap();
        let closed = m.convexity_integral(&Tilt::pair(b0, 1, bi).unwrap()).unwrap();
        let quad = quad_convexity(&rule, kappa, rho, b0, bi);
        let scale = closed.abs().max(1e-12);
        assert!(
            (closed - quad).abs() / scale <= 1e-6,
            "closed {closed} vs quadrature {quad} at rho={rho}, b=({b0},{bi})"
        );
    }
}

#[test]
fn tilted_mean_is_derivative_of_tilted_mass() {
    // Central difference of ∫ e^{u·z} dν in the u0 direction at step 1e-5.
    let h = 1e-5;
    let cases: Vec<LevyMeasure> = vec![
        LevyMeasure::gaussian(JumpCovariance::flat(3, 0.4).unwrap(), 1.3).unwrap(),
        LevyMeasure::gaussian(JumpCovariance::identity(2).unwrap(), 0.7).unwrap(),
        common::random_atomic_measure(&mut rng(3), 3),
        common::random_atomic_measure(&mut rng(4), 2),
    ];
    for m in &cases {
        for &u0 in &[-1.5, -0.3, 0.0, 0.8, 2.0] {
            for &ui in &[-0.5, 0.0, 0.7] {
                let tilt = |x: f64| Tilt::pair(x, 1, ui).unwrap();
                let fd = (m.tilted_mass(&tilt(u0 + h)).unwrap()
                    - m.tilted_mass(&tilt(u0 - h)).unwrap())
                    / (2.0 * h);
                let exact = m.tilted_mean_z0(&tilt(u0)).unwrap();
                let scale = exact.abs().max(1e-8);
                assert!(
                    (fd - exact).abs() / scale <= 1e-4,
                    "finite difference {fd} vs closed form {exact} at u0={u0}, ui={ui}"
                );
            }
        }
    }
}

#[test]
fn tilted_mean_strictly_increasing_in_u0() {
    let cases: Vec<LevyMeasure> = vec![
        LevyMeasure::gaussian(JumpCovariance::flat(2, -0.4).unwrap(), 1.0).unwrap(),
        LevyMeasure::gaussian(JumpCovariance::flat(2, 0.9).unwrap(), 2.0).unwrap(),
        common::random_atomic_measure(&mut rng(5), 2),
    ];
    for m in &cases {
        for &ui in &[-0.8, 0.0, 0.4] {
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=80 {
                let u0 = -4.0 + 8.0 * f64::from(k) / 80.0;
                let v = m
                    .tilted_mean_z0(&Tilt::pair(u0, 1, ui).unwrap())
                    .unwrap();
                assert!(v > prev, "not increasing at u0={u0}, ui={ui}");
                prev = v;
            }
        }
    }
}

#[test]
fn convexity_integral_nonnegative_on_random_tilts() {
    // 1000 random dense exponent vectors per measure.
    let mut r = rng(11);
    let specs: Vec<LevyMeasure> = vec![
        LevyMeasure::gaussian(JumpCovariance::flat(4, 0.3).unwrap(), 1.0).unwrap(),
        LevyMeasure::gaussian(JumpCovariance::flat(3, -0.3).unwrap(), 1.7).unwrap(),
        common::random_atomic_measure(&mut r, 4),
    ];
    for m in &specs {
        let dim = m.dim();
        for _ in 0..1000 {
            let b: Vec<f64> = (0..dim).map(|_| -3.0 + 6.0 * r.random::<f64>()).collect();
            let k = m.convexity_integral(&Tilt::dense(b.clone())).unwrap();
            assert!(k >= 0.0, "K({b:?}) = {k} negative");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Intensity scales every functional linearly; doubling is exact in
    /// floating point.
    #[test]
    fn doubling_intensity_doubles_functionals(
        rho in -0.45f64..0.95,
        kappa in 0.1f64..3.0,
        u0 in -2.0f64..2.0,
        ui in -2.0f64..2.0,
    ) {
        let cov = JumpCovariance::flat(3, rho).unwrap();
        let m1 = LevyMeasure::gaussian(cov.clone(), kappa).unwrap();
        let m2 = LevyMeasure::gaussian(cov, 2.0 * kappa).unwrap();
        let tilt = Tilt::pair(u0, 2, ui).unwrap();
        prop_assert_eq!(
            2.0 * m1.tilted_mean_z0(&tilt).unwrap(),
            m2.tilted_mean_z0(&tilt).unwrap()
        );
        prop_assert_eq!(
            2.0 * m1.convexity_integral(&tilt).unwrap(),
            m2.convexity_integral(&tilt).unwrap()
        );
        prop_assert_eq!(2.0 * m1.total_mass(), m2.total_mass());
    }

    /// The convexity integral of a sparse tilt equals that of its dense
    /// embedding.
    #[test]
    fn sparse_and_dense_tilts_agree(
        rho in -0.4f64..0.9,
        u0 in -2.0f64..2.0,
        ui in -2.0f64..2.0,
    ) {
        let m = LevyMeasure::gaussian(JumpCovariance::flat(3, rho).unwrap(), 1.0).unwrap();
        let sparse = Tilt::pair(u0, 2, ui).unwrap();
        let dense = Tilt::dense(vec![u0, 0.0, ui]);
        let a = m.convexity_integral(&sparse).unwrap();
        let b = m.convexity_integral(&dense).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        let ta = m.tilted_mean_z0(&sparse).unwrap();
        let tb = m.tilted_mean_z0(&dense).unwrap();
        prop_assert!((ta - tb).abs() <= 1e-12 * (1.0 + ta.abs()));
    }
}
