mod common;

use common::{semicircle_density, upper_half_plane_points};
use freeprob::transforms::{
    cauchy, eta_coefficients, eta_transform, r_transform, subordination, DEFAULT_SUBORDINATION_TOL,
};
use freeprob::{
    free_convolve, make_free_gig, make_free_poisson, moment, Letter, Measure, MomentContext,
    SpectralFunction,
};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn test_measures() -> Vec<Measure> {
    vec![
        Measure::point_mass(1.5),
        Measure::semicircle(0.5, 2.0).unwrap(),
        make_free_poisson(2.0, 0.5).unwrap(),
        make_free_poisson(0.5, 1.0).unwrap(),
        make_free_gig(2.0, 1.0, 1.0).unwrap(),
        make_free_gig(-1.5, 0.5, 2.0).unwrap(),
    ]
}

#[test]
fn cauchy_basics() {
    let z = c(0.3, 0.7);
    let g = cauchy(&Measure::point_mass(2.0), z).unwrap();
    assert!((g - (z - 2.0).inv()).norm() < 1e-15);
    for mu in test_measures() {
        let far = c(6e5, 8e5);
        assert!((far * cauchy(&mu, far).unwrap() - 1.0).norm() < 1e-5);
        for z in upper_half_plane_points(12, 1.0, 3.0) {
            let g = cauchy(&mu, z).unwrap();
            assert!(g.im < 0.0);
            assert!((cauchy(&mu, z.conj()).unwrap() - g.conj()).norm() < 1e-14);
        }
    }
}

#[test]
fn closed_forms_match_quadrature() {
    for mu in test_measures() {
        for z in [c(0.0, 10.0), c(1.0, 0.5), c(-2.0, 0.2), c(4.0, 1.0)] {
            let a = mu.cauchy(z).unwrap();
            let b = mu.cauchy_quadrature(z).unwrap();
            assert!((a - b).norm() < 1e-9, "{mu:?} at {z}: {a} vs {b}");
        }
    }
}

#[test]
fn cauchy_rejects_points_of_the_support() {
    let mu = Measure::semicircle(0.0, 1.0).unwrap();
    assert!(cauchy(&mu, c(0.5, 0.0)).is_err());
    let fp = make_free_poisson(0.5, 1.0).unwrap();
    assert!(cauchy(&fp, c(0.0, 0.0)).is_err());
}

#[test]
fn r_transforms() {
    let w = [c(0.05, 0.02), c(-0.1, 0.05), c(0.08, -0.03)];
    for &w in &w {
        let r = r_transform(&Measure::point_mass(0.7), w).unwrap();
        assert!((r - 0.7).norm() < 1e-12);
        // Semicircle of radius R: r(w) = mean + R²w/4.
        let sc = Measure::semicircle(0.2, 1.5).unwrap();
        let r = r_transform(&sc, w).unwrap();
        assert!((r - (w * (1.5 * 1.5 / 4.0) + 0.2)).norm() < 1e-10);
        // Additivity: ν(λ₁, γ) ⊞ ν(λ₂, γ) = ν(λ₁ + λ₂, γ).
        let r1 = r_transform(&make_free_poisson(1.5, 0.5).unwrap(), w).unwrap();
        let r2 = r_transform(&make_free_poisson(2.0, 0.5).unwrap(), w).unwrap();
        let r12 = r_transform(&make_free_poisson(3.5, 0.5).unwrap(), w).unwrap();
        assert!((r1 + r2 - r12).norm() < 1e-9);
        let exact = C::from(3.5 * 0.5) / (1.0 - w * 0.5);
        assert!((r12 - exact).norm() < 1e-9);
    }
}

#[test]
fn eta_transform_properties() {
    for mu in test_measures() {
        assert_eq!(eta_transform(&mu, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let w = c(0.05, 0.03);
        let lhs = 1.0 - eta_transform(&mu, w).unwrap();
        let rhs = w / cauchy(&mu, w.inv()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "{mu:?}");
    }
}

#[test]
fn eta_coefficients_are_boolean_cumulants() {
    for mu in [
        make_free_poisson(2.0f64, 0.5).unwrap(),
        make_free_gig(2.0, 1.0, 1.0).unwrap(),
    ] {
        let coeffs = eta_coefficients(&mu, 6).unwrap();
        assert!(coeffs[0].norm() < 1e-12);
        assert!((coeffs[1].re - moment(&mu, 1).unwrap()).abs() < 1e-10);
        let mut ctx = MomentContext::new(mu.clone(), mu.clone());
        for k in 1..=6 {
            let w = vec![Letter::a(SpectralFunction::Identity); k];
            let beta = ctx.boolean_cumulant(&w).unwrap();
            assert!(
                (coeffs[k] - beta).norm() < 1e-8,
                "k = {k}: {} vs {beta}",
                coeffs[k]
            );
        }
    }
}

#[test]
fn subordination_special_cases() {
    let x = Measure::semicircle(0.3, 1.2).unwrap();
    for z in upper_half_plane_points(10, 0.0, 2.0) {
        // Y = δ₀: ω₁ = z, ω₂ = 1/G_X(z).
        let p = subordination(&x, &Measure::point_mass(0.0), z, DEFAULT_SUBORDINATION_TOL).unwrap();
        assert!((p.omega1 - z).norm() < 1e-10);
        assert!((p.omega2 - cauchy(&x, z).unwrap().inv()).norm() < 1e-9);
        // Y = δ_c: ω₁ = z - c.
        let p = subordination(&x, &Measure::point_mass(0.8), z, DEFAULT_SUBORDINATION_TOL).unwrap();
        assert!((p.omega1 - (z - 0.8)).norm() < 1e-10);
        assert!((p.g - cauchy(&x, z - 0.8).unwrap()).norm() < 1e-10);
        // Identical semicircles: ω₁ = ω₂ = (z + 1/G)/2.
        let p = subordination(&x, &x, z, DEFAULT_SUBORDINATION_TOL).unwrap();
        let half = (z + p.g.inv()) / 2.0;
        assert!((p.omega1 - half).norm() < 1e-9 && (p.omega2 - half).norm() < 1e-9);
        let sum = Measure::semicircle(0.6, 1.2 * 2f64.sqrt()).unwrap();
        assert!((p.g - cauchy(&sum, z).unwrap()).norm() < 1e-9);
    }
    assert!(subordination(&x, &x, c(1.0, 0.0), 1e-13).is_err());
}

#[test]
fn semicircle_convolution_density() {
    let x = Measure::semicircle(0.0, 2.0).unwrap();
    let r = 2.0 * 2f64.sqrt();
    let grid: Vec<f64> = (0..=120).map(|i| -3.2 + 6.4 * i as f64 / 120.0).collect();
    let out = free_convolve(&x, &x, &grid, &[4e-6, 2e-6, 1e-6]).unwrap();
    let err = grid
        .iter()
        .zip(&out.density)
        .map(|(&t, &d)| (d - semicircle_density(0.0, r, t)).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-4, "sup error {err}");
    assert!((out.raw_mass - 1.0).abs() < 1e-6);
    let (a, b) = out.intervals[0];
    assert!((a + r).abs() < 1e-6 && (b - r).abs() < 1e-6);
}

#[test]
fn convolution_cumulants_add() {
    // κ_n(X ⊞ Y) = κ_n(X) + κ_n(Y), read off the output law's moments.
    let x = make_free_poisson(2.0, 0.5).unwrap();
    let y = Measure::semicircle(1.0, 1.0).unwrap();
    let grid: Vec<f64> = (0..=100).map(|i| -1.0 + 6.0 * i as f64 / 100.0).collect();
    let out = free_convolve(&x, &y, &grid, &[1e-4, 5e-5, 2.5e-5]).unwrap();
    let mom = |mu: &Measure| -> Vec<f64> { (0..=6).map(|k| moment(mu, k).unwrap()).collect() };
    let kx = freeprob::cumulants::moments_to_free_cumulants(&mom(&x));
    let ky = freeprob::cumulants::moments_to_free_cumulants(&mom(&y));
    let ks = freeprob::cumulants::moments_to_free_cumulants(&mom(&out.measure));
    for n in 1..=6 {
        assert!(
            (ks[n] - kx[n] - ky[n]).abs() < 1e-5,
            "n = {n}: {} vs {}",
            ks[n],
            kx[n] + ky[n]
        );
    }
}

#[test]
fn negative_density_is_reported() {
    let x = Measure::semicircle(0.0, 1.0).unwrap();
    let bad = free_convolve(&x, &x, &[0.0, 0.0], &[1e-3]);
    assert!(bad.is_err());
}

#[test]
fn single_precision() {
    let mu = make_free_poisson(2.0f32, 0.5).unwrap();
    let g = cauchy(&mu, Complex::new(1.0f32, 0.5)).unwrap();
    let g64 = cauchy(&make_free_poisson(2.0, 0.5).unwrap(), c(1.0, 0.5)).unwrap();
    assert!(((g.re as f64) - g64.re).abs() < 1e-5 && ((g.im as f64) - g64.im).abs() < 1e-5);
    let p = subordination(
        &Measure::semicircle(0.0, 1.0).unwrap(),
        &Measure::semicircle(0.0, 1.0).unwrap(),
        c(0.2, 0.5),
        1e-13,
    )
    .unwrap();
    let x32 = freeprob::SpectralMeasure::<f32>::semicircle(0.0, 1.0).unwrap();
    let q = subordination(&x32, &x32, Complex::new(0.2f32, 0.5), 1e-6).unwrap();
    assert!(((q.g.re as f64) - p.g.re).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subordination_invariants(re in -4.0f64..6.0, im in 0.01f64..5.0, pair in 0usize..3) {
        let (x, y) = match pair {
            0 => (Measure::semicircle(0.0, 1.0).unwrap(), make_free_poisson(2.0, 0.5).unwrap()),
            1 => (make_free_gig(-2.0, 1.0, 1.0).unwrap(), make_free_poisson(2.0, 1.0).unwrap()),
            _ => (make_free_poisson(0.5, 1.0).unwrap(), Measure::semicircle(1.0, 0.5).unwrap()),
        };
        let z = c(re, im);
        let p = subordination(&x, &y, z, DEFAULT_SUBORDINATION_TOL).unwrap();
        prop_assert!(p.omega1.im >= z.im * (1.0 - 1e-9));
        prop_assert!(p.omega2.im >= z.im * (1.0 - 1e-9));
        prop_assert!(p.max_residual() <= 1e-12, "{:?}", p);
        prop_assert!((cauchy(&x, p.omega1).unwrap() - p.g).norm() <= 1e-12);
        prop_assert!((z - p.omega1 - p.omega2 + p.g.inv()).norm() <= 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn conjugate_symmetry(re in -5.0f64..5.0, im in 0.001f64..5.0) {
        for mu in test_measures() {
            let z = c(re, im);
            prop_assert!((cauchy(&mu, z.conj()).unwrap() - cauchy(&mu, z).unwrap().conj()).norm() < 1e-14);
        }
    }
}
