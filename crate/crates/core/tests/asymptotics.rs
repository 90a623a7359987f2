use gseed_core::asymptotics::{
    empirical_growth, nonneg_bounds, phi_data, predict_growth, real_integral_check, root_census, saddle_point,
    saddle_polynomial,
};
use gseed_core::corpus::{self, series_corpus};
use gseed_core::series::{half_radius_point, CoefficientStream};
use gseed_core::{BigComplex, Error};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Rational};

fn stream(label: &str) -> CoefficientStream {
    CoefficientStream::new(corpus::spec_by_label(label).unwrap())
}

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn real(x: f64) -> BigComplex {
    BigComplex::from_f64(256, x, 0.0)
}

#[test]
fn saddle_example_from_seed() {
    let root = saddle_point(20, 2, &real(0.5), 256).unwrap();
    let tau = root.tau.to_c64();
    let seed = 2.0 - (2.0f64 / 3.0).powi(20);
    // The seed is 1.9996993; Newton moves it by about 3·10⁻⁷.
    assert!((tau.re - seed).abs() < 1e-6, "{tau}");
    assert!(tau.im.abs() < 1e-30);
    assert!(root.residual < 1e-30, "{}", root.residual);
    assert!(!root.fallback);
}

#[test]
fn negative_real_z_gives_real_root_beyond_r() {
    let root = saddle_point(30, 2, &real(-0.3), 256).unwrap();
    assert!(root.tau.im.clone().abs() < 1e-60);
    assert!(root.tau.re > 2);
}

#[test]
fn defining_equation_holds_in_modulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let z = Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(-3.1..3.1));
        let zb = BigComplex::from_c64(256, z);
        for (s, r) in [(4, 1), (10, 2), (25, 3)] {
            let tau = saddle_point(s, r, &zb, 256).unwrap().tau;
            let lhs = (&zb * &tau.powu(s as u64 + 1)).abs();
            let rmt = BigComplex::real_minus(&Float::with_val(256, r), &tau);
            let rhs = (&rmt * &tau.add_real(&Float::with_val(256, 1)).powu(s as u64)).abs();
            let rel = Float::with_val(256, (lhs - &rhs) / rhs).abs().to_f64();
            assert!(rel < 1e-60, "S={s} r={r} z={z}: {rel}");
        }
    }
}

/// Eigenvalues of the companion matrix, an independent route to all roots.
fn companion_roots(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let m = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    m.schur().eigenvalues().unwrap().iter().copied().collect()
}

#[test]
fn root_census_small_s() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in 1..=8u32 {
        for r in 1..=s.min(3) {
            for _ in 0..20 {
                let z = Complex64::from_polar(rng.gen_range(0.02..0.98), rng.gen_range(-3.14..3.14));
                let census = root_census(s, r, z);
                assert_eq!((census.left, census.right, census.strip), (s as usize, 1, 0), "S={s} r={r} z={z}");
                let eig = companion_roots(&saddle_polynomial(s, r, z));
                assert_eq!(eig.iter().filter(|t| t.re < -0.5).count(), s as usize);
                assert_eq!(eig.iter().filter(|t| t.re > 0.5).count(), 1);
            }
        }
    }
}

#[test]
fn eqtrois_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let z = BigComplex::from_c64(256, Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(-3.1..3.1)));
        for (s, r) in [(6, 1), (20, 2), (40, 3)] {
            let tau = saddle_point(s, r, &z, 256).unwrap().tau;
            let d = phi_data(s, r, &z, &tau).unwrap();
            assert!(d.spread < 1e-25, "{}", d.spread);
        }
    }
}

#[test]
fn seed_ratio_tends_to_one() {
    let z = BigComplex::from_f64(256, 0.3, 0.4);
    let ratios: Vec<f64> = [20, 40, 80]
        .iter()
        .map(|&s| saddle_point(s, 2, &z, 256).unwrap().seed_ratio)
        .collect();
    let gaps: Vec<f64> = ratios.iter().map(|x| (x - 1.0).abs()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{ratios:?}");
    assert!(gaps[2] < 1e-3, "{ratios:?}");
}

#[test]
fn phi_respects_upper_rate() {
    let (s, r) = (40u32, 3u32);
    let z = real(-0.5);
    let tau = saddle_point(s, r, &z, 256).unwrap().tau;
    let d = phi_data(s, r, &z, &tau).unwrap();
    let bound = 3f64.powi(3) / 3f64.powi(40);
    assert!(d.exp_phi.abs().to_f64() <= bound);
}

#[test]
fn psi_matches_large_s_estimate() {
    let z = BigComplex::from_f64(256, 0.2, -0.3);
    let r = 2u32;
    let mut prev = f64::INFINITY;
    for s in [20u32, 40, 80] {
        let tau = saddle_point(s, r, &z, 256).unwrap().tau;
        let psi = phi_data(s, r, &z, &tau).unwrap().psi;
        let big = Float::with_val(256, 3).pow(s) / Float::with_val(256, 2).pow(s + 1);
        let est = z.recip().scale_f(&big);
        let gap = ((&psi / &est).to_c64() - 1.0).norm();
        assert!(gap < prev, "S={s}: {gap}");
        prev = gap;
    }
    assert!(prev < 1e-3);
}

#[test]
fn geometric_prediction_has_one_singularity() {
    let rep = predict_growth(&stream("geometric"), 6, 1, &q(1, 2), 128).unwrap();
    assert_eq!(rep.singularities.len(), 1);
    assert_eq!(rep.dominant, vec![0]);
    let z = rep.singularities[0].z.to_c64();
    assert!((z - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    assert!(rep.within_upper_bound);
}

#[test]
fn apery_prediction_reports_both_singularities() {
    let rep = predict_growth(&stream("apery"), 6, 1, &q(1, 100), 128).unwrap();
    assert_eq!(rep.singularities.len(), 2);
    assert_eq!(rep.dominant.len(), 1);
    assert!(rep.singularities.iter().all(|g| g.rho.is_finite() && g.rho > 0.0));
    assert!((rep.singularities[0].rho - rep.singularities[1].rho).abs() > 1e-6);
}

#[test]
fn predictions_within_upper_rate_on_corpus() {
    for spec in series_corpus() {
        let s = CoefficientStream::new(spec.clone());
        let alpha = half_radius_point(&s).unwrap();
        for (big_s, r) in [(3, 1), (6, 1), (8, 2), (20, 2)] {
            let rep = predict_growth(&s, big_s, r, &alpha, 128).unwrap();
            assert!(rep.within_upper_bound, "{} S={big_s} r={r}", spec.label);
            for g in &rep.singularities {
                assert!(g.phi.spread < 1e-25);
            }
        }
    }
}

#[test]
fn prediction_outside_disk_is_rejected() {
    let err = predict_growth(&stream("apery"), 6, 1, &q(1, 2), 128).unwrap_err();
    assert!(matches!(err, Error::OutsideDisk { .. }));
}

#[test]
fn geometric_growth_matches_saddle() {
    let s = stream("geometric");
    let alpha = q(1, 2);
    let pred = predict_growth(&s, 6, 1, &alpha, 128).unwrap();
    let emp = empirical_growth(&s, 6, 1, &alpha, 150, 200, 512).unwrap();
    let rel = ((emp.log_a - pred.log_a_pred) / pred.log_a_pred).abs();
    assert!(rel < 0.05, "emp {} pred {}: {rel}", emp.log_a, pred.log_a_pred);
}

#[test]
fn oscillating_growth_still_matches_saddle() {
    let s = stream("chi4");
    let alpha = q(1, 2);
    let pred = predict_growth(&s, 6, 1, &alpha, 128).unwrap();
    assert_eq!(pred.dominant.len(), 2);
    let emp = empirical_growth(&s, 6, 1, &alpha, 150, 200, 512).unwrap();
    assert!(emp.samples.iter().any(|x| x.sign < 0) && emp.samples.iter().any(|x| x.sign > 0));
    // Sign changes make the four-column fit unstable, so compare the n-th root at the end of the window.
    let rate = emp.samples.last().unwrap().rate;
    let rel = ((rate - pred.log_a_pred) / pred.log_a_pred).abs();
    assert!(rel < 0.05, "log|T|/n {rate} vs {}: {rel}", pred.log_a_pred);
}

#[test]
fn short_window_is_rejected() {
    assert!(empirical_growth(&stream("geometric"), 6, 1, &q(1, 2), 150, 160, 256).is_err());
}

#[test]
fn lower_rate_plug_in() {
    let rep = nonneg_bounds(&stream("geometric"), 3, 1, &q(2, 1), &q(1, 1), 5, 6, 128).unwrap();
    assert!((rep.stated_lower_log_rate - (1.0f64 / 64.0).ln()).abs() < 1e-12);
    assert_eq!(rep.upper_log_rate, 0.0);
    let rep = nonneg_bounds(&stream("geometric"), 3, 2, &q(2, 1), &q(1, 1), 5, 6, 128).unwrap();
    assert!((rep.upper_log_rate - 0.5f64.ln()).abs() < 1e-12);
}

#[test]
fn derived_sandwich_holds() {
    for label in ["geometric", "log", "log-squared"] {
        let rep = nonneg_bounds(&stream(label), 3, 2, &q(2, 1), &q(1, 1), 50, 150, 256).unwrap();
        assert!(rep.derived_sandwich_holds, "{label}");
    }
}

#[test]
fn negative_coefficients_are_refused() {
    let err = nonneg_bounds(&stream("chi4"), 3, 2, &q(2, 1), &q(1, 1), 10, 20, 128).unwrap_err();
    assert!(matches!(err, Error::NegativeCoefficient(_)));
}

#[test]
fn real_integral_examples() {
    let s = stream("geometric");
    for (big_s, r, n, z, tol) in [(1, 0, 2, 2, 1e-10), (1, 1, 3, 3, 1e-10), (2, 0, 1, 2, 1e-8)] {
        let rep = real_integral_check(&s, big_s, r, n, &q(z, 1), 128).unwrap();
        assert!(rep.residual < tol, "S={big_s} r={r} n={n}: {}", rep.residual);
    }
}

#[test]
fn real_integral_rejects_s_above_two() {
    assert!(real_integral_check(&stream("geometric"), 3, 1, 2, &q(2, 1), 128).is_err());
}
