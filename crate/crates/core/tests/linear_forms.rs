use std::sync::Arc;

use gseed_core::corpus::{self, series_corpus};
use gseed_core::decomposition::Decomposer;
use gseed_core::linear_forms::{
    build_linear_form, coefficient_bound_check, lcm_upto, pade_order_check, partial_fractions, t_series,
};
use gseed_core::series::{half_radius_point, CoefficientStream};
use gseed_core::Error;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

fn decomposer(label: &str) -> Decomposer {
    let spec = corpus::spec_by_label(label).unwrap();
    Decomposer::new(Arc::new(CoefficientStream::new(spec)))
}

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

#[test]
fn partial_fraction_examples() {
    // 1/((k+1)(k+2)) = 1/(k+1) − 1/(k+2).
    let t = partial_fractions(1, 0, 1).unwrap();
    assert_eq!(*t.get(1, 1), 1);
    assert_eq!(*t.get(2, 1), -1);
    // 1/((k+1)²(k+2)²) = 1/(k+1)² − 2/(k+1) + 1/(k+2)² + 2/(k+2).
    let t = partial_fractions(2, 0, 1).unwrap();
    assert_eq!(*t.get(1, 2), 1);
    assert_eq!(*t.get(1, 1), -2);
    assert_eq!(*t.get(2, 2), 1);
    assert_eq!(*t.get(2, 1), 2);
}

/// Residues from the textbook formula for simple poles,
/// `c_{j,1} = n!^{1−r}(−j−rn+1)_{rn} / Π_{i≠j}(i−j)`.
#[test]
fn simple_pole_residues_match_closed_form() {
    for r in 0..=1u32 {
        for n in 0..=8usize {
            let t = partial_fractions(1, r, n).unwrap();
            for j in 1..=n + 1 {
                let mut num = Rational::from(Integer::from(Integer::factorial(n as u32)).pow(1 - r));
                for i in 0..r as i64 * n as i64 {
                    num *= -(j as i64) - i;
                }
                let den = (1..=n as i64 + 1)
                    .filter(|&i| i != j as i64)
                    .fold(Integer::from(1), |acc, i| acc * (i - j as i64));
                assert_eq!(*t.get(j, 1), num / den, "r={r} n={n} j={j}");
            }
        }
    }
}

#[test]
fn tables_reconstruct_and_are_integral() {
    for s in 1..=4u32 {
        for r in 0..=s {
            for n in 0..=7 {
                let t = partial_fractions(s, r, n).unwrap();
                assert!(t.reconstruction_holds(), "S={s} r={r} n={n}");
                assert!(t.integrality_holds(), "S={s} r={r} n={n}");
                assert!(coefficient_bound_check(&t).within, "S={s} r={r} n={n}");
            }
        }
    }
}

#[test]
fn lcm_grows_like_e_to_the_n() {
    let d = lcm_upto(200);
    let rate = Float::with_val(64, &d).ln().to_f64() / 200.0;
    assert!((rate - 1.0).abs() < 0.1, "{rate}");
}

#[test]
fn t_series_geometric_is_log() {
    // Σ z^{−k}/(k+1) at z = 2 is 2 log 2.
    let stream = CoefficientStream::new(corpus::spec_by_label("geometric").unwrap());
    let v = t_series(&stream, 1, 0, 0, &q(2, 1), 128).unwrap();
    let expected = Float::with_val(128, 2) * Float::with_val(128, 2).ln();
    let err = Float::with_val(128, v.re() - &expected).abs().to_f64();
    assert!(err < 1e-30, "{err}");
}

#[test]
fn t_series_rejects_points_inside_the_radius() {
    let stream = CoefficientStream::new(corpus::spec_by_label("apery").unwrap());
    let err = t_series(&stream, 3, 1, 2, &q(2, 1), 128).unwrap_err();
    assert!(matches!(err, Error::OutsideDisk { .. }));
}

#[test]
fn geometric_linear_form() {
    let rec = build_linear_form(&decomposer("geometric"), 2, 0, 3, &q(1, 2), 128).unwrap();
    assert!(rec.residual < 1e-20, "{}", rec.residual);
    assert!(rec.degree_bounds_hold);
    assert!(rec.delta_bound_clears);
}

#[test]
fn apery_linear_form() {
    let rec = build_linear_form(&decomposer("apery"), 3, 1, 5, &q(1, 100), 160).unwrap();
    assert!(rec.relative_residual < 1e-25, "{}", rec.relative_residual);
    assert!(rec.degree_bounds_hold);
    assert!(rec.delta_bound_clears);
    assert!(rec.delta_bound.is_divisible(&rec.delta_n));
}

#[test]
fn linear_forms_on_corpus() {
    for spec in series_corpus() {
        let stream = Arc::new(CoefficientStream::new(spec.clone()));
        let alpha = half_radius_point(&stream).unwrap();
        let dec = Decomposer::new(stream);
        for (s, r) in [(1, 0), (2, 1), (3, 1)] {
            for n in [dec.ell0(), dec.ell0() + 3] {
                let rec = build_linear_form(&dec, s, r, n, &alpha, 160).unwrap();
                assert!(rec.relative_residual < 1e-25, "{} S={s} r={r} n={n}: {}", spec.label, rec.relative_residual);
                assert!(rec.degree_bounds_hold, "{} S={s} r={r} n={n}", spec.label);
                assert!(rec.delta_bound_clears, "{} S={s} r={r} n={n}", spec.label);
            }
        }
    }
}

#[test]
fn pade_conditions_hold_exactly() {
    for label in ["geometric", "sqrt", "apery", "log-squared", "chi4"] {
        let dec = decomposer(label);
        for (s, r) in [(1, 0), (2, 1), (3, 1), (3, 2)] {
            for n in dec.ell0()..dec.ell0() + 4 {
                let rep = pade_order_check(&dec, s, r, n).unwrap_or_else(|e| panic!("{label} S={s} r={r} n={n}: {e}"));
                assert!(rep.first_nonzero.is_none_or(|k| k >= rep.rn as i64));
            }
        }
    }
}

#[test]
fn n_below_ell0_is_rejected() {
    let dec = decomposer("apery");
    assert!(build_linear_form(&dec, 3, 1, 0, &q(1, 100), 128).is_err());
}
