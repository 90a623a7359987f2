use std::sync::Arc;

use gseed_core::corpus::{self, series_corpus};
use gseed_core::decomposition::{growth_profile, verify_decomposition, DecompositionRecord, Decomposer};
use gseed_core::poly::RationalPoly;
use gseed_core::recurrence::inhomogeneous_tower;
use gseed_core::series::{half_radius_point, CoefficientStream};
use gseed_core::Error;
use rug::{Integer, Rational};

fn decomposer(label: &str) -> Decomposer {
    let spec = corpus::spec_by_label(label).unwrap();
    Decomposer::new(Arc::new(CoefficientStream::new(spec)))
}

#[test]
fn geometric_second_shift() {
    // F_2^{[1]} = Li_1 − z and −z = (z² − z)·1/(1 − z).
    let rec = decomposer("geometric").decompose(2, 1).unwrap();
    assert_eq!(rec.p, vec![vec![Rational::from(1)]]);
    assert_eq!(rec.q, vec![RationalPoly::from_ints(&[0, -1, 1])]);
}

#[test]
fn geometric_polylog_tail() {
    // F_5^{[3]} = Li_3 − Σ_{k<5} z^k/k³ and the tail is −(1−z)Σ z^k/k³ · F.
    let rec = decomposer("geometric").decompose(5, 3).unwrap();
    let zero = Rational::new();
    assert_eq!(rec.p, vec![vec![zero.clone(), zero, Rational::from(1)]]);
    let tail = RationalPoly::new(
        std::iter::once(Rational::new())
            .chain((1..=4).map(|k| Rational::from((1, k * k * k))))
            .collect(),
    );
    let expected = &tail * &RationalPoly::from_ints(&[-1, 1]);
    assert_eq!(rec.q, vec![expected]);
}

#[test]
fn decomposition_matches_series_values() {
    for spec in series_corpus() {
        let stream = Arc::new(CoefficientStream::new(spec.clone()));
        let alpha = half_radius_point(&stream).unwrap();
        let dec = Decomposer::new(stream.clone());
        for s in 1..=3 {
            for n in [1, 2, 3, 5, 8] {
                let rec = dec.decompose(n, s).unwrap();
                let res = verify_decomposition(&stream, &rec, &alpha, 128).unwrap();
                assert!(res < 1e-25, "{} n={n} s={s}: {res}", spec.label);
            }
        }
    }
}

#[test]
fn degree_bound_holds() {
    for spec in series_corpus() {
        let ell = spec.tf.ell;
        let dec = Decomposer::new(Arc::new(CoefficientStream::new(spec.clone())));
        for s in 1..=4u32 {
            for n in 1..=16 {
                let rec = dec.decompose(n, s).unwrap();
                if let Some(d) = rec.max_q_degree() {
                    assert!(d <= n + s as usize * (ell - 1), "{} n={n} s={s} deg={d}", spec.label);
                }
            }
        }
    }
}

fn combination_vanishes(
    dec: &Decomposer,
    nu: usize,
    s: u32,
) -> bool {
    let tf = dec.stream().tf().clone();
    let tower = inhomogeneous_tower(&tf, s);
    let data = tower.last().unwrap();
    let ell0 = dec.ell0();
    let nr = Rational::from(nu as u64);
    let neg = Rational::from(-&nr);
    let mut p = vec![vec![Rational::new(); s as usize]; ell0];
    let mut q = vec![RationalPoly::zero(); tf.mu];
    let mut add = |c: &Rational, rec: &DecompositionRecord| {
        for (j, row) in rec.p.iter().enumerate() {
            for (t, x) in row.iter().enumerate() {
                p[j][t] += Rational::from(c * x);
            }
        }
        for (u, poly) in rec.q.iter().enumerate() {
            q[u] = &q[u] + &poly.scale(c);
        }
    };
    for j in 0..=tf.ell {
        add(&tf.q_at(j, &neg), &dec.decompose(nu + j, s).unwrap());
        for t in 1..s {
            let b = -data.beta_at(j, t as usize, &nr);
            add(&b, &dec.decompose(nu + j, t).unwrap());
        }
    }
    for j in 0..=tf.ell {
        for u in 0..data.b[j].len() {
            let c = -data.b_at(j, u, &nr);
            q[u] = &q[u] + &RationalPoly::monomial(c, nu + j);
        }
    }
    p.iter().flatten().all(|x| *x == 0) && q.iter().all(|x| x.is_zero())
}

#[test]
fn records_satisfy_the_recurrence_exactly() {
    for label in ["geometric", "sqrt", "apery", "log-squared", "chi4"] {
        let dec = decomposer(label);
        let m = dec.m_used();
        for s in 1..=3 {
            for nu in m..m + 8 {
                assert!(combination_vanishes(&dec, nu, s), "{label} ν={nu} s={s}");
            }
        }
    }
}

#[test]
fn geometric_denominators_are_lcm() {
    let profile = growth_profile(&decomposer("geometric"), 1, 30).unwrap();
    let mut lcm = Integer::from(1);
    for row in &profile.rows {
        if row.n >= 2 {
            lcm.lcm_mut(&Integer::from(row.n - 1));
        }
        assert_eq!(row.denominator, lcm, "n={}", row.n);
    }
    let last = profile.rows.last().unwrap();
    assert!(last.denominator_rate > 2.0 && last.denominator_rate < 3.2);
}

#[test]
fn apery_profile_is_monotone_and_finite() {
    let profile = growth_profile(&decomposer("apery"), 2, 25).unwrap();
    for w in profile.rows.windows(2) {
        assert!(w[1].denominator.is_divisible(&w[0].denominator));
    }
    let last = profile.rows.last().unwrap();
    assert!(last.denominator_rate.is_finite() && last.height_rate.is_finite());
}

#[test]
fn evaluation_outside_the_disk_is_rejected() {
    let dec = decomposer("apery");
    let rec = dec.decompose(4, 1).unwrap();
    let err = verify_decomposition(dec.stream(), &rec, &Rational::from((1, 2)), 128).unwrap_err();
    assert!(matches!(err, Error::OutsideDisk { .. }));
}

#[test]
fn trivial_record_has_negligible_residual() {
    let dec = decomposer("sqrt");
    let alpha = half_radius_point(dec.stream()).unwrap();
    let rec = dec.decompose(2, 2).unwrap();
    let res = verify_decomposition(dec.stream(), &rec, &alpha, 128).unwrap();
    assert!(res < 1e-35);
}
