use gseed_core::corpus::{self, series_corpus};
use gseed_core::operator::theta_form;
use gseed_core::parse::parse_operator;
use gseed_core::poly::RationalPoly;
use gseed_core::recurrence::{
    basis_start, casoratian, homogeneous_basis, inhomogeneous_data, inhomogeneous_tower, verify_recurrence,
};
use gseed_core::series::{coefficients, CoefficientStream, GFunctionSpec};
use gseed_core::Error;
use rug::Rational;

fn r(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn pow_i(k: i64, e: usize) -> Rational {
    (0..e).fold(Rational::from(1), |acc, _| acc * k)
}

/// Coefficient of `z^K` on both sides of the weight-`s` recurrence, computed
/// directly from `F_n^{[s]} = Σ A_k z^{k+n}/(k+n)^s`.
fn series_sides(spec: &GFunctionSpec, a: &[Rational], s: u32, n: usize, big_k: usize) -> (Rational, Rational) {
    let tf = &spec.tf;
    let data = inhomogeneous_tower(tf, s);
    let shifted = |m: usize, w: u32| -> Rational {
        if big_k < m {
            return Rational::new();
        }
        (&a[big_k - m] / pow_i(big_k as i64, w as usize))
    };
    let nr = Rational::from(n as u64);
    let neg = Rational::from(-&nr);
    let top = data.last().unwrap();
    let mut lhs = Rational::new();
    let mut rhs = Rational::new();
    for j in 0..=tf.ell {
        lhs += tf.q_at(j, &neg) * shifted(n + j, s);
        for t in 1..s {
            rhs += top.beta_at(j, t as usize, &nr) * shifted(n + j, t);
        }
        if big_k >= n + j {
            let k = big_k - n - j;
            for q in 0..top.b[j].len() {
                rhs += top.b_at(j, q, &nr) * pow_i(k as i64, q) * &a[k];
            }
        }
    }
    (lhs, rhs)
}

#[test]
fn recurrence_holds_coefficientwise_on_corpus() {
    for spec in series_corpus() {
        let stream = CoefficientStream::new(spec.clone());
        let a = coefficients(&stream, 60).unwrap();
        for s in 1..=spec.tf.mu as u32 + 2 {
            for n in 1..=6 {
                for big_k in n..=n + 40 {
                    let (l, rr) = series_sides(&spec, &a, s, n, big_k);
                    assert_eq!(l, rr, "{} s={s} n={n} K={big_k}", spec.label);
                }
            }
        }
    }
}

#[test]
fn geometric_weight_one_is_first_difference() {
    // n(F_{n+1} − F_n) = −z^n = z^n(−1 + z)F.
    let tf = theta_form(&parse_operator(corpus::GEOMETRIC).unwrap()).unwrap();
    assert_eq!(tf.q[0], RationalPoly::from_ints(&[0, 1]));
    assert_eq!(tf.q[1], RationalPoly::from_ints(&[0, -1]));
    let d = inhomogeneous_data(&tf, 1).unwrap();
    assert_eq!(d.b[0], vec![RationalPoly::from_ints(&[-1])]);
    assert_eq!(d.b[1], vec![RationalPoly::from_ints(&[1])]);
}

#[test]
fn theta_terms_vanish_beyond_order() {
    for spec in series_corpus() {
        let mu = spec.tf.mu as u32;
        let d = inhomogeneous_data(&spec.tf, mu + 1).unwrap();
        assert!(d.b.iter().all(|row| row.iter().all(|p| p.is_zero())), "{}", spec.label);
    }
}

#[test]
fn degree_bounds_and_vanishing_laws() {
    for spec in series_corpus() {
        for d in inhomogeneous_tower(&spec.tf, spec.tf.mu as u32 + 2) {
            d.check_bounds(&spec.tf).unwrap_or_else(|e| panic!("{} s={}: {e}", spec.label, d.s));
        }
    }
}

#[test]
fn numeric_recurrence_geometric() {
    let spec = corpus::spec_by_label("geometric").unwrap();
    let stream = CoefficientStream::new(spec.clone());
    let d = inhomogeneous_data(&spec.tf, 1).unwrap();
    let res = verify_recurrence(&stream, &d, 3, &r(1, 2), 128).unwrap();
    assert!(res < 1e-25, "{res}");
}

#[test]
fn numeric_recurrence_apery() {
    let spec = corpus::spec_by_label("apery").unwrap();
    let stream = CoefficientStream::new(spec.clone());
    let d = inhomogeneous_data(&spec.tf, 2).unwrap();
    let res = verify_recurrence(&stream, &d, 2, &r(1, 100), 128).unwrap();
    assert!(res < 1e-25, "{res}");
}

#[test]
fn numeric_recurrence_rejects_degenerate_input() {
    let spec = corpus::spec_by_label("geometric").unwrap();
    let stream = CoefficientStream::new(spec.clone());
    let d = inhomogeneous_data(&spec.tf, 1).unwrap();
    assert!(verify_recurrence(&stream, &d, 1, &r(0, 1), 128).is_err());
    assert!(verify_recurrence(&stream, &d, 0, &r(1, 2), 128).is_err());
}

#[test]
fn geometric_basis_is_constant() {
    let tf = theta_form(&parse_operator(corpus::GEOMETRIC).unwrap()).unwrap();
    let b = homogeneous_basis(&tf, 1, 30).unwrap();
    for n in 1..=30 {
        assert_eq!(*b.value(1, n), 1);
    }
    let c = casoratian(&b).unwrap();
    assert!(c.w.iter().all(|w| *w == 1));
}

#[test]
fn sqrt_basis_solves_rearranged_recurrence() {
    let tf = theta_form(&parse_operator(corpus::SQRT).unwrap()).unwrap();
    let b = homogeneous_basis(&tf, 1, 40).unwrap();
    for j in 1..=2 {
        for n in 1..=38usize {
            let lhs = Rational::from((n + 1) as u64) * b.value(j, n + 2);
            let rhs = Rational::from((6 * n + 3) as u64) * b.value(j, n + 1)
                - Rational::from(n as u64) * b.value(j, n);
            assert_eq!(lhs, rhs);
            assert_eq!(b.residual(j, n), 0);
        }
    }
}

#[test]
fn basis_start_on_vanishing_leading_coefficient_is_rejected() {
    // Q_0(X) = X vanishes at −0.
    let tf = theta_form(&parse_operator(corpus::SQRT).unwrap()).unwrap();
    assert_eq!(homogeneous_basis(&tf, 0, 10).unwrap_err(), Error::IndicialVanishing(0));
}

fn pochhammer(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::from(1), |acc, i| acc * Rational::from(x + i as u64))
}

#[test]
fn casoratian_laws_on_corpus() {
    for spec in series_corpus() {
        let tf = &spec.tf;
        let m = basis_start(&spec.exponents);
        let b = homogeneous_basis(tf, m, m + 50).unwrap();
        let c = casoratian(&b).unwrap();
        assert!(c.law_agrees(), "{}", spec.label);
        assert!(c.w.iter().all(|w| *w != 0));
        if spec.exponents.at_zero_unfactored.is_empty() && spec.exponents.at_infinity_unfactored.is_empty() {
            let ell = tf.ell;
            let g0 = tf.q[0].leading().unwrap().clone();
            let gl = tf.q[ell].leading().unwrap().clone();
            let mut ratio = g0 / gl;
            if ell % 2 == 1 {
                ratio = -ratio;
            }
            let e: Vec<Rational> = spec.exponents.at_zero.iter().flat_map(|(x, k)| vec![x.clone(); *k]).collect();
            let f: Vec<Rational> = spec
                .exponents
                .at_infinity
                .iter()
                .flat_map(|(x, k)| vec![x.clone(); *k])
                .collect();
            for (i, w) in c.w.iter().enumerate() {
                let mut closed = c.w[0].clone() * pow_rat(&ratio, i);
                for ei in &e {
                    closed *= pochhammer(&Rational::from(ei + m as u64), i);
                }
                for fi in &f {
                    let x = Rational::from(m as u64 + ell as u64) - fi;
                    closed /= pochhammer(&x, i);
                }
                assert_eq!(*w, closed, "{} n={}", spec.label, m + i);
            }
        }
    }
}

fn pow_rat(x: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::from(1), |acc, _| acc * x)
}

/// Variation of constants, built from the casoratian data, against direct
/// forward solution of the inhomogeneous recurrence.
#[test]
fn general_solution_formula_matches_forward_solution() {
    for label in ["geometric", "sqrt", "apery", "chi4", "log-squared"] {
        let spec = corpus::spec_by_label(label).unwrap();
        let tf = &spec.tf;
        let ell = tf.ell;
        let m = basis_start(&spec.exponents);
        let upto = m + 30;
        let b = homogeneous_basis(tf, m, upto).unwrap();
        let c = casoratian(&b).unwrap();
        let g = |n: usize| Rational::from((n * n) as u64 + 1) / Rational::from(n as u64 + 3);
        let chi: Vec<Rational> = (1..=ell).map(|j| r(j as i64, 7)).collect();
        let last = upto + 1 - ell;
        let mut v = Vec::new();
        for n in m..=last {
            let mut val = Rational::new();
            for j in 1..=ell {
                let mut coef = chi[j - 1].clone();
                for k in m + 1..=n {
                    let q1 = b.q_neg(ell, k as i64 - 1);
                    coef += Rational::from(c.minor(j, k) * &g(k - 1)) / q1 / c.w_at(k);
                }
                val += coef * b.value(j, n);
            }
            v.push(val);
        }
        for n in m..=last - ell {
            let mut lhs = Rational::new();
            for j in 0..=ell {
                lhs += b.q_neg(j, n as i64) * &v[n + j - m];
            }
            assert_eq!(lhs, g(n), "{label} n={n}");
        }
    }
}
