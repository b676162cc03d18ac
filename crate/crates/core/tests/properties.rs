use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;

use zeta_alpha_core::alpha::{alpha_via_stirling1, coefficient_bound, has_positive_coefficients, AlphaSequence};
use zeta_alpha_core::combinatorics::{binomial, eulerian, stirling2, BernoulliTable};
use zeta_alpha_core::oracle::{gamma_ref, trigamma_ref, OracleConfig};
use zeta_alpha_core::*;

const P: usize = 128;

fn table() -> &'static AlphaTable {
    static T: OnceLock<AlphaTable> = OnceLock::new();
    T.get_or_init(|| build_alpha_table(60))
}

fn primes() -> &'static AlphaPrimeTable {
    static T: OnceLock<AlphaPrimeTable> = OnceLock::new();
    T.get_or_init(|| build_alpha_prime(20))
}

fn err(a: &HPComplex, b: &HPComplex) -> f64 {
    a.sub(b).abs_upper()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-400i64..400, 1i64..60).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn poly() -> impl Strategy<Value = RationalPolynomial> {
    prop::collection::vec(small_rational(), 0..8).prop_map(RationalPolynomial::from_coeffs)
}

fn falling(x: i64, n: usize) -> BigInt {
    (0..n as i64).map(|i| BigInt::from(x - i)).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let text = format_rational(&r);
        prop_assert!(!text.contains('.'));
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
    }

    #[test]
    fn divide_then_multiply(p in poly(), root in small_rational()) {
        let q = p.mul_linear(&root);
        prop_assert_eq!(q.divide_linear(&root).unwrap(), p.clone());
        prop_assert!(q.eval(&root).is_zero());
    }

    #[test]
    fn polynomial_ring_laws(a in poly(), b in poly(), x in small_rational()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a - &b).eval(&x), a.eval(&x) - b.eval(&x));
        let d = (&a * &b).derivative();
        prop_assert_eq!(d, &(&a.derivative() * &b) + &(&a * &b.derivative()));
    }

    #[test]
    fn integrate_inverts_derivative(a in poly(), lo in small_rational(), hi in small_rational()) {
        let f = a.antiderivative();
        prop_assert_eq!(f.derivative(), a.clone());
        prop_assert_eq!(a.integrate(&lo, &hi), f.eval(&hi) - f.eval(&lo));
    }

    #[test]
    fn alpha_degree_and_value_at_one(k in 1usize..=60) {
        let a = table().alpha(k).unwrap();
        prop_assert_eq!(a.degree(), Some(k));
        prop_assert!(a.eval(&BigRational::one()).is_zero());
        prop_assert!(has_positive_coefficients(table().beta(k).unwrap()));
    }

    #[test]
    fn alpha_at_two_is_harmonic_reciprocal(k in 0usize..=60) {
        // g(t) = Σ t^k/(k+1), so α_k(2) = 1/(k+1).
        let v = table().eval(k, &BigRational::from_integer(2.into())).unwrap();
        prop_assert_eq!(v, BigRational::new(1.into(), BigInt::from(k + 1)));
    }

    #[test]
    fn derivative_at_one_matches_prime_table(k in 0usize..=20) {
        let d = table().alpha(k).unwrap().derivative().eval(&BigRational::one());
        prop_assert_eq!(&d, &primes().values[k]);
    }

    #[test]
    fn integer_points_match_stirling_first_kind(k in 0usize..=15, s in 1usize..=8) {
        let v = table().eval(k, &BigRational::from_integer(s.into())).unwrap();
        prop_assert_eq!(v, alpha_via_stirling1(k, s));
    }

    #[test]
    fn complex_evaluation_matches_exact(k in 0usize..=50, re in small_rational(), im in small_rational()) {
        // Horner over Gaussian rationals as an exact reference
        let a = table().alpha(k).unwrap();
        let (mut xr, mut xi) = (BigRational::zero(), BigRational::zero());
        for c in a.coeffs().iter().rev() {
            let nr = &xr * &re - &xi * &im + c;
            xi = &xr * &im + &xi * &re;
            xr = nr;
        }
        let want = HPComplex::from_rationals(&xr, &xi, 512);
        let got = table().eval(k, &HPComplex::from_rationals(&re, &im, 256)).unwrap();
        let scale = want.abs_upper().max(1.0);
        prop_assert!(err(&got.with_precision(512), &want) <= scale * 1e-60);
    }

    #[test]
    fn stirling2_falling_factorial_expansion(lambda in 0usize..=14, n in -20i64..=40) {
        let rhs: BigInt = (0..=lambda).map(|j| stirling2(lambda, j) * falling(n, j)).sum();
        prop_assert_eq!(BigInt::from(n).pow(lambda as u32), rhs);
    }

    #[test]
    fn worpitzky_identity(lambda in 1usize..=14, n in 0usize..=40) {
        let rhs: BigInt = (0..lambda).map(|j| eulerian(lambda, j) * binomial(n + j, lambda)).sum();
        prop_assert_eq!(BigInt::from(n).pow(lambda as u32), rhs);
    }

    #[test]
    fn bernoulli_polynomial_difference(n in 1usize..=24, x in small_rational()) {
        // B_n(x+1) - B_n(x) = n x^(n-1)
        let mut t = BernoulliTable::new();
        let b = t.polynomial(n).clone();
        let lhs = b.eval(&(&x + BigRational::one())) - b.eval(&x);
        let rhs = BigRational::from_integer(n.into()) * num_traits::pow(x, n - 1);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gamma_functional_equation(re in -6.0f64..8.0, im in -6.0f64..6.0) {
        prop_assume!(im.abs() > 0.05 || (re - re.round()).abs() > 0.05);
        let cfg = OracleConfig::new(P);
        let s = HPComplex::from_f64(re, im, P);
        let g = gamma_ref(&s, &cfg).unwrap();
        let g1 = gamma_ref(&s.add_i64(1), &cfg).unwrap();
        let scale = g1.abs_upper().max(1.0);
        prop_assert!(err(&g1, &s.mul(&g)) <= scale * 1e-30);
    }

    #[test]
    fn trigamma_recurrence(re in -6.0f64..8.0, im in -6.0f64..6.0) {
        prop_assume!(im.abs() > 0.05 || (re - re.round()).abs() > 0.05);
        let cfg = OracleConfig::new(P);
        let s = HPComplex::from_f64(re, im, P);
        let lhs = trigamma_ref(&s, &cfg).unwrap().sub(&trigamma_ref(&s.add_i64(1), &cfg).unwrap());
        let want = s.mul(&s).recip();
        prop_assert!(err(&lhs, &want) <= want.abs_upper().max(1.0) * 1e-30);
    }

    #[test]
    fn numeric_sequence_matches_exact(k in 1usize..=40, re in -5.0f64..6.0, im in -8.0f64..8.0) {
        let s = HPComplex::from_f64(re, im, P);
        let mut seq = AlphaSequence::new(&s, k + 1).unwrap();
        seq.extend_to(k);
        let want = table().eval(k, &s.with_precision(512)).unwrap();
        let scale = want.abs_upper().max(1.0);
        prop_assert!(err(&seq.get(k).unwrap().with_precision(512), &want) <= scale * 1e-30);
    }

    #[test]
    fn coefficient_bound_holds(re in -4.0f64..6.0, im in -10.0f64..10.0) {
        let s = HPComplex::from_f64(re, im, P);
        let mut seq = AlphaSequence::new(&s, 301).unwrap();
        seq.extend_to(300);
        for k in 0..=300 {
            prop_assert!(seq.get(k).unwrap().abs_lower() <= coefficient_bound(&s, k), "k={}", k);
        }
    }

    #[test]
    fn gamma_truncation_within_certificate(re in 1.5f64..5.0, im in -4.0f64..4.0, n in 32usize..160) {
        let s = HPComplex::from_f64(re, im, P);
        let ev = Evaluator::default();
        let r = ev.evaluate_at(Identity::Gamma, &s, n).unwrap();
        let want = gamma_ref(&s, &OracleConfig::new(P)).unwrap();
        prop_assert!(err(&r.value, &want) <= r.tail_bound + 1e-25,
            "err {} bound {}", err(&r.value, &want), r.tail_bound);
    }
}

#[test]
fn bernoulli_numbers_vanish_at_odd_indices() {
    let mut t = BernoulliTable::new();
    for n in (3..=41).step_by(2) {
        assert!(t.number(n).is_zero(), "B_{n}");
    }
    assert!(t.number(2).is_positive());
}
