use entdim::model::{EntropyVector, ExactLogLin, LinearInequality, Rational, Sign, SubsetIndex};
use num_bigint::BigUint;
use proptest::prelude::*;

fn term() -> impl Strategy<Value = (i64, i64, u64)> {
    (-40i64..=40, 1i64..=12, 1u64..=600)
}

fn build(terms: &[(i64, i64, u64)]) -> ExactLogLin {
    ExactLogLin::from_terms(
        terms.iter().map(|&(p, q, n)| (Rational::new(p.into(), q.into()), BigUint::from(n))).collect(),
    )
    .unwrap()
}

fn float_ln(terms: &[(i64, i64, u64)]) -> f64 {
    terms.iter().map(|&(p, q, n)| p as f64 / q as f64 * (n as f64).ln()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn sign_agrees_with_float(terms in prop::collection::vec(term(), 0..6)) {
        let x = build(&terms);
        let f = float_ln(&terms);
        if f.abs() > 1e-6 {
            prop_assert_eq!(x.sign().unwrap(), Sign::of_f64(f));
        }
        prop_assert_eq!(x.sign().unwrap(), x.sign_by_products().unwrap());
    }

    #[test]
    fn reordering_does_not_change_the_value(terms in prop::collection::vec(term(), 1..6), rot in 0usize..6) {
        let mut shuffled = terms.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        shuffled.reverse();
        let (a, b) = (build(&terms), build(&shuffled));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.sign().unwrap(), b.sign().unwrap());
    }

    #[test]
    fn powers_fold_into_coefficients(p in -20i64..=20, q in 1i64..=9, n in 2u64..=40, k in 1u32..=6, rest in prop::collection::vec(term(), 0..4)) {
        let mut powered = rest.clone();
        powered.push((p, q, n.pow(k)));
        let mut folded = rest;
        folded.push((p * i64::from(k), q, n));
        let (a, b) = (build(&powered), build(&folded));
        prop_assert!((&a - &b).is_zero());
        prop_assert_eq!(a.sign().unwrap(), b.sign().unwrap());
    }

    #[test]
    fn near_cancellations_are_exact(a in 2u64..=60, b in 2u64..=60) {
        // log(a^b) - log(b^a) has the sign of b·ln a − a·ln b, zero iff the powers match
        let x = build(&[(b as i64, 1, a), (-(a as i64), 1, b)]);
        let exact = BigUint::from(a).pow(b as u32).cmp(&BigUint::from(b).pow(a as u32));
        let want = match exact {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        };
        prop_assert_eq!(x.sign().unwrap(), want);
    }

    #[test]
    fn slack_is_linear(
        v1 in prop::collection::vec(0.0f64..10.0, 7),
        v2 in prop::collection::vec(0.0f64..10.0, 7),
        alpha in 0.0f64..3.0,
        beta in 0.0f64..3.0,
        coeffs in prop::collection::vec(-5i64..=5, 7),
    ) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let ineq = LinearInequality::new(
            3,
            coeffs.iter().enumerate().map(|(k, &c)| (SubsetIndex::from_mask(k as u16 + 1, 3).unwrap(), Rational::from_integer(c.into()))),
        )
        .unwrap();
        let mix: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| alpha * a + beta * b).collect();
        let s = |v: Vec<f64>| ineq.eval_slack(&EntropyVector::float(3, v).unwrap()).unwrap().to_f64();
        let lhs = s(mix);
        let rhs = alpha * s(v1) + beta * s(v2);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }
}
