mod common;

use std::collections::BTreeSet;

use entdim::cantor::{build_counterexample, dim_combination_sign, CantorWitness};
use entdim::error::CantorError;
use entdim::group::{builtin_catalog, coset_entropy_point, enumerate_subgroups, search_violation, witness_set, SearchLimits, Subgroup};
use entdim::model::{subsets, LinearInequality, Rational, Sign, SubsetIndex};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tuple(rng: &mut impl Rng, max_m: usize) -> (entdim::FiniteGroup, Vec<Subgroup>) {
    let catalog = builtin_catalog(24);
    let g = catalog[rng.random_range(0..catalog.len())].group.clone();
    let subs = enumerate_subgroups(&g);
    let m = rng.random_range(1..=max_m);
    let tuple = (0..m).map(|_| subs[rng.random_range(0..subs.len())].clone()).collect();
    (g, tuple)
}

#[test]
fn projections_count_cosets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..300 {
        let (g, tuple) = random_tuple(&mut rng, 4);
        let m = tuple.len();
        let point = coset_entropy_point(&g, &tuple).unwrap();
        let pts = witness_set(&g, &tuple).unwrap().points().clone();
        let base = pts.iter().flatten().max().map_or(2, |&d| u64::from(d) + 1).max(2);
        let w = CantorWitness::new(m, base, pts.clone()).unwrap();
        let listed: Vec<Vec<u32>> = pts.into_iter().collect();
        let whole = w.dim_value();
        for s in subsets(m).unwrap() {
            let proj = w.project(s);
            assert_eq!(proj.len(), point.index(s));
            assert_eq!(proj.len(), common::projection_count(&listed, &s.coordinates()));
            // dim · log2 N equals the entropy coordinate exactly
            let d = proj.dim_value();
            assert!((&d.scaled() - point.vector().get_exact(s).unwrap()).is_zero());
            // dim (A_I) <= dim A and dim (A_I) <= #I
            let one = Rational::one();
            assert_ne!(dim_combination_sign(&[(one.clone(), whole), (-one.clone(), d)], &Rational::from_integer(0.into())).unwrap(), Sign::Negative);
            assert_ne!(d.cmp_rational(&Rational::from_integer((s.len() as i64).into())).unwrap(), Sign::Positive);
        }
    }
}

fn random_inequality(rng: &mut impl Rng, m: usize) -> Option<LinearInequality> {
    let coeffs: Vec<i64> = (0..(1 << m) - 1).map(|_| rng.random_range(-2..=2)).collect();
    LinearInequality::new(
        m,
        coeffs.iter().enumerate().map(|(k, &c)| (SubsetIndex::from_mask(k as u16 + 1, m).unwrap(), Rational::from_integer(c.into()))),
    )
    .ok()
}

#[test]
fn counterexamples_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut built = 0;
    for _ in 0..60 {
        let m = rng.random_range(2..=3);
        let Some(ineq) = random_inequality(&mut rng, m) else { continue };
        let Some(v) = search_violation(&ineq, &builtin_catalog(12), SearchLimits::default()).unwrap().violation else {
            continue;
        };
        match build_counterexample(&ineq, &v.group, &v.subgroups) {
            Ok(ce) => {
                ce.verify().unwrap();
                assert!(ce.margin_f64() > 0.0);
                assert!(ce.epsilon > Rational::from_integer(0.into()));
                for lv in &ce.levels {
                    assert!(lv.to_f64() < lv.dim.to_f64() || lv.dim.card == 1);
                }
                // tampering is caught
                let mut bad = ce.clone();
                bad.epsilon = Rational::from_integer(1000.into());
                for lv in &mut bad.levels {
                    lv.epsilon = bad.epsilon.clone();
                }
                assert!(bad.verify().is_err());
                let mut bad = ce.clone();
                bad.dims.swap(0, 1);
                if bad.dims[0] != ce.dims[0] {
                    assert!(bad.verify().is_err());
                }
                built += 1;
            }
            // every left-hand projection is a single digit: no room for eps
            Err(CantorError::NoEpsilon) => {
                assert!(ineq.lhs().iter().all(|(s, _)| v.point.index(*s) == 1));
            }
            Err(other) => panic!("{other}"),
        }
    }
    assert!(built > 5, "{built}");
}

#[test]
fn lemma_on_uniform_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut checks = 0;
    while checks < 1000 {
        let (g, tuple) = random_tuple(&mut rng, 3);
        let pts = witness_set(&g, &tuple).unwrap().points().clone();
        let base = pts.iter().flatten().max().map_or(2, |&d| u64::from(d) + 1).max(2);
        let w = CantorWitness::new(tuple.len(), base, pts).unwrap();
        for _ in 0..20 {
            let keep = rng.random_range(0.0..1.0);
            let b: BTreeSet<Vec<u32>> = w.points().iter().filter(|_| rng.random_bool(keep)).cloned().collect();
            let s = SubsetIndex::from_mask(rng.random_range(1..(1u16 << w.m())), w.m()).unwrap();
            let check = w.lemma_fiber_bound(&b, s).unwrap();
            let listed: Vec<Vec<u32>> = b.iter().cloned().collect();
            assert_eq!(check.b_projection, common::projection_count(&listed, &s.coordinates()));
            assert_eq!(check.fiber * w.project(s).len(), w.len());
            assert!(check.holds && check.b_count <= check.b_projection * check.fiber);
            checks += 1;
        }
    }
}
