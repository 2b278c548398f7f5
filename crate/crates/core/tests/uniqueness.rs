use dantzig_kit::dantzig::{solution_set_diameter, DantzigProblem};
use dantzig_kit::linalg::{IndexSet, Matrix};
use dantzig_kit::random::stream_rng;
use dantzig_kit::uniqueness::{
    is_parallel, lasso_parallelism_check, prop2_experiment, prop2_experiment_with, DesignGenerator, DEFAULT_P_CAP,
    DEFAULT_WITNESS_TOL,
};
use proptest::prelude::*;
use rand::Rng;

/// For p = 2: parallel iff some column has two nonzero entries of equal
/// magnitude. Derived by hand from the three defining conditions.
fn column_criterion(a: f64, b: f64, d: f64) -> bool {
    (b != 0.0 && a.abs() == b.abs()) || (b != 0.0 && d.abs() == b.abs())
}

#[test]
fn two_by_two_integer_matrices_match_column_criterion() {
    for a in -2..=2 {
        for b in -2..=2 {
            for d in -2..=2 {
                let (a, b, d) = (f64::from(a), f64::from(b), f64::from(d));
                let c = Matrix::from_rows(&[[a, b], [b, d]]).unwrap();
                let rep = is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP).unwrap();
                assert_eq!(rep.parallel, column_criterion(a, b, d), "C = [[{a},{b}],[{b},{d}]]");
                for w in &rep.witnesses {
                    assert!(w.verify(&c, 1e-8));
                }
            }
        }
    }
}

#[test]
fn lasso_check_never_fires_without_full_check() {
    for a in -2..=2 {
        for b in -2..=2 {
            for d in -2..=2 {
                let (a, b, d) = (f64::from(a), f64::from(b), f64::from(d));
                let c = Matrix::from_rows(&[[a, b], [b, d]]).unwrap();
                let lasso = lasso_parallelism_check(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP).unwrap();
                let full = is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP).unwrap();
                assert!(!lasso.parallel || full.parallel);
                assert!(lasso.witnesses.iter().all(|w| w.b == IndexSet::all(2)));
            }
        }
    }
}

#[test]
fn non_parallel_gram_matrices_have_unique_solutions() {
    let mut rng = stream_rng(31, 0, 0);
    for k in 0..15 {
        let p = 2 + k % 3;
        let w = dantzig_kit::linalg::standard_normal_matrix(&mut rng, p + 3, p);
        let c = w.gram_scaled();
        assert!(!is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP).unwrap().parallel);
        for _ in 0..5 {
            let v: Vec<f64> = (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let lambda = rng.gen_range(0.0..1.0);
            let prob = DantzigProblem::new(c.clone(), v, lambda).unwrap();
            assert!(solution_set_diameter(&prob).unwrap().certifies_uniqueness());
        }
    }
}

#[test]
fn random_design_parallel_fractions() {
    assert_eq!(prop2_experiment(10, 3, 200, 7).unwrap(), 0.0);
    assert_eq!(prop2_experiment(6, 4, 30, 8).unwrap(), 0.0);
    assert_eq!(
        prop2_experiment_with(6, 3, 10, 9, DesignGenerator::DuplicatedColumn).unwrap(),
        1.0
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reported_witnesses_always_verify(entries in proptest::collection::vec(-2i8..=2, 6)) {
        let e: Vec<f64> = entries.iter().map(|&x| f64::from(x)).collect();
        let c = Matrix::from_rows(&[[e[0], e[1], e[2]], [e[1], e[3], e[4]], [e[2], e[4], e[5]]]).unwrap();
        let rep = is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP).unwrap();
        prop_assert_eq!(rep.parallel, !rep.witnesses.is_empty());
        for w in &rep.witnesses {
            prop_assert!(w.verify(&c, 1e-8));
            prop_assert!(w.negated().verify(&c, 1e-8));
            prop_assert_eq!(w.s[0], 1);
        }
    }
}
