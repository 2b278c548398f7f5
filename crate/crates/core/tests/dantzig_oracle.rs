mod common;

use common::{dantzig_optimal_spread, dantzig_oracle, l1_projection, random_design, LAMBDA_FRACTIONS};
use dantzig_kit::dantzig::{dantzig_select, solution_set_diameter, DesignData};
use dantzig_kit::linalg::Matrix;
use dantzig_kit::linalg::{norm_inf, norm_l1};
use dantzig_kit::random::stream_rng;
use rand::Rng;

#[test]
fn objective_matches_hyperplane_enumeration() {
    for k in 0..40 {
        let (x, y) = random_design(5, k);
        let data = DesignData::new(x, y).unwrap();
        let vmax = norm_inf(&data.marginal());
        for frac in LAMBDA_FRACTIONS {
            let lambda = frac * vmax;
            let est = dantzig_select(&data, lambda).unwrap();
            let (best, _) = dantzig_oracle(&data.gram(), &data.marginal(), lambda).expect("v is in range(C)");
            assert!(est.is_optimal());
            assert!(
                (est.l1_norm - best).abs() <= 1e-8 * best.max(1.0),
                "design {k}, lambda {lambda}: {} vs {best}",
                est.l1_norm
            );
            let prob = data.problem(lambda).unwrap();
            assert!(prob.is_feasible(&est.beta_hat, 1e-9 * (1.0 + lambda)));
        }
    }
}

#[test]
fn l1_norm_is_nonincreasing_in_lambda() {
    for k in 0..40 {
        let (x, y) = random_design(6, k);
        let data = DesignData::new(x, y).unwrap();
        let vmax = norm_inf(&data.marginal());
        let norms: Vec<f64> = (0..=20)
            .map(|i| dantzig_select(&data, vmax * i as f64 / 20.0).unwrap().l1_norm)
            .collect();
        for w in norms.windows(2) {
            assert!(w[1] <= w[0] + 1e-9 * w[0].max(1.0), "design {k}: {norms:?}");
        }
        assert!(norms[20] < 1e-12);
    }
}

#[test]
fn no_sampled_feasible_point_beats_the_optimum() {
    let mut rng = stream_rng(8, 0, 0);
    for k in 0..20 {
        let (x, y) = random_design(7, k);
        let data = DesignData::new(x, y).unwrap();
        let lambda = 0.3 * norm_inf(&data.marginal());
        let prob = data.problem(lambda).unwrap();
        let t0 = dantzig_select(&data, lambda).unwrap().l1_norm;
        for _ in 0..25 {
            let z: Vec<f64> = (0..data.p()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b = l1_projection(&prob.c, &prob.v, lambda, &z).unwrap();
            assert!(prob.is_feasible(&b, 1e-8));
            assert!(norm_l1(&b) >= t0 - 1e-9);
        }
    }
}

#[test]
fn diameter_matches_spread_of_optimal_vertices() {
    let mut multiple = 0;
    for k in 0..60 {
        let (mut x, y) = random_design(9, k);
        // Every third design gets a duplicated column, which allows ties.
        if k % 3 == 0 && x.cols() >= 2 {
            let rows: Vec<Vec<f64>> = (0..x.rows())
                .map(|i| {
                    let mut r = x.row(i).to_vec();
                    r[1] = r[0];
                    r
                })
                .collect();
            x = Matrix::from_rows(&rows).unwrap();
        }
        let data = DesignData::new(x, y).unwrap();
        let vmax = norm_inf(&data.marginal());
        for frac in &LAMBDA_FRACTIONS[1..] {
            let lambda = frac * vmax;
            let prob = data.problem(lambda).unwrap();
            let diam = solution_set_diameter(&prob).unwrap();
            let spread = dantzig_optimal_spread(&prob.c, &prob.v, lambda).unwrap();
            for (j, (&(lo, hi), &(olo, ohi))) in diam.per_coord_ranges.iter().zip(&spread).enumerate() {
                assert!(
                    (lo - olo).abs() < 1e-7 && (hi - ohi).abs() < 1e-7,
                    "design {k}, lambda {lambda}, coord {j}: ({lo}, {hi}) vs ({olo}, {ohi})"
                );
            }
            if diam.certifies_multiplicity() {
                multiple += 1;
            }
        }
    }
    assert!(multiple > 0, "no instance with multiple solutions was generated");
}
