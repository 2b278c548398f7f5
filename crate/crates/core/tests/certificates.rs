mod common;

use common::{l1_projection, random_design, LAMBDA_FRACTIONS};
use dantzig_kit::dantzig::{dantzig_select, DesignData};
use dantzig_kit::kkt::dantzig_certificate;
use dantzig_kit::lasso::{lasso_kkt_check, lasso_objective, lasso_solve, lasso_solve_from, KKT_TOL};
use dantzig_kit::linalg::{max_abs_diff, norm_inf, norm_l1};
use dantzig_kit::random::stream_rng;
use rand::Rng;

#[test]
fn every_solver_output_is_certified() {
    for k in 0..40 {
        let (x, y) = random_design(21, k);
        let data = DesignData::new(x, y).unwrap();
        let vmax = norm_inf(&data.marginal());
        for frac in LAMBDA_FRACTIONS {
            let lambda = frac * vmax;
            let est = dantzig_select(&data, lambda).unwrap();
            let cert = dantzig_certificate(&data, lambda, &est.beta_hat, 1e-7).unwrap();
            assert!(cert.found, "design {k}, lambda {lambda}: {cert:?}");
            assert!(cert.max_condition_error() < 1e-6);
        }
    }
}

#[test]
fn feasible_points_off_the_optimum_have_no_certificate() {
    let mut rng = stream_rng(22, 0, 0);
    let mut tested = 0;
    for k in 0..200 {
        let (x, y) = random_design(23, k);
        let data = DesignData::new(x, y).unwrap();
        let lambda = rng.gen_range(0.05..0.8) * norm_inf(&data.marginal());
        let prob = data.problem(lambda).unwrap();
        let t0 = dantzig_select(&data, lambda).unwrap().l1_norm;
        let z: Vec<f64> = (0..data.p()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let b = l1_projection(&prob.c, &prob.v, lambda, &z).unwrap();
        if norm_l1(&b) <= t0 + 1e-3 {
            continue;
        }
        tested += 1;
        let cert = dantzig_certificate(&data, lambda, &b, 1e-7).unwrap();
        assert!(!cert.found, "design {k}: ‖b‖₁ = {} > t0 = {t0}", norm_l1(&b));
    }
    assert!(tested >= 100, "only {tested} non-optimal points generated");
}

#[test]
fn lasso_outputs_satisfy_optimality_conditions() {
    for k in 0..40 {
        let (x, y) = random_design(24, k);
        let data = DesignData::new(x, y).unwrap();
        let vmax = norm_inf(&data.marginal());
        for frac in &LAMBDA_FRACTIONS[1..] {
            let lambda = frac * vmax;
            let est = lasso_solve(&data, lambda, 200_000, 1e-12).unwrap();
            let (ok, viol) = lasso_kkt_check(&data, lambda, &est.beta_hat, KKT_TOL);
            assert!(ok, "design {k}, lambda {lambda}: violation {viol}");
        }
    }
}

#[test]
fn lasso_multistart_agrees_on_objective() {
    let mut rng = stream_rng(25, 0, 0);
    for k in 0..20 {
        let (x, y) = random_design(26, k);
        let data = DesignData::new(x, y).unwrap();
        let lambda = 0.2 * norm_inf(&data.marginal());
        let base = lasso_solve(&data, lambda, 200_000, 1e-12).unwrap();
        for _ in 0..5 {
            let start: Vec<f64> = (0..data.p()).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let other = lasso_solve_from(&data, lambda, &start, 200_000, 1e-12).unwrap();
            let (fa, fb) = (base.objective, other.objective);
            assert!((fa - fb).abs() <= 1e-8 * fa.max(1.0), "design {k}: {fa} vs {fb}");
            // Fitted values are unique even when coefficients are not.
            let fit_a = data.x().matvec(&base.beta_hat).unwrap();
            let fit_b = data.x().matvec(&other.beta_hat).unwrap();
            assert!(max_abs_diff(&fit_a, &fit_b) < 1e-4);
            assert!((lasso_objective(&data, lambda, &other.beta_hat) - fb).abs() < 1e-12);
        }
    }
}
