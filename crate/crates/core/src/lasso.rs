//! Lasso by cyclic coordinate descent:
//! `minimize (2n)⁻¹‖y − Xβ‖² + λ‖β‖₁`.

use crate::dantzig::DesignData;
use crate::error::{invalid, Error, Result};
use crate::linalg::{norm_l1, rank, DEFAULT_RANK_TOL};

/// KKT residual required before a run counts as converged.
pub const KKT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LassoEstimate {
    pub beta_hat: Vec<f64>,
    pub objective: f64,
    /// Largest violation of the lasso optimality conditions at `beta_hat`.
    pub kkt_residual: f64,
    pub sweeps: usize,
    /// Objective after each sweep (entry 0 is the starting point).
    pub objective_trace: Vec<f64>,
}

pub fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

pub fn lasso_objective(data: &DesignData, lambda: f64, beta: &[f64]) -> f64 {
    let fit = data.x().matvec(beta).expect("conformable");
    let rss: f64 = data.y().iter().zip(&fit).map(|(y, f)| (y - f).powi(2)).sum();
    rss / (2.0 * data.n() as f64) + lambda * norm_l1(beta)
}

/// Cold-started lasso.
pub fn lasso_solve(data: &DesignData, lambda: f64, max_sweeps: usize, tol: f64) -> Result<LassoEstimate> {
    lasso_solve_from(data, lambda, &vec![0.0; data.p()], max_sweeps, tol)
}

/// Lasso from an arbitrary starting point.
///
/// Converged once the largest coordinate change in a sweep is below `tol`
/// and the optimality residual is below [`KKT_TOL`]. `λ = 0` is only accepted
/// for full-column-rank `X`, since otherwise the minimizer is not unique.
pub fn lasso_solve_from(
    data: &DesignData,
    lambda: f64,
    start: &[f64],
    max_sweeps: usize,
    tol: f64,
) -> Result<LassoEstimate> {
    let p = data.p();
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return invalid(format!("lambda must be finite and nonnegative, got {lambda}"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return invalid("tol must be positive");
    }
    if start.len() != p {
        return invalid(format!("start has length {}, expected {p}", start.len()));
    }
    if lambda == 0.0 && rank(data.x(), DEFAULT_RANK_TOL) < p {
        return invalid("lambda = 0 requires X to have full column rank");
    }

    let c = data.gram();
    let v = data.marginal();
    let mut beta = start.to_vec();
    // grad_j = (Cβ)_j, kept current as coordinates move.
    let mut cb = c.matvec(&beta)?;
    let mut trace = vec![lasso_objective(data, lambda, &beta)];
    let mut kkt_residual = f64::INFINITY;

    for sweep in 1..=max_sweeps {
        let mut max_step: f64 = 0.0;
        for j in 0..p {
            let cjj = c[(j, j)];
            let old = beta[j];
            let new = if cjj > 0.0 {
                let partial = v[j] - (cb[j] - cjj * old);
                soft_threshold(partial, lambda) / cjj
            } else {
                0.0
            };
            let delta = new - old;
            if delta != 0.0 {
                beta[j] = new;
                for (k, cbk) in cb.iter_mut().enumerate() {
                    *cbk += c[(k, j)] * delta;
                }
                max_step = max_step.max(delta.abs());
            }
        }
        trace.push(lasso_objective(data, lambda, &beta));
        if max_step < tol {
            kkt_residual = lasso_kkt_check(data, lambda, &beta, KKT_TOL).1;
            if kkt_residual < KKT_TOL {
                return Ok(LassoEstimate {
                    objective: *trace.last().unwrap(),
                    beta_hat: beta,
                    kkt_residual,
                    sweeps: sweep,
                    objective_trace: trace,
                });
            }
            // Fresh gradient in case drift accumulated in the running product.
            cb = c.matvec(&beta)?;
        }
    }
    if kkt_residual.is_infinite() {
        kkt_residual = lasso_kkt_check(data, lambda, &beta, KKT_TOL).1;
    }
    Err(Error::ConvergenceFailure {
        sweeps: max_sweeps,
        kkt_residual,
        best: beta,
    })
}

/// Checks the lasso optimality conditions at `beta`:
/// `n⁻¹X_jᵀ(y − Xβ) = λ·sign(β_j)` where `β_j ≠ 0` and
/// `|n⁻¹X_jᵀ(y − Xβ)| ≤ λ` where `β_j = 0`.
/// Returns whether the worst violation is within `tol`, and that violation.
pub fn lasso_kkt_check(data: &DesignData, lambda: f64, beta: &[f64], tol: f64) -> (bool, f64) {
    let Ok(r) = data.residual_correlations(beta) else {
        return (false, f64::INFINITY);
    };
    let worst = r
        .iter()
        .zip(beta)
        .map(|(&rj, &bj)| {
            if bj != 0.0 {
                (rj - lambda * bj.signum()).abs()
            } else {
                (rj.abs() - lambda).max(0.0)
            }
        })
        .fold(0.0f64, f64::max);
    (worst <= tol, worst)
}
