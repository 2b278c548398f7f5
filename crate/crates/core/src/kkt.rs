//! Optimality certificates for the Dantzig selector.
//!
//! `β` solves the Dantzig selector iff it is feasible and some `μ` satisfies
//!
//! ```text
//! (a) ‖v − Cβ‖∞ ≤ λ          (b) ‖Cμ‖∞ ≤ 1
//! (c) μᵀCβ = ‖β‖₁             (d) μᵀ(v − Cβ) = λ‖μ‖₁
//! ```
//!
//! with `C = n⁻¹XᵀX`, `v = n⁻¹Xᵀy`. Given (a) and (b), Hölder's inequality
//! makes (c) and (d) equivalent to coordinatewise complementarity:
//! `(Cμ)_j = sign(β_j)` on the support of `β`, `μ_j = 0` where the constraint
//! is slack, and `sign(μ_j) = sign((v − Cβ)_j)` where it is tight. The search
//! for `μ` is then a single LP feasibility problem.

use serde::Serialize;

use crate::dantzig::{DantzigProblem, DesignData};
use crate::error::{invalid, Result};
use crate::linalg::{dot, norm_inf, norm_l1, IndexSet};
use crate::lp::{self, LinearProgram};

/// Per-coordinate diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoordinateSlack {
    /// `(v − Cβ)_j`.
    pub residual_corr: f64,
    /// `λ − |(v − Cβ)_j|`; negative means the primal constraint is violated.
    pub primal_slack: f64,
    /// `(Cμ)_j`; zero when no certificate was found.
    pub dual_corr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CertificateFailure {
    /// `β` violates the primal constraint at this coordinate.
    PrimalInfeasible { coordinate: usize, excess: f64 },
    /// The complementarity system for `μ` has no solution.
    NoDual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KktCertificate {
    pub found: bool,
    pub mu_hat: Vec<f64>,
    /// Coordinates treated as tight, where `μ_j` may be nonzero.
    pub active_set: IndexSet,
    pub slacks: Vec<CoordinateSlack>,
    pub failure: Option<CertificateFailure>,
    /// `max(0, ‖v − Cβ‖∞ − λ)`.
    pub primal_violation: f64,
    /// `max(0, ‖Cμ‖∞ − 1)`.
    pub dual_violation: f64,
    /// `|μᵀCβ − ‖β‖₁|`.
    pub support_gap: f64,
    /// `|μᵀ(v − Cβ) − λ‖μ‖₁|`.
    pub complementarity_gap: f64,
}

impl KktCertificate {
    /// Largest deviation over the four optimality conditions.
    pub fn max_condition_error(&self) -> f64 {
        self.primal_violation
            .max(self.dual_violation)
            .max(self.support_gap)
            .max(self.complementarity_gap)
    }
}

/// Magnitude below which a coefficient counts as zero, relative to ‖β‖∞.
const ZERO_TOL: f64 = 1e-9;

/// Certificate search on observed data.
pub fn dantzig_certificate(data: &DesignData, lambda: f64, beta: &[f64], tol: f64) -> Result<KktCertificate> {
    certificate_for_problem(&data.problem(lambda)?, beta, tol)
}

/// Certificate search on the moment form `(C, v, λ)`.
///
/// For `λ > 0` a coordinate is tight when `| |r_j| − λ | ≤ tol·max(1, λ)`;
/// borderline coordinates are kept tight so the search cannot reject a true
/// optimum. For `λ = 0` the primal check is `v = Cβ` (within `tol`) and only
/// the dual-norm and support conditions constrain `μ`.
pub fn certificate_for_problem(prob: &DantzigProblem, beta: &[f64], tol: f64) -> Result<KktCertificate> {
    let p = prob.p();
    if beta.len() != p {
        return invalid(format!("beta has length {}, expected {p}", beta.len()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return invalid("tol must be positive");
    }
    let lambda = prob.lambda;
    let r = prob.residual(beta);

    let (worst_j, worst_abs) = r
        .iter()
        .enumerate()
        .map(|(j, x)| (j, x.abs()))
        .fold((0, 0.0f64), |acc, (j, a)| if a > acc.1 { (j, a) } else { acc });
    let primal_violation = (worst_abs - lambda).max(0.0);

    let band = tol * lambda.max(1.0);
    let active: Vec<usize> = if lambda > 0.0 {
        (0..p).filter(|&j| r[j].abs() >= lambda - band).collect()
    } else {
        (0..p).collect()
    };
    let active_set = IndexSet::new(active, p).expect("increasing by construction");

    let mut slacks: Vec<CoordinateSlack> = r
        .iter()
        .map(|&rj| CoordinateSlack {
            residual_corr: rj,
            primal_slack: lambda - rj.abs(),
            dual_corr: 0.0,
        })
        .collect();

    let fail = |failure, slacks| KktCertificate {
        found: false,
        mu_hat: vec![0.0; p],
        active_set: active_set.clone(),
        slacks,
        failure: Some(failure),
        primal_violation,
        dual_violation: 0.0,
        support_gap: f64::NAN,
        complementarity_gap: f64::NAN,
    };

    if worst_abs > lambda + tol {
        return Ok(fail(
            CertificateFailure::PrimalInfeasible {
                coordinate: worst_j,
                excess: worst_abs - lambda,
            },
            slacks,
        ));
    }

    let zero = ZERO_TOL * norm_inf(beta).max(1.0);
    let mut sys = LinearProgram::free(p, vec![0.0; p]);
    for j in 0..p {
        let crow = prob.c.row(j);
        sys.push_ub(crow, 1.0);
        sys.push_ub(&crow.iter().map(|x| -x).collect::<Vec<_>>(), 1.0);
        if beta[j].abs() > zero {
            sys.push_eq(crow, beta[j].signum());
        }
        let mut e = vec![0.0; p];
        if !active_set.contains(j) {
            e[j] = 1.0;
            sys.push_eq(&e, 0.0);
        } else if lambda > 0.0 && r[j].abs() > zero.min(band) {
            e[j] = -r[j].signum();
            sys.push_ub(&e, 0.0);
        }
    }

    let Some(mu) = lp::feasible(&sys)? else {
        return Ok(fail(CertificateFailure::NoDual, slacks));
    };
    let cmu = prob.c.matvec(&mu)?;
    for (s, &d) in slacks.iter_mut().zip(&cmu) {
        s.dual_corr = d;
    }
    let cb = prob.c.matvec(beta)?;
    Ok(KktCertificate {
        found: true,
        dual_violation: (norm_inf(&cmu) - 1.0).max(0.0),
        support_gap: (dot(&mu, &cb) - norm_l1(beta)).abs(),
        complementarity_gap: (dot(&mu, &r) - lambda * norm_l1(&mu)).abs(),
        mu_hat: mu,
        active_set,
        slacks,
        failure: None,
        primal_violation,
    })
}
