//! Monte Carlo checks of the large-sample behaviour of the Dantzig selector.
//!
//! Designs are drawn with rows iid `N(0, C)`, so `n⁻¹XᵀX → C` almost surely,
//! and errors are iid with mean zero and standard deviation `σ`. The limit
//! theory treats `X` as a fixed array; drawing it at random is a modeling
//! choice, and every report records how far the realized `n⁻¹XᵀX` strayed
//! from `C`.
//!
//! * With fixed `λ`, `β̂ → β⁰ = G(C, Cβ*, λ)` almost surely
//!   ([`simulate_corollary1`]).
//! * With `λ_n = λ̃/√n`, `√n(β̂ − β*)` converges in law to the solution of
//!   [`limiting_problem_solve`] with `v⁰ ~ N(0, σ²C)` ([`simulate_corollary2`]).
//! * `G` is continuous at non-parallel `C` ([`continuity_probe`]).

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dantzig::{g_map, DantzigProblem};
use crate::error::{invalid, Error, Result};
use crate::kkt::certificate_for_problem;
use crate::linalg::{cholesky, is_positive_definite, max_abs_diff, norm_inf, standard_normal_matrix, Matrix};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::random::stream_rng;
use crate::stats::{self, KsResult, NormalityTest};
use crate::uniqueness::{is_parallel, DEFAULT_P_CAP, DEFAULT_WITNESS_TOL};

/// One in this many replicates gets a KKT certificate check.
pub const KKT_SAMPLE_EVERY: usize = 50;
/// Magnitude below which a scaled coordinate counts as sitting on the atom at zero.
pub const ATOM_TOL: f64 = 1e-6;
const KKT_TOL: f64 = 1e-7;
const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];
/// Stream label for limiting-law draws, disjoint from any sample size.
const LIMIT_STREAM: u64 = u64::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaRule {
    /// `λ_n = λ₀` for every `n`.
    Fixed { lambda0: f64 },
    /// `λ_n = λ̃₀ / √n`.
    RootN { lambda_tilde: f64 },
}

impl LambdaRule {
    pub fn at(&self, n: usize) -> f64 {
        match *self {
            LambdaRule::Fixed { lambda0 } => lambda0,
            LambdaRule::RootN { lambda_tilde } => lambda_tilde / (n as f64).sqrt(),
        }
    }

    fn level(&self) -> f64 {
        match *self {
            LambdaRule::Fixed { lambda0 } => lambda0,
            LambdaRule::RootN { lambda_tilde } => lambda_tilde,
        }
    }
}

/// Error law, always scaled to mean zero and standard deviation `σ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Noise {
    #[default]
    Gaussian,
    /// `±σ` with equal probability.
    TwoPoint,
    Laplace,
}

impl Noise {
    fn draw<R: Rng + ?Sized>(self, rng: &mut R, sigma: f64) -> f64 {
        match self {
            Noise::Gaussian => sigma * rng.sample::<f64, _>(StandardNormal),
            Noise::TwoPoint => {
                if rng.gen::<bool>() {
                    sigma
                } else {
                    -sigma
                }
            }
            Noise::Laplace => {
                let u: f64 = rng.gen::<f64>() - 0.5;
                let b = sigma / std::f64::consts::SQRT_2;
                -b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub beta_star: Vec<f64>,
    pub c_target: Vec<Vec<f64>>,
    pub sigma: f64,
    pub lambda_rule: LambdaRule,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    #[serde(default)]
    pub noise: Noise,
}

/// A configuration whose invariants have been checked.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub c: Matrix,
    chol: Matrix,
}

impl ScenarioConfig {
    /// Checks every invariant. `C` must be symmetric positive definite and
    /// not parallel to the ℓ¹ ball; a parallel `C` is reported with its first
    /// witness (1-based indices).
    pub fn validate(&self) -> Result<Scenario> {
        let p = self.beta_star.len();
        if p == 0 {
            return invalid("beta_star must be nonempty");
        }
        if self.beta_star.iter().any(|b| !b.is_finite()) {
            return invalid("beta_star must be finite");
        }
        if self.c_target.len() != p {
            return invalid(format!("c_target must be {p}x{p}"));
        }
        let c = Matrix::from_rows(&self.c_target)?;
        if c.shape() != (p, p) {
            return invalid(format!("c_target must be {p}x{p}"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return invalid("sigma must be positive");
        }
        let level = self.lambda_rule.level();
        if !(level >= 0.0 && level.is_finite()) {
            return invalid("lambda must be finite and nonnegative");
        }
        if self.n_grid.is_empty() || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("n_grid must be nonempty and strictly increasing");
        }
        if self.n_grid[0] < p {
            return invalid("every n in n_grid must be at least p");
        }
        if self.reps < 2 {
            return invalid("reps must be at least 2");
        }
        if !c.is_symmetric(1e-12 * c.max_abs().max(1.0)) {
            return Err(Error::InvalidInstance("c_target is not symmetric".into()));
        }
        let report = is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP)?;
        if let Some(w) = report.witnesses.first() {
            return Err(Error::InvalidInstance(format!(
                "c_target is parallel to the l1 ball: A = {:?}, B = {:?}, w = {:?}, s = {:?}",
                w.a.to_one_based(),
                w.b.to_one_based(),
                w.w,
                w.s
            )));
        }
        let chol = cholesky(&c).map_err(|_| Error::InvalidInstance("c_target is not positive definite".into()))?;
        Ok(Scenario {
            config: self.clone(),
            c,
            chol,
        })
    }
}

impl Scenario {
    pub fn p(&self) -> usize {
        self.c.rows()
    }
}

/// Moments of one simulated data set, accumulated row by row.
struct Replicate {
    problem: DantzigProblem,
    /// `n⁻¹ max_i ‖x_i‖²`.
    lindeberg: f64,
    /// `max |n⁻¹XᵀX − C|` entrywise.
    gram_deviation: f64,
}

fn draw_replicate(scn: &Scenario, n: usize, rep: usize) -> Result<Replicate> {
    let p = scn.p();
    let cfg = &scn.config;
    let mut rng = stream_rng(cfg.seed, n as u64, rep as u64);
    let mut gram = vec![0.0; p * p];
    let mut xy = vec![0.0; p];
    let mut z = vec![0.0; p];
    let mut x = vec![0.0; p];
    let mut max_sq: f64 = 0.0;
    for _ in 0..n {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..p {
            x[i] = (0..=i).map(|k| scn.chol[(i, k)] * z[k]).sum();
        }
        let y = x.iter().zip(&cfg.beta_star).map(|(a, b)| a * b).sum::<f64>() + cfg.noise.draw(&mut rng, cfg.sigma);
        for i in 0..p {
            for j in i..p {
                gram[i * p + j] += x[i] * x[j];
            }
            xy[i] += x[i] * y;
        }
        max_sq = max_sq.max(x.iter().map(|a| a * a).sum());
    }
    let nf = n as f64;
    for i in 0..p {
        for j in 0..i {
            gram[i * p + j] = gram[j * p + i];
        }
    }
    let c_n = Matrix::new(p, p, gram.iter().map(|g| g / nf).collect())?;
    let gram_deviation = c_n.sub(&scn.c)?.max_abs();
    let v_n = xy.iter().map(|h| h / nf).collect();
    Ok(Replicate {
        problem: DantzigProblem::new(c_n, v_n, cfg.lambda_rule.at(n))?,
        lindeberg: max_sq / nf,
        gram_deviation,
    })
}

struct ReplicateOutcome {
    beta_hat: Vec<f64>,
    lindeberg: f64,
    gram_deviation: f64,
    kkt_checked: bool,
    kkt_passed: bool,
}

fn run_replicate(scn: &Scenario, n: usize, rep: usize) -> Result<ReplicateOutcome> {
    let r = draw_replicate(scn, n, rep)?;
    let est = g_map(&r.problem)?;
    if !est.is_optimal() {
        return Err(Error::Infeasible(format!("replicate {rep} at n = {n}")));
    }
    let kkt_checked = rep.is_multiple_of(KKT_SAMPLE_EVERY);
    let kkt_passed = !kkt_checked || certificate_for_problem(&r.problem, &est.beta_hat, KKT_TOL)?.found;
    Ok(ReplicateOutcome {
        beta_hat: est.beta_hat,
        lindeberg: r.lindeberg,
        gram_deviation: r.gram_deviation,
        kkt_checked,
        kkt_passed,
    })
}

/// Runs all replicates at one `n`; output order is the replicate index.
fn run_level(scn: &Scenario, n: usize) -> Result<Vec<ReplicateOutcome>> {
    (0..scn.config.reps)
        .into_par_iter()
        .map(|rep| run_replicate(scn, n, rep))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoordinateSummary {
    pub mean: f64,
    pub sd: f64,
    /// At levels 0.05, 0.25, 0.5, 0.75, 0.95.
    pub quantiles: [f64; 5],
    /// Fraction with `|x| < 1e-6`.
    pub atom_mass: f64,
}

fn summarize(samples: &[Vec<f64>]) -> Vec<CoordinateSummary> {
    let p = samples.first().map_or(0, Vec::len);
    (0..p)
        .map(|j| {
            let col: Vec<f64> = samples.iter().map(|s| s[j]).collect();
            let s = stats::sorted(&col);
            CoordinateSummary {
                mean: stats::mean(&col),
                sd: stats::variance(&col).sqrt(),
                quantiles: QUANTILE_LEVELS.map(|q| stats::quantile_sorted(&s, q)),
                atom_mass: col.iter().filter(|x| x.abs() < ATOM_TOL).count() as f64 / col.len() as f64,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignDiagnostics {
    /// Mean over replicates of `n⁻¹ max_i ‖x_i‖²`.
    pub lindeberg_mean: f64,
    /// Largest entrywise `|n⁻¹XᵀX − C|` over replicates.
    pub max_gram_deviation: f64,
    pub kkt_checked: usize,
    pub kkt_failed: usize,
}

fn diagnostics(outcomes: &[ReplicateOutcome]) -> DesignDiagnostics {
    DesignDiagnostics {
        lindeberg_mean: outcomes.iter().map(|o| o.lindeberg).sum::<f64>() / outcomes.len() as f64,
        max_gram_deviation: outcomes.iter().map(|o| o.gram_deviation).fold(0.0, f64::max),
        kkt_checked: outcomes.iter().filter(|o| o.kkt_checked).count(),
        kkt_failed: outcomes.iter().filter(|o| !o.kkt_passed).count(),
    }
}

fn lindeberg_decreasing(levels: &[&DesignDiagnostics]) -> bool {
    levels.windows(2).all(|w| w[1].lindeberg_mean < w[0].lindeberg_mean)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cor1Level {
    pub n: usize,
    pub lambda: f64,
    /// Median over replicates of `‖β̂ − β⁰‖∞`.
    pub median_error_to_limit: f64,
    /// Median over replicates of `‖β̂ − β*‖∞`.
    pub median_error_to_truth: f64,
    /// Summary of `β̂`.
    pub estimate: Vec<CoordinateSummary>,
    pub design: DesignDiagnostics,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cor1Report {
    pub config: ScenarioConfig,
    /// `G(C, Cβ*, λ₀)`.
    pub beta0: Vec<f64>,
    /// `‖β⁰ − β*‖∞`, the error to `β*` that persists in the limit.
    pub limit_bias: f64,
    pub levels: Vec<Cor1Level>,
    pub lindeberg_decreasing: bool,
    pub kkt_all_passed: bool,
    pub design_note: &'static str,
}

const DESIGN_NOTE: &str = "random design: rows iid N(0, C); limits are conditional on the realized n^-1 X'X";

/// The almost-sure limit under a fixed tuning parameter.
pub fn simulate_corollary1(cfg: &ScenarioConfig) -> Result<Cor1Report> {
    simulate_corollary1_with_samples(cfg).map(|(report, _)| report)
}

/// As [`simulate_corollary1`], also returning every `β̂`, indexed by grid
/// position then replicate.
pub fn simulate_corollary1_with_samples(cfg: &ScenarioConfig) -> Result<(Cor1Report, Vec<Vec<Vec<f64>>>)> {
    let LambdaRule::Fixed { lambda0 } = cfg.lambda_rule else {
        return invalid("the almost-sure limit needs a fixed lambda rule");
    };
    let scn = cfg.validate()?;
    let v_limit = scn.c.matvec(&cfg.beta_star)?;
    let beta0 = g_map(&DantzigProblem::new(scn.c.clone(), v_limit, lambda0)?)?.beta_hat;
    let mut levels = Vec::with_capacity(cfg.n_grid.len());
    let mut samples = Vec::with_capacity(cfg.n_grid.len());
    for &n in &cfg.n_grid {
        let out = run_level(&scn, n)?;
        let err0: Vec<f64> = out.iter().map(|o| max_abs_diff(&o.beta_hat, &beta0)).collect();
        let err_star: Vec<f64> = out.iter().map(|o| max_abs_diff(&o.beta_hat, &cfg.beta_star)).collect();
        let est: Vec<Vec<f64>> = out.iter().map(|o| o.beta_hat.clone()).collect();
        levels.push(Cor1Level {
            n,
            lambda: cfg.lambda_rule.at(n),
            median_error_to_limit: stats::median(&err0),
            median_error_to_truth: stats::median(&err_star),
            estimate: summarize(&est),
            design: diagnostics(&out),
        });
        samples.push(est);
    }
    let designs: Vec<&DesignDiagnostics> = levels.iter().map(|l| &l.design).collect();
    let report = Cor1Report {
        config: cfg.clone(),
        limit_bias: max_abs_diff(&beta0, &cfg.beta_star),
        beta0,
        lindeberg_decreasing: lindeberg_decreasing(&designs),
        kkt_all_passed: designs.iter().all(|d| d.kkt_failed == 0),
        levels,
        design_note: DESIGN_NOTE,
    };
    Ok((report, samples))
}

/// Solves the limiting problem
///
/// ```text
/// minimize   ‖u_{Ā*}‖₁ + sign(β*)_{A*}ᵀ u_{A*}
/// subject to ‖Cu − v⁰‖∞ ≤ λ̃
/// ```
///
/// where `A* = support(β*)`. Coordinates in `A*` enter as free variables with
/// a linear cost; the rest are split into positive and negative parts.
pub fn limiting_problem_solve(c: &Matrix, v0: &[f64], lambda_tilde: f64, beta_star: &[f64]) -> Result<Vec<f64>> {
    let p = c.rows();
    if !c.is_square() || v0.len() != p || beta_star.len() != p {
        return invalid("C must be p x p with v0 and beta_star of length p");
    }
    if !(lambda_tilde >= 0.0 && lambda_tilde.is_finite()) {
        return invalid("lambda_tilde must be finite and nonnegative");
    }
    // Column k of the LP is coordinate `owner[k]` with sign `sign[k]`.
    let mut owner = Vec::new();
    let mut sign = Vec::new();
    let mut cost = Vec::new();
    let mut bounds = Vec::new();
    for (j, &b) in beta_star.iter().enumerate() {
        if b != 0.0 {
            owner.push(j);
            sign.push(1.0);
            cost.push(b.signum());
            bounds.push(None);
        } else {
            for s in [1.0, -1.0] {
                owner.push(j);
                sign.push(s);
                cost.push(1.0);
                bounds.push(Some(0.0));
            }
        }
    }
    let mut prog = LinearProgram::new(cost).with_lower_bounds(bounds);
    for i in 0..p {
        let row: Vec<f64> = owner.iter().zip(&sign).map(|(&j, s)| s * c[(i, j)]).collect();
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        prog.push_ub(&row, v0[i] + lambda_tilde);
        prog.push_ub(&neg, lambda_tilde - v0[i]);
    }
    let sol = lp::solve(&prog)?;
    match sol.status {
        LpStatus::Optimal => {
            let mut u = vec![0.0; p];
            for (k, (&j, s)) in owner.iter().zip(&sign).enumerate() {
                u[j] += s * sol.x[k];
            }
            crate::dantzig::snap_zeros(&mut u);
            Ok(u)
        }
        LpStatus::Unbounded => Err(Error::Unbounded(
            "limiting problem unbounded; C is not in the admissible class".into(),
        )),
        LpStatus::Infeasible => Err(Error::Infeasible("limiting problem has no feasible point".into())),
    }
}

/// Draws of the limiting law, one per replicate.
pub fn limiting_samples(scn: &Scenario, lambda_tilde: f64) -> Result<Vec<Vec<f64>>> {
    let cfg = &scn.config;
    let p = scn.p();
    (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(cfg.seed, LIMIT_STREAM, r as u64);
            let z: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
            let v0: Vec<f64> = (0..p)
                .map(|i| cfg.sigma * (0..=i).map(|k| scn.chol[(i, k)] * z[k]).sum::<f64>())
                .collect();
            limiting_problem_solve(&scn.c, &v0, lambda_tilde, &cfg.beta_star)
        })
        .collect()
}

/// Pass thresholds for the distributional comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cor2Thresholds {
    /// Relative Frobenius error allowed on the covariance.
    pub covariance_rel_error: f64,
    /// Largest per-coordinate two-sample KS statistic allowed.
    pub ks_statistic: f64,
}

impl Default for Cor2Thresholds {
    fn default() -> Self {
        Self {
            covariance_rel_error: 0.15,
            ks_statistic: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cor2Level {
    pub n: usize,
    pub lambda: f64,
    /// Summary of `√n(β̂ − β*)`.
    pub scaled_error: Vec<CoordinateSummary>,
    pub covariance: Matrix,
    pub design: DesignDiagnostics,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cor2Report {
    pub config: ScenarioConfig,
    pub thresholds: Cor2Thresholds,
    pub levels: Vec<Cor2Level>,
    pub limit_summary: Vec<CoordinateSummary>,
    pub limit_covariance: Matrix,
    /// `σ²C⁻¹`, reported when `λ̃ = 0`, where the limit is Gaussian.
    pub ols_covariance: Option<Matrix>,
    /// Relative Frobenius error of the largest-n covariance against
    /// `σ²C⁻¹` when `λ̃ = 0`, otherwise against the limiting sample.
    pub covariance_rel_error: f64,
    /// Per-coordinate comparison at the largest n.
    pub ks: Vec<KsResult>,
    /// Normality tests of the limiting sample on coordinates with `β*_j = 0`.
    pub zero_coordinate_normality: Vec<(usize, NormalityTest)>,
    pub lindeberg_decreasing: bool,
    pub kkt_all_passed: bool,
    pub covariance_pass: bool,
    pub ks_pass: bool,
    pub pass: bool,
    pub design_note: &'static str,
}

/// Raw draws at the largest n, for plotting.
#[derive(Clone, Debug, PartialEq)]
pub struct Cor2Samples {
    /// `√n(β̂ − β*)` per replicate.
    pub empirical: Vec<Vec<f64>>,
    /// Limiting-law draws per replicate.
    pub limiting: Vec<Vec<f64>>,
}

fn relative_frobenius(a: &Matrix, b: &Matrix) -> Result<f64> {
    Ok(a.sub(b)?.frobenius() / b.frobenius())
}

/// The limiting law under `λ_n = λ̃/√n`.
pub fn simulate_corollary2(cfg: &ScenarioConfig, thresholds: Cor2Thresholds) -> Result<(Cor2Report, Cor2Samples)> {
    let LambdaRule::RootN { lambda_tilde } = cfg.lambda_rule else {
        return invalid("the limiting law needs the root-n lambda rule");
    };
    let scn = cfg.validate()?;
    if *cfg.n_grid.last().expect("validated") < 2000 {
        return invalid("the largest n must be at least 2000");
    }
    let p = scn.p();
    let mut levels = Vec::with_capacity(cfg.n_grid.len());
    let mut empirical = Vec::new();
    for &n in &cfg.n_grid {
        let out = run_level(&scn, n)?;
        let rn = (n as f64).sqrt();
        let scaled: Vec<Vec<f64>> = out
            .iter()
            .map(|o| (0..p).map(|j| rn * (o.beta_hat[j] - cfg.beta_star[j])).collect())
            .collect();
        levels.push(Cor2Level {
            n,
            lambda: cfg.lambda_rule.at(n),
            scaled_error: summarize(&scaled),
            covariance: stats::covariance(&scaled)?,
            design: diagnostics(&out),
        });
        empirical = scaled;
    }
    let limiting = limiting_samples(&scn, lambda_tilde)?;
    let limit_covariance = stats::covariance(&limiting)?;
    let ols_covariance = if lambda_tilde == 0.0 {
        Some(crate::linalg::inverse(&scn.c)?.scale(cfg.sigma * cfg.sigma))
    } else {
        None
    };
    let last_cov = &levels.last().expect("nonempty grid").covariance;
    let covariance_rel_error = relative_frobenius(last_cov, ols_covariance.as_ref().unwrap_or(&limit_covariance))?;
    let ks = (0..p)
        .map(|j| {
            let a: Vec<f64> = empirical.iter().map(|s| s[j]).collect();
            let b: Vec<f64> = limiting.iter().map(|s| s[j]).collect();
            stats::ks_two_sample(&a, &b)
        })
        .collect::<Result<Vec<_>>>()?;
    let zero_coordinate_normality = if cfg.reps > 100 {
        (0..p)
            .filter(|&j| cfg.beta_star[j] == 0.0)
            .map(|j| {
                let col: Vec<f64> = limiting.iter().map(|s| s[j]).collect();
                stats::normality_test(&col).map(|t| (j, t))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let designs: Vec<&DesignDiagnostics> = levels.iter().map(|l| &l.design).collect();
    let covariance_pass = covariance_rel_error < thresholds.covariance_rel_error;
    let ks_pass = ks.iter().all(|k| k.statistic < thresholds.ks_statistic);
    let report = Cor2Report {
        config: cfg.clone(),
        thresholds,
        limit_summary: summarize(&limiting),
        limit_covariance,
        ols_covariance,
        covariance_rel_error,
        ks,
        zero_coordinate_normality,
        lindeberg_decreasing: lindeberg_decreasing(&designs),
        kkt_all_passed: designs.iter().all(|d| d.kkt_failed == 0),
        covariance_pass,
        ks_pass,
        pass: covariance_pass && ks_pass,
        levels,
        design_note: DESIGN_NOTE,
    };
    Ok((report, Cor2Samples { empirical, limiting }))
}

/// Direction `(ΔC, δv, δλ)` along which `G` is perturbed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationDirections {
    /// Symmetric.
    pub delta_c: Matrix,
    pub delta_v: Vec<f64>,
    pub delta_lambda: f64,
}

impl PerturbationDirections {
    pub fn zero(p: usize) -> Self {
        Self {
            delta_c: Matrix::zeros(p, p),
            delta_v: vec![0.0; p],
            delta_lambda: 0.0,
        }
    }

    /// Standard normal entries in every component (`ΔC` symmetrized).
    pub fn random(p: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, 0xD1, 0);
        let m = standard_normal_matrix(&mut rng, p, p);
        let delta_c = m.add(&m.transpose()).expect("square").scale(0.5);
        Self {
            delta_c,
            delta_v: (0..p).map(|_| rng.sample(StandardNormal)).collect(),
            delta_lambda: rng.sample(StandardNormal),
        }
    }

    /// Only `δv`, standard normal.
    pub fn v_only(p: usize, seed: u64) -> Self {
        let mut dirs = Self::random(p, seed);
        dirs.delta_c = Matrix::zeros(p, p);
        dirs.delta_lambda = 0.0;
        dirs
    }
}

/// A well-conditioned base point for [`continuity_probe`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityInstance {
    pub c: Matrix,
    pub v: Vec<f64>,
    pub lambda: f64,
}

/// `C = WᵀW/(2p) + I/2` with `W` standard normal, `v` standard normal, and
/// `λ` uniform on `[0.1, 1]` unless `lambda_zero`. Redraws the rare parallel `C`.
pub fn random_continuity_instance(p: usize, seed: u64, lambda_zero: bool) -> Result<ContinuityInstance> {
    if p == 0 || p > DEFAULT_P_CAP {
        return invalid(format!("p must be in 1..={DEFAULT_P_CAP}"));
    }
    for attempt in 0..100u64 {
        let mut rng = stream_rng(seed, 0xC0, attempt);
        let w = standard_normal_matrix(&mut rng, 2 * p, p);
        let c = w.gram_scaled().scale(0.5).add(&Matrix::identity(p).scale(0.5))?;
        let c = c.add(&c.transpose())?.scale(0.5);
        if is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP)?.parallel {
            continue;
        }
        let v = (0..p).map(|_| rng.sample(StandardNormal)).collect();
        let lambda = if lambda_zero { 0.0 } else { rng.gen_range(0.1..1.0) };
        return Ok(ContinuityInstance { c, v, lambda });
    }
    Err(Error::InvalidInstance("could not draw a non-parallel C".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityRow {
    pub eps: f64,
    /// `‖G(perturbed) − G(base)‖∞`; `None` when skipped.
    pub d: Option<f64>,
    pub skipped: bool,
    pub skip_reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub base: Vec<f64>,
    pub rows: Vec<ContinuityRow>,
    /// `d` at the smallest `ε`.
    pub final_d: Option<f64>,
    /// Largest `d(ε_{k+1}) / d(ε_k)` over consecutive evaluated points.
    pub max_increase_ratio: f64,
    pub pass: bool,
}

/// Final `d` must fall below this.
pub const CONTINUITY_FINAL_TOL: f64 = 1e-4;
/// Largest allowed growth between consecutive grid points.
pub const CONTINUITY_MAX_RATIO: f64 = 10.0;
/// Differences below this are treated as zero when forming ratios.
const CONTINUITY_FLOOR: f64 = 1e-13;

/// Tabulates `d(ε) = ‖G(C + εΔC, v + εδv, max(0, λ + εδλ)) − G(C, v, λ)‖∞`.
///
/// Grid points where the perturbed `C` is not symmetric positive definite or
/// is parallel are skipped rather than failed. Passes when the smallest `ε`
/// was evaluated with `d < 1e-4` and `d` never grows more than tenfold
/// between consecutive evaluated points.
pub fn continuity_probe(
    c: &Matrix,
    v: &[f64],
    lambda: f64,
    dirs: &PerturbationDirections,
    eps_grid: &[f64],
) -> Result<ContinuityReport> {
    let p = c.rows();
    if dirs.delta_c.shape() != (p, p) || dirs.delta_v.len() != p || v.len() != p {
        return invalid("perturbation directions do not match the base point");
    }
    if eps_grid.is_empty()
        || eps_grid.iter().any(|&e| e.is_nan() || e <= 0.0)
        || eps_grid.windows(2).any(|w| w[1] >= w[0])
    {
        return invalid("eps_grid must be positive and strictly decreasing");
    }
    if !is_positive_definite(c) {
        return Err(Error::InvalidInstance("base C is not positive definite".into()));
    }
    if is_parallel(c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP)?.parallel {
        return Err(Error::InvalidInstance("base C is parallel to the l1 ball".into()));
    }
    let base = g_map(&DantzigProblem::new(c.clone(), v.to_vec(), lambda)?)?.beta_hat;

    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let c_eps = c.add(&dirs.delta_c.scale(eps))?;
        let skip = if !is_positive_definite(&c_eps) {
            Some("perturbed C is not positive definite")
        } else if is_parallel(&c_eps, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP)?.parallel {
            Some("perturbed C is parallel")
        } else {
            None
        };
        if let Some(reason) = skip {
            rows.push(ContinuityRow {
                eps,
                d: None,
                skipped: true,
                skip_reason: Some(reason.into()),
            });
            continue;
        }
        let v_eps: Vec<f64> = v.iter().zip(&dirs.delta_v).map(|(a, b)| a + eps * b).collect();
        let l_eps = (lambda + eps * dirs.delta_lambda).max(0.0);
        let g = g_map(&DantzigProblem::new(c_eps, v_eps, l_eps)?)?.beta_hat;
        rows.push(ContinuityRow {
            eps,
            d: Some(max_abs_diff(&g, &base)),
            skipped: false,
            skip_reason: None,
        });
    }

    let evaluated: Vec<f64> = rows.iter().filter_map(|r| r.d).collect();
    let max_increase_ratio = evaluated
        .windows(2)
        .map(|w| w[1] / w[0].max(CONTINUITY_FLOOR))
        .fold(0.0, f64::max);
    let final_d = rows.last().and_then(|r| r.d);
    let pass = final_d.is_some_and(|d| d < CONTINUITY_FINAL_TOL) && max_increase_ratio <= CONTINUITY_MAX_RATIO;
    Ok(ContinuityReport {
        base,
        rows,
        final_d,
        max_increase_ratio,
        pass,
    })
}

/// `10⁻¹, 10⁻², …, 10⁻⁶`.
pub fn default_eps_grid() -> Vec<f64> {
    (1..=6).map(|k| 10f64.powi(-k)).collect()
}

/// Sup-norm of `C⁻¹δv`: the exact slope of `d(ε)` when `λ = 0` and only `v`
/// moves.
pub fn closed_form_slope(c: &Matrix, delta_v: &[f64]) -> Result<f64> {
    Ok(norm_inf(&crate::linalg::solve(c, delta_v)?))
}
