//! The Dantzig selector
//!
//! ```text
//! minimize ‖β‖₁  subject to  n⁻¹‖Xᵀ(y − Xβ)‖∞ ≤ λ
//! ```
//!
//! and its moment form `G(C, v, λ) = argmin ‖u‖₁ s.t. ‖Cu − v‖∞ ≤ λ`, solved
//! as a linear program in `(β⁺, β⁻) ≥ 0`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{self, Point};
use crate::linalg::{norm_inf, norm_l1, IndexSet, Matrix};
use crate::lp::{self, LinearProgram, LpStatus};

/// Observed design `X` (n×p) and response `y` (length n).
#[derive(Clone, Debug, PartialEq)]
pub struct DesignData {
    x: Matrix,
    y: Vec<f64>,
}

impl DesignData {
    pub fn new(x: Matrix, y: Vec<f64>) -> Result<Self> {
        if x.rows() == 0 || x.cols() == 0 {
            return invalid("design needs n >= 1 and p >= 1");
        }
        if y.len() != x.rows() {
            return invalid(format!("y has length {} but X has {} rows", y.len(), x.rows()));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return invalid("y must be finite");
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn p(&self) -> usize {
        self.x.cols()
    }

    /// `C = n⁻¹XᵀX`.
    pub fn gram(&self) -> Matrix {
        self.x.gram_scaled()
    }

    /// `v = n⁻¹Xᵀy`.
    pub fn marginal(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.x
            .tr_matvec(&self.y)
            .expect("validated shapes")
            .into_iter()
            .map(|v| v / n)
            .collect()
    }

    /// `n⁻¹Xᵀ(y − Xβ)`.
    pub fn residual_correlations(&self, beta: &[f64]) -> Result<Vec<f64>> {
        let fit = self.x.matvec(beta)?;
        let resid: Vec<f64> = self.y.iter().zip(&fit).map(|(y, f)| y - f).collect();
        let n = self.n() as f64;
        Ok(self.x.tr_matvec(&resid)?.into_iter().map(|v| v / n).collect())
    }

    pub fn problem(&self, lambda: f64) -> Result<DantzigProblem> {
        DantzigProblem::new(self.gram(), self.marginal(), lambda)
    }
}

/// The reduced problem `(C, v, λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DantzigProblem {
    pub c: Matrix,
    pub v: Vec<f64>,
    pub lambda: f64,
}

impl DantzigProblem {
    /// Checks shapes, symmetry of `C` (to 1e-10, relative to its scale) and
    /// `λ ≥ 0`. Positive semidefiniteness is not checked.
    pub fn new(c: Matrix, v: Vec<f64>, lambda: f64) -> Result<Self> {
        if !c.is_square() || c.rows() == 0 {
            return invalid(format!("C must be square and nonempty, got {:?}", c.shape()));
        }
        if v.len() != c.rows() {
            return invalid(format!("v has length {}, C is {}x{}", v.len(), c.rows(), c.cols()));
        }
        if !c.is_symmetric(1e-10 * c.max_abs().max(1.0)) {
            return invalid("C must be symmetric");
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return invalid(format!("lambda must be finite and nonnegative, got {lambda}"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return invalid("v must be finite");
        }
        Ok(Self { c, v, lambda })
    }

    pub fn p(&self) -> usize {
        self.v.len()
    }

    /// `v − Cβ`.
    pub fn residual(&self, beta: &[f64]) -> Vec<f64> {
        let cb = self.c.matvec(beta).expect("validated shapes");
        self.v.iter().zip(&cb).map(|(v, c)| v - c).collect()
    }

    /// Whether `β` lies in `F = {β : ‖Cβ − v‖∞ ≤ λ}` up to `tol`.
    pub fn is_feasible(&self, beta: &[f64], tol: f64) -> bool {
        norm_inf(&self.residual(beta)) <= self.lambda + tol
    }

    /// The split LP in `(β⁺, β⁻)`:
    /// `min Σ(β⁺ + β⁻)` s.t. `C(β⁺ − β⁻) ≤ v + λ`, `−C(β⁺ − β⁻) ≤ λ − v`.
    pub fn split_lp(&self) -> LinearProgram {
        let p = self.p();
        let mut lp = LinearProgram::new(vec![1.0; 2 * p]);
        for j in 0..p {
            let crow = self.c.row(j);
            let mut up = Vec::with_capacity(2 * p);
            up.extend_from_slice(crow);
            up.extend(crow.iter().map(|x| -x));
            let down: Vec<f64> = up.iter().map(|x| -x).collect();
            lp.push_ub(&up, self.v[j] + self.lambda);
            lp.push_ub(&down, self.lambda - self.v[j]);
        }
        lp
    }

    /// Coordinates whose constraint is tight: `| |v − Cβ|_j − λ | ≤ 1e-7·max(1, λ)`.
    pub fn active_set(&self, beta: &[f64]) -> IndexSet {
        let tol = 1e-7 * self.lambda.max(1.0);
        let r = self.residual(beta);
        let idx = (0..self.p())
            .filter(|&j| (r[j].abs() - self.lambda).abs() <= tol)
            .collect();
        IndexSet::new(idx, self.p()).expect("increasing by construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EstimateStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DantzigEstimate {
    /// Empty when infeasible.
    pub beta_hat: Vec<f64>,
    /// `‖β̂‖₁`, i.e. the radius `t₀` of the smallest ℓ¹ ball meeting `F`.
    /// Infinite when infeasible.
    pub l1_norm: f64,
    pub active_set: IndexSet,
    pub status: EstimateStatus,
}

impl DantzigEstimate {
    pub fn is_optimal(&self) -> bool {
        self.status == EstimateStatus::Optimal
    }
}

/// Relative magnitude below which solver output is snapped to exact zero.
const SNAP_ZERO: f64 = 1e-12;

pub(crate) fn snap_zeros(beta: &mut [f64]) {
    let scale = norm_inf(beta).max(1.0);
    for b in beta.iter_mut() {
        if b.abs() <= SNAP_ZERO * scale {
            *b = 0.0;
        }
    }
}

/// `G(C, v, λ)`: one optimal basic solution of the ℓ¹ problem, or an
/// infeasible status when `v` is farther than `λ` from `range(C)`.
pub fn g_map(prob: &DantzigProblem) -> Result<DantzigEstimate> {
    let p = prob.p();
    let sol = lp::solve(&prob.split_lp())?;
    match sol.status {
        LpStatus::Optimal => {
            let mut beta: Vec<f64> = (0..p).map(|j| sol.x[j] - sol.x[p + j]).collect();
            snap_zeros(&mut beta);
            Ok(DantzigEstimate {
                l1_norm: norm_l1(&beta),
                active_set: prob.active_set(&beta),
                beta_hat: beta,
                status: EstimateStatus::Optimal,
            })
        }
        LpStatus::Infeasible => Ok(DantzigEstimate {
            beta_hat: Vec::new(),
            l1_norm: f64::INFINITY,
            active_set: IndexSet::empty(p),
            status: EstimateStatus::Infeasible,
        }),
        LpStatus::Unbounded => Err(Error::Unbounded(
            "the l1 objective is bounded below; solver reported unbounded".into(),
        )),
    }
}

/// The Dantzig selector on observed data: `G(n⁻¹XᵀX, n⁻¹Xᵀy, λ)`.
pub fn dantzig_select(data: &DesignData, lambda: f64) -> Result<DantzigEstimate> {
    g_map(&data.problem(lambda)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSetDiameter {
    /// `max_j (max_j − min_j)` over the optimal face.
    pub diameter_inf: f64,
    /// Per-coordinate `(min, max)` of `β_j` over the optimal face.
    pub per_coord_ranges: Vec<(f64, f64)>,
}

impl SolutionSetDiameter {
    /// At most 1e-7: the optimum is unique up to solver precision.
    pub fn certifies_uniqueness(&self) -> bool {
        self.diameter_inf <= 1e-7
    }

    /// More than 1e-6: at least two distinct optima exist.
    pub fn certifies_multiplicity(&self) -> bool {
        self.diameter_inf > 1e-6
    }
}

/// Spread of every coordinate over the set of all optima `F ∩ t₀B₁`.
pub fn solution_set_diameter(prob: &DantzigProblem) -> Result<SolutionSetDiameter> {
    let p = prob.p();
    let lp = prob.split_lp();
    let mut ranges = Vec::with_capacity(p);
    for j in 0..p {
        let mut dir = vec![0.0; 2 * p];
        dir[j] = 1.0;
        dir[p + j] = -1.0;
        let range = lp::direction_range_on_optimal_face(&lp, &dir).map_err(|e| match e {
            Error::InvalidArgument(_) => Error::Infeasible("Dantzig problem has no feasible point".into()),
            other => other,
        })?;
        ranges.push(range);
    }
    let diameter_inf = ranges.iter().fold(0.0f64, |m, (lo, hi)| m.max(hi - lo));
    Ok(SolutionSetDiameter {
        diameter_inf,
        per_coord_ranges: ranges,
    })
}

fn require_planar(prob: &DantzigProblem, box_halfwidth: f64) -> Result<()> {
    if prob.p() != 2 {
        return invalid(format!("polygon output needs p = 2, got p = {}", prob.p()));
    }
    if !(box_halfwidth > 0.0 && box_halfwidth.is_finite()) {
        return invalid("box half-width must be positive and finite");
    }
    Ok(())
}

fn clip_eps(prob: &DantzigProblem, box_halfwidth: f64) -> f64 {
    1e-12 * (box_halfwidth + norm_inf(&prob.v) + prob.lambda).max(1.0)
}

/// Vertices of `F ∩ [−w, w]²`, counterclockwise; empty if the intersection is.
pub fn polygon_2d(prob: &DantzigProblem, box_halfwidth: f64) -> Result<Vec<Point>> {
    require_planar(prob, box_halfwidth)?;
    let eps = clip_eps(prob, box_halfwidth);
    let mut poly = geometry::square(box_halfwidth);
    for j in 0..2 {
        let a = [prob.c[(j, 0)], prob.c[(j, 1)]];
        poly = geometry::clip_halfplane(&poly, a, prob.v[j] + prob.lambda, eps);
        poly = geometry::clip_halfplane(&poly, [-a[0], -a[1]], prob.lambda - prob.v[j], eps);
    }
    Ok(geometry::canonical_start(poly))
}

/// Vertices of `F ∩ t₀B₁ ∩ [−w, w]²` (the set of all optima) for a given
/// radius `t₀`.
pub fn solution_polygon_2d(prob: &DantzigProblem, box_halfwidth: f64, t0: f64) -> Result<Vec<Point>> {
    let mut poly = polygon_2d(prob, box_halfwidth)?;
    let eps = clip_eps(prob, box_halfwidth);
    for a in [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]] {
        poly = geometry::clip_halfplane(&poly, a, t0, eps);
    }
    Ok(geometry::canonical_start(poly))
}
