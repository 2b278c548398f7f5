//! Parallelism between a symmetric matrix and the ℓ¹ ball.
//!
//! `C` is parallel to the ℓ¹ ball when there are nonempty `A, B ⊆ {1..p}`
//! and `w ∈ ℝ^|B|` with
//!
//! ```text
//! ‖C_B w‖∞ ≤ 1,   C_{A,B} w ∈ {±1}^|A|,   dim null(C_{B,A}) > 0.
//! ```
//!
//! When `n⁻¹XᵀX` is not parallel, both the Dantzig selector and the lasso
//! have unique solutions. The check here is exhaustive: every pair `(A, B)`
//! with a nontrivial null space is tried against every sign pattern (modulo
//! overall sign) through an LP feasibility problem in `w`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dantzig::{DantzigProblem, DesignData};
use crate::error::{invalid, Error, Result};
use crate::linalg::{
    norm_inf, norm_l1, null_space_dim, pseudoinverse, standard_normal_matrix, submatrix, IndexSet, Matrix,
    DEFAULT_RANK_TOL,
};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::random::stream_rng;

/// Default limit on p for exhaustive enumeration.
pub const DEFAULT_P_CAP: usize = 10;
/// Default tolerance on `C_{A,B}w = s` and on witness re-verification.
pub const DEFAULT_WITNESS_TOL: f64 = 1e-8;
/// Stored witnesses per report.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelismWitness {
    pub a: IndexSet,
    pub b: IndexSet,
    pub w: Vec<f64>,
    pub s: Vec<i8>,
}

impl ParallelismWitness {
    /// Re-checks all three conditions directly against `c`.
    pub fn verify(&self, c: &Matrix, tol: f64) -> bool {
        let Ok(cb) = submatrix(c, None, Some(&self.b)) else {
            return false;
        };
        let Ok(cbw) = cb.matvec(&self.w) else {
            return false;
        };
        let bounded = norm_inf(&cbw) <= 1.0 + tol;
        let signs = self.a.len() == self.s.len()
            && self
                .a
                .iter()
                .zip(&self.s)
                .all(|(j, &s)| (cbw[j] - f64::from(s)).abs() <= tol);
        let degenerate = submatrix(c, Some(&self.b), Some(&self.a))
            .map(|m| null_space_dim(&m, DEFAULT_RANK_TOL) > 0)
            .unwrap_or(false);
        bounded && signs && degenerate
    }

    /// The same witness with `w` and `s` negated.
    pub fn negated(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            w: self.w.iter().map(|x| -x).collect(),
            s: self.s.iter().map(|x| -x).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelismReport {
    pub parallel: bool,
    pub witnesses: Vec<ParallelismWitness>,
    pub pairs_examined: usize,
    pub p_cap_respected: bool,
}

fn check_square_symmetric(c: &Matrix, p_cap: usize) -> Result<usize> {
    if !c.is_square() || c.rows() == 0 {
        return invalid(format!("C must be square and nonempty, got {:?}", c.shape()));
    }
    if !c.is_symmetric(1e-10 * c.max_abs().max(1.0)) {
        return invalid("C must be symmetric");
    }
    let p = c.rows();
    if p > p_cap {
        return Err(Error::DimensionCap { p, cap: p_cap });
    }
    Ok(p)
}

/// Sign patterns in `{±1}^k` with first entry `+1`.
fn sign_patterns(k: usize) -> impl Iterator<Item = Vec<i8>> {
    (0u64..1 << (k - 1)).map(move |bits| {
        (0..k)
            .map(|i| if i > 0 && bits >> (i - 1) & 1 == 1 { -1 } else { 1 })
            .collect()
    })
}

/// Searches `w` with `‖C_B w‖∞ ≤ 1` and `|C_{A,B}w − s| ≤ band`.
fn witness_for(c: &Matrix, a: &IndexSet, b: &IndexSet, s: &[i8], band: f64) -> Result<Option<Vec<f64>>> {
    let cb = submatrix(c, None, Some(b))?;
    let k = b.len();
    let mut sys = LinearProgram::free(k, vec![0.0; k]);
    for i in 0..cb.rows() {
        let row = cb.row(i);
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        sys.push_ub(row, 1.0);
        sys.push_ub(&neg, 1.0);
    }
    for (i, &sj) in a.iter().zip(s) {
        let row = cb.row(i);
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        let sj = f64::from(sj);
        sys.push_ub(row, sj + band);
        sys.push_ub(&neg, -sj + band);
    }
    lp::feasible(&sys)
}

/// Moves `w` by the least-norm correction that makes `C_{A,B}w = s` hold
/// exactly, if the result still verifies at a tight tolerance.
fn polish(c: &Matrix, wit: &ParallelismWitness) -> Option<ParallelismWitness> {
    let cab = submatrix(c, Some(&wit.a), Some(&wit.b)).ok()?;
    let resid: Vec<f64> = cab
        .matvec(&wit.w)
        .ok()?
        .iter()
        .zip(&wit.s)
        .map(|(x, &s)| f64::from(s) - x)
        .collect();
    let step = pseudoinverse(&cab, DEFAULT_RANK_TOL).matvec(&resid).ok()?;
    let polished = ParallelismWitness {
        w: wit.w.iter().zip(&step).map(|(w, d)| w + d).collect(),
        ..wit.clone()
    };
    polished.verify(c, 1e-12).then_some(polished)
}

/// All witnesses for a single `(A, B)`, re-verified at `tol`.
fn pair_witnesses(c: &Matrix, a: &IndexSet, b: &IndexSet, tol: f64) -> Result<Vec<ParallelismWitness>> {
    let cba = submatrix(c, Some(b), Some(a))?;
    if null_space_dim(&cba, DEFAULT_RANK_TOL) == 0 {
        return Ok(Vec::new());
    }
    let mut found = Vec::new();
    for s in sign_patterns(a.len()) {
        if let Some(w) = witness_for(c, a, b, &s, 0.5 * tol)? {
            let mut wit = ParallelismWitness {
                a: a.clone(),
                b: b.clone(),
                w,
                s,
            };
            if let Some(polished) = polish(c, &wit) {
                wit = polished;
            }
            if wit.verify(c, tol) {
                found.push(wit);
            }
        }
    }
    Ok(found)
}

/// Nonempty `(A, B)` pairs grouped by `|A| + |B|`, each group sorted by
/// `(A, B)`.
fn pairs_by_level(p: usize, fixed_b: Option<&IndexSet>) -> Vec<Vec<(IndexSet, IndexSet)>> {
    let subsets: Vec<IndexSet> = (1u64..1 << p).map(|m| IndexSet::from_mask(m, p)).collect();
    let mut levels: Vec<Vec<(IndexSet, IndexSet)>> = vec![Vec::new(); 2 * p + 1];
    for a in &subsets {
        match fixed_b {
            Some(b) => levels[a.len() + b.len()].push((a.clone(), b.clone())),
            None => {
                for b in &subsets {
                    levels[a.len() + b.len()].push((a.clone(), b.clone()));
                }
            }
        }
    }
    for level in levels.iter_mut() {
        level.sort();
    }
    levels
}

fn enumerate(c: &Matrix, tol: f64, fixed_b: Option<&IndexSet>) -> Result<ParallelismReport> {
    let p = c.rows();
    let mut witnesses = Vec::new();
    let mut pairs_examined = 0;
    for level in pairs_by_level(p, fixed_b) {
        if witnesses.len() >= MAX_WITNESSES {
            break;
        }
        let found: Vec<Vec<ParallelismWitness>> = level
            .par_iter()
            .map(|(a, b)| pair_witnesses(c, a, b, tol))
            .collect::<Result<_>>()?;
        pairs_examined += level.len();
        witnesses.extend(found.into_iter().flatten());
    }
    witnesses.truncate(MAX_WITNESSES);
    Ok(ParallelismReport {
        parallel: !witnesses.is_empty(),
        witnesses,
        pairs_examined,
        p_cap_respected: true,
    })
}

/// Exhaustively decides whether `c` is parallel to the ℓ¹ ball.
///
/// Pairs are examined in order of increasing `|A| + |B|`, so the first
/// witnesses reported are minimal; enumeration stops after the level in which
/// [`MAX_WITNESSES`] witnesses have accumulated.
pub fn is_parallel(c: &Matrix, tol: f64, p_cap: usize) -> Result<ParallelismReport> {
    check_square_symmetric(c, p_cap)?;
    enumerate(c, tol, None)
}

/// The necessary condition for multiple lasso solutions: parallelism with
/// `B = {1..p}`.
pub fn lasso_parallelism_check(c: &Matrix, tol: f64, p_cap: usize) -> Result<ParallelismReport> {
    let p = check_square_symmetric(c, p_cap)?;
    enumerate(c, tol, Some(&IndexSet::all(p)))
}

/// A concrete candidate for the sufficient condition for multiple Dantzig
/// selector solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct MultInstance {
    pub data: DesignData,
    pub lambda: f64,
    pub beta0: Vec<f64>,
    pub mu0: Vec<f64>,
    pub a: IndexSet,
    pub b: IndexSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultVerdict {
    pub holds: bool,
    /// Conditions 1–4 in order.
    pub per_condition: [bool; 4],
    /// Minimum of `βᵀC_{·,B}μ⁰` over the feasible set (condition 2).
    pub min_linear_form: f64,
}

/// Checks the four conditions of the multiplicity criterion:
///
/// 1. `‖C_{·,B}μ⁰‖∞ ≤ 1`, `C_{A,B}μ⁰ ∈ {±1}^|A|`, `dim null(C_{B,A}) > 0`;
/// 2. `βᵀC_{·,B}μ⁰ ≥ ‖β⁰‖₁` for every feasible `β` (one LP);
/// 3. `A = support(β⁰)`;
/// 4. the tight residual correlations at `β⁰` are exactly `B`.
pub fn verify_mult(inst: &MultInstance, tol: f64) -> Result<MultVerdict> {
    let p = inst.data.p();
    if inst.beta0.len() != p || inst.mu0.len() != inst.b.len() {
        return invalid("beta0 must have length p and mu0 length |B|");
    }
    if inst.a.universe() != p || inst.b.universe() != p {
        return invalid("index sets must live in {0..p}");
    }
    let scale = norm_inf(&inst.beta0).max(1.0);
    let support: Vec<usize> = (0..p).filter(|&j| inst.beta0[j].abs() > tol * scale).collect();
    if support.is_empty() {
        return Err(Error::InvalidInstance(
            "beta0 = 0 forces A to be empty; the criterion needs a nonempty support".into(),
        ));
    }
    if inst.a.is_empty() || inst.b.is_empty() {
        return Err(Error::InvalidInstance("A and B must be nonempty".into()));
    }

    let prob: DantzigProblem = inst.data.problem(inst.lambda)?;
    let c = &prob.c;

    // Condition 1.
    let cb = submatrix(c, None, Some(&inst.b))?;
    let cbmu = cb.matvec(&inst.mu0)?;
    let cond1 = norm_inf(&cbmu) <= 1.0 + tol
        && inst.a.iter().all(|j| (cbmu[j].abs() - 1.0).abs() <= tol)
        && null_space_dim(&submatrix(c, Some(&inst.b), Some(&inst.a))?, DEFAULT_RANK_TOL) > 0;

    // Condition 2: minimize βᵀ(C_{·,B}μ⁰) over F.
    let mut lp = prob.split_lp();
    lp.objective = cbmu.iter().copied().chain(cbmu.iter().map(|x| -x)).collect();
    let sol = lp::solve(&lp)?;
    let target = norm_l1(&inst.beta0);
    let (cond2, min_linear_form) = match sol.status {
        LpStatus::Infeasible => return Err(Error::InvalidInstance("the feasible set F is empty".into())),
        LpStatus::Unbounded => (false, f64::NEG_INFINITY),
        LpStatus::Optimal => (
            sol.objective_value >= target - tol * target.max(1.0),
            sol.objective_value,
        ),
    };

    // Condition 3.
    let cond3 = inst.a.indices() == support.as_slice();

    // Condition 4.
    let r = prob.residual(&inst.beta0);
    let band = 1e-7 * inst.lambda.max(1.0);
    let cond4 = (0..p).all(|j| {
        let gap = r[j].abs() - inst.lambda;
        if inst.b.contains(j) {
            gap.abs() <= band
        } else {
            gap < -band
        }
    });

    let per_condition = [cond1, cond2, cond3, cond4];
    Ok(MultVerdict {
        holds: per_condition.iter().all(|&c| c),
        per_condition,
        min_linear_form,
    })
}

/// How designs are drawn in [`prop2_experiment_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DesignGenerator {
    /// Rows iid standard normal.
    StandardNormal,
    /// Standard normal, then column 2 overwritten by column 1.
    DuplicatedColumn,
}

pub fn draw_design(generator: DesignGenerator, n: usize, p: usize, seed: u64, rep: usize) -> Matrix {
    let mut rng = stream_rng(seed, (n as u64) << 16 | p as u64, rep as u64);
    let mut x = standard_normal_matrix(&mut rng, n, p);
    if generator == DesignGenerator::DuplicatedColumn && p >= 2 {
        for i in 0..n {
            x[(i, 1)] = x[(i, 0)];
        }
    }
    x
}

/// Fraction of `reps` standard-normal designs whose `n⁻¹XᵀX` is parallel.
pub fn prop2_experiment(n: usize, p: usize, reps: usize, seed: u64) -> Result<f64> {
    prop2_experiment_with(n, p, reps, seed, DesignGenerator::StandardNormal)
}

pub fn prop2_experiment_with(n: usize, p: usize, reps: usize, seed: u64, generator: DesignGenerator) -> Result<f64> {
    if n == 0 || p == 0 || reps == 0 {
        return invalid("n, p and reps must be positive");
    }
    if p > DEFAULT_P_CAP {
        return Err(Error::DimensionCap { p, cap: DEFAULT_P_CAP });
    }
    let flags: Vec<bool> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let c = draw_design(generator, n, p, seed, r).gram_scaled();
            is_parallel(&c, DEFAULT_WITNESS_TOL, DEFAULT_P_CAP).map(|rep| rep.parallel)
        })
        .collect::<Result<_>>()?;
    Ok(flags.iter().filter(|&&f| f).count() as f64 / reps as f64)
}
