//! A small dense two-phase simplex solver.
//!
//! Problems are stated in natural form
//!
//! ```text
//! minimize    cᵀx
//! subject to  A_ub x ≤ b_ub,  A_eq x = b_eq,  x_j ≥ l_j  (or x_j free)
//! ```
//!
//! and converted internally to standard form (shifted bounds, split free
//! variables, slacks, row equilibration). Pricing is largest-coefficient
//! until too many degenerate pivots accumulate, after which Bland's rule takes
//! over and guarantees termination. On an optimal basis the basic solution is
//! recomputed from the original rows with an LU solve so the reported point
//! does not carry tableau round-off.

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, Lu, Matrix};

/// Centralized solver tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpTolerances {
    /// Absolute constraint violation allowed after row scaling.
    pub feasibility: f64,
    /// Reduced-cost threshold for optimality.
    pub optimality: f64,
    /// Relative tolerance for calling a constraint active.
    pub active: f64,
    /// Smallest tableau entry accepted as a pivot.
    pub pivot: f64,
    pub max_pivots: usize,
    /// Degenerate pivots tolerated before switching to Bland's rule.
    pub bland_after_degenerate: usize,
}

impl Default for LpTolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-9,
            optimality: 1e-9,
            active: 1e-7,
            pivot: 1e-9,
            max_pivots: 50_000,
            bland_after_degenerate: 1_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_ub: Matrix,
    pub b_ub: Vec<f64>,
    pub a_eq: Matrix,
    pub b_eq: Vec<f64>,
    /// `Some(l)` bounds the variable below by `l`; `None` leaves it free.
    pub lower_bounds: Vec<Option<f64>>,
}

impl LinearProgram {
    /// An LP with no constraints; every variable starts nonnegative.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            a_ub: Matrix::zeros(0, n),
            b_ub: Vec::new(),
            a_eq: Matrix::zeros(0, n),
            b_eq: Vec::new(),
            lower_bounds: vec![Some(0.0); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn with_lower_bounds(mut self, bounds: Vec<Option<f64>>) -> Self {
        self.lower_bounds = bounds;
        self
    }

    pub fn free(n: usize, objective: Vec<f64>) -> Self {
        debug_assert_eq!(n, objective.len());
        Self::new(objective).with_lower_bounds(vec![None; n])
    }

    /// Appends `row · x ≤ rhs`.
    pub fn push_ub(&mut self, row: &[f64], rhs: f64) {
        self.a_ub = append_row(&self.a_ub, row);
        self.b_ub.push(rhs);
    }

    /// Appends `row · x = rhs`.
    pub fn push_eq(&mut self, row: &[f64], rhs: f64) {
        self.a_eq = append_row(&self.a_eq, row);
        self.b_eq.push(rhs);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.a_ub.cols() != n || self.a_eq.cols() != n {
            return invalid(format!(
                "constraint matrices have {} / {} columns, objective has {n}",
                self.a_ub.cols(),
                self.a_eq.cols()
            ));
        }
        if self.a_ub.rows() != self.b_ub.len() || self.a_eq.rows() != self.b_eq.len() {
            return invalid("constraint right-hand sides do not match row counts");
        }
        if self.lower_bounds.len() != n {
            return invalid("lower bound count does not match variable count");
        }
        let finite = self
            .objective
            .iter()
            .chain(&self.b_ub)
            .chain(&self.b_eq)
            .chain(self.lower_bounds.iter().flatten())
            .all(|x| x.is_finite());
        if !finite {
            return invalid("LP data must be finite");
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.a_ub.rows() {
            worst = worst.max(dot(self.a_ub.row(i), x) - self.b_ub[i]);
        }
        for i in 0..self.a_eq.rows() {
            worst = worst.max((dot(self.a_eq.row(i), x) - self.b_eq[i]).abs());
        }
        for (xj, l) in x.iter().zip(&self.lower_bounds) {
            if let Some(l) = l {
                worst = worst.max(l - xj);
            }
        }
        worst
    }
}

fn append_row(m: &Matrix, row: &[f64]) -> Matrix {
    assert_eq!(row.len(), m.cols(), "row length must match column count");
    let mut data = m.as_slice().to_vec();
    data.extend_from_slice(row);
    Matrix::new(m.rows() + 1, m.cols(), data).expect("finite row")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point in the caller's variables; empty unless optimal.
    pub x: Vec<f64>,
    /// `+∞` when infeasible, `−∞` when unbounded.
    pub objective_value: f64,
    /// Standard-form column indices of the final basis.
    pub basis: Vec<usize>,
    /// Multipliers for the `A_ub` rows followed by the `A_eq` rows, signed so
    /// that `objective_value = Σ y_i b_i + (bound terms)`; ub multipliers are ≤ 0.
    pub duals: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_point(status: LpStatus, objective_value: f64) -> Self {
        Self {
            status,
            x: Vec::new(),
            objective_value,
            basis: Vec::new(),
            duals: Vec::new(),
        }
    }
}

/// How a caller variable maps onto standard-form columns.
#[derive(Clone, Copy, Debug)]
enum VarMap {
    Shifted { col: usize, lower: f64 },
    Split { pos: usize, neg: usize },
}

/// The standard-form problem `min cᵀz, Az = b, z ≥ 0` with `b ≥ 0`.
struct StandardForm {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    /// Per original constraint: (row scale, sign flip) so that
    /// standard row = sign · original row / scale.
    row_factor: Vec<f64>,
    /// Column usable as an initial basic variable for each row, if any.
    initial_basic: Vec<Option<usize>>,
    vars: Vec<VarMap>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        let mut vars = Vec::with_capacity(n);
        let mut ncols = 0;
        for lb in &lp.lower_bounds {
            match *lb {
                Some(lower) => {
                    vars.push(VarMap::Shifted { col: ncols, lower });
                    ncols += 1;
                }
                None => {
                    vars.push(VarMap::Split {
                        pos: ncols,
                        neg: ncols + 1,
                    });
                    ncols += 2;
                }
            }
        }
        let n_ub = lp.a_ub.rows();
        let n_eq = lp.a_eq.rows();
        let total = ncols + n_ub;

        let mut c = vec![0.0; total];
        for (j, vm) in vars.iter().enumerate() {
            match *vm {
                VarMap::Shifted { col, .. } => c[col] = lp.objective[j],
                VarMap::Split { pos, neg } => {
                    c[pos] = lp.objective[j];
                    c[neg] = -lp.objective[j];
                }
            }
        }

        let mut a = Vec::with_capacity(n_ub + n_eq);
        let mut b = Vec::with_capacity(n_ub + n_eq);
        let mut row_factor = Vec::with_capacity(n_ub + n_eq);
        let mut initial_basic = Vec::with_capacity(n_ub + n_eq);
        let rows = (0..n_ub)
            .map(|i| (lp.a_ub.row(i), lp.b_ub[i], Some(ncols + i)))
            .chain((0..n_eq).map(|i| (lp.a_eq.row(i), lp.b_eq[i], None)));
        for (orig, rhs, slack) in rows {
            let mut row = vec![0.0; total];
            let mut rhs = rhs;
            for (j, vm) in vars.iter().enumerate() {
                let coef = orig[j];
                match *vm {
                    VarMap::Shifted { col, lower } => {
                        row[col] = coef;
                        rhs -= coef * lower;
                    }
                    VarMap::Split { pos, neg } => {
                        row[pos] = coef;
                        row[neg] = -coef;
                    }
                }
            }
            let scale = row[..ncols].iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let scale = if scale > 0.0 { scale } else { 1.0 };
            let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
            let factor = sign / scale;
            for v in row[..ncols].iter_mut() {
                *v *= factor;
            }
            if let Some(s) = slack {
                row[s] = sign;
            }
            rhs *= factor;
            initial_basic.push(slack.filter(|_| sign > 0.0));
            a.push(row);
            b.push(rhs);
            row_factor.push(factor);
        }
        Self {
            a,
            b,
            c,
            row_factor,
            initial_basic,
            vars,
        }
    }

    fn recover(&self, z: &[f64]) -> Vec<f64> {
        self.vars
            .iter()
            .map(|vm| match *vm {
                VarMap::Shifted { col, lower } => lower + z[col],
                VarMap::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect()
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    reduced: Vec<f64>,
    basis: Vec<usize>,
    enterable: Vec<bool>,
    tol: LpTolerances,
    pivots: usize,
    degenerate: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.enterable.len()
    }

    /// Installs cost vector `c` and prices out the current basis.
    fn set_costs(&mut self, c: &[f64]) {
        let mut reduced = c.to_vec();
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = c[bi];
            if cb != 0.0 {
                for (r, a) in reduced.iter_mut().zip(&self.rows[i]) {
                    *r -= cb * a;
                }
            }
        }
        for &bi in &self.basis {
            reduced[bi] = 0.0;
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f == 0.0 {
                continue;
            }
            for (v, pr) in self.rows[i].iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.rows[i][c] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i] < 0.0 && self.rhs[i] > -self.tol.feasibility {
                self.rhs[i] = 0.0;
            }
        }
        let f = self.reduced[c];
        if f != 0.0 {
            for (v, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.reduced[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn choose_entering(&self) -> Option<usize> {
        let bland = self.degenerate >= self.tol.bland_after_degenerate;
        let candidates = (0..self.ncols()).filter(|&j| self.enterable[j] && self.reduced[j] < -self.tol.optimality);
        if bland {
            candidates.min()
        } else {
            candidates.min_by(|&a, &b| self.reduced[a].total_cmp(&self.reduced[b]))
        }
    }

    fn choose_leaving(&self, c: usize) -> Option<usize> {
        let bland = self.degenerate >= self.tol.bland_after_degenerate;
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let a = row[c];
            if a <= self.tol.pivot {
                continue;
            }
            let ratio = self.rhs[i].max(0.0) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br);
                    let better = if tie {
                        if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a > self.rows[bi][c]
                        }
                    } else {
                        ratio < br
                    };
                    if better {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self) -> Result<PhaseOutcome> {
        loop {
            if self.pivots >= self.tol.max_pivots {
                return Err(Error::SolverStalled { pivots: self.pivots });
            }
            let Some(c) = self.choose_entering() else {
                return Ok(PhaseOutcome::Optimal);
            };
            let Some(r) = self.choose_leaving(c) else {
                return Ok(PhaseOutcome::Unbounded);
            };
            if self.rhs[r] / self.rows[r][c] <= 1e-12 {
                self.degenerate += 1;
            }
            self.pivot(r, c);
        }
    }

    fn objective_value(&self, c: &[f64]) -> f64 {
        self.basis.iter().zip(&self.rhs).map(|(&bi, &v)| c[bi] * v).sum()
    }
}

/// Solves `lp` with default tolerances.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, &LpTolerances::default())
}

pub fn solve_with(lp: &LinearProgram, tol: &LpTolerances) -> Result<LpSolution> {
    lp.validate()?;
    let sf = StandardForm::build(lp);
    let m = sf.a.len();
    let n_struct = sf.c.len();

    // Artificial columns for rows without a usable slack.
    let mut rows = sf.a.clone();
    let mut basis = Vec::with_capacity(m);
    let mut n_art = 0;
    for ib in &sf.initial_basic {
        match ib {
            Some(col) => basis.push(*col),
            None => {
                basis.push(n_struct + n_art);
                n_art += 1;
            }
        }
    }
    let total = n_struct + n_art;
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(total, 0.0);
        if basis[i] >= n_struct {
            row[basis[i]] = 1.0;
        }
    }
    let mut tab = Tableau {
        rows,
        rhs: sf.b.clone(),
        reduced: vec![0.0; total],
        basis,
        enterable: vec![true; total],
        tol: *tol,
        pivots: 0,
        degenerate: 0,
    };

    let bnorm = sf.b.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if n_art > 0 {
        let mut c1 = vec![0.0; total];
        c1[n_struct..].iter_mut().for_each(|v| *v = 1.0);
        tab.set_costs(&c1);
        tab.run()?;
        let infeas = tab.objective_value(&c1);
        if infeas > tol.feasibility * (1.0 + bnorm) {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, f64::INFINITY));
        }
        // Drive remaining artificials out of the basis; rows where that is
        // impossible are redundant and are dropped.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n_struct {
                let col = (0..n_struct)
                    .filter(|&j| tab.rows[r][j].abs() > tol.pivot)
                    .max_by(|&a, &b| tab.rows[r][a].abs().total_cmp(&tab.rows[r][b].abs()));
                match col {
                    Some(j) => {
                        tab.rhs[r] = 0.0;
                        tab.pivot(r, j);
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for j in n_struct..total {
            tab.enterable[j] = false;
        }
    }

    let mut c2 = sf.c.clone();
    c2.resize(total, 0.0);
    tab.set_costs(&c2);
    match tab.run()? {
        PhaseOutcome::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded, f64::NEG_INFINITY)),
        PhaseOutcome::Optimal => {}
    }

    let mut z = vec![0.0; n_struct];
    for (&bi, &v) in tab.basis.iter().zip(&tab.rhs) {
        z[bi] = v.max(0.0);
    }
    let duals_std = refine(&sf, &tab, &mut z);
    let x = sf.recover(&z);
    let objective_value = dot(&lp.objective, &x);

    let mut duals = vec![0.0; m];
    if let Some((rows_kept, y)) = duals_std {
        for (k, &i) in rows_kept.iter().enumerate() {
            duals[i] = y[k] * sf.row_factor[i];
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
        basis: tab.basis.clone(),
        duals,
    })
}

/// Recomputes the basic solution from the original standard-form rows and
/// returns the simplex multipliers for the kept rows.
fn refine(sf: &StandardForm, tab: &Tableau, z: &mut [f64]) -> Option<(Vec<usize>, Vec<f64>)> {
    let n_struct = sf.c.len();
    if tab.basis.iter().any(|&b| b >= n_struct) {
        return None;
    }
    // Identify which original rows survived: redundant rows were removed in
    // order, so match by solving against the full row set when square.
    let k = tab.basis.len();
    let kept: Vec<usize> = if k == sf.a.len() {
        (0..k).collect()
    } else {
        independent_rows(sf, &tab.basis)?
    };
    if kept.is_empty() {
        return Some((kept, Vec::new()));
    }
    let bmat = Matrix::new(
        k,
        k,
        kept.iter()
            .flat_map(|&i| tab.basis.iter().map(move |&j| sf.a[i][j]))
            .collect(),
    )
    .ok()?;
    let lu = Lu::new(&bmat).ok()?;
    let rhs: Vec<f64> = kept.iter().map(|&i| sf.b[i]).collect();
    let mut xb = lu.solve(&rhs);
    // One refinement step.
    let r: Vec<f64> = (0..k).map(|i| rhs[i] - dot(bmat.row(i), &xb)).collect();
    for (x, d) in xb.iter_mut().zip(lu.solve(&r)) {
        *x += d;
    }
    if xb.iter().any(|&v| v < -1e-7 * (1.0 + v.abs())) {
        return None;
    }
    z.iter_mut().for_each(|v| *v = 0.0);
    for (&bi, &v) in tab.basis.iter().zip(&xb) {
        z[bi] = v.max(0.0);
    }
    let cb: Vec<f64> = tab.basis.iter().map(|&j| sf.c[j]).collect();
    let y = lu.solve_transposed(&cb);
    Some((kept, y))
}

/// Greedily picks original rows that make the basis matrix nonsingular.
fn independent_rows(sf: &StandardForm, basis: &[usize]) -> Option<Vec<usize>> {
    let k = basis.len();
    let mut kept: Vec<usize> = Vec::with_capacity(k);
    for i in 0..sf.a.len() {
        let mut trial = kept.clone();
        trial.push(i);
        let sub = Matrix::new(
            trial.len(),
            k,
            trial
                .iter()
                .flat_map(|&r| basis.iter().map(move |&j| sf.a[r][j]))
                .collect(),
        )
        .ok()?;
        if crate::linalg::rank(&sub, 1e-10) == trial.len() {
            kept = trial;
        }
        if kept.len() == k {
            return Some(kept);
        }
    }
    None
}

/// Phase-one feasibility: a witness point if the constraint system is
/// satisfiable.
pub fn feasible(lp: &LinearProgram) -> Result<Option<Vec<f64>>> {
    let mut zero = lp.clone();
    zero.objective = vec![0.0; lp.num_vars()];
    let sol = solve(&zero)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.x),
        _ => None,
    })
}

/// Range of `directionᵀx` over the optimal face of `lp`.
///
/// The face is cut out by `cᵀx ≤ t₀ + 1e-9·max(1, |t₀|)` together with
/// complementary slackness against the optimal dual: rows with a nonzero
/// multiplier are made tight and bounded variables with a positive reduced
/// cost are fixed at their bound. Every optimum satisfies these equalities,
/// so they only remove the near-optimal sliver that the objective slack
/// alone would admit. Unbounded directions give infinite endpoints.
pub fn direction_range_on_optimal_face(lp: &LinearProgram, direction: &[f64]) -> Result<(f64, f64)> {
    if direction.len() != lp.num_vars() {
        return invalid("direction length does not match variable count");
    }
    let base = solve(lp)?;
    if !base.is_optimal() {
        return invalid(format!("LP is not optimal ({:?})", base.status));
    }
    let t0 = base.objective_value;
    let mut face = lp.clone();
    face.push_ub(&lp.objective, t0 + 1e-9 * t0.abs().max(1.0));
    pin_complementary_slackness(lp, &base, &mut face);

    let mut lo_lp = face.clone();
    lo_lp.objective = direction.to_vec();
    let lo = solve(&lo_lp)?;
    let mut hi_lp = face;
    hi_lp.objective = direction.iter().map(|d| -d).collect();
    let hi = solve(&hi_lp)?;

    let value = |s: &LpSolution, sign: f64| match s.status {
        LpStatus::Optimal => Ok(sign * s.objective_value),
        LpStatus::Unbounded => Ok(sign * f64::NEG_INFINITY),
        LpStatus::Infeasible => Err(Error::Infeasible(
            "optimal face became infeasible; tolerance too tight".into(),
        )),
    };
    let at_opt = dot(direction, &base.x);
    let lo_v = value(&lo, 1.0)?.min(at_opt);
    let hi_v = value(&hi, -1.0)?.max(at_opt);
    Ok((lo_v, hi_v))
}

fn pin_complementary_slackness(lp: &LinearProgram, base: &LpSolution, face: &mut LinearProgram) {
    let n = lp.num_vars();
    let n_ub = lp.a_ub.rows();
    let tol = 1e-9 * lp.objective.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let mut reduced = lp.objective.clone();
    for (i, &y) in base.duals.iter().enumerate() {
        let row = if i < n_ub {
            lp.a_ub.row(i)
        } else {
            lp.a_eq.row(i - n_ub)
        };
        for (d, a) in reduced.iter_mut().zip(row) {
            *d -= y * a;
        }
    }
    for i in 0..n_ub {
        if base.duals[i] < -tol {
            face.push_eq(lp.a_ub.row(i), lp.b_ub[i]);
        }
    }
    for j in 0..n {
        if let Some(lower) = lp.lower_bounds[j] {
            if reduced[j] > tol {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                face.push_eq(&e, lower);
            }
        }
    }
}

/// Min and max of `x_coord` over the optimal face.
pub fn coordinate_range_on_optimal_face(lp: &LinearProgram, coord: usize) -> Result<(f64, f64)> {
    if coord >= lp.num_vars() {
        return invalid(format!("coordinate {coord} out of range"));
    }
    let mut e = vec![0.0; lp.num_vars()];
    e[coord] = 1.0;
    direction_range_on_optimal_face(lp, &e)
}
