//! Brute-force oracles shared by the integration tests. They avoid the
//! library's solvers entirely: vertices are found by enumerating active sets
//! and solving square systems with a local elimination routine.

#![allow(dead_code)]

use dantzig_kit::linalg::{standard_normal_matrix, Matrix};
use dantzig_kit::random::stream_rng;
use rand::Rng;

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// `min cᵀx` over `{Ax ≤ b, x ≥ 0}` by vertex enumeration. `None` when no
/// vertex is feasible. Only valid for bounded problems.
pub fn lp_vertex_oracle(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = c.len();
    // Constraint rows: the m given rows, then −x_j ≤ 0.
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().copied()).collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        rows.push((e, 0.0));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for_each_subset(rows.len(), n, &mut |idx| {
        let sys: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| rows[i].1).collect();
        let Some(x) = gauss_solve(sys, rhs) else { return };
        let ok = rows.iter().all(|(r, bi)| {
            let lhs: f64 = r.iter().zip(&x).map(|(p, q)| p * q).sum();
            lhs <= bi + 1e-9 * (1.0 + bi.abs())
        });
        if ok {
            let val: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            if best.as_ref().map_or(true, |(v, _)| val < *v) {
                best = Some((val, x));
            }
        }
    });
    best
}

/// `min ‖β‖₁` over `{‖v − Cβ‖∞ ≤ λ}`: the optimum sits at a vertex of the
/// feasible set intersected with an orthant, cut out by `p` of the `3p`
/// hyperplanes `(Cβ)_j = v_j ± λ`, `β_j = 0`.
pub fn dantzig_oracle(c: &Matrix, v: &[f64], lambda: f64) -> Option<(f64, Vec<f64>)> {
    let p = v.len();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::with_capacity(3 * p);
    for j in 0..p {
        planes.push((c.row(j).to_vec(), v[j] + lambda));
        planes.push((c.row(j).to_vec(), v[j] - lambda));
        let mut e = vec![0.0; p];
        e[j] = 1.0;
        planes.push((e, 0.0));
    }
    let tol = 1e-9 * (1.0 + lambda + v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    let mut best: Option<(f64, Vec<f64>)> = None;
    for_each_subset(planes.len(), p, &mut |idx| {
        let sys: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        let Some(beta) = gauss_solve(sys, rhs) else { return };
        let feasible = (0..p).all(|j| {
            let cb: f64 = c.row(j).iter().zip(&beta).map(|(x, y)| x * y).sum();
            (v[j] - cb).abs() <= lambda + tol
        });
        if feasible {
            let l1: f64 = beta.iter().map(|x| x.abs()).sum();
            if best.as_ref().map_or(true, |(b, _)| l1 < *b) {
                best = Some((l1, beta));
            }
        }
    });
    best
}

/// Per-coordinate `(min, max)` over every vertex attaining the oracle's
/// optimum. The optimal set is the convex hull of these vertices.
pub fn dantzig_optimal_spread(c: &Matrix, v: &[f64], lambda: f64) -> Option<Vec<(f64, f64)>> {
    let p = v.len();
    let (best, _) = dantzig_oracle(c, v, lambda)?;
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::with_capacity(3 * p);
    for j in 0..p {
        planes.push((c.row(j).to_vec(), v[j] + lambda));
        planes.push((c.row(j).to_vec(), v[j] - lambda));
        let mut e = vec![0.0; p];
        e[j] = 1.0;
        planes.push((e, 0.0));
    }
    let tol = 1e-9 * (1.0 + lambda + v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    let mut spread = vec![(f64::INFINITY, f64::NEG_INFINITY); p];
    for_each_subset(planes.len(), p, &mut |idx| {
        let sys: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        let Some(beta) = gauss_solve(sys, rhs) else { return };
        let feasible = (0..p).all(|j| {
            let cb: f64 = c.row(j).iter().zip(&beta).map(|(x, y)| x * y).sum();
            (v[j] - cb).abs() <= lambda + tol
        });
        let l1: f64 = beta.iter().map(|x| x.abs()).sum();
        if feasible && l1 <= best + 1e-9 * best.max(1.0) {
            for (s, &b) in spread.iter_mut().zip(&beta) {
                *s = (s.0.min(b), s.1.max(b));
            }
        }
    });
    Some(spread)
}

/// A random design with `n` in `2..=20`, `p` in `1..=5` and its response.
pub fn random_design(seed: u64, index: u64) -> (Matrix, Vec<f64>) {
    let mut rng = stream_rng(seed, 0xDA, index);
    let p = rng.gen_range(1..=5);
    let n = rng.gen_range(2..=20);
    let x = standard_normal_matrix(&mut rng, n, p);
    let y = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    (x, y)
}

/// λ grid as fractions of `‖v‖∞`.
pub const LAMBDA_FRACTIONS: [f64; 5] = [0.0, 0.1, 0.3, 0.6, 0.9];

/// The ℓ¹-nearest point of `{‖v − Cβ‖∞ ≤ λ}` to `z`. Used only to generate
/// feasible test points, never as an oracle.
pub fn l1_projection(c: &Matrix, v: &[f64], lambda: f64, z: &[f64]) -> Option<Vec<f64>> {
    use dantzig_kit::lp::{self, LinearProgram};
    let p = z.len();
    // β = z + d⁺ − d⁻ with d± ≥ 0.
    let mut prog = LinearProgram::new(vec![1.0; 2 * p]);
    for i in 0..p {
        let row = c.row(i);
        let cz: f64 = row.iter().zip(z).map(|(a, b)| a * b).sum();
        let up: Vec<f64> = row.iter().copied().chain(row.iter().map(|x| -x)).collect();
        let down: Vec<f64> = up.iter().map(|x| -x).collect();
        prog.push_ub(&up, v[i] + lambda - cz);
        prog.push_ub(&down, lambda - v[i] + cz);
    }
    let sol = lp::solve(&prog).ok()?;
    sol.is_optimal()
        .then(|| (0..p).map(|j| z[j] + sol.x[j] - sol.x[p + j]).collect())
}
