//! Dense real matrices and the handful of factorizations the solvers need.
//!
//! Problems here are desk-scale (p up to a few dozen), so everything is
//! row-major `Vec<f64>` storage and textbook algorithms: one-sided Jacobi for
//! the SVD, partial-pivoting LU for square solves, Cholesky for sampling.

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::random::stream_rng;

/// Relative singular-value threshold used by `rank`, `null_space_dim` and
/// `pseudoinverse` unless the caller overrides it.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            ));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return invalid(format!("non-finite entry at position {pos}"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return invalid(format!("row {i} has {} entries, expected {cols}", r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return invalid(format!(
                "vector of length {} does not match {} columns",
                x.len(),
                self.cols
            ));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `selfᵀ x`.
    pub fn tr_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return invalid(format!(
                "vector of length {} does not match {} rows",
                x.len(),
                self.rows
            ));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        Ok(out)
    }

    /// `n⁻¹ selfᵀ self` where n is the number of rows.
    pub fn gram_scaled(&self) -> Matrix {
        let n = self.rows as f64;
        let mut g = Matrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..self.cols {
                for b in a..self.cols {
                    g.data[a * self.cols + b] += r[a] * r[b];
                }
            }
        }
        for a in 0..self.cols {
            for b in a..self.cols {
                let v = g[(a, b)] / n;
                g[(a, b)] = v;
                g[(b, a)] = v;
            }
        }
        g
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return invalid(format!("shape mismatch {:?} vs {:?}", self.shape(), other.shape()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    fn validate_square(&self, what: &str) -> Result<()> {
        if !self.is_square() || self.rows == 0 {
            return invalid(format!(
                "{what} requires a nonempty square matrix, got {}x{}",
                self.rows, self.cols
            ));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Serialized as a list of rows.
impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn norm_l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// A strictly increasing set of 0-based positions in `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct IndexSet {
    indices: Vec<usize>,
    universe: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return invalid(format!(
                "index set must be strictly increasing, found {} before {}",
                w[0], w[1]
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= universe {
                return invalid(format!("index {last} out of range for universe {universe}"));
            }
        }
        Ok(Self { indices, universe })
    }

    /// Sorts and deduplicates before validating the range.
    pub fn from_unsorted(mut indices: Vec<usize>, universe: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, universe)
    }

    pub fn all(universe: usize) -> Self {
        Self {
            indices: (0..universe).collect(),
            universe,
        }
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            indices: Vec::new(),
            universe,
        }
    }

    /// The subset of `0..universe` whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64, universe: usize) -> Self {
        Self {
            indices: (0..universe).filter(|&j| mask >> j & 1 == 1).collect(),
            universe,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn complement(&self) -> Self {
        Self {
            indices: (0..self.universe).filter(|&j| !self.contains(j)).collect(),
            universe: self.universe,
        }
    }

    /// Indices shifted to 1-based numbering for reports.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|j| j + 1).collect()
    }

    /// Picks `x_j` for each member `j`.
    pub fn gather(&self, x: &[f64]) -> Vec<f64> {
        self.indices.iter().map(|&j| x[j]).collect()
    }
}

/// Restricts `m` to the given rows and columns (`None` keeps all of them),
/// preserving order.
pub fn submatrix(m: &Matrix, rows: Option<&IndexSet>, cols: Option<&IndexSet>) -> Result<Matrix> {
    let row_idx: Vec<usize> = match rows {
        Some(s) => s.indices().to_vec(),
        None => (0..m.rows).collect(),
    };
    let col_idx: Vec<usize> = match cols {
        Some(s) => s.indices().to_vec(),
        None => (0..m.cols).collect(),
    };
    if let Some(&i) = row_idx.iter().find(|&&i| i >= m.rows) {
        return invalid(format!("row index {i} out of range for {} rows", m.rows));
    }
    if let Some(&j) = col_idx.iter().find(|&&j| j >= m.cols) {
        return invalid(format!("column index {j} out of range for {} columns", m.cols));
    }
    let mut data = Vec::with_capacity(row_idx.len() * col_idx.len());
    for &i in &row_idx {
        data.extend(col_idx.iter().map(|&j| m[(i, j)]));
    }
    Ok(Matrix {
        rows: row_idx.len(),
        cols: col_idx.len(),
        data,
    })
}

/// Thin singular value decomposition `M = U diag(s) Vᵀ` with
/// `k = min(rows, cols)` singular values in decreasing order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &Matrix) -> Svd {
    if m.rows < m.cols {
        let t = svd(&m.transpose());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (rows, cols) = m.shape();
    // Work on columns: a holds the rotated columns of M, v accumulates rotations.
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&a[p], &a[p]);
                let beta = dot(&a[q], &a[q]);
                let gamma = dot(&a[p], &a[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (a[p][i], a[q][i]);
                    a[p][i] = c * x - s * y;
                    a[q][i] = s * x + c * y;
                }
                for i in 0..cols {
                    let (x, y) = (v[p][i], v[q][i]);
                    v[p][i] = c * x - s * y;
                    v[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = a.iter().map(|c| dot(c, c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = Matrix::zeros(rows, cols);
    let mut vm = Matrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        for i in 0..rows {
            u[(i, k)] = if s > 0.0 { a[j][i] / s } else { 0.0 };
        }
        for i in 0..cols {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd {
        u,
        singular_values,
        v: vm,
    }
}

fn rank_threshold(m: &Matrix, sigma_max: f64, tol: f64) -> f64 {
    tol * sigma_max * m.rows.max(m.cols) as f64
}

/// Numerical rank: singular values above `tol · σ_max · max(rows, cols)`.
pub fn rank(m: &Matrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = svd(m).singular_values;
    let thresh = rank_threshold(m, s[0], tol);
    s.iter().filter(|&&x| x > thresh).count()
}

/// Dimension of the null space, `cols − rank`. Zero-column matrices have
/// nullity 0.
pub fn null_space_dim(m: &Matrix, tol: f64) -> usize {
    if m.cols == 0 {
        return 0;
    }
    if m.rows == 0 {
        return m.cols;
    }
    m.cols - rank(m, tol)
}

/// Moore–Penrose pseudoinverse; singular values at or below the rank
/// threshold are treated as zero.
pub fn pseudoinverse(m: &Matrix, tol: f64) -> Matrix {
    if m.is_empty() {
        return Matrix::zeros(m.cols, m.rows);
    }
    let Svd { u, singular_values, v } = svd(m);
    let thresh = rank_threshold(m, singular_values[0], tol);
    let mut out = Matrix::zeros(m.cols, m.rows);
    for (k, &s) in singular_values.iter().enumerate() {
        if s <= thresh {
            continue;
        }
        for i in 0..m.cols {
            let vik = v[(i, k)] / s;
            if vik == 0.0 {
                continue;
            }
            for j in 0..m.rows {
                out[(i, j)] += vik * u[(j, k)];
            }
        }
    }
    out
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(m: &Matrix) -> Result<Self> {
        m.validate_square("LU")?;
        let n = m.rows;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (piv, big) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty pivot column");
            if big <= 1e-14 * scale {
                return Err(Error::InvalidArgument(format!(
                    "matrix is singular to working precision (pivot {k})"
                )));
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `Aᵀ y = b`.
    pub fn solve_transposed(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                z[i] -= self.lu[(j, i)] * z[j];
            }
            z[i] /= self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                z[i] -= self.lu[(j, i)] * z[j];
            }
        }
        let mut y = vec![0.0; n];
        for (k, &i) in self.perm.iter().enumerate() {
            y[i] = z[k];
        }
        y
    }
}

/// Solves `A x = b` for square nonsingular `A`, with one step of iterative
/// refinement.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows {
        return invalid("right-hand side length does not match matrix rows");
    }
    let lu = Lu::new(a)?;
    let mut x = lu.solve(b);
    let ax = a.matvec(&x)?;
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let dx = lu.solve(&r);
    for (xi, d) in x.iter_mut().zip(dx) {
        *xi += d;
    }
    Ok(x)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let lu = Lu::new(a)?;
    let n = a.rows;
    let mut inv = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[j] = 1.0;
        let col = lu.solve(&e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`; fails unless `A` is
/// symmetric positive definite.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    a.validate_square("Cholesky")?;
    let n = a.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "matrix is not positive definite (pivot {j})"
            )));
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

pub fn is_positive_definite(a: &Matrix) -> bool {
    a.is_symmetric(1e-10 * a.max_abs().max(1.0)) && cholesky(a).is_ok()
}

/// Draws an `n × p` matrix with iid standard normal entries.
pub fn standard_normal_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> Matrix {
    let data = (0..n * p).map(|_| rng.sample(StandardNormal)).collect();
    Matrix { rows: n, cols: p, data }
}

/// Stream index used to draw the fixed matrix `W` in [`lemma_a3_probe`].
const RANK_PROBE_W_STREAM: u64 = u64::MAX;

/// Fraction of `reps` draws of `X` (n×p, iid standard normal rows) for which
/// `rank(Xᵀ W) = min(q, p)`, with `W` a fixed full-rank n×q matrix drawn once
/// from the seed.
pub fn lemma_a3_probe(n: usize, p: usize, q: usize, reps: usize, seed: u64) -> Result<f64> {
    if q == 0 || q > n {
        return invalid(format!("need 1 <= q <= n, got q = {q}, n = {n}"));
    }
    let mut rng = stream_rng(seed, RANK_PROBE_W_STREAM, 0);
    let w = standard_normal_matrix(&mut rng, n, q);
    lemma_a3_probe_with(&w, p, reps, seed)
}

/// As [`lemma_a3_probe`] with a caller-supplied `W`, which must have full
/// column rank.
pub fn lemma_a3_probe_with(w: &Matrix, p: usize, reps: usize, seed: u64) -> Result<f64> {
    let (n, q) = w.shape();
    if p == 0 || n < p {
        return invalid(format!("need 1 <= p <= n, got p = {p}, n = {n}"));
    }
    if q == 0 || q > n {
        return invalid(format!("need 1 <= q <= n, got q = {q}, n = {n}"));
    }
    if reps == 0 {
        return invalid("reps must be at least 1");
    }
    if rank(w, DEFAULT_RANK_TOL) != q {
        return invalid("W must have full column rank");
    }
    let target = q.min(p);
    let hits = (0..reps)
        .filter(|&r| {
            let mut rng = stream_rng(seed, n as u64, r as u64);
            let x = standard_normal_matrix(&mut rng, n, p);
            let xtw = x.transpose().matmul(w).expect("conformable by construction");
            rank(&xtw, DEFAULT_RANK_TOL) == target
        })
        .count();
    Ok(hits as f64 / reps as f64)
}
