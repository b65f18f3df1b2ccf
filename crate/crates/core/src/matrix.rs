//! Dense complex matrices, operator norms and the reduced SVD.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{Float, Zero};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sampling;

pub use num_complex::Complex64 as C64;

const EPS: f64 = f64::EPSILON;

/// Numerical tolerances shared by every module.
///
/// `structural_tol` is used for identities that hold exactly in exact
/// arithmetic (partial isometry tests, vanishing products), while
/// `iterative_tol` is the relative stopping criterion of the operator-norm
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub structural_tol: f64,
    pub iterative_tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            structural_tol: 1e-9,
            iterative_tol: 1e-12,
            max_iterations: 10_000,
            seed: 42,
        }
    }
}

impl ToleranceConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.structural_tol) || !positive(self.iterative_tol) {
            return Err(Error::Tolerance(format!(
                "tolerances must be positive and finite (structural {}, iterative {})",
                self.structural_tol, self.iterative_tol
            )));
        }
        if self.structural_tol < self.iterative_tol {
            return Err(Error::Tolerance(format!(
                "structural_tol {} is smaller than iterative_tol {}",
                self.structural_tol, self.iterative_tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Tolerance("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// A dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, rejecting bad lengths and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Real matrix from nested rows; convenient in tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// The matrix unit with a one at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    /// Column vector from a slice.
    pub fn column(values: &[C64]) -> Self {
        Self::from_fn(values.len(), 1, |i, _| values[i])
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

    /// Row-major entries.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert-Schmidt pairing `tr(self* other)`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.shape(), other.shape(), "inner product shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Matrix product, reporting a shape error instead of panicking.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                op: "multiply",
                detail: format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let orow = i * oc;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * oc..(k + 1) * oc];
                for (o, b) in out.data[orow..orow + oc].iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "subtract", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                op,
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// `self * x` for a vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^* y` for a vector `y` of length `rows`.
    pub fn adjoint_mul_vec(&self, y: &[C64]) -> Vec<C64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![C64::zero(); self.cols];
        for (row, yi) in self.data.chunks_exact(self.cols).zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * yi;
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (other.rows, other.cols);
        Self::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * other[(i % r, j % c)]
        })
    }

    /// Copy of the submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Residual `‖v v* v − v‖` measured in Frobenius norm.
    pub fn partial_isometry_residual(&self) -> f64 {
        let vvv = &(self * &self.adjoint()) * self;
        (&vvv - self).frobenius_norm()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        match self.try_mul(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        match self.try_add(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        match self.try_sub(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// Places a `p x q` array of equally shaped blocks into one matrix.
pub fn block_assemble(blocks: &[Vec<ComplexMatrix>]) -> Result<ComplexMatrix> {
    let first = blocks
        .first()
        .and_then(|row| row.first())
        .ok_or_else(|| Error::InvalidArgument("block array is empty".into()))?;
    let (r, c) = first.shape();
    let q = blocks[0].len();
    for (i, row) in blocks.iter().enumerate() {
        if row.len() != q {
            return Err(Error::Shape {
                op: "block_assemble",
                detail: format!("block row {i} has {} blocks, expected {q}", row.len()),
            });
        }
        for (j, b) in row.iter().enumerate() {
            if b.shape() != (r, c) {
                return Err(Error::Shape {
                    op: "block_assemble",
                    detail: format!(
                        "block ({i}, {j}) is {}x{}, expected {r}x{c}",
                        b.rows, b.cols
                    ),
                });
            }
        }
    }
    let p = blocks.len();
    let mut out = ComplexMatrix::zeros(p * r, q * c);
    let width = q * c;
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, b) in row.iter().enumerate() {
            for i in 0..r {
                let dst = (bi * r + i) * width + bj * c;
                out.data[dst..dst + c].copy_from_slice(&b.data[i * c..(i + 1) * c]);
            }
        }
    }
    Ok(out)
}

/// Block-diagonal direct sum.
pub fn direct_sum(parts: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("direct sum of an empty list".into()));
    }
    let rows = parts.iter().map(|m| m.rows).sum();
    let cols = parts.iter().map(|m| m.cols).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for m in parts {
        for i in 0..m.rows {
            for j in 0..m.cols {
                out[(r0 + i, c0 + j)] = m[(i, j)];
            }
        }
        r0 += m.rows;
        c0 += m.cols;
    }
    Ok(out)
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest singular value of `a`.
///
/// Lanczos with full reorthogonalization on the smaller Gram matrix `a*a`
/// or `aa*`, started from a seeded Gaussian vector. Stops once the residual
/// of the top Ritz pair falls below `iterative_tol` relative to the Ritz
/// value, or when the Krylov space is exhausted (then the value is exact up
/// to rounding).
pub fn operator_norm(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    if a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    // With `wide`, work with a a* using a* as the forward map.
    let wide = a.cols > a.rows;
    let dim = if wide { a.rows } else { a.cols };
    let gram = |x: &[C64]| {
        if wide {
            a.mul_vec(&a.adjoint_mul_vec(x))
        } else {
            a.adjoint_mul_vec(&a.mul_vec(x))
        }
    };

    let mut rng = sampling::rng(cfg.seed);
    let mut q: Vec<C64> = (0..dim)
        .map(|_| {
            C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        })
        .collect();
    let nq = Float::sqrt(norm_sqr(&q));
    q.iter_mut().for_each(|z| *z /= nq);

    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for _ in 0..cfg.max_iterations.min(dim) {
        let mut w = gram(&q);
        alpha.push(dot(&q, &w).re);
        basis.push(q);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                for (x, y) in w.iter_mut().zip(v) {
                    *x -= c * y;
                }
            }
        }
        let b = Float::sqrt(norm_sqr(&w));
        let theta = tridiagonal_max_eigenvalue(&alpha, &beta);
        let exhausted = basis.len() == dim || b <= 8.0 * EPS * theta.max(alpha[0].abs());
        if exhausted {
            return Ok(Float::sqrt(theta.max(0.0)));
        }
        let s = tridiagonal_eigenvector_tail(&alpha, &beta, theta);
        if b * s <= cfg.iterative_tol * theta {
            return Ok(Float::sqrt(theta.max(0.0)));
        }
        beta.push(b);
        q = w.into_iter().map(|z| z / b).collect();
    }
    Err(Error::NoConvergence {
        rows: a.rows,
        cols: a.cols,
        iterations: cfg.max_iterations,
    })
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `a` and off-diagonal `b` (Sturm sequence).
fn sturm_count(a: &[f64], b: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE / EPS;
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..a.len() {
        let off = if i == 0 { 0.0 } else { b[i - 1] * b[i - 1] / d };
        d = a[i] - x - off;
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiagonal_max_eigenvalue(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i + 1 < m { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    // Invariant: lambda_max lies in (lo, hi].
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * EPS * hi.abs().max(lo.abs()) {
            break;
        }
        if sturm_count(a, b, mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `|s_m|`, the last component of the normalized eigenvector for the
/// eigenvalue `theta`, by two steps of inverse iteration.
fn tridiagonal_eigenvector_tail(a: &[f64], b: &[f64], theta: f64) -> f64 {
    let m = a.len();
    if m == 1 {
        return 1.0;
    }
    let scale = a.iter().chain(b).fold(0.0_f64, |s, x| s.max(x.abs()));
    let shift = theta + 1e3 * EPS * scale;
    let mut x = vec![1.0; m];
    for _ in 0..2 {
        let diag: Vec<f64> = a.iter().map(|ai| ai - shift).collect();
        x = tridiagonal_solve(&diag, b, x, EPS * scale);
        let n = Float::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        x.iter_mut().for_each(|v| *v /= n);
    }
    x[m - 1].abs()
}

/// Solves `T x = rhs` for symmetric tridiagonal `T` by Gaussian
/// elimination with partial pivoting; zero pivots are replaced by `tiny`.
fn tridiagonal_solve(diag: &[f64], off: &[f64], mut rhs: Vec<f64>, tiny: f64) -> Vec<f64> {
    let m = diag.len();
    let mut d = diag.to_vec();
    let dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; m.saturating_sub(2)];
    for i in 0..m - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            rhs[i + 1] -= fact * rhs[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < m {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            let t = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = t - fact * rhs[i + 1];
        }
    }
    if d[m - 1] == 0.0 {
        d[m - 1] = tiny;
    }
    rhs[m - 1] /= d[m - 1];
    if m > 1 {
        rhs[m - 2] = (rhs[m - 2] - du[m - 2] * rhs[m - 1]) / d[m - 2];
    }
    for i in (0..m.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
    rhs
}

/// Reduced singular value decomposition `a = u diag(s) v*`.
///
/// Singular values are sorted in decreasing order. Columns of `u` belonging
/// to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above `rel_tol * s_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.singular_values
            .iter()
            .take_while(|&&s| s > rel_tol * smax)
            .count()
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows < a.cols {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (m, n) = a.shape();
    // Column storage of the working matrix and of V.
    let mut w: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::zero() }).collect())
        .collect();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                let gamma: C64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 4.0 * EPS * Float::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = Float::signum(zeta) / (Float::abs(zeta) + Float::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_columns(&mut w, p, q, phase, c, s);
                rotate_columns(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            rows: m,
            cols: n,
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<(usize, f64)> = w
        .iter()
        .enumerate()
        .map(|(j, col)| (j, Float::sqrt(norm_sqr(col))))
        .collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vm = ComplexMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (dst, &(src, sigma)) in order.iter().enumerate() {
        s.push(sigma);
        if sigma > 0.0 {
            for i in 0..m {
                u[(i, dst)] = w[src][i] / sigma;
            }
        }
        for i in 0..n {
            vm[(i, dst)] = v[src][i];
        }
    }
    Ok(Svd {
        u,
        singular_values: s,
        v: vm,
    })
}

fn rotate_columns(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting.
pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if !a.is_square() || b.len() != a.rows {
        return Err(Error::Shape {
            op: "solve",
            detail: format!("{}x{} system with {} right-hand entries", a.rows, a.cols, b.len()),
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = a.max_abs();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .unwrap_or(col);
        if m[(pivot, col)].norm() <= 1e-14 * scale.max(1e-300) {
            return Err(Error::Degenerate(format!("singular system at column {col}")));
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
            }
            rhs.swap(col, pivot);
        }
        let d = m[(col, col)];
        for i in (col + 1)..n {
            let f = m[(i, col)] / d;
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let t = m[(col, j)];
                m[(i, j)] -= f * t;
            }
            let t = rhs[col];
            rhs[i] -= f * t;
        }
    }
    let mut x = vec![C64::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_matrix, random_unitary, rng};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_has_norm_one() {
        let n = operator_norm(&ComplexMatrix::identity(2), &cfg()).unwrap();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nilpotent_single_singular_value() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let n = operator_norm(&a, &cfg()).unwrap();
        assert!((n - 2.0).abs() < 1e-13);
    }

    #[test]
    fn zero_matrix_norm_is_zero() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 4), &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn norm_matches_svd_on_random_input() {
        let mut r = rng(7);
        for (m, n) in [(20, 15), (15, 20), (1, 9), (9, 1), (12, 12)] {
            let a = random_matrix(&mut r, m, n);
            let p = operator_norm(&a, &cfg()).unwrap();
            let s = svd(&a).unwrap().singular_values[0];
            assert!((p - s).abs() <= 1e-10 * s, "{m}x{n}: {p} vs {s}");
        }
    }

    #[test]
    fn reports_nonconvergence_with_shape() {
        let mut r = rng(3);
        let a = random_matrix(&mut r, 6, 4);
        let tight = ToleranceConfig {
            max_iterations: 1,
            ..cfg()
        };
        match operator_norm(&a, &tight) {
            Err(Error::NoConvergence { rows: 6, cols: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn svd_reconstructs() {
        let mut r = rng(11);
        for (m, n) in [(5, 3), (3, 5), (4, 4)] {
            let a = random_matrix(&mut r, m, n);
            let d = svd(&a).unwrap();
            let k = m.min(n);
            let sigma = ComplexMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    C64::new(d.singular_values[i], 0.0)
                } else {
                    C64::zero()
                }
            });
            let back = &(&d.u * &sigma) * &d.v.adjoint();
            assert!(back.approx_eq(&a, 1e-12));
            let utu = &d.u.adjoint() * &d.u;
            assert!(utu.approx_eq(&ComplexMatrix::identity(k), 1e-12));
        }
    }

    #[test]
    fn svd_rank_detects_deficiency() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]);
        assert_eq!(svd(&a).unwrap().rank(1e-12), 1);
    }

    #[test]
    fn block_assemble_single_block_is_identity_map() {
        let mut r = rng(1);
        let m = random_matrix(&mut r, 2, 3);
        assert_eq!(block_assemble(&[vec![m.clone()]]).unwrap(), m);
    }

    #[test]
    fn block_assemble_scalars() {
        let s = |x: f64| ComplexMatrix::from_real_rows(&[&[x]]);
        let got = block_assemble(&[vec![s(1.0), s(2.0)], vec![s(3.0), s(4.0)]]).unwrap();
        assert_eq!(got, ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]));
    }

    #[test]
    fn block_assemble_columns_give_identity() {
        let e1 = ComplexMatrix::unit(2, 1, 0, 0);
        let e2 = ComplexMatrix::unit(2, 1, 1, 0);
        assert_eq!(block_assemble(&[vec![e1, e2]]).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn block_assemble_rejects_mismatch() {
        let err = block_assemble(&[vec![ComplexMatrix::zeros(1, 1), ComplexMatrix::zeros(2, 1)]])
            .unwrap_err();
        match err {
            Error::Shape { detail, .. } => assert!(detail.contains("(0, 1)")),
            e => panic!("{e:?}"),
        }
        assert!(block_assemble(&[]).is_err());
    }

    #[test]
    fn direct_sum_shapes() {
        assert_eq!(
            direct_sum(&[ComplexMatrix::identity(2)]).unwrap(),
            ComplexMatrix::identity(2)
        );
        let one = ComplexMatrix::identity(1);
        assert_eq!(direct_sum(&[one.clone(), one]).unwrap(), ComplexMatrix::identity(2));
        let d = direct_sum(&[ComplexMatrix::zeros(2, 3), ComplexMatrix::identity(1)]).unwrap();
        assert_eq!(d.shape(), (3, 4));
        assert_eq!(d[(2, 3)], C64::new(1.0, 0.0));
        assert!(direct_sum(&[]).is_err());
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![C64::zero(); 3]),
            Err(Error::DataLength { .. })
        ));
        let mut d = vec![C64::zero(); 4];
        d[3] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            ComplexMatrix::new(2, 2, d),
            Err(Error::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn tolerance_validation() {
        assert!(cfg().validate().is_ok());
        let bad = ToleranceConfig {
            structural_tol: 1e-14,
            ..cfg()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn solve_recovers_solution() {
        let mut r = rng(5);
        let a = random_matrix(&mut r, 6, 6);
        let x: Vec<C64> = (0..6).map(|i| C64::new(i as f64, 1.0)).collect();
        let b = a.mul_vec(&x);
        let got = solve(&a, &b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-10);
        }
    }

    #[test]
    fn unitary_invariance() {
        let mut r = rng(9);
        let a = random_matrix(&mut r, 5, 4);
        let u = random_unitary(&mut r, 5);
        let v = random_unitary(&mut r, 4);
        let b = &(&u * &a) * &v;
        let na = operator_norm(&a, &cfg()).unwrap();
        let nb = operator_norm(&b, &cfg()).unwrap();
        assert!((na - nb).abs() < 1e-9);
    }
}
