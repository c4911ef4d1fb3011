//! Dense matrices with a pivoted LU factorization and restarted GMRES.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{count, lit, to_f64, Real};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> std::fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DenseMatrix({}x{})", self.rows, self.cols)
    }
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T + Sync) -> Self {
        Self::from_row_fn(rows, cols, |i, row| {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(i, j);
            }
        })
    }

    /// Fills each row with `fill(i, row)`, rows in parallel.
    pub fn from_row_fn(rows: usize, cols: usize, fill: impl Fn(usize, &mut [T]) + Sync) -> Self {
        let mut m = Self::zeros(rows, cols);
        if cols > 0 {
            m.data
                .par_chunks_mut(cols)
                .enumerate()
                .for_each(|(i, row)| fill(i, row));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self
            .data
            .par_chunks(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Copies `block` into the sub-matrix starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &DenseMatrix<T>) {
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `PA = LU` with partial pivoting, stored in place.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
    norm_one: T,
}

impl<T: Real> LuFactors<T> {
    pub fn new(a: &DenseMatrix<T>) -> Result<Self> {
        let n = a.rows;
        if a.cols != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: a.cols,
            });
        }
        let norm_one = a.norm_one();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = T::epsilon() * count::<T>(n.max(1)) * norm_one;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |best, c| if c.1 > best.1 { c } else { best });
            if !(pivot > tiny) {
                return Err(Error::Singular {
                    column: k,
                    pivot: to_f64(pivot),
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.data.swap(p * n + j, k * n + j);
                }
            }
            let (head, tail) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let inv = T::one() / pivot_row[k];
            tail.par_chunks_mut(n).for_each(|row| {
                let l = row[k] * inv;
                row[k] = l;
                if l != T::zero() {
                    for j in k + 1..n {
                        row[j] = row[j] - l * pivot_row[j];
                    }
                }
            });
        }
        Ok(Self { lu, perm, norm_one })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: T = (0..i).map(|j| row[j] * x[j]).sum();
            x[i] = x[i] - s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: T = (i + 1..n).map(|j| row[j] * x[j]).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: b.len(),
            });
        }
        // Aᵀ = Uᵀ Lᵀ P
        let mut y = b.to_vec();
        for i in 0..n {
            let s: T = (0..i).map(|j| self.lu[(j, i)] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: T = (i + 1..n).map(|j| self.lu[(j, i)] * y[j]).sum();
            y[i] = y[i] - s;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        Ok(x)
    }

    /// Estimate of the 1-norm condition number (Hager's method).
    pub fn condition_estimate(&self) -> T {
        let n = self.dim();
        if n == 0 {
            return T::one();
        }
        let mut x = vec![T::one() / count::<T>(n); n];
        let mut estimate = T::zero();
        for _ in 0..5 {
            let Ok(y) = self.solve(&x) else { break };
            let norm_y: T = y.iter().map(|v| v.abs()).sum();
            if norm_y <= estimate {
                break;
            }
            estimate = norm_y;
            let xi: Vec<T> = y.iter().map(|&v| if v >= T::zero() { T::one() } else { -T::one() }).collect();
            let Ok(z) = self.solve_transpose(&xi) else { break };
            let (j, zmax) = z
                .iter()
                .enumerate()
                .fold((0, -T::one()), |b, (j, v)| if v.abs() > b.1 { (j, v.abs()) } else { b });
            let ztx: T = z.iter().zip(&x).map(|(&a, &b)| a * b).sum();
            if zmax <= ztx {
                break;
            }
            x = vec![T::zero(); n];
            x[j] = T::one();
        }
        estimate * self.norm_one
    }
}

/// Parameters of restarted GMRES.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Relative residual target `‖Ax − b‖ / ‖b‖`.
    pub tolerance: f64,
    pub restart: usize,
    pub max_iterations: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-13,
            restart: 80,
            max_iterations: 2000,
        }
    }
}

/// Outcome of a GMRES solve.
#[derive(Debug, Clone)]
pub struct GmresSolution<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    pub relative_residual: T,
}

fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|&a| a * a).sum::<T>().sqrt()
}

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations,
/// starting from zero. The tolerance is clamped to `100 ε` of `T`.
pub fn gmres<T: Real>(a: &DenseMatrix<T>, b: &[T], opts: &GmresOptions) -> Result<GmresSolution<T>> {
    let n = a.rows();
    if b.len() != n || a.cols() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let tol = lit::<T>(opts.tolerance).max(T::epsilon() * lit(100.0));
    let bnorm = norm2(b);
    let mut x = vec![T::zero(); n];
    if bnorm == T::zero() {
        return Ok(GmresSolution {
            x,
            iterations: 0,
            relative_residual: T::zero(),
        });
    }
    let restart = opts.restart.clamp(1, n.max(1));
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        let ax = a.matvec(&x)?;
        let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &yi)| bi - yi).collect();
        let beta = norm2(&r);
        let rel = beta / bnorm;
        if rel <= tol {
            break;
        }
        let mut basis: Vec<Vec<T>> = vec![r.iter().map(|&v| v / beta).collect()];
        let mut hess: Vec<Vec<T>> = Vec::new();
        let mut cs: Vec<(T, T)> = Vec::new();
        let mut g = vec![beta];
        let mut k = 0;
        while k < restart && iterations < opts.max_iterations {
            let mut w = a.matvec(&basis[k])?;
            let mut h = vec![T::zero(); k + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij: T = w.iter().zip(v).map(|(&p, &q)| p * q).sum();
                h[i] = hij;
                w.iter_mut().zip(v).for_each(|(p, &q)| *p = *p - hij * q);
            }
            let wn = norm2(&w);
            h[k + 1] = wn;
            for (i, &(c, s)) in cs.iter().enumerate() {
                let (a0, a1) = (h[i], h[i + 1]);
                h[i] = c * a0 + s * a1;
                h[i + 1] = -s * a0 + c * a1;
            }
            let denom = h[k].hypot(h[k + 1]);
            let (c, s) = if denom == T::zero() {
                (T::one(), T::zero())
            } else {
                (h[k] / denom, h[k + 1] / denom)
            };
            h[k] = denom;
            h[k + 1] = T::zero();
            cs.push((c, s));
            g.push(-s * g[k]);
            g[k] = c * g[k];
            hess.push(h);
            iterations += 1;
            k += 1;
            let rel = g[k].abs() / bnorm;
            if rel <= tol || wn == T::zero() {
                break;
            }
            basis.push(w.iter().map(|&v| v / wn).collect());
        }
        let mut y = vec![T::zero(); k];
        for i in (0..k).rev() {
            let s: T = (i + 1..k).map(|j| hess[j][i] * y[j]).sum();
            y[i] = (g[i] - s) / hess[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(p, &q)| *p = *p + *yi * q);
        }
    }
    let ax = a.matvec(&x)?;
    let true_rel = norm2(&b.iter().zip(&ax).map(|(&p, &q)| p - q).collect::<Vec<_>>()) / bnorm;
    if true_rel > tol * lit(10.0) {
        return Err(Error::NotConverged {
            iterations,
            residual: to_f64(true_rel),
            tolerance: to_f64(tol),
        });
    }
    Ok(GmresSolution {
        x,
        iterations,
        relative_residual: true_rel,
    })
}

/// How dense systems are solved.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SolverChoice {
    /// Pivoted LU, factored once and reused.
    #[default]
    Lu,
    /// Restarted GMRES on the stored matrix.
    Iterative(GmresOptions),
}

/// A matrix prepared for repeated solves with the chosen method.
#[derive(Debug, Clone)]
pub enum FactoredMatrix<T> {
    Lu(LuFactors<T>),
    Iterative {
        matrix: DenseMatrix<T>,
        options: GmresOptions,
    },
}

impl<T: Real> FactoredMatrix<T> {
    pub fn new(matrix: DenseMatrix<T>, solver: SolverChoice) -> Result<Self> {
        match solver {
            SolverChoice::Lu => Ok(Self::Lu(LuFactors::new(&matrix)?)),
            SolverChoice::Iterative(options) => Ok(Self::Iterative { matrix, options }),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Lu(f) => f.dim(),
            Self::Iterative { matrix, .. } => matrix.rows(),
        }
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        match self {
            Self::Lu(f) => f.solve(b),
            Self::Iterative { matrix, options } => Ok(gmres(matrix, b, options)?.x),
        }
    }
}

/// A square system `A x = b` with its solver.
#[derive(Debug, Clone)]
pub struct DenseSystem<T> {
    pub matrix: DenseMatrix<T>,
    pub rhs: Vec<T>,
    pub solver: SolverChoice,
}

/// Solves the system. LU reports a singular matrix with a condition
/// diagnostic; GMRES reports non-convergence.
pub fn solve_dense<T: Real>(sys: &DenseSystem<T>) -> Result<Vec<T>> {
    match sys.solver {
        SolverChoice::Lu => {
            let lu = LuFactors::new(&sys.matrix)?;
            let x = lu.solve(&sys.rhs)?;
            let cond = lu.condition_estimate();
            if !(cond.is_finite() && cond * T::epsilon() < lit(0.5)) {
                return Err(Error::Singular {
                    column: sys.matrix.rows(),
                    pivot: f64::NAN,
                    condition: to_f64(cond),
                });
            }
            Ok(x)
        }
        SolverChoice::Iterative(opts) => Ok(gmres(&sys.matrix, &sys.rhs, &opts)?.x),
    }
}
