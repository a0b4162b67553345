//! Dense complex linear algebra: LU factor/solve, inversion, singular
//! values, eigenvalue magnitudes.
//!
//! Everything is dense `Complex64`. The systems here top out around a
//! hundred rows (reduced Jacobians of desk-scale networks), so O(n^3)
//! direct methods are used throughout. Accuracy contracts: LU solve
//! residual <= 1e-10 * ||b|| for condition <= 1e8, singular values and
//! eigenvalue magnitudes to relative 1e-8.

use num_complex::Complex64;
use thiserror::Error;

/// Relative pivot threshold below which a matrix is declared singular.
pub const PIVOT_RTOL: f64 = 1e-13;
/// Iteration cap shared by the SVD and eigenvalue routines.
pub const ITERATION_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("singular matrix: pivot magnitude {pivot:.3e} below threshold {threshold:.3e} at step {step}")]
    SingularMatrix {
        pivot: f64,
        threshold: f64,
        step: usize,
    },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

pub type ComplexVector = Vec<Complex64>;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Validating constructor: dimensions >= 1 and all entries finite.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(NumericsError::DimensionMismatch {
                context: format!("{}x{} with {} entries", rows, cols, data.len()),
            });
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(NumericsError::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> ComplexVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// LU factorization with partial pivoting.
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuFactors {
    pub fn factor(a: &ComplexMatrix) -> Result<Self, NumericsError> {
        assert!(a.is_square(), "LU factorization requires a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        let threshold = PIVOT_RTOL * a.max_abs().max(f64::MIN_POSITIVE);

        for k in 0..n {
            let (mut pivot_row, mut pivot_mag) = (k, lu[(k, k)].norm());
            for i in k + 1..n {
                let mag = lu[(i, k)].norm();
                if mag > pivot_mag {
                    pivot_row = i;
                    pivot_mag = mag;
                }
            }
            if pivot_mag < threshold {
                return Err(NumericsError::SingularMatrix {
                    pivot: pivot_mag,
                    threshold,
                    step: k,
                });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Ok(Self { lu, perm, swaps })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<ComplexVector, NumericsError> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(NumericsError::DimensionMismatch {
                context: format!("solve rhs length {} for {}x{} system", b.len(), n, n),
            });
        }
        let mut x: ComplexVector = self.perm.iter().map(|&p| b[p]).collect();
        // forward substitution with unit lower factor
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[(i, j)] * x[j];
                x[i] -= sub;
            }
        }
        // back substitution with the upper factor
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[(i, j)] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn det(&self) -> Complex64 {
        let mut d = if self.swaps % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        for i in 0..self.lu.rows() {
            d *= self.lu[(i, i)];
        }
        d
    }
}

/// Solve a*x = b by LU with partial pivoting.
pub fn lu_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<ComplexVector, NumericsError> {
    LuFactors::factor(a)?.solve(b)
}

/// Matrix inverse by LU factorization and per-column solves.
pub fn invert(a: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    let n = a.rows();
    let f = LuFactors::factor(a)?;
    let mut inv = ComplexMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let col = f.solve(&e)?;
        e[j] = Complex64::new(0.0, 0.0);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

pub fn det(a: &ComplexMatrix) -> Result<Complex64, NumericsError> {
    Ok(LuFactors::factor(a)?.det())
}

/// All singular values, descending, via one-sided Jacobi on the columns.
///
/// One-sided Jacobi computes small singular values to high relative
/// accuracy, which matters because sigma_min is the singularity detector
/// for the sweep boundaries.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>, NumericsError> {
    // Work on a tall copy so column rotations see rows >= cols.
    let mut w = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.conj_transpose()
    };
    let (m, n) = (w.rows(), w.cols());
    let eps = f64::EPSILON;

    let col_dot = |w: &ComplexMatrix, p: usize, q: usize| -> Complex64 {
        (0..m).map(|i| w[(i, p)].conj() * w[(i, q)]).sum()
    };

    let mut sweeps = 0usize;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let app = col_dot(&w, p, p).re;
                let aqq = col_dot(&w, q, q).re;
                let apq = col_dot(&w, p, q);
                if apq.norm() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                // Unitary 2x2 that annihilates the off-diagonal Gram entry.
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = wp * c - wq * phase.conj() * s;
                    w[(i, q)] = wp * phase * s + wq * c;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps > ITERATION_CAP {
            return Err(NumericsError::NoConvergence { iterations: sweeps });
        }
    }

    let mut sv: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Smallest singular value.
pub fn min_singular_value(a: &ComplexMatrix) -> Result<f64, NumericsError> {
    Ok(*singular_values(a)?.last().expect("at least one column"))
}

/// All eigenvalues of a square complex matrix by Hessenberg reduction and
/// shifted QR iteration.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, NumericsError> {
    assert!(a.is_square(), "eigenvalues require a square matrix");
    let n = a.rows();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = hessenberg(a);
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is rows/cols 0..hi
    let mut iters = 0usize;

    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Deflate converged trailing entries.
        let k = hi - 1;
        let sub = h[(k, k - 1)].norm();
        if sub <= f64::EPSILON * (h[(k - 1, k - 1)].norm() + h[(k, k)].norm()) {
            eigs.push(h[(k, k)]);
            hi -= 1;
            continue;
        }
        iters += 1;
        if iters > ITERATION_CAP {
            return Err(NumericsError::NoConvergence { iterations: iters });
        }
        // Wilkinson shift: eigenvalue of the trailing 2x2 closest to h[k][k].
        let (a00, a01) = (h[(k - 1, k - 1)], h[(k - 1, k)]);
        let (a10, a11) = (h[(k, k - 1)], h[(k, k)]);
        let tr = a00 + a11;
        let disc = ((a00 - a11) * (a00 - a11) + 4.0 * a01 * a10).sqrt();
        let e1 = (tr + disc) / 2.0;
        let e2 = (tr - disc) / 2.0;
        let shift = if (e1 - a11).norm() < (e2 - a11).norm() {
            e1
        } else {
            e2
        };
        // Exceptional shift every 30 stalled steps to break symmetry.
        let shift = if iters % 30 == 0 {
            shift + Complex64::new(sub, sub)
        } else {
            shift
        };
        qr_step(&mut h, hi, shift);
    }
    Ok(eigs)
}

/// Largest eigenvalue magnitude.
pub fn max_eigenvalue_magnitude(a: &ComplexMatrix) -> Result<f64, NumericsError> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let mut norm_sq = 0.0;
        for i in k + 1..n {
            norm_sq += h[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm <= f64::EPSILON * h.max_abs() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * norm
        } else {
            Complex64::new(-norm, 0.0)
        };
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = h[(i, k)];
        }
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // H = I - 2 v v^H / (v^H v); apply from both sides.
        for j in 0..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            let scale = 2.0 * dot / vnorm_sq;
            for i in k + 1..n {
                let sub = scale * v[i];
                h[(i, j)] -= sub;
            }
        }
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            let scale = 2.0 * dot / vnorm_sq;
            for j in k + 1..n {
                let sub = scale * v[j].conj();
                h[(i, j)] -= sub;
            }
        }
    }
    h
}

/// One explicit single-shift QR step on the leading hi x hi block of a
/// Hessenberg matrix: H := R Q + shift*I where Q R = H - shift*I.
fn qr_step(h: &mut ComplexMatrix, hi: usize, shift: Complex64) {
    let n = hi;
    for k in 0..n {
        h[(k, k)] -= shift;
    }
    let mut cs = vec![(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)); n - 1];
    // Givens rotations zeroing the subdiagonal, applied from the left.
    for k in 0..n - 1 {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (x.conj() / r, y.conj() / r)
        };
        cs[k] = (c, s);
        for j in k..n {
            let hkj = h[(k, j)];
            let hk1j = h[(k + 1, j)];
            h[(k, j)] = c * hkj + s * hk1j;
            h[(k + 1, j)] = -s.conj() * hkj + c.conj() * hk1j;
        }
    }
    // The adjoints from the right restore Hessenberg form.
    for k in 0..n - 1 {
        let (c, s) = cs[k];
        for i in 0..n {
            let hik = h[(i, k)];
            let hik1 = h[(i, k + 1)];
            h[(i, k)] = hik * c.conj() + hik1 * s.conj();
            h[(i, k + 1)] = -hik * s + hik1 * c;
        }
    }
    for k in 0..n {
        h[(k, k)] += shift;
    }
}
