//! Dense complex matrices sized for few-qubit work, plus a cyclic Jacobi
//! eigensolver for Hermitian matrices.

use crate::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Shorthand constructor, mostly for literals in tests and builders.
#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Row-major dense complex matrix.
///
/// Entries are finite by construction: `from_data` rejects NaN/Inf and all
/// arithmetic here preserves finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMatrix {
            rows,
            cols,
            data: vec![Complex::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::ONE);
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(z) = data.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {z}")));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds from a closure over (row, col). Entries must be finite.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(v.re.is_finite() && v.im.is_finite());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_assign_at(&mut self, i: usize, j: usize, v: Complex) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] += v;
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn mat_mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_assign_at(i, j, a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == Complex::ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &CMatrix, f: impl Fn(Complex, Complex) -> Complex) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, k: Complex) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| k * z).collect(),
        }
    }

    pub fn trace(&self) -> Result<Complex> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "trace of {}x{}",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &CMatrix) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64> {
        Ok(self
            .sub(other)?
            .data
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation().map_or(false, |d| d <= tol)
    }

    fn hermitian_deviation(&self) -> Option<f64> {
        if self.rows != self.cols {
            return None;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        Some(dev)
    }

    /// Trace over one factor of a `d1*d2` bipartite square matrix.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<CMatrix> {
        let (d1, d2) = dims;
        if self.rows != self.cols || self.rows != d1 * d2 {
            return Err(Error::Dimension(format!(
                "partial trace of {}x{} with factor dims {}x{}",
                self.rows, self.cols, d1, d2
            )));
        }
        match keep {
            Subsystem::First => {
                let mut out = CMatrix::zeros(d1, d1);
                for i in 0..d1 {
                    for j in 0..d1 {
                        let mut acc = Complex::ZERO;
                        for k in 0..d2 {
                            acc += self.get(i * d2 + k, j * d2 + k);
                        }
                        out.set(i, j, acc);
                    }
                }
                Ok(out)
            }
            Subsystem::Second => {
                let mut out = CMatrix::zeros(d2, d2);
                for k in 0..d2 {
                    for l in 0..d2 {
                        let mut acc = Complex::ZERO;
                        for i in 0..d1 {
                            acc += self.get(i * d2 + k, i * d2 + l);
                        }
                        out.set(k, l, acc);
                    }
                }
                Ok(out)
            }
        }
    }

    /// All eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi
    /// rotations adapted to complex entries.
    ///
    /// Each rotation zeroes one off-diagonal pair with a unitary that combines
    /// the phase of the pivot entry with a real Givens angle. Convergence is
    /// declared when the off-diagonal Frobenius norm drops below 1e-12; the
    /// sweep count is capped at 100.
    ///
    /// # Errors
    ///
    /// `NotHermitian` if any entry deviates from the conjugate transpose by
    /// more than 1e-10, `NoConvergence` if the cap is hit.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        const HERMITIAN_TOL: f64 = 1e-10;
        const OFF_TOL: f64 = 1e-12;
        const MAX_SWEEPS: usize = 100;

        let dev = self
            .hermitian_deviation()
            .ok_or_else(|| Error::Dimension(format!("eigenvalues of {}x{}", self.rows, self.cols)))?;
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }

        let n = self.rows;
        if n == 1 {
            return Ok(vec![self.get(0, 0).re]);
        }

        // Work on the symmetrized copy so the input's round-off asymmetry
        // cannot accumulate over sweeps.
        let mut a = CMatrix::from_fn(n, n, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * c(0.5, 0.0)
        });

        let off = |a: &CMatrix| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s += a.get(i, j).norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        for _ in 0..MAX_SWEEPS {
            if off(&a) < OFF_TOL {
                return Ok(sorted_diagonal(&a));
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, p, q);
                }
            }
        }
        let remaining = off(&a);
        if remaining < OFF_TOL {
            return Ok(sorted_diagonal(&a));
        }
        Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off: remaining,
        })
    }
}

fn sorted_diagonal(a: &CMatrix) -> Vec<f64> {
    let mut eigs: Vec<f64> = (0..a.rows).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// One two-sided rotation `A <- R^dag A R` that annihilates `A[p][q]`.
///
/// With `A[p][q] = |z| e^{i phi}` the rotation is the phase-twisted Givens
/// matrix `R[p][p] = c`, `R[p][q] = s e^{i phi}`, `R[q][p] = -s e^{-i phi}`,
/// `R[q][q] = c`, where (c, s) solve the same quadratic as in the real
/// symmetric Jacobi method with `|z|` in place of the pivot.
fn jacobi_rotate(a: &mut CMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let norm = apq.norm();
    if norm < 1e-300 {
        a.set(p, q, Complex::ZERO);
        a.set(q, p, Complex::ZERO);
        return;
    }
    let phase = apq / c(norm, 0.0);
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * norm);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let co = 1.0 / (1.0 + t * t).sqrt();
    let si = t * co;

    let n = a.rows;
    // A <- A R (columns p and q).
    for j in 0..n {
        let ajp = a.get(j, p);
        let ajq = a.get(j, q);
        a.set(j, p, ajp * c(co, 0.0) - ajq * si * phase.conj());
        a.set(j, q, ajp * si * phase + ajq * c(co, 0.0));
    }
    // A <- R^dag A (rows p and q).
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c(co, 0.0) - aqj * si * phase);
        a.set(q, j, apj * si * phase.conj() + aqj * c(co, 0.0));
    }
    // The rotation leaves exact zeros and real diagonals up to round-off;
    // pin them so later sweeps see a clean pivot.
    a.set(p, q, Complex::ZERO);
    a.set(q, p, Complex::ZERO);
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    a.set(p, p, c(app, 0.0));
    a.set(q, q, c(aqq, 0.0));
}
