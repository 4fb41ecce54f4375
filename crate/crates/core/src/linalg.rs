// SPDX-License-Identifier: Apache-2.0

//! Small dense complex matrices and state vectors.
//!
//! Everything here is sized for automata with at most a few hundred states
//! and circuits of at most twelve qubits, so storage is a flat row-major
//! `Vec` and products are the textbook triple loop.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

/// Tolerance used when a matrix is asserted to be unitary.
pub const UNITARY_TOL: f64 = 1e-12;

/// Tolerance on the squared norm of a state vector.
pub const NORM_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("state vector is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a 2x2 matrix from its entries in reading order.
    pub fn mat2(a: Complex64, b: Complex64, c_: Complex64, d: Complex64) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![a, b, c_, d],
        }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for col in 0..self.cols {
                out[(col, r)] = self[(r, col)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        out[(r1 * rhs.rows + r2, c1 * rhs.cols + c2)] = a * rhs[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal direct sum of the given matrices.
    pub fn direct_sum(blocks: &[Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for col in 0..b.cols {
                    out[(r0 + r, c0 + col)] = b[(r, col)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `self^{⊗n}`; the zeroth power is the 1x1 identity.
    pub fn kron_power(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(1), |acc, _| acc.kron(self))
    }

    /// Largest entry-wise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64, LinalgError> {
        if self.dim() != rhs.dim() {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖M†M − I‖_max`, or infinity for non-square input.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = &self.adjoint() * self;
        gram.max_abs_diff(&Self::identity(self.rows))
            .unwrap_or(f64::INFINITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() < tol
    }

    pub fn ensure_unitary(&self) -> Result<(), LinalgError> {
        let deviation = self.unitarity_deviation();
        if deviation < UNITARY_TOL {
            Ok(())
        } else {
            Err(LinalgError::NotUnitary { deviation })
        }
    }

    /// Integer power by repeated multiplication. Only used by tests and
    /// invariant checks; automaton runs never form matrix powers.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, col): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amplitudes = vec![c(0.0, 0.0); dim];
        amplitudes[index] = c(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, LinalgError> {
        if amplitudes.is_empty() {
            return Err(LinalgError::Empty);
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(LinalgError::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Wraps amplitudes produced by a unitary evolution; the caller vouches
    /// for the norm.
    pub(crate) fn from_evolved(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!(
            (amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < NORM_TOL
        );
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply(&self, m: &ComplexMatrix) -> Result<Self, LinalgError> {
        Ok(Self {
            amplitudes: m.try_mul_vec(&self.amplitudes)?,
        })
    }

    /// True when `self = e^{iφ}·other` for some φ, entry-wise within `tol`.
    pub fn equals_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let overlap = other.inner(self);
        if overlap.norm() < f64::EPSILON {
            return false;
        }
        let phase = overlap / overlap.norm();
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a - phase * b).norm() < tol)
    }

    /// Outer product `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for col in 0..n {
                m[(r, col)] = self.amplitudes[r] * self.amplitudes[col].conj();
            }
        }
        m
    }
}

/// Fixed single-qubit matrices shared by the automata and the gate set.
pub mod gates {
    use super::*;

    /// Square root of NOT.
    pub fn sx() -> ComplexMatrix {
        ComplexMatrix::mat2(c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5))
    }

    pub fn sxdg() -> ComplexMatrix {
        sx().adjoint()
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::mat2(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    pub fn h() -> ComplexMatrix {
        let s = c(FRAC_1_SQRT_2, 0.0);
        ComplexMatrix::mat2(s, s, s, -s)
    }

    /// Half-angle Y rotation: `ry(2θ) = [[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn ry(theta: f64) -> ComplexMatrix {
        let (s, co) = (theta / 2.0).sin_cos();
        ComplexMatrix::mat2(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
    }

    /// `rz(λ) = diag(e^{−iλ/2}, e^{iλ/2})`.
    pub fn rz(lambda: f64) -> ComplexMatrix {
        ComplexMatrix::mat2(cis(-lambda / 2.0), c(0.0, 0.0), c(0.0, 0.0), cis(lambda / 2.0))
    }

    /// Plane rotation by `angle` in the span of `|0⟩`, `|1⟩`.
    pub fn plane_rotation(angle: f64) -> ComplexMatrix {
        ry(2.0 * angle)
    }

    /// Phase rotation `diag(e^{−i·angle}, e^{i·angle})`.
    pub fn phase_rotation(angle: f64) -> ComplexMatrix {
        rz(2.0 * angle)
    }
}
