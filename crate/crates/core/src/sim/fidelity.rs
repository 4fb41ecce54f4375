// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::linalg::StateVector;

use super::density::{to_dmatrix, DensityMatrix};
use super::SimError;

const IMAG_TOL: f64 = 1e-10;

/// `⟨ψ|σ|ψ⟩`, the fidelity between a pure state and a density matrix.
pub fn fidelity(ideal: &StateVector, noisy: &DensityMatrix) -> Result<f64, SimError> {
    let dim = noisy.dim();
    if ideal.dim() != dim {
        return Err(SimError::DimensionMismatch {
            left: ideal.dim(),
            right: dim,
        });
    }
    let psi = ideal.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, a) in psi.iter().enumerate() {
        let row = &noisy.as_slice()[r * dim..(r + 1) * dim];
        let s: Complex64 = row.iter().zip(psi).map(|(x, b)| x * b).sum();
        acc += a.conj() * s;
    }
    if acc.im.abs() > IMAG_TOL {
        return Err(SimError::ComplexFidelity(acc.im));
    }
    Ok(acc.re)
}

/// Eigenvalues at or below this count as zero in `psd_sqrt`.
const NULL_EIGENVALUE: f64 = 1e-13;

/// Square root of a Hermitian positive semidefinite matrix.
fn psd_sqrt(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(m);
    let roots = eig.eigenvalues.map(|l| {
        let r = if l > NULL_EIGENVALUE { l.sqrt() } else { 0.0 };
        Complex64::new(r, 0.0)
    });
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

/// `(Tr √(√ρ σ √ρ))²` for two density matrices, evaluated as the squared
/// trace norm of `√σ·√ρ`.
pub fn fidelity_general(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64, SimError> {
    if sigma.dim() != rho.dim() {
        return Err(SimError::DimensionMismatch {
            left: sigma.dim(),
            right: rho.dim(),
        });
    }
    let dim = rho.dim();
    let product = psd_sqrt(to_dmatrix(dim, sigma.as_slice())) * psd_sqrt(to_dmatrix(dim, rho.as_slice()));
    let tr: f64 = product.singular_values().iter().sum();
    Ok(tr * tr)
}
