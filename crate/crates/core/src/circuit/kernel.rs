// SPDX-License-Identifier: Apache-2.0

//! In-place application of (optionally controlled) single-qubit operators to
//! row-major buffers whose row index is a basis-state index.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalOp {
    control: Option<usize>,
    target: usize,
    m: [Complex64; 4],
}

impl LocalOp {
    pub(crate) fn new(control: Option<usize>, target: usize, m: &ComplexMatrix) -> Self {
        debug_assert_eq!(m.dim(), (2, 2));
        let s = m.as_slice();
        Self {
            control,
            target,
            m: [s[0], s[1], s[2], s[3]],
        }
    }

    /// Basis indices `i` with the target bit clear (and the control bit set),
    /// paired with `i | target`.
    fn pairs(&self, dim: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let tmask = 1usize << self.target;
        let cmask = self.control.map_or(0, |c| 1usize << c);
        (0..dim)
            .filter(move |&i| i & tmask == 0 && i & cmask == cmask)
            .map(move |i| (i, i | tmask))
    }
}

/// `data ← M · data`, where `data` holds `dim = data.len() / ncols` rows.
pub(crate) fn apply_local(data: &mut [Complex64], ncols: usize, op: &LocalOp) {
    let dim = data.len() / ncols;
    let [m00, m01, m10, m11] = op.m;
    for (i, j) in op.pairs(dim) {
        for col in 0..ncols {
            let a = data[i * ncols + col];
            let b = data[j * ncols + col];
            data[i * ncols + col] = m00 * a + m01 * b;
            data[j * ncols + col] = m10 * a + m11 * b;
        }
    }
}

/// `data ← data · M†` for a square `dim × dim` buffer.
pub(crate) fn apply_local_right_adjoint(data: &mut [Complex64], dim: usize, op: &LocalOp) {
    let [m00, m01, m10, m11] = op.m.map(|z| z.conj());
    let pairs: Vec<_> = op.pairs(dim).collect();
    for row in data.chunks_exact_mut(dim) {
        for &(i, j) in &pairs {
            let x = row[i];
            let y = row[j];
            row[i] = x * m00 + y * m01;
            row[j] = x * m10 + y * m11;
        }
    }
}
