//! Unitary operations on phase-tagged states.
//!
//! Dense matrices act on a register subset as U ⊗ I. The structured
//! variants (basis permutations, register-wide Hadamards, inversion about
//! the mean) are unitary by construction and scale to layouts where a
//! dense matrix would not.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::statevec::layout::{Register, RegisterLayout, RegisterSet, MAX_DENSE_DIM};
use crate::statevec::state::PhaseTaggedState;

pub const UNITARY_TOL: f64 = 1e-12;

/// A unitary on the full space.
#[derive(Clone)]
pub enum QOp {
    /// Dense matrix on a register subset, checked unitary on construction.
    Dense {
        target: RegisterSet,
        matrix: DMatrix<Complex64>,
    },
    /// Basis permutation of the full index space: index `i` maps to `map[i]`.
    Permutation { map: Arc<Vec<u32>> },
    /// Hadamard on every qubit of one register.
    Hadamard { target: Register },
    /// Inversion about the mean on one register (the search diffusion).
    InvertAboutMean { target: Register },
}

impl std::fmt::Debug for QOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QOp::Dense { target, matrix } => {
                write!(
                    f,
                    "Dense({:?}, {}x{})",
                    target.registers(),
                    matrix.nrows(),
                    matrix.ncols()
                )
            }
            QOp::Permutation { map } => write!(f, "Permutation(len {})", map.len()),
            QOp::Hadamard { target } => write!(f, "Hadamard({target:?})"),
            QOp::InvertAboutMean { target } => write!(f, "InvertAboutMean({target:?})"),
        }
    }
}

pub fn max_unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let product = m.adjoint() * m;
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    (product - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl QOp {
    /// Dense unitary on a register subset; rejects non-unitary matrices.
    pub fn dense(target: RegisterSet, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotUnitary {
                deviation: f64::INFINITY,
            });
        }
        let deviation = max_unitarity_deviation(&matrix);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(QOp::Dense { target, matrix })
    }

    /// Full-space basis permutation; rejects non-bijective maps.
    pub fn permutation(map: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            let i = i as usize;
            if i >= map.len() || seen[i] {
                return Err(Error::NotUnitary { deviation: 1.0 });
            }
            seen[i] = true;
        }
        Ok(QOp::Permutation { map: Arc::new(map) })
    }

    /// Permutation of one register's basis values, extended by identity.
    pub fn register_permutation(
        layout: RegisterLayout,
        target: Register,
        value_map: &[u64],
    ) -> Result<Self> {
        let dim = layout.dim();
        let reg_dim = layout.register_dim(target) as usize;
        if value_map.len() != reg_dim {
            return Err(Error::InvalidLayout("permutation length mismatch".into()));
        }
        let shift = layout.shift(target);
        let mask = (reg_dim as u64 - 1) << shift;
        let mut map = vec![0u32; dim as usize];
        for (i, slot) in map.iter_mut().enumerate() {
            let i = i as u64;
            let old = (i & mask) >> shift;
            *slot = ((i & !mask) | (value_map[old as usize] << shift)) as u32;
        }
        Self::permutation(map)
    }

    fn to_dense_full(&self, layout: RegisterLayout) -> Result<DMatrix<Complex64>> {
        let dim = layout.dim();
        if dim > MAX_DENSE_DIM {
            return Err(Error::DenseTooLarge {
                dim,
                max: MAX_DENSE_DIM,
            });
        }
        let n = dim as usize;
        let mut full = DMatrix::<Complex64>::zeros(n, n);
        match self {
            QOp::Permutation { map } => {
                if map.len() != n {
                    return Err(Error::InvalidLayout("permutation length mismatch".into()));
                }
                for (from, &to) in map.iter().enumerate() {
                    full[(to as usize, from)] = Complex64::ONE;
                }
            }
            _ => {
                // Column-by-column application of the structured op.
                for col in 0..n {
                    let mut v = vec![Complex64::ZERO; n];
                    v[col] = Complex64::ONE;
                    self.apply_to_vector(layout, &mut v);
                    for (row, z) in v.into_iter().enumerate() {
                        full[(row, col)] = z;
                    }
                }
            }
        }
        Ok(full)
    }

    /// Materializes the operation as a full-space dense matrix; only for
    /// layouts within the dense-dimension cap.
    pub fn as_matrix(&self, layout: RegisterLayout) -> Result<DMatrix<Complex64>> {
        self.to_dense_full(layout)
    }

    pub(crate) fn apply_to_vector(&self, layout: RegisterLayout, v: &mut Vec<Complex64>) {
        match self {
            QOp::Dense { target, matrix } => {
                let sub = layout.subset_dim(target) as usize;
                assert_eq!(
                    matrix.nrows(),
                    sub,
                    "dense op does not fit its target subspace"
                );
                let comp = target.complement();
                let comp_dim = layout.subset_dim(&comp);
                let mut scratch_in = vec![Complex64::ZERO; sub];
                for c in 0..comp_dim {
                    for (t, s) in scratch_in.iter_mut().enumerate() {
                        *s = v[layout.weave(target, t as u64, c) as usize];
                    }
                    for t in 0..sub {
                        let mut acc = Complex64::ZERO;
                        for k in 0..sub {
                            acc += matrix[(t, k)] * scratch_in[k];
                        }
                        v[layout.weave(target, t as u64, c) as usize] = acc;
                    }
                }
            }
            QOp::Permutation { map } => {
                let mut out = vec![Complex64::ZERO; v.len()];
                for (from, z) in v.iter().enumerate() {
                    if *z != Complex64::ZERO {
                        out[map[from] as usize] = *z;
                    }
                }
                *v = out;
            }
            QOp::Hadamard { target } => {
                let qubits = layout.qubits(*target);
                let shift = layout.shift(*target);
                let scale = std::f64::consts::FRAC_1_SQRT_2;
                for q in 0..qubits {
                    // A register's leftmost qubit is its most significant bit.
                    let bit = 1u64 << (shift + qubits - 1 - q);
                    for i in 0..v.len() as u64 {
                        if i & bit == 0 {
                            let j = (i | bit) as usize;
                            let i = i as usize;
                            let (x, y) = (v[i], v[j]);
                            v[i] = (x + y) * scale;
                            v[j] = (x - y) * scale;
                        }
                    }
                }
            }
            QOp::InvertAboutMean { target } => {
                let regs = RegisterSet::single(*target);
                let sub = layout.subset_dim(&regs);
                let comp = regs.complement();
                let comp_dim = layout.subset_dim(&comp);
                for c in 0..comp_dim {
                    let mut mean = Complex64::ZERO;
                    for t in 0..sub {
                        mean += v[layout.weave(&regs, t, c) as usize];
                    }
                    mean *= 2.0 / sub as f64;
                    for t in 0..sub {
                        let idx = layout.weave(&regs, t, c) as usize;
                        v[idx] = mean - v[idx];
                    }
                }
            }
        }
    }
}

/// Applies a unitary to every branch of the state; the norm is preserved.
pub fn apply_unitary(state: &PhaseTaggedState, op: &QOp) -> PhaseTaggedState {
    let layout = state.layout();
    let mut out = state.clone();
    for b in out.branches_mut() {
        op.apply_to_vector(layout, &mut b.amplitudes);
    }
    out
}

/// Applies a sequence of unitaries left to right (first element acts first).
pub fn apply_sequence(state: &PhaseTaggedState, ops: &[QOp]) -> PhaseTaggedState {
    let mut s = state.clone();
    for op in ops {
        s = apply_unitary(&s, op);
    }
    s
}

/// Dense product of a sequence, with the first element rightmost, so the
/// result acts like `apply_sequence`.
pub fn sequence_matrix(layout: RegisterLayout, ops: &[QOp]) -> Result<DMatrix<Complex64>> {
    let n = layout.dim() as usize;
    let mut acc = DMatrix::<Complex64>::identity(n, n);
    for op in ops {
        acc = op.as_matrix(layout)? * acc;
    }
    Ok(acc)
}
