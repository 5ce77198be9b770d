//! Correlation metrics: classical mutual information of joint basis
//! readouts and the entanglement entropy of the coherent ket.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::layout::RegisterSet;
use crate::statevec::state::PhaseTaggedState;

fn shannon(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter()
        .filter(|&x| x > 1e-15)
        .map(|x| -x * x.log2())
        .sum()
}

/// Classical mutual information, in bits, of the joint Born distribution
/// obtained by reading register subset X and register subset Y in the
/// computational basis. The two readouts commute, so the joint
/// distribution is well defined without ordering.
pub fn mutual_information(
    state: &PhaseTaggedState,
    x: &RegisterSet,
    y: &RegisterSet,
) -> Result<f64> {
    for r in x.registers() {
        if y.contains(*r) {
            return Err(Error::InvalidLayout(
                "mutual_information needs disjoint subsets".into(),
            ));
        }
    }
    let layout = state.layout();
    let nx = layout.subset_dim(x) as usize;
    let ny = layout.subset_dim(y) as usize;
    let mut joint = vec![0.0f64; nx * ny];
    for b in state.branches() {
        for (idx, z) in b.amplitudes.iter().enumerate() {
            let w = z.norm_sqr();
            if w > 0.0 {
                let xi = layout.pack(idx as u64, x) as usize;
                let yi = layout.pack(idx as u64, y) as usize;
                joint[xi * ny + yi] += w;
            }
        }
    }
    Ok(mutual_information_of_joint(&joint, nx, ny))
}

/// Mutual information of an explicit joint distribution laid out row-major
/// as p[x * ny + y].
pub fn mutual_information_of_joint(joint: &[f64], nx: usize, ny: usize) -> f64 {
    let px: Vec<f64> = (0..nx)
        .map(|i| joint[i * ny..(i + 1) * ny].iter().sum())
        .collect();
    let py: Vec<f64> = (0..ny)
        .map(|j| (0..nx).map(|i| joint[i * ny + j]).sum())
        .collect();
    shannon(px.iter().copied()) + shannon(py.iter().copied()) - shannon(joint.iter().copied())
}

/// Entanglement entropy, in bits, of the ensemble read as a single
/// coherent ket (all phase tags set to one): the entropy of the reduced
/// state across the cut (subset | complement). This is the sense in which
/// the post-evaluation state of the search flow is maximally entangled;
/// under phase averaging the same state is only classically correlated.
pub fn coherent_entanglement_entropy(state: &PhaseTaggedState, cut: &RegisterSet) -> Result<f64> {
    let layout = state.layout();
    let rows = layout.subset_dim(cut) as usize;
    let cols = layout.subset_dim(&cut.complement()) as usize;
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for b in state.branches() {
        for (idx, z) in b.amplitudes.iter().enumerate() {
            if *z != Complex64::ZERO {
                let r = layout.pack(idx as u64, cut) as usize;
                let c = layout.pack(idx as u64, &cut.complement()) as usize;
                m[(r, c)] += z;
            }
        }
    }
    let norm = m.norm();
    if norm < 1e-12 {
        return Err(Error::ImpossibleOutcome {
            probability: norm * norm,
        });
    }
    m /= Complex64::new(norm, 0.0);
    let singular = m.singular_values();
    Ok(shannon(singular.iter().map(|s| s * s)))
}
