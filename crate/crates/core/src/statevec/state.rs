//! Phase-tagged ensembles: a mixed state written as a set of ket branches,
//! one per random-phase tag. The density operator is by definition the sum
//! of the branch ket-bras, since averaging over independent uniform phases
//! kills every cross term.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::statevec::density::DensityMatrix;
use crate::statevec::layout::{RegisterLayout, RegisterSet, ENSEMBLE_BUDGET, MAX_DENSE_DIM};

pub const NORM_TOL: f64 = 1e-12;

/// One ket of the ensemble, labelled by an integer phase tag standing for
/// e^{iφ_tag}.
#[derive(Clone, Debug)]
pub struct Branch {
    pub tag: u32,
    pub amplitudes: Vec<Complex64>,
}

/// A normalized phase-tagged ensemble over a fixed register layout.
#[derive(Clone, Debug)]
pub struct PhaseTaggedState {
    layout: RegisterLayout,
    branches: Vec<Branch>,
}

impl PhaseTaggedState {
    /// Builds a state from branches; tags must be distinct and the total
    /// squared norm must be one.
    pub fn new(layout: RegisterLayout, mut branches: Vec<Branch>) -> Result<Self> {
        let dim = layout.dim() as usize;
        let total: u64 = branches.len() as u64 * dim as u64;
        if total > ENSEMBLE_BUDGET {
            return Err(Error::MemoryBudget {
                amplitudes: total,
                budget: ENSEMBLE_BUDGET,
            });
        }
        for b in &branches {
            if b.amplitudes.len() != dim {
                return Err(Error::InvalidLayout(format!(
                    "branch vector has {} amplitudes, layout dimension is {dim}",
                    b.amplitudes.len()
                )));
            }
        }
        branches.sort_by_key(|b| b.tag);
        if branches.windows(2).any(|w| w[0].tag == w[1].tag) {
            return Err(Error::InvalidLayout("duplicate phase tags".into()));
        }
        let state = Self { layout, branches };
        let norm_sq = state.total_norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(state)
    }

    /// Single-branch pure state concentrated on one basis index.
    pub fn basis_state(layout: RegisterLayout, index: u64, tag: u32) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; layout.dim() as usize];
        amplitudes[index as usize] = Complex64::ONE;
        Self {
            layout,
            branches: vec![Branch { tag, amplitudes }],
        }
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, tag: u32) -> Option<&Branch> {
        self.branches.iter().find(|b| b.tag == tag)
    }

    pub fn total_norm_squared(&self) -> f64 {
        self.branches
            .iter()
            .flat_map(|b| b.amplitudes.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub(crate) fn branches_mut(&mut self) -> &mut Vec<Branch> {
        &mut self.branches
    }

    /// Rescales all branches so the total squared norm is one; drops
    /// branches that carry no weight.
    pub(crate) fn renormalize(&mut self) -> Result<()> {
        let norm_sq = self.total_norm_squared();
        if norm_sq < 1e-24 {
            return Err(Error::ImpossibleOutcome {
                probability: norm_sq,
            });
        }
        let scale = 1.0 / norm_sq.sqrt();
        for b in &mut self.branches {
            for z in &mut b.amplitudes {
                *z *= scale;
            }
        }
        self.branches
            .retain(|b| b.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-24);
        Ok(())
    }

    fn density_entries(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.layout.dim();
        if dim > MAX_DENSE_DIM {
            return Err(Error::DenseTooLarge {
                dim,
                max: MAX_DENSE_DIM,
            });
        }
        let n = dim as usize;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for b in &self.branches {
            for i in 0..n {
                let vi = b.amplitudes[i];
                if vi == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += vi * b.amplitudes[j].conj();
                }
            }
        }
        Ok(m)
    }

    /// The density operator Σ_k |v_k><v_k| as a dense matrix.
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.density_entries()?)
    }

    /// Partial trace onto a register subset, materializing only the
    /// reduced matrix.
    pub fn reduced_density(&self, regs: &RegisterSet) -> Result<DensityMatrix> {
        if regs.is_empty() {
            return Err(Error::InvalidLayout(
                "reduced_density needs a nonempty subset".into(),
            ));
        }
        let kept = self.layout.subset_dim(regs);
        if kept > MAX_DENSE_DIM {
            return Err(Error::DenseTooLarge {
                dim: kept,
                max: MAX_DENSE_DIM,
            });
        }
        let comp = regs.complement();
        let comp_dim = self.layout.subset_dim(&comp);
        let n = kept as usize;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        let mut slice = vec![Complex64::ZERO; n];
        for b in &self.branches {
            for c in 0..comp_dim {
                for (t, s) in slice.iter_mut().enumerate() {
                    *s = b.amplitudes[self.layout.weave(regs, t as u64, c) as usize];
                }
                for i in 0..n {
                    let vi = slice[i];
                    if vi == Complex64::ZERO {
                        continue;
                    }
                    for j in 0..n {
                        m[(i, j)] += vi * slice[j].conj();
                    }
                }
            }
        }
        DensityMatrix::new(m)
    }

    /// Frobenius distance between the two ensembles' density operators.
    ///
    /// For dimensions within the dense cap the densities are materialized
    /// and subtracted entry-wise, which is accurate down to machine noise.
    /// Beyond the cap the distance comes from branch Gram matrices,
    /// ||ρ−σ||² = Σ|<v_k|v_l>|² + Σ|<w_k|w_l>|² − 2Σ|<v_k|w_l>|², whose
    /// cancellation limits the resolution to about the square root of
    /// machine epsilon.
    pub fn density_distance(&self, other: &PhaseTaggedState) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::InvalidLayout(
                "density_distance needs matching layouts".into(),
            ));
        }
        if self.layout.dim() <= MAX_DENSE_DIM {
            return Ok((self.density_entries()? - other.density_entries()?).norm());
        }
        let gram = |xs: &[Branch], ys: &[Branch]| -> f64 {
            let mut acc = 0.0;
            for x in xs {
                for y in ys {
                    let ip: Complex64 = x
                        .amplitudes
                        .iter()
                        .zip(&y.amplitudes)
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    acc += ip.norm_sqr();
                }
            }
            acc
        };
        let d2 = gram(&self.branches, &self.branches) + gram(&other.branches, &other.branches)
            - 2.0 * gram(&self.branches, &other.branches);
        Ok(d2.max(0.0).sqrt())
    }

    /// Schmidt rank of each branch ket across the cut (subset |
    /// complement). A rank of one for every branch means the ensemble is
    /// only classically correlated across the cut, however entangled the
    /// coherent sum of the branches may look.
    pub fn branch_schmidt_ranks(&self, cut: &RegisterSet) -> Vec<(u32, usize)> {
        let rows = self.layout.subset_dim(cut) as usize;
        let cols = self.layout.subset_dim(&cut.complement()) as usize;
        self.branches
            .iter()
            .map(|b| {
                let mut m = DMatrix::<Complex64>::zeros(rows, cols);
                for (idx, z) in b.amplitudes.iter().enumerate() {
                    if *z != Complex64::ZERO {
                        let r = self.layout.pack(idx as u64, cut) as usize;
                        let c = self.layout.pack(idx as u64, &cut.complement()) as usize;
                        m[(r, c)] += *z;
                    }
                }
                let rank = m.singular_values().iter().filter(|s| **s > 1e-10).count();
                (b.tag, rank)
            })
            .collect()
    }

    /// Born weights of a joint basis measurement on a register subset.
    /// Entry `i` is the probability of reading packed value `i`.
    pub fn register_distribution(&self, regs: &RegisterSet) -> Vec<f64> {
        let n = self.layout.subset_dim(regs) as usize;
        let mut p = vec![0.0; n];
        for b in &self.branches {
            for (idx, z) in b.amplitudes.iter().enumerate() {
                let w = z.norm_sqr();
                if w > 0.0 {
                    p[self.layout.pack(idx as u64, regs) as usize] += w;
                }
            }
        }
        p
    }

    /// Shannon entropy in bits of the basis distribution on a register
    /// subset. Coincides with the von Neumann entropy of the reduced
    /// density whenever that reduced density is diagonal in the
    /// computational basis, which holds for every flow in this crate
    /// (each branch keeps the subset registers sharp).
    pub fn basis_entropy(&self, regs: &RegisterSet) -> f64 {
        self.register_distribution(regs)
            .into_iter()
            .filter(|&p| p > 1e-15)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// Debug dump: per-tag amplitude arrays as [re, im] pairs.
    pub fn debug_dump(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump {
            problem_qubits: u32,
            argument_qubits: u32,
            value_qubits: u32,
            branches: BTreeMap<u32, Vec<[f64; 2]>>,
        }
        let branches = self
            .branches
            .iter()
            .map(|b| (b.tag, b.amplitudes.iter().map(|z| [z.re, z.im]).collect()))
            .collect();
        serde_json::to_value(Dump {
            problem_qubits: self.layout.qubits(crate::statevec::Register::Problem),
            argument_qubits: self.layout.qubits(crate::statevec::Register::Argument),
            value_qubits: self.layout.qubits(crate::statevec::Register::Value),
            branches,
        })
        .expect("dump serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::layout::Register;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Four tags on B, uniform A: the section-1 opening state without a
    /// value register.
    pub(crate) fn mixed_problem_uniform_argument() -> PhaseTaggedState {
        let layout = RegisterLayout::new(2, 2, 0).unwrap();
        let branches = (0..4)
            .map(|b| {
                let mut amplitudes = vec![Complex64::ZERO; 16];
                for a in 0..4 {
                    amplitudes[layout.index(b, a, 0) as usize] = c(0.25);
                }
                Branch {
                    tag: b as u32,
                    amplitudes,
                }
            })
            .collect();
        PhaseTaggedState::new(layout, branches).unwrap()
    }

    #[test]
    fn pure_basis_state_density_is_rank_one() {
        let layout = RegisterLayout::new(2, 2, 0).unwrap();
        let s = PhaseTaggedState::basis_state(layout, 0, 0);
        let rho = s.density().unwrap();
        assert_abs_diff_eq!(rho.entries()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.von_neumann_entropy(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn mixed_state_problem_marginal_is_maximally_mixed() {
        let s = mixed_problem_uniform_argument();
        let rho_b = s
            .reduced_density(&RegisterSet::single(Register::Problem))
            .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(rho_b.entries()[(i, j)].re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(rho_b.entries()[(i, j)].im, 0.0, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(rho_b.von_neumann_entropy(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn product_state_argument_marginal_is_pure() {
        let layout = RegisterLayout::new(2, 2, 0).unwrap();
        let s = PhaseTaggedState::basis_state(layout, layout.index(2, 1, 0), 7);
        let rho_a = s
            .reduced_density(&RegisterSet::single(Register::Argument))
            .unwrap();
        assert_abs_diff_eq!(rho_a.von_neumann_entropy(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho_a.entries()[(1, 1)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn density_distance_matches_materialized_frobenius() {
        let a = mixed_problem_uniform_argument();
        let layout = a.layout();
        let b = PhaseTaggedState::basis_state(layout, 3, 0);
        let direct = a
            .density()
            .unwrap()
            .frobenius_distance(&b.density().unwrap());
        let gram = a.density_distance(&b).unwrap();
        assert_abs_diff_eq!(direct, gram, epsilon = 1e-10);
        assert_abs_diff_eq!(a.density_distance(&a).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn rejects_duplicate_tags_and_bad_norm() {
        let layout = RegisterLayout::new(1, 1, 0).unwrap();
        let v = vec![c(1.0), c(0.0), c(0.0), c(0.0)];
        let dup = vec![
            Branch {
                tag: 0,
                amplitudes: v.clone(),
            },
            Branch {
                tag: 0,
                amplitudes: v.clone(),
            },
        ];
        assert!(PhaseTaggedState::new(layout, dup).is_err());
        let unnorm = vec![Branch {
            tag: 0,
            amplitudes: vec![c(0.6); 4],
        }];
        assert!(matches!(
            PhaseTaggedState::new(layout, unnorm),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn debug_dump_lists_amplitudes_as_re_im_pairs() {
        let layout = RegisterLayout::new(1, 1, 0).unwrap();
        let s = PhaseTaggedState::basis_state(layout, 2, 5);
        let dump = s.debug_dump();
        assert_eq!(dump["problem_qubits"], 1);
        let branch = dump["branches"]["5"].as_array().unwrap();
        assert_eq!(branch.len(), 4);
        assert_eq!(branch[2][0], 1.0);
        assert_eq!(branch[2][1], 0.0);
    }

    #[test]
    fn register_distribution_sums_to_one() {
        let s = mixed_problem_uniform_argument();
        let p = s.register_distribution(&RegisterSet::single(Register::Argument));
        assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        for x in p {
            assert_abs_diff_eq!(x, 0.25, epsilon = 1e-12);
        }
    }
}
