//! Projectors, binary observables, and projective measurement.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::statevec::layout::{Register, RegisterLayout, RegisterSet, MAX_DENSE_DIM};
use crate::statevec::ops::{sequence_matrix, QOp};
use crate::statevec::state::PhaseTaggedState;

pub const PROJECTOR_TOL: f64 = 1e-12;
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// A Hermitian idempotent operator with a human-readable label.
#[derive(Clone, Debug)]
pub struct Projector {
    pub label: String,
    kind: ProjectorKind,
}

#[derive(Clone, Debug)]
enum ProjectorKind {
    /// Diagonal projector keeping the listed basis values of a register
    /// subset.
    BasisSubset {
        target: RegisterSet,
        values: BTreeSet<u64>,
    },
    /// Dense matrix on the full space (e.g. a back-evolved projector).
    Full { matrix: DMatrix<Complex64> },
}

impl Projector {
    /// Keeps the basis states whose packed value on `target` lies in
    /// `values`.
    pub fn basis_subset(
        label: impl Into<String>,
        target: RegisterSet,
        values: impl IntoIterator<Item = u64>,
    ) -> Self {
        Self {
            label: label.into(),
            kind: ProjectorKind::BasisSubset {
                target,
                values: values.into_iter().collect(),
            },
        }
    }

    /// Identity on the full space.
    pub fn identity(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            kind: ProjectorKind::BasisSubset {
                target: RegisterSet::new(vec![]),
                values: [0].into(),
            },
        }
    }

    /// Projector onto the span of orthonormal vectors on the full space.
    pub fn from_span(
        label: impl Into<String>,
        layout: RegisterLayout,
        vectors: &[Vec<Complex64>],
    ) -> Result<Self> {
        let n = layout.dim() as usize;
        let mut matrix = DMatrix::<Complex64>::zeros(n, n);
        for (vi, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::InvalidProjector(
                    "span vector has wrong dimension".into(),
                ));
            }
            for (wi, w) in vectors.iter().enumerate() {
                let ip: Complex64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
                let expect = if vi == wi { 1.0 } else { 0.0 };
                if (ip - Complex64::new(expect, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvalidProjector(
                        "span vectors not orthonormal".into(),
                    ));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    matrix[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Self::from_matrix(label, matrix)
    }

    /// Wraps a dense matrix after checking idempotence and Hermiticity.
    pub fn from_matrix(label: impl Into<String>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > PROJECTOR_TOL {
            return Err(Error::InvalidProjector(format!(
                "not Hermitian ({herm:.3e})"
            )));
        }
        let idem = (&matrix * &matrix - &matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if idem > PROJECTOR_TOL {
            return Err(Error::InvalidProjector(format!(
                "not idempotent ({idem:.3e})"
            )));
        }
        Ok(Self {
            label: label.into(),
            kind: ProjectorKind::Full { matrix },
        })
    }

    pub fn as_matrix(&self, layout: RegisterLayout) -> Result<DMatrix<Complex64>> {
        let dim = layout.dim();
        if dim > MAX_DENSE_DIM {
            return Err(Error::DenseTooLarge {
                dim,
                max: MAX_DENSE_DIM,
            });
        }
        let n = dim as usize;
        match &self.kind {
            ProjectorKind::Full { matrix } => Ok(matrix.clone()),
            ProjectorKind::BasisSubset { target, values } => {
                let mut m = DMatrix::<Complex64>::zeros(n, n);
                for i in 0..n as u64 {
                    if values.contains(&layout.pack(i, target)) {
                        m[(i as usize, i as usize)] = Complex64::ONE;
                    }
                }
                Ok(m)
            }
        }
    }

    pub(crate) fn apply_to_vector(&self, layout: RegisterLayout, v: &mut Vec<Complex64>) {
        match &self.kind {
            ProjectorKind::BasisSubset { target, values } => {
                for (i, z) in v.iter_mut().enumerate() {
                    if !values.contains(&layout.pack(i as u64, target)) {
                        *z = Complex64::ZERO;
                    }
                }
            }
            ProjectorKind::Full { matrix } => {
                let n = v.len();
                let mut out = vec![Complex64::ZERO; n];
                for (i, o) in out.iter_mut().enumerate() {
                    for j in 0..n {
                        let z = v[j];
                        if z != Complex64::ZERO {
                            *o += matrix[(i, j)] * z;
                        }
                    }
                }
                *v = out;
            }
        }
    }

    /// Complement projector (identity minus this one) for basis-subset
    /// projectors on a register subset.
    pub fn basis_complement(&self, layout: RegisterLayout) -> Result<Self> {
        match &self.kind {
            ProjectorKind::BasisSubset { target, values } => {
                let all = 0..layout.subset_dim(target);
                Ok(Self {
                    label: format!("not({})", self.label),
                    kind: ProjectorKind::BasisSubset {
                        target: target.clone(),
                        values: all.filter(|x| !values.contains(x)).collect(),
                    },
                })
            }
            ProjectorKind::Full { .. } => Err(Error::InvalidProjector(
                "complement needs a basis-subset projector".into(),
            )),
        }
    }
}

/// Projects and renormalizes; returns the probability mass the projector
/// captured. A probability below threshold is a wiring bug, not a state.
pub fn project(state: &PhaseTaggedState, p: &Projector) -> Result<(PhaseTaggedState, f64)> {
    let layout = state.layout();
    let mut out = state.clone();
    for b in out.branches_mut() {
        p.apply_to_vector(layout, &mut b.amplitudes);
    }
    let probability = out.total_norm_squared();
    if probability < MIN_OUTCOME_PROBABILITY {
        return Err(Error::ImpossibleOutcome { probability });
    }
    out.renormalize()?;
    Ok((out, probability))
}

/// Conjugates a projector by the algorithm's forward unitary:
/// P ↦ U† P U, so that projecting before U equals projecting after U and
/// evolving back.
pub fn back_evolve_projector(
    p: &Projector,
    forward: &[QOp],
    layout: RegisterLayout,
) -> Result<Projector> {
    let u = sequence_matrix(layout, forward)?;
    let m = p.as_matrix(layout)?;
    Projector::from_matrix(format!("back({})", p.label), u.adjoint() * m * u)
}

/// A two-outcome observable given by complementary basis-subset
/// projectors on one register.
#[derive(Clone, Debug)]
pub struct BinaryObservable {
    pub label: String,
    pub target: Register,
    /// Register values mapped to outcome 0; the complement maps to 1.
    outcome0: BTreeSet<u64>,
}

impl BinaryObservable {
    pub fn new(
        label: impl Into<String>,
        target: Register,
        outcome0: impl IntoIterator<Item = u64>,
    ) -> Self {
        Self {
            label: label.into(),
            target,
            outcome0: outcome0.into_iter().collect(),
        }
    }

    /// Observable reading qubit `qubit` (0 = leftmost) of a register:
    /// outcome is that bit.
    pub fn qubit(layout: RegisterLayout, target: Register, qubit: u32) -> Self {
        let width = layout.qubits(target);
        assert!(qubit < width);
        let outcome0 = (0..layout.register_dim(target))
            .filter(|x| (x >> (width - 1 - qubit)) & 1 == 0)
            .collect::<Vec<_>>();
        Self::new(format!("{target:?}[{qubit}]"), target, outcome0)
    }

    pub fn projector(&self, outcome: u8) -> Projector {
        let p0 = Projector::basis_subset(
            format!("{}={}", self.label, outcome),
            RegisterSet::single(self.target),
            self.outcome0.iter().copied(),
        );
        p0
    }

    fn keeps(&self, value: u64, outcome: u8) -> bool {
        self.outcome0.contains(&value) == (outcome == 0)
    }
}

/// What to measure: a full joint basis readout of a register subset or a
/// binary observable.
#[derive(Clone, Debug)]
pub enum Measurement {
    FullRegister(RegisterSet),
    Binary(BinaryObservable),
}

/// Result of a projective measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    /// Packed basis value for full-register readout, or 0/1 for a binary
    /// observable.
    pub outcome: u64,
    pub probability: f64,
    pub post_state: PhaseTaggedState,
}

/// Born distribution of a measurement, as (outcome, probability) pairs in
/// ascending outcome order with zero-probability outcomes removed.
pub fn outcome_distribution(state: &PhaseTaggedState, m: &Measurement) -> Vec<(u64, f64)> {
    match m {
        Measurement::FullRegister(regs) => state
            .register_distribution(regs)
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(i, p)| (i as u64, p))
            .collect(),
        Measurement::Binary(obs) => {
            let regs = RegisterSet::single(obs.target);
            let per_value = state.register_distribution(&regs);
            let mut p = [0.0f64; 2];
            for (value, w) in per_value.into_iter().enumerate() {
                let o = usize::from(!obs.keeps(value as u64, 0));
                p[o] += w;
            }
            (0..2)
                .filter(|&o| p[o] > 0.0)
                .map(|o| (o as u64, p[o]))
                .collect()
        }
    }
}

/// Samples an outcome with Born probabilities using the explicit seed and
/// returns the renormalized post-measurement state.
pub fn measure(state: &PhaseTaggedState, m: &Measurement, seed: u64) -> Result<MeasurementOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_with_rng(state, m, &mut rng)
}

pub fn measure_with_rng(
    state: &PhaseTaggedState,
    m: &Measurement,
    rng: &mut impl Rng,
) -> Result<MeasurementOutcome> {
    let dist = outcome_distribution(state, m);
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    let mut chosen = dist
        .last()
        .map(|(o, _)| *o)
        .ok_or(Error::ImpossibleOutcome { probability: 0.0 })?;
    for &(o, p) in &dist {
        acc += p;
        if draw < acc {
            chosen = o;
            break;
        }
    }
    force_outcome(state, m, chosen)
}

/// Post-selects a specific outcome, returning its probability alongside
/// the collapsed state.
pub fn force_outcome(
    state: &PhaseTaggedState,
    m: &Measurement,
    outcome: u64,
) -> Result<MeasurementOutcome> {
    let projector = match m {
        Measurement::FullRegister(regs) => Projector::basis_subset(
            format!("{:?}={outcome}", regs.registers()),
            regs.clone(),
            [outcome],
        ),
        Measurement::Binary(obs) => {
            let p0 = obs.projector(0);
            if outcome == 0 {
                p0
            } else {
                p0.basis_complement(state.layout())?
            }
        }
    };
    let (post_state, probability) = project(state, &projector)?;
    Ok(MeasurementOutcome {
        outcome,
        probability,
        post_state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::state::Branch;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mixed_state() -> PhaseTaggedState {
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
    fn identity_projection_keeps_everything() {
        let s = mixed_state();
        let (t, p) = project(&s, &Projector::identity("id")).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.density_distance(&t).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn problem_register_projection_has_quarter_probability() {
        let s = mixed_state();
        let p01 = Projector::basis_subset("B=01", RegisterSet::single(Register::Problem), [0b01]);
        let (t, p) = project(&s, &p01).unwrap();
        assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        assert_eq!(t.branches().len(), 1);
        assert_abs_diff_eq!(t.total_norm_squared(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn impossible_projection_is_an_error() {
        let layout = RegisterLayout::new(2, 2, 0).unwrap();
        let s = PhaseTaggedState::basis_state(layout, 0, 0);
        let p = Projector::basis_subset("B=11", RegisterSet::single(Register::Problem), [3]);
        assert!(matches!(
            project(&s, &p),
            Err(Error::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn full_measurement_on_mixture_is_uniform() {
        let s = mixed_state();
        let dist = outcome_distribution(
            &s,
            &Measurement::FullRegister(RegisterSet::single(Register::Problem)),
        );
        assert_eq!(dist.len(), 4);
        for (_, p) in dist {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn qubit_observable_splits_register_values() {
        let layout = RegisterLayout::new(2, 2, 0).unwrap();
        let a0 = BinaryObservable::qubit(layout, Register::Argument, 0);
        assert!(a0.keeps(0b00, 0));
        assert!(a0.keeps(0b01, 0));
        assert!(a0.keeps(0b10, 1));
        assert!(a0.keeps(0b11, 1));
    }

    #[test]
    fn measurement_is_deterministic_per_seed() {
        let s = mixed_state();
        let m = Measurement::FullRegister(RegisterSet::single(Register::Problem));
        let a = measure(&s, &m, 42).unwrap();
        let b = measure(&s, &m, 42).unwrap();
        assert_eq!(a.outcome, b.outcome);
    }

    #[test]
    fn back_evolution_identity_round_trip() {
        let layout = RegisterLayout::new(2, 2, 0).unwrap();
        let p = Projector::basis_subset("B=01", RegisterSet::single(Register::Problem), [1]);
        let back = back_evolve_projector(&p, &[], layout).unwrap();
        let direct = p.as_matrix(layout).unwrap();
        assert!((back.as_matrix(layout).unwrap() - direct).norm() < 1e-12);
    }
}
