//! Exact dense simulation of multi-register states in the random-phase
//! representation of mixed states.

mod density;
mod info;
mod layout;
mod ops;
mod project;
mod state;

pub use density::DensityMatrix;
pub use info::{coherent_entanglement_entropy, mutual_information, mutual_information_of_joint};
pub use layout::{
    Register, RegisterLayout, RegisterSet, ALL_REGISTERS, AMPLITUDE_BUDGET, ENSEMBLE_BUDGET,
    MAX_DENSE_DIM,
};
pub use ops::{
    apply_sequence, apply_unitary, max_unitarity_deviation, sequence_matrix, QOp, UNITARY_TOL,
};
pub use project::{
    back_evolve_projector, force_outcome, measure, measure_with_rng, outcome_distribution, project,
    BinaryObservable, Measurement, MeasurementOutcome, Projector, MIN_OUTCOME_PROBABILITY,
};
pub use state::{Branch, PhaseTaggedState, NORM_TOL};
