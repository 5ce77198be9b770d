//! Exact simulation of two-register oracle algorithms in the random-phase
//! representation of mixed states, with the query-count analysis that
//! compares the quantum evaluation count against a classical solver that
//! starts from a good half table of advance knowledge.
//!
//! The crate is organized around six pieces:
//!
//! - [`statevec`]: phase-tagged ensembles, projectors, measurement,
//!   entropies, and correlation metrics;
//! - [`problems`]: the built-in function-table families, their oracle
//!   unitaries, and initial-state preparation;
//! - [`runner`]: end-to-end algorithm execution in both measurement
//!   orders, with stage-by-stage traces;
//! - [`fiftyrule`]: half-table enumeration, exact minimax query counts,
//!   and entropy accounting of back-evolved projections;
//! - [`histories`]: classical computation histories, their span
//!   reconstruction of the evaluation stage, and basis-rotation synthesis;
//! - [`verify`]/[`report`]: the check suites and report formats behind the
//!   command-line tool.

pub mod bits;
pub mod error;
pub mod fiftyrule;
pub mod histories;
pub mod problems;
pub mod report;
pub mod runner;
pub mod statevec;
pub mod verify;

pub use bits::BitString;
pub use error::{Error, Result};
