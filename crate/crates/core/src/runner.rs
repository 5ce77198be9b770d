//! End-to-end execution of the extended algorithms, in both measurement
//! orders, with stage-by-stage traces.
//!
//! The problem register is measured either up front (with the state kept
//! relativized to the solver, so it stays an ensemble) or at the very end;
//! the two orders leave identical stage states and identical joint outcome
//! statistics, which `deferred_equivalence` checks analytically.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::problems::{gf2, FamilyKind, ProblemFamily, ValuePreparation};
use crate::statevec::{
    apply_unitary, force_outcome, outcome_distribution, Measurement, PhaseTaggedState, QOp,
    Register, RegisterSet,
};

/// Largest amplitude count for which full states are stored in traces.
const STAGE_STATE_BUDGET: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementOrder {
    /// Problem register measured before the unitary part.
    BobFirst,
    /// Problem register measured after the solution readout.
    BobLast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageLabel {
    Initial,
    AfterPermutation,
    AfterOracle,
    AfterRotation,
    AfterProblemMeasurement,
    AfterArgumentMeasurement,
}

/// One recorded stage: the state if it fits the storage budget, plus the
/// summaries the trace export needs either way.
#[derive(Clone, Debug)]
pub struct StageRecord {
    pub label: StageLabel,
    pub state: Option<PhaseTaggedState>,
    pub problem_entropy_bits: f64,
    pub norm_squared: f64,
}

#[derive(Clone, Debug)]
pub struct OutcomeRecord {
    pub label: String,
    pub value: BitString,
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct AlgorithmTrace {
    pub family: String,
    pub order: MeasurementOrder,
    pub stages: Vec<StageRecord>,
    pub outcomes: Vec<OutcomeRecord>,
    pub oracle_evaluations: u32,
    pub success: Option<bool>,
    pub success_probability: Option<f64>,
}

impl AlgorithmTrace {
    fn new(family: &ProblemFamily, order: MeasurementOrder) -> Self {
        Self {
            family: family.name.clone(),
            order,
            stages: Vec::new(),
            outcomes: Vec::new(),
            oracle_evaluations: 0,
            success: None,
            success_probability: None,
        }
    }

    fn record(&mut self, label: StageLabel, state: &PhaseTaggedState) {
        let amplitudes = state.layout().dim() * state.branches().len() as u64;
        self.stages.push(StageRecord {
            label,
            state: (amplitudes <= STAGE_STATE_BUDGET).then(|| state.clone()),
            problem_entropy_bits: state.basis_entropy(&RegisterSet::single(Register::Problem)),
            norm_squared: state.total_norm_squared(),
        });
    }

    fn record_summary(&mut self, label: StageLabel, problem_entropy_bits: f64) {
        self.stages.push(StageRecord {
            label,
            state: None,
            problem_entropy_bits,
            norm_squared: 1.0,
        });
    }

    pub fn stage(&self, label: StageLabel) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.label == label)
    }

    pub fn stage_state(&self, label: StageLabel) -> Option<&PhaseTaggedState> {
        self.stage(label).and_then(|s| s.state.as_ref())
    }

    pub fn outcome(&self, label: &str) -> Option<&OutcomeRecord> {
        self.outcomes.iter().find(|o| o.label == label)
    }

    /// JSON export: stage labels, per-stage problem-register entropy,
    /// outcomes, and evaluation counts.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Stage<'a> {
            label: &'a StageLabel,
            problem_entropy_bits: f64,
            norm_squared: f64,
        }
        #[derive(Serialize)]
        struct Outcome<'a> {
            label: &'a str,
            value: String,
            probability: f64,
        }
        #[derive(Serialize)]
        struct Dump<'a> {
            family: &'a str,
            order: &'a MeasurementOrder,
            stages: Vec<Stage<'a>>,
            outcomes: Vec<Outcome<'a>>,
            oracle_evaluations: u32,
            success: Option<bool>,
            success_probability: Option<f64>,
        }
        serde_json::to_value(Dump {
            family: &self.family,
            order: &self.order,
            stages: self
                .stages
                .iter()
                .map(|s| Stage {
                    label: &s.label,
                    problem_entropy_bits: s.problem_entropy_bits,
                    norm_squared: s.norm_squared,
                })
                .collect(),
            outcomes: self
                .outcomes
                .iter()
                .map(|o| Outcome {
                    label: &o.label,
                    value: o.value.to_string(),
                    probability: o.probability,
                })
                .collect(),
            oracle_evaluations: self.oracle_evaluations,
            success: self.success,
            success_probability: self.success_probability,
        })
        .expect("trace serializes")
    }
}

/// Iteration schedule for the search flow.
#[derive(Clone, Copy, Debug)]
pub struct GroverSchedule {
    pub n: u32,
    pub iterations: u32,
}

impl GroverSchedule {
    /// One iteration solves n = 2 with certainty; beyond that the optimal
    /// count is floor(π/4 · 2^(n/2)).
    pub fn default_for(n: u32) -> Self {
        let iterations = if n == 2 {
            1
        } else {
            (std::f64::consts::FRAC_PI_4 * (2.0f64).powf(n as f64 / 2.0)).floor() as u32
        };
        Self {
            n,
            iterations: iterations.max(1),
        }
    }

    /// Closed-form success probability after k iterations:
    /// sin²((2k+1)·arcsin(2^(−n/2))).
    pub fn closed_form_success(n: u32, k: u32) -> f64 {
        let theta = (2.0f64).powf(-(n as f64) / 2.0).asin();
        ((2 * k + 1) as f64 * theta).sin().powi(2)
    }
}

/// Options for one search run.
#[derive(Clone, Debug)]
pub struct GroverRun {
    pub n: u32,
    /// Forced problem-measurement outcome (the randomly selected value);
    /// sampled from the weights when absent.
    pub bob_choice: Option<BitString>,
    pub order: MeasurementOrder,
    /// Iteration count override; defaults to the schedule for n.
    pub iterations: Option<u32>,
    /// Optional permutation of problem values applied after the problem
    /// measurement (the setter's basis permutation). Identity when absent.
    pub problem_permutation: Option<Vec<u64>>,
    pub seed: u64,
}

impl GroverRun {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            bob_choice: None,
            order: MeasurementOrder::BobFirst,
            iterations: None,
            problem_permutation: None,
            seed: 0,
        }
    }
}

fn choose_table(
    family: &ProblemFamily,
    choice: Option<BitString>,
    rng: &mut impl Rng,
) -> Result<usize> {
    match choice {
        Some(b) => family
            .table_index_of(b)
            .ok_or_else(|| Error::InvalidFamily(format!("{b} is not in family {}", family.name))),
        None => {
            let draw: f64 = rng.gen();
            let mut acc = 0.0;
            for (i, w) in family.weights().iter().enumerate() {
                acc += w * w;
                if draw < acc {
                    return Ok(i);
                }
            }
            Ok(family.len() - 1)
        }
    }
}

fn ensemble_fits(family: &ProblemFamily) -> bool {
    family.layout().dim() * family.len() as u64 <= STAGE_STATE_BUDGET
}

/// Runs the search flow. For n = 2 the argument readout equals the
/// problem value with certainty; for larger n the trace records the
/// closed-form-matching success probability instead.
pub fn run_grover(run: &GroverRun) -> Result<AlgorithmTrace> {
    let family = crate::problems::build_family(FamilyKind::Grover, run.n, None)?;
    let layout = family.layout();
    let iterations = run
        .iterations
        .unwrap_or(GroverSchedule::default_for(run.n).iterations);
    if iterations == 0 {
        return Err(Error::InvalidFamily(
            "iteration count must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let mut trace = AlgorithmTrace::new(&family, run.order);

    let identity: Vec<u64> = (0..family.len() as u64).collect();
    let permutation = run.problem_permutation.as_ref().unwrap_or(&identity);
    if permutation.len() != family.len() {
        return Err(Error::InvalidFamily(
            "problem permutation has wrong length".into(),
        ));
    }
    let u_b = QOp::register_permutation(layout, Register::Problem, permutation)?;
    let oracle = family.oracle_unitary();
    let diffusion = QOp::InvertAboutMean {
        target: Register::Argument,
    };

    let relativized = ensemble_fits(&family);
    if !relativized && run.order == MeasurementOrder::BobLast {
        return Err(Error::MemoryBudget {
            amplitudes: layout.dim() * family.len() as u64,
            budget: STAGE_STATE_BUDGET,
        });
    }
    let selected = choose_table(&family, run.bob_choice, &mut rng)?;
    let selected_suffix = family.table(selected).suffix;
    let content = BitString::new(permutation[selected], run.n);

    let mut state = if relativized {
        family.prepare_initial(ValuePreparation::MinusAll)?
    } else {
        family.prepare_selected(selected)?
    };
    if relativized {
        trace.record(StageLabel::Initial, &state);
    } else {
        // Uniform weights: the unconditioned initial entropy is log2 of
        // the table count even though only the selected branch is stored.
        trace.record_summary(StageLabel::Initial, (family.len() as f64).log2());
    }

    if run.order == MeasurementOrder::BobFirst {
        // The measurement happens now; relativized to the solver the
        // ensemble is unchanged even though the outcome is already fixed.
        trace.outcomes.push(OutcomeRecord {
            label: "problem".into(),
            value: selected_suffix,
            probability: family.weights()[selected].powi(2),
        });
        if relativized {
            trace.record(StageLabel::AfterProblemMeasurement, &state);
        } else {
            trace.record_summary(StageLabel::AfterProblemMeasurement, 0.0);
        }
    }

    state = apply_unitary(&state, &u_b);
    trace.record(StageLabel::AfterPermutation, &state);
    for _ in 0..iterations {
        state = apply_unitary(&state, &oracle);
        trace.oracle_evaluations += 1;
        trace.record(StageLabel::AfterOracle, &state);
        state = apply_unitary(&state, &diffusion);
        trace.record(StageLabel::AfterRotation, &state);
    }

    // Condition on the problem content to read off the solver's
    // statistics for this run.
    let conditional = if relativized {
        force_outcome(
            &state,
            &Measurement::FullRegister(RegisterSet::single(Register::Problem)),
            content.value(),
        )?
        .post_state
    } else {
        state.clone()
    };
    let argument_dist = conditional.register_distribution(&RegisterSet::single(Register::Argument));
    let success_probability = argument_dist[content.value() as usize];
    trace.success_probability = Some(success_probability);

    match run.order {
        MeasurementOrder::BobFirst => {
            let alice = crate::statevec::measure_with_rng(
                &conditional,
                &Measurement::FullRegister(RegisterSet::single(Register::Argument)),
                &mut rng,
            )?;
            trace.outcomes.push(OutcomeRecord {
                label: "argument".into(),
                value: BitString::new(alice.outcome, run.n),
                probability: alice.probability,
            });
            trace.record(StageLabel::AfterArgumentMeasurement, &alice.post_state);
            trace.success = Some(alice.outcome == content.value());
        }
        MeasurementOrder::BobLast => {
            let alice = crate::statevec::measure_with_rng(
                &state,
                &Measurement::FullRegister(RegisterSet::single(Register::Argument)),
                &mut rng,
            )?;
            trace.outcomes.push(OutcomeRecord {
                label: "argument".into(),
                value: BitString::new(alice.outcome, run.n),
                probability: alice.probability,
            });
            trace.record(StageLabel::AfterArgumentMeasurement, &alice.post_state);
            let bob = crate::statevec::measure_with_rng(
                &alice.post_state,
                &Measurement::FullRegister(RegisterSet::single(Register::Problem)),
                &mut rng,
            )?;
            trace.outcomes.push(OutcomeRecord {
                label: "problem".into(),
                value: BitString::new(bob.outcome, run.n),
                probability: bob.probability,
            });
            trace.record(StageLabel::AfterProblemMeasurement, &bob.post_state);
            trace.success = Some(alice.outcome == bob.outcome);
        }
    }
    Ok(trace)
}

/// Success probability after each iteration count 1..=k_max, from the
/// simulated flow with the problem register held at zero.
pub fn grover_success_probabilities(n: u32, k_max: u32) -> Result<Vec<f64>> {
    let family = crate::problems::build_family(FamilyKind::Grover, n, None)?;
    let oracle = family.oracle_unitary();
    let diffusion = QOp::InvertAboutMean {
        target: Register::Argument,
    };
    let mut state = family.prepare_selected(0)?;
    let mut out = Vec::with_capacity(k_max as usize);
    for _ in 0..k_max {
        state = apply_unitary(&state, &oracle);
        state = apply_unitary(&state, &diffusion);
        out.push(state.register_distribution(&RegisterSet::single(Register::Argument))[0]);
    }
    Ok(out)
}

/// Runs the constant-vs-balanced flow: one evaluation, Hadamard on the
/// argument register, then both registers read out. The argument reads
/// all zeroes exactly when the selected table is constant.
pub fn run_dj(n: u32, bob_choice: Option<BitString>, seed: u64) -> Result<AlgorithmTrace> {
    let family = crate::problems::build_family(FamilyKind::DeutschJozsa, n, None)?;
    run_evaluate_and_rotate(
        &family,
        bob_choice,
        seed,
        |trace, family, selected, argument| {
            let constant = argument.value() == 0;
            let label = if constant { "constant" } else { "balanced" };
            trace.success = Some(label == family.solution(selected));
        },
    )
}

/// Runs the permutation-family flow and returns the partition index the
/// argument readout reveals.
pub fn run_perm(bob_choice: Option<BitString>, seed: u64) -> Result<(u8, AlgorithmTrace)> {
    let family = crate::problems::build_family(FamilyKind::Permutation, 2, None)?;
    let mut index = 0u8;
    let trace = run_evaluate_and_rotate(
        &family,
        bob_choice,
        seed,
        |trace, family, selected, argument| {
            index = match argument.value() {
                0b01 => 1,
                0b10 => 2,
                0b11 => 3,
                _ => 0,
            };
            trace.success = Some(index.to_string() == family.solution(selected));
        },
    )?;
    if index == 0 {
        return Err(Error::Inconsistent(
            "argument readout 00 in the permutation flow".into(),
        ));
    }
    Ok((index, trace))
}

/// Shared single-evaluation skeleton: prepare, evaluate, Hadamard on the
/// argument register, read the problem register then the argument
/// register. Used by the constant-vs-balanced and permutation flows and by
/// custom families.
pub fn run_evaluate_and_rotate(
    family: &ProblemFamily,
    bob_choice: Option<BitString>,
    seed: u64,
    mut classify: impl FnMut(&mut AlgorithmTrace, &ProblemFamily, usize, BitString),
) -> Result<AlgorithmTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = AlgorithmTrace::new(family, MeasurementOrder::BobLast);
    let relativized = ensemble_fits(family);
    let selected = choose_table(family, bob_choice, &mut rng)?;
    let suffix = family.table(selected).suffix;

    let mut state = if relativized {
        family.prepare_initial(family.value_preparation())?
    } else {
        family.prepare_selected(selected)?
    };
    if relativized {
        trace.record(StageLabel::Initial, &state);
    } else {
        trace.record_summary(StageLabel::Initial, entropy_of_weights(family.weights()));
    }

    state = apply_unitary(&state, &family.oracle_unitary());
    trace.oracle_evaluations += 1;
    trace.record(StageLabel::AfterOracle, &state);
    state = apply_unitary(
        &state,
        &QOp::Hadamard {
            target: Register::Argument,
        },
    );
    trace.record(StageLabel::AfterRotation, &state);

    let conditional = if relativized {
        let bob = force_outcome(
            &state,
            &Measurement::FullRegister(RegisterSet::single(Register::Problem)),
            suffix.value(),
        )?;
        trace.outcomes.push(OutcomeRecord {
            label: "problem".into(),
            value: suffix,
            probability: bob.probability,
        });
        trace.record(StageLabel::AfterProblemMeasurement, &bob.post_state);
        bob.post_state
    } else {
        trace.outcomes.push(OutcomeRecord {
            label: "problem".into(),
            value: suffix,
            probability: family.weights()[selected].powi(2),
        });
        trace.record(StageLabel::AfterProblemMeasurement, &state);
        state
    };

    let alice = crate::statevec::measure_with_rng(
        &conditional,
        &Measurement::FullRegister(RegisterSet::single(Register::Argument)),
        &mut rng,
    )?;
    let argument = BitString::new(alice.outcome, family.n);
    trace.outcomes.push(OutcomeRecord {
        label: "argument".into(),
        value: argument,
        probability: alice.probability,
    });
    trace.record(StageLabel::AfterArgumentMeasurement, &alice.post_state);
    trace.success_probability = Some(alice.probability);
    classify(&mut trace, family, selected, argument);
    Ok(trace)
}

fn entropy_of_weights(weights: &[f64]) -> f64 {
    weights
        .iter()
        .map(|w| w * w)
        .filter(|&p| p > 1e-15)
        .map(|p| -p * p.log2())
        .sum()
}

/// Result of the period-finding run.
#[derive(Clone, Debug)]
pub struct SimonOutcome {
    pub period: BitString,
    pub evaluations: u32,
    pub samples: Vec<BitString>,
    pub traces: Vec<AlgorithmTrace>,
}

/// Iterates the right part of the period-finding flow (argument and value
/// registers re-prepared, one evaluation, argument readout) until the
/// collected strings have GF(2) rank n−1, then solves for the period.
pub fn run_simon(
    n: u32,
    bob_choice: Option<BitString>,
    seed: u64,
    max_iterations: u32,
) -> Result<SimonOutcome> {
    let family = crate::problems::build_family(FamilyKind::Simon, n, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let relativized = ensemble_fits(&family);
    let selected = choose_table(&family, bob_choice, &mut rng)?;
    let suffix = family.table(selected).suffix;
    let oracle = family.oracle_unitary();

    let mut samples: Vec<BitString> = Vec::new();
    let mut traces = Vec::new();
    for iteration in 0..max_iterations {
        let mut trace = AlgorithmTrace::new(&family, MeasurementOrder::BobFirst);
        let mut state = if relativized && iteration == 0 {
            family.prepare_initial(ValuePreparation::AllZeros)?
        } else {
            family.prepare_selected(selected)?
        };
        trace.record(StageLabel::Initial, &state);
        state = apply_unitary(&state, &oracle);
        trace.oracle_evaluations = 1;
        trace.record(StageLabel::AfterOracle, &state);
        state = apply_unitary(
            &state,
            &QOp::Hadamard {
                target: Register::Argument,
            },
        );
        trace.record(StageLabel::AfterRotation, &state);

        if relativized && iteration == 0 {
            let bob = force_outcome(
                &state,
                &Measurement::FullRegister(RegisterSet::single(Register::Problem)),
                suffix.value(),
            )?;
            trace.outcomes.push(OutcomeRecord {
                label: "problem".into(),
                value: suffix,
                probability: bob.probability,
            });
            trace.record(StageLabel::AfterProblemMeasurement, &bob.post_state);
            state = bob.post_state;
        }

        let alice = crate::statevec::measure_with_rng(
            &state,
            &Measurement::FullRegister(RegisterSet::single(Register::Argument)),
            &mut rng,
        )?;
        let s = BitString::new(alice.outcome, n);
        trace.outcomes.push(OutcomeRecord {
            label: "argument".into(),
            value: s,
            probability: alice.probability,
        });
        trace.record(StageLabel::AfterArgumentMeasurement, &alice.post_state);
        samples.push(s);
        traces.push(trace);

        if gf2::rank(&samples, n) == n - 1 {
            let basis = gf2::nullspace(&samples, n)?;
            let period = *basis.first().ok_or_else(|| {
                Error::Inconsistent("rank n-1 system with empty nullspace".into())
            })?;
            // One oracle call per iteration.
            let evaluations = samples.len() as u32;
            return Ok(SimonOutcome {
                period,
                evaluations,
                samples,
                traces,
            });
        }
    }
    Err(Error::IterationLimit {
        limit: max_iterations,
        needed: n - 1,
    })
}

/// Analytic joint outcome distribution report for the two measurement
/// orders.
#[derive(Clone, Debug)]
pub struct DeferredEquivalenceReport {
    pub joint_bob_first: BTreeMap<(BitString, BitString), f64>,
    pub joint_bob_last: BTreeMap<(BitString, BitString), f64>,
    pub max_difference: f64,
    pub equivalent: bool,
    pub sampled_trials: u32,
}

/// Compares the joint (selected problem value, argument readout)
/// distribution when the problem register is measured first against the
/// one when it is measured last. Probabilities are computed analytically;
/// `trials` seeded sampled runs are executed as an execution smoke test.
///
/// In both orders the reported problem value is the randomly selected one,
/// i.e. the pre-permutation value; the permutation then fixes what the
/// register actually contains.
pub fn deferred_equivalence(
    family: &ProblemFamily,
    problem_permutation: Option<&[u64]>,
    trials: u32,
    seed: u64,
) -> Result<DeferredEquivalenceReport> {
    if trials == 0 {
        return Err(Error::InvalidFamily(
            "deferred_equivalence needs trials >= 1".into(),
        ));
    }
    if family.kind != FamilyKind::Grover || family.n != 2 {
        return Err(Error::UnsupportedFamily(
            "deferred_equivalence is defined for the n = 2 search family".into(),
        ));
    }
    let layout = family.layout();
    let identity: Vec<u64> = (0..family.len() as u64).collect();
    let permutation: Vec<u64> = problem_permutation.map(|p| p.to_vec()).unwrap_or(identity);
    let inverse: BTreeMap<u64, u64> = permutation
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u64))
        .collect();
    if inverse.len() != permutation.len() {
        return Err(Error::InvalidFamily(
            "problem permutation is not a bijection".into(),
        ));
    }

    let u_b = QOp::register_permutation(layout, Register::Problem, &permutation)?;
    let oracle = family.oracle_unitary();
    let diffusion = QOp::InvertAboutMean {
        target: Register::Argument,
    };
    let ops = [u_b, oracle, diffusion];

    let initial = family.prepare_initial(ValuePreparation::MinusAll)?;
    let final_state = crate::statevec::apply_sequence(&initial, &ops);

    // Problem measured first: P(selected) from the initial ensemble,
    // P(argument | selected) from the final state conditioned on the
    // permuted content.
    let mut joint_bob_first = BTreeMap::new();
    for (i, table) in family.tables().iter().enumerate() {
        let p_b = family.weights()[i].powi(2);
        let content = permutation[i];
        let conditional = force_outcome(
            &final_state,
            &Measurement::FullRegister(RegisterSet::single(Register::Problem)),
            content,
        )?;
        let dist = conditional
            .post_state
            .register_distribution(&RegisterSet::single(Register::Argument));
        for (a, p_a) in dist.into_iter().enumerate() {
            if p_a > 0.0 {
                joint_bob_first.insert(
                    (table.suffix, BitString::new(a as u64, family.n)),
                    p_b * p_a,
                );
            }
        }
    }

    // Problem measured last: the joint readout of the final ensemble,
    // with the content mapped back to the selected value.
    let mut joint_bob_last = BTreeMap::new();
    let dist = outcome_distribution(
        &final_state,
        &Measurement::FullRegister(RegisterSet::new(vec![
            Register::Problem,
            Register::Argument,
        ])),
    );
    let a_dim = layout.register_dim(Register::Argument);
    for (packed, p) in dist {
        let content = packed / a_dim;
        let a = packed % a_dim;
        let selected = *inverse
            .get(&content)
            .ok_or_else(|| Error::Inconsistent(format!("content {content} has no preimage")))?;
        let key = (
            family.table(selected as usize).suffix,
            BitString::new(a, family.n),
        );
        *joint_bob_last.entry(key).or_insert(0.0) += p;
    }

    let mut max_difference = 0.0f64;
    for key in joint_bob_first.keys().chain(joint_bob_last.keys()) {
        let x = joint_bob_first.get(key).copied().unwrap_or(0.0);
        let y = joint_bob_last.get(key).copied().unwrap_or(0.0);
        max_difference = max_difference.max((x - y).abs());
    }

    for t in 0..trials {
        let mut run = GroverRun::new(family.n);
        run.seed = seed.wrapping_add(t as u64);
        run.problem_permutation = Some(permutation.clone());
        run.order = MeasurementOrder::BobFirst;
        run_grover(&run)?;
        run.order = MeasurementOrder::BobLast;
        run_grover(&run)?;
    }

    Ok(DeferredEquivalenceReport {
        joint_bob_first,
        joint_bob_last,
        max_difference,
        equivalent: max_difference <= 1e-12,
        sampled_trials: trials,
    })
}
