//! Classical computation histories in quantum notation: the sharp-state
//! before/after pairs a half table of advance knowledge generates, their
//! span reconstruction of the function-evaluation stage, and the synthesis
//! of the final argument-basis rotation by derivative-free optimization.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::fiftyrule::{enumerate_good_half_tables, HalfTable, KnowledgeState};
use crate::problems::{FamilyKind, ProblemFamily};
use crate::statevec::{mutual_information_of_joint, Register};

/// One classical computation: a sharp basis state, one function
/// evaluation, and the resulting sharp basis state, carrying the phase tag
/// of the consistent table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationHistory {
    /// Phase tag (the table index of the consistent b).
    pub tag: u32,
    /// The consistent problem value.
    pub suffix: BitString,
    /// The queried argument.
    pub argument: u64,
    /// Initial content of the value register.
    pub value_in: u64,
    /// Flat basis index of the initial sharp state.
    pub initial_index: u64,
    /// Flat basis index after the evaluation.
    pub final_index: u64,
}

/// The distinct histories a half table generates, with multiplicities for
/// histories originated more than once.
#[derive(Clone, Debug)]
pub struct HistorySet {
    pub half_table: HalfTable,
    pub histories: Vec<ComputationHistory>,
    pub multiplicities: BTreeMap<(u32, u64), u32>,
}

impl HistorySet {
    /// JSON dump: one entry per distinct history.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .histories
            .iter()
            .map(|h| {
                serde_json::json!({
                    "tag": h.tag,
                    "b": h.suffix.to_string(),
                    "a": h.argument,
                    "v_init": h.value_in,
                    "initial_index": h.initial_index,
                    "final_index": h.final_index,
                    "multiplicity": self.multiplicities[&(h.tag, h.initial_index)],
                })
            })
            .collect::<Vec<_>>())
    }
}

/// Histories for one query choice: one per table consistent with the half
/// table. The queried argument must lie outside the half table.
pub fn enumerate_histories(
    family: &ProblemFamily,
    half: &HalfTable,
    argument: u64,
    value_in: u64,
) -> Result<Vec<ComputationHistory>> {
    if half.contains_argument(argument) {
        return Err(Error::QueryInsideHalfTable {
            argument: BitString::new(argument, family.n).to_string(),
        });
    }
    let layout = family.layout();
    let knowledge = KnowledgeState::from_half_table(family, half)?;
    Ok(knowledge
        .candidates
        .into_iter()
        .map(|i| {
            let table = family.table(i);
            let b = table.suffix.value();
            let initial_index = layout.index(b, argument, value_in);
            let final_index = layout.index(b, argument, value_in ^ table.value(argument));
            ComputationHistory {
                tag: i as u32,
                suffix: table.suffix,
                argument,
                value_in,
                initial_index,
                final_index,
            }
        })
        .collect())
}

/// All histories the half table generates: every outside query, every
/// value-register basis state, every consistent table.
pub fn enumerate_all_histories(family: &ProblemFamily, half: &HalfTable) -> Result<HistorySet> {
    let layout = family.layout();
    let v_dim = layout.register_dim(Register::Value);
    let mut histories: Vec<ComputationHistory> = Vec::new();
    let mut multiplicities: BTreeMap<(u32, u64), u32> = BTreeMap::new();
    for argument in half.outside_arguments(family.argument_count()) {
        for v in 0..v_dim {
            for h in enumerate_histories(family, half, argument, v)? {
                let key = (h.tag, h.initial_index);
                let count = multiplicities.entry(key).or_insert(0);
                *count += 1;
                if *count == 1 {
                    histories.push(h);
                }
            }
        }
    }
    Ok(HistorySet {
        half_table: half.clone(),
        histories,
        multiplicities,
    })
}

/// Result of reconstructing the evaluation stage from a half table's
/// histories.
#[derive(Clone, Debug)]
pub struct SpanReconstruction {
    /// Solved coefficient per history, aligned with `histories`.
    pub coefficients: Vec<Complex64>,
    pub histories: Vec<ComputationHistory>,
    /// Distance between the coefficient combination of initial sharp
    /// states and the restricted initial state.
    pub residual: f64,
    /// Distance between the coefficient combination of final sharp states
    /// and the oracle image of the restricted initial state.
    pub linearity_residual: f64,
}

/// Restriction of the prepared initial state to the branches consistent
/// with the half table and to the argument columns outside it, as
/// per-branch amplitude maps keyed by phase tag.
fn restricted_initial(
    family: &ProblemFamily,
    half: &HalfTable,
) -> Result<BTreeMap<u32, Vec<Complex64>>> {
    let layout = family.layout();
    let knowledge = KnowledgeState::from_half_table(family, half)?;
    let initial = family.prepare_initial(family.value_preparation())?;
    let outside: Vec<u64> = half.outside_arguments(family.argument_count());
    let mut out = BTreeMap::new();
    for &i in &knowledge.candidates {
        let branch = initial
            .branch(i as u32)
            .ok_or_else(|| Error::Inconsistent("missing branch for candidate".into()))?;
        let mut v = vec![Complex64::ZERO; layout.dim() as usize];
        for (idx, z) in branch.amplitudes.iter().enumerate() {
            let (_, a, _) = layout.split(idx as u64);
            if outside.contains(&a) {
                v[idx] = *z;
            }
        }
        out.insert(i as u32, v);
    }
    Ok(out)
}

/// Solves for the history coefficients that rebuild the restricted
/// initial state, then checks by linearity that the same coefficients on
/// the final sharp states rebuild the oracle image of that restriction.
///
/// History initial states are distinct basis kets, so the least-squares
/// coefficients are direct inner products; the residual is whatever part
/// of the restriction the histories cannot reach.
pub fn span_reconstruction(family: &ProblemFamily, half: &HalfTable) -> Result<SpanReconstruction> {
    let layout = family.layout();
    let set = enumerate_all_histories(family, half)?;
    let target = restricted_initial(family, half)?;

    let mut coefficients = Vec::with_capacity(set.histories.len());
    let mut covered = 0.0f64;
    for h in &set.histories {
        let c = target
            .get(&h.tag)
            .map(|v| v[h.initial_index as usize])
            .unwrap_or(Complex64::ZERO);
        covered += c.norm_sqr();
        coefficients.push(c);
    }
    let total: f64 = target.values().flatten().map(|z| z.norm_sqr()).sum();
    let residual = (total - covered).max(0.0).sqrt();

    // Oracle image of the restriction, branch by branch; subtracting the
    // coefficient combination of final sharp states must leave nothing.
    let oracle = family.oracle_unitary();
    let mut image = BTreeMap::new();
    for (tag, v) in &target {
        let mut w = v.clone();
        oracle.apply_to_vector(layout, &mut w);
        image.insert(*tag, w);
    }
    for (h, c) in set.histories.iter().zip(&coefficients) {
        if let Some(v) = image.get_mut(&h.tag) {
            v[h.final_index as usize] -= c;
        }
    }
    let linearity_residual = image
        .values()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();

    Ok(SpanReconstruction {
        coefficients,
        histories: set.histories,
        residual,
        linearity_residual,
    })
}

/// Reconstructs the full initial state from the union of histories across
/// every good half table of every table; returns the residual.
pub fn union_reconstruction_residual(family: &ProblemFamily) -> Result<f64> {
    let initial = family.prepare_initial(family.value_preparation())?;
    let mut covered: BTreeMap<(u32, u64), bool> = BTreeMap::new();
    for index in 0..family.len() {
        for half in enumerate_good_half_tables(family, index) {
            let set = enumerate_all_histories(family, &half)?;
            for h in set.histories {
                covered.insert((h.tag, h.initial_index), true);
            }
        }
    }
    let mut missing = 0.0f64;
    for branch in initial.branches() {
        for (idx, z) in branch.amplitudes.iter().enumerate() {
            if z.norm_sqr() > 0.0 && !covered.contains_key(&(branch.tag, idx as u64)) {
                missing += z.norm_sqr();
            }
        }
    }
    Ok(missing.sqrt())
}

/// Which quantity the rotation synthesis maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthesisObjective {
    /// Entanglement between the problem register and the rest, reading
    /// the ensemble as a coherent ket. Invariant under argument-register
    /// rotations; reported to confirm the two objectives share maximizers.
    Entanglement,
    /// Classical information about the solution label readable in the
    /// argument register at the end.
    ReadableInfo,
}

/// Result of the rotation synthesis.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub rotation: DMatrix<Complex64>,
    pub achieved: f64,
    pub objective: SynthesisObjective,
    pub restarts_used: u32,
    /// Value of the other objective at the returned rotation.
    pub other_objective_value: f64,
}

/// Post-evaluation data compressed to per-branch argument × value
/// matrices; the problem register is sharp per branch, so it only
/// contributes the branch label.
struct EvalContext {
    a_dim: usize,
    branch_mats: Vec<DMatrix<Complex64>>,
    branch_weights: Vec<f64>,
    branch_labels: Vec<usize>,
    label_count: usize,
    label_entropy: f64,
}

impl EvalContext {
    fn new(family: &ProblemFamily) -> Result<Self> {
        let layout = family.layout();
        let a_dim = layout.register_dim(Register::Argument) as usize;
        let v_dim = layout.register_dim(Register::Value) as usize;
        let initial = family.prepare_initial(family.value_preparation())?;
        let evaluated = crate::statevec::apply_unitary(&initial, &family.oracle_unitary());

        let mut labels = BTreeMap::new();
        for i in 0..family.len() {
            let next = labels.len();
            labels.entry(family.solution(i).to_string()).or_insert(next);
        }
        let mut branch_mats = Vec::with_capacity(family.len());
        let mut branch_weights = Vec::with_capacity(family.len());
        let mut branch_labels = Vec::with_capacity(family.len());
        for (i, branch) in evaluated.branches().iter().enumerate() {
            let mut m = DMatrix::<Complex64>::zeros(a_dim, v_dim);
            for (idx, z) in branch.amplitudes.iter().enumerate() {
                if *z != Complex64::ZERO {
                    let (_, a, v) = layout.split(idx as u64);
                    m[(a as usize, v as usize)] += *z;
                }
            }
            let w: f64 = m.iter().map(|z| z.norm_sqr()).sum();
            m /= Complex64::new(w.sqrt(), 0.0);
            branch_mats.push(m);
            branch_weights.push(w);
            branch_labels.push(labels[family.solution(i)]);
        }
        let mut label_probs = vec![0.0f64; labels.len()];
        for (w, l) in branch_weights.iter().zip(&branch_labels) {
            label_probs[*l] += w;
        }
        let label_entropy = label_probs
            .iter()
            .filter(|&&p| p > 1e-15)
            .map(|p| -p * p.log2())
            .sum();
        Ok(Self {
            a_dim,
            branch_mats,
            branch_weights,
            branch_labels,
            label_count: labels.len(),
            label_entropy,
        })
    }

    /// Mutual information between the solution label and the argument
    /// readout after applying the candidate rotation.
    fn readable_info(&self, u: &DMatrix<Complex64>) -> f64 {
        let mut joint = vec![0.0f64; self.label_count * self.a_dim];
        for ((m, w), l) in self
            .branch_mats
            .iter()
            .zip(&self.branch_weights)
            .zip(&self.branch_labels)
        {
            let rotated = u * m;
            for a in 0..self.a_dim {
                let p_a: f64 = rotated.row(a).iter().map(|z| z.norm_sqr()).sum();
                joint[l * self.a_dim + a] += w * p_a;
            }
        }
        mutual_information_of_joint(&joint, self.label_count, self.a_dim)
    }

    /// Coherent-ket entanglement entropy of the problem register after
    /// applying the candidate rotation, via the branch Gram matrix.
    fn entanglement(&self, u: &DMatrix<Complex64>) -> f64 {
        let k = self.branch_mats.len();
        let mut gram = DMatrix::<Complex64>::zeros(k, k);
        let rotated: Vec<DMatrix<Complex64>> = self.branch_mats.iter().map(|m| u * m).collect();
        for i in 0..k {
            for j in 0..k {
                let ip: Complex64 = rotated[i]
                    .iter()
                    .zip(rotated[j].iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                gram[(i, j)] = ip.conj()
                    * Complex64::new(
                        (self.branch_weights[i] * self.branch_weights[j]).sqrt(),
                        0.0,
                    );
            }
        }
        let eig = SymmetricEigen::new(gram);
        eig.eigenvalues
            .iter()
            .filter(|&&l| l > 1e-15)
            .map(|&l| -l * l.log2())
            .sum()
    }

    fn evaluate(&self, objective: SynthesisObjective, u: &DMatrix<Complex64>) -> f64 {
        match objective {
            SynthesisObjective::ReadableInfo => self.readable_info(u),
            SynthesisObjective::Entanglement => self.entanglement(u),
        }
    }
}

/// Dense parameterization of U(d): a product of two-level rotations with
/// phases, one per coordinate pair, followed by diagonal phases.
fn unitary_from_params(d: usize, params: &[f64]) -> DMatrix<Complex64> {
    let mut u = DMatrix::<Complex64>::identity(d, d);
    let mut p = 0;
    for i in 0..d {
        for j in (i + 1)..d {
            let theta = params[p];
            let phi = params[p + 1];
            p += 2;
            let c = Complex64::new(theta.cos(), 0.0);
            let s = Complex64::from_polar(theta.sin(), phi);
            // Two-level rotation acting on rows i and j.
            let mut g = DMatrix::<Complex64>::identity(d, d);
            g[(i, i)] = c;
            g[(i, j)] = -s.conj();
            g[(j, i)] = s;
            g[(j, j)] = c;
            u = g * u;
        }
    }
    for i in 0..d {
        let phase = Complex64::from_polar(1.0, params[p]);
        p += 1;
        for j in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

fn param_count(d: usize) -> usize {
    d * (d - 1) + d
}

/// Synthesizes the argument-register rotation by coordinate search from
/// random restarts. Best-effort: returns the best rotation found and the
/// objective value it achieves.
pub fn synthesize_rotation(
    family: &ProblemFamily,
    objective: SynthesisObjective,
    restarts: u32,
    seed: u64,
) -> Result<Synthesis> {
    let single_evaluation = matches!(
        (family.kind, family.n),
        (FamilyKind::Grover, 2)
            | (FamilyKind::DeutschJozsa, 2)
            | (FamilyKind::Permutation, 2)
            | (FamilyKind::Custom, _)
    );
    if !single_evaluation || family.n > 3 {
        return Err(Error::UnsupportedFamily(format!(
            "rotation synthesis covers single-evaluation families, got {}",
            family.name
        )));
    }
    let ctx = EvalContext::new(family)?;
    let d = ctx.a_dim;
    let n_params = param_count(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // The label entropy caps the readable information; stop a restart
    // early once the gap is negligible.
    let target = ctx.label_entropy - 1e-9;

    let mut best_params: Option<Vec<f64>> = None;
    let mut best_value = f64::NEG_INFINITY;
    let mut restarts_used = 0;
    for _ in 0..restarts.max(1) {
        restarts_used += 1;
        let mut params: Vec<f64> = (0..n_params)
            .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
            .collect();
        let mut value = ctx.evaluate(objective, &unitary_from_params(d, &params));
        let mut step = 0.6f64;
        while step > 1e-8 {
            let mut improved = false;
            for k in 0..n_params {
                for delta in [step, -step] {
                    let saved = params[k];
                    params[k] = saved + delta;
                    let candidate = ctx.evaluate(objective, &unitary_from_params(d, &params));
                    if candidate > value + 1e-15 {
                        value = candidate;
                        improved = true;
                    } else {
                        params[k] = saved;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if value > best_value {
            best_value = value;
            best_params = Some(params);
        }
        if best_value >= target {
            break;
        }
    }
    let params = best_params.expect("at least one restart runs");
    let rotation = unitary_from_params(d, &params);
    let other = match objective {
        SynthesisObjective::ReadableInfo => ctx.entanglement(&rotation),
        SynthesisObjective::Entanglement => ctx.readable_info(&rotation),
    };
    Ok(Synthesis {
        rotation,
        achieved: best_value,
        objective,
        restarts_used,
        other_objective_value: other,
    })
}

/// Report on whether the two synthesis objectives share a maximizer.
#[derive(Clone, Debug)]
pub struct ObjectivesReport {
    pub readable_info: Synthesis,
    /// Entanglement of the evaluated state at the information-optimal
    /// rotation.
    pub entanglement_at_best: f64,
    /// Largest entanglement seen across sampled rotations.
    pub entanglement_max: f64,
    /// True when the information-optimal rotation also attains the
    /// entanglement maximum (within 1e-6).
    pub maximizers_agree: bool,
}

/// Optimizes the readable information and checks that its maximizer also
/// maximizes the entanglement objective. Entanglement is invariant under
/// argument rotations, so disagreement would flag a numerical problem.
pub fn objectives_agreement(
    family: &ProblemFamily,
    restarts: u32,
    seed: u64,
) -> Result<ObjectivesReport> {
    let ctx = EvalContext::new(family)?;
    let readable = synthesize_rotation(family, SynthesisObjective::ReadableInfo, restarts, seed)?;
    let entanglement_at_best = readable.other_objective_value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let d = ctx.a_dim;
    let mut entanglement_max = entanglement_at_best;
    for _ in 0..16 {
        let params: Vec<f64> = (0..param_count(d))
            .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
            .collect();
        entanglement_max = entanglement_max.max(ctx.entanglement(&unitary_from_params(d, &params)));
    }
    Ok(ObjectivesReport {
        entanglement_at_best,
        entanglement_max,
        maximizers_agree: entanglement_at_best >= entanglement_max - 1e-6,
        readable_info: readable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::build_family;
    use crate::statevec::max_unitarity_deviation;
    use approx::assert_abs_diff_eq;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    /// The half table of the search family whose consistent values are
    /// {00, 01}: both outside rows are known misses.
    fn grover_half_00_01(family: &ProblemFamily) -> HalfTable {
        let half = HalfTable {
            suffix: bs("00"),
            rows: [(2u64, 0u64), (3, 0)].into_iter().collect(),
        };
        assert!(half.satisfies(family.goodness()));
        half
    }

    #[test]
    fn one_query_choice_yields_one_history_per_consistent_table() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let half = grover_half_00_01(&f);
        let histories = enumerate_histories(&f, &half, 0, 0).unwrap();
        assert_eq!(histories.len(), 2);
        // The hit history flips the value register, the miss leaves it.
        let layout = f.layout();
        assert_eq!(histories[0].suffix, bs("00"));
        assert_eq!(histories[0].final_index, layout.index(0, 0, 1));
        assert_eq!(histories[1].suffix, bs("01"));
        assert_eq!(histories[1].final_index, layout.index(1, 0, 0));
    }

    #[test]
    fn query_inside_the_half_table_is_rejected() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let half = grover_half_00_01(&f);
        assert!(matches!(
            enumerate_histories(&f, &half, 2, 0),
            Err(Error::QueryInsideHalfTable { .. })
        ));
    }

    #[test]
    fn each_search_half_table_generates_eight_distinct_histories() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        for index in 0..f.len() {
            for half in enumerate_good_half_tables(&f, index) {
                let set = enumerate_all_histories(&f, &half).unwrap();
                assert_eq!(set.histories.len(), 8);
                assert!(set.multiplicities.values().all(|&m| m == 1));
            }
        }
    }

    #[test]
    fn span_reconstruction_is_exact_for_the_built_in_families() {
        for (kind, n) in [
            (FamilyKind::Grover, 2),
            (FamilyKind::DeutschJozsa, 2),
            (FamilyKind::Simon, 2),
        ] {
            let f = build_family(kind, n, None).unwrap();
            for index in 0..f.len() {
                for half in enumerate_good_half_tables(&f, index) {
                    let r = span_reconstruction(&f, &half).unwrap();
                    assert!(
                        r.residual < 1e-10,
                        "{}: residual {} for table {}",
                        f.name,
                        r.residual,
                        half.suffix
                    );
                    assert!(
                        r.linearity_residual < 1e-10,
                        "{}: linearity residual {} for table {} rows {:?}",
                        f.name,
                        r.linearity_residual,
                        half.suffix,
                        half.rows
                    );
                }
            }
        }
    }

    #[test]
    fn search_history_coefficients_carry_the_value_register_signs() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let half = grover_half_00_01(&f);
        let r = span_reconstruction(&f, &half).unwrap();
        for (h, c) in r.histories.iter().zip(&r.coefficients) {
            assert!(c.norm() > 0.0);
            let expect_sign = if h.value_in == 0 { 1.0 } else { -1.0 };
            assert!(
                c.re * expect_sign > 0.0,
                "history at v={} should carry sign {expect_sign}",
                h.value_in
            );
        }
    }

    #[test]
    fn history_dump_lists_every_distinct_history_once() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let half = grover_half_00_01(&f);
        let set = enumerate_all_histories(&f, &half).unwrap();
        let json = set.to_json();
        let entries = json.as_array().unwrap();
        assert_eq!(entries.len(), 8);
        assert!(entries.iter().all(|e| e["multiplicity"] == 1));
        assert!(entries.iter().all(|e| e["b"] == "00" || e["b"] == "01"));
    }

    #[test]
    fn union_of_all_half_tables_spans_the_full_initial_state() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        assert_abs_diff_eq!(
            union_reconstruction_residual(&f).unwrap(),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn synthesized_rotation_reaches_full_information_for_search() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let s = synthesize_rotation(&f, SynthesisObjective::ReadableInfo, 32, 2024).unwrap();
        assert!(s.achieved >= 2.0 - 1e-6, "achieved only {}", s.achieved);
        assert!(max_unitarity_deviation(&s.rotation) < 1e-9);
    }

    #[test]
    fn dj_synthesis_is_at_least_as_good_as_the_hadamard_choice() {
        let f = build_family(FamilyKind::DeutschJozsa, 2, None).unwrap();
        let ctx = EvalContext::new(&f).unwrap();
        // Hadamard on both argument qubits as the baseline rotation.
        let h1 = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ],
        ) / Complex64::new(std::f64::consts::SQRT_2, 0.0);
        let hadamard = h1.kronecker(&h1);
        let baseline = ctx.readable_info(&hadamard);
        // The Hadamard choice reveals the label exactly, so it attains the
        // entropy cap.
        assert_abs_diff_eq!(baseline, ctx.label_entropy, epsilon = 1e-12);
        let s = synthesize_rotation(&f, SynthesisObjective::ReadableInfo, 32, 7).unwrap();
        assert!(
            s.achieved >= baseline - 1e-6,
            "achieved {} below the feasible {}",
            s.achieved,
            baseline
        );
    }

    #[test]
    fn entanglement_objective_is_rotation_invariant() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let ctx = EvalContext::new(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut values = Vec::new();
        for _ in 0..4 {
            let params: Vec<f64> = (0..param_count(4))
                .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
                .collect();
            values.push(ctx.entanglement(&unitary_from_params(4, &params)));
        }
        for v in &values {
            assert_abs_diff_eq!(*v, 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn objectives_share_their_maximizer_on_the_search_family() {
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let report = objectives_agreement(&f, 32, 11).unwrap();
        assert!(report.maximizers_agree);
        assert!(report.readable_info.achieved >= 2.0 - 1e-6);
        assert_abs_diff_eq!(report.entanglement_at_best, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn constant_valued_family_reads_zero_information() {
        // A family where every table has the same label carries nothing to
        // read out.
        let f = build_family(FamilyKind::Grover, 2, None).unwrap();
        let mut ctx = EvalContext::new(&f).unwrap();
        ctx.branch_labels = vec![0; ctx.branch_labels.len()];
        ctx.label_count = 1;
        let u = DMatrix::<Complex64>::identity(4, 4);
        assert_abs_diff_eq!(ctx.readable_info(&u), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parameterization_is_always_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2usize, 4] {
            for _ in 0..8 {
                let params: Vec<f64> = (0..param_count(d))
                    .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
                    .collect();
                let u = unitary_from_params(d, &params);
                assert!(max_unitarity_deviation(&u) < 1e-12);
            }
        }
    }
}
