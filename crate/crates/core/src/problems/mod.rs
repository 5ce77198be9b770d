//! The four built-in function-table families (search, constant-vs-balanced,
//! period finding, permutation tables), their oracle unitaries, and the
//! preparation of the mixed-problem initial states.

pub mod gf2;
mod json;

pub use json::{family_from_json, family_to_json, FamilyFile, TableEntry, FAMILY_SCHEMA_VERSION};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::statevec::{
    apply_unitary, Branch, PhaseTaggedState, QOp, Register, RegisterLayout, RegisterSet,
};

/// Seed for the deterministic sample of the larger period-finding family.
const SIMON_SAMPLE_SEED: u64 = 0x51_4d_4f_4e;
/// Sample cap keeping the whole-ensemble preparation within budget.
const SIMON_SAMPLE_CAP: usize = 16;

/// Which structural constraint a half table must satisfy to avoid leaking
/// the solution outright.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goodness {
    /// No row may hold the hit value 1 (search tables).
    NoHit,
    /// All contained values must be equal (constant-vs-balanced tables).
    EqualValues,
    /// No value may appear twice (periodic tables).
    DistinctValues,
    /// Any half table qualifies.
    Any,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Grover,
    DeutschJozsa,
    Simon,
    Permutation,
    Custom,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Grover => "grover",
            FamilyKind::DeutschJozsa => "dj",
            FamilyKind::Simon => "simon",
            FamilyKind::Permutation => "perm",
            FamilyKind::Custom => "custom",
        }
    }
}

/// One function f_b as an explicit table: `values[a] = f_b(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    /// The suffix b, which doubles as the table itself for the built-in
    /// families.
    pub suffix: BitString,
    pub values: Vec<u64>,
}

impl FunctionTable {
    pub fn value(&self, a: u64) -> u64 {
        self.values[a as usize]
    }
}

/// How register V is prepared before the function evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuePreparation {
    /// Every V qubit in (|0> - |1>)/√2; the evaluation kicks back a sign.
    MinusAll,
    /// V in the all-zeroes string; the evaluation writes the value out.
    AllZeros,
}

/// A finite indexed set of function tables with register layout, weights,
/// and the solution label attached to every table.
#[derive(Clone, Debug)]
pub struct ProblemFamily {
    pub kind: FamilyKind,
    /// Argument width in bits.
    pub n: u32,
    pub name: String,
    layout: RegisterLayout,
    tables: Vec<FunctionTable>,
    /// Amplitude weights ρ_i with Σ ρ_i² = 1.
    weights: Vec<f64>,
    solutions: Vec<String>,
    goodness: Goodness,
    value_preparation: ValuePreparation,
}

impl ProblemFamily {
    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn tables(&self) -> &[FunctionTable] {
        &self.tables
    }

    pub fn table(&self, index: usize) -> &FunctionTable {
        &self.tables[index]
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn solution(&self, index: usize) -> &str {
        &self.solutions[index]
    }

    pub fn solutions(&self) -> &[String] {
        &self.solutions
    }

    pub fn goodness(&self) -> Goodness {
        self.goodness
    }

    pub fn value_preparation(&self) -> ValuePreparation {
        self.value_preparation
    }

    pub fn argument_count(&self) -> u64 {
        1 << self.n
    }

    pub fn table_index_of(&self, suffix: BitString) -> Option<usize> {
        self.tables.iter().position(|t| t.suffix == suffix)
    }

    /// The oracle permutation |b>|a>|v> -> |b>|a>|v ⊕ f_b(a)>, extended by
    /// the identity on problem values outside the family.
    pub fn oracle_unitary(&self) -> QOp {
        let layout = self.layout;
        let b_dim = layout.register_dim(Register::Problem) as usize;
        let mut by_suffix: Vec<Option<usize>> = vec![None; b_dim];
        for (i, t) in self.tables.iter().enumerate() {
            by_suffix[t.suffix.value() as usize] = Some(i);
        }
        let dim = layout.dim();
        let mut map = vec![0u32; dim as usize];
        for (idx, slot) in map.iter_mut().enumerate() {
            let (b, a, v) = layout.split(idx as u64);
            let v_new = match by_suffix[b as usize] {
                Some(t) => v ^ self.tables[t].value(a),
                None => v,
            };
            *slot = layout.index(b, a, v_new) as u32;
        }
        QOp::permutation(map).expect("oracle map is a bijection")
    }

    /// The mixed-problem initial state: one branch per table, problem
    /// register sharp at the suffix, argument register uniform, value
    /// register as requested.
    pub fn prepare_initial(&self, prep: ValuePreparation) -> Result<PhaseTaggedState> {
        if prep != self.value_preparation {
            return Err(Error::IncompatiblePreparation(format!(
                "family {} prepares V as {:?}, got {:?}",
                self.name, self.value_preparation, prep
            )));
        }
        let layout = self.layout;
        let a_dim = layout.register_dim(Register::Argument);
        let v_dim = layout.register_dim(Register::Value);
        let a_scale = 1.0 / (a_dim as f64).sqrt();
        let branches = self
            .tables
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut amplitudes = vec![Complex64::ZERO; layout.dim() as usize];
                for a in 0..a_dim {
                    match prep {
                        ValuePreparation::AllZeros => {
                            let idx = layout.index(t.suffix.value(), a, 0);
                            amplitudes[idx as usize] =
                                Complex64::new(self.weights[i] * a_scale, 0.0);
                        }
                        ValuePreparation::MinusAll => {
                            let v_scale = 1.0 / (v_dim as f64).sqrt();
                            for v in 0..v_dim {
                                let sign = if v.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                                let idx = layout.index(t.suffix.value(), a, v);
                                amplitudes[idx as usize] =
                                    Complex64::new(sign * self.weights[i] * a_scale * v_scale, 0.0);
                            }
                        }
                    }
                }
                Branch {
                    tag: i as u32,
                    amplitudes,
                }
            })
            .collect();
        PhaseTaggedState::new(layout, branches)
    }

    /// Initial state conditioned on one table: the single branch left by a
    /// problem-register measurement that selected this suffix.
    pub fn prepare_selected(&self, table_index: usize) -> Result<PhaseTaggedState> {
        let mut single = self.clone();
        single.tables = vec![self.tables[table_index].clone()];
        single.weights = vec![1.0];
        single.solutions = vec![self.solutions[table_index].clone()];
        let mut state = single.prepare_initial(self.value_preparation)?;
        state.branches_mut()[0].tag = table_index as u32;
        Ok(state)
    }
}

fn uniform_weights(count: usize) -> Vec<f64> {
    vec![1.0 / (count as f64).sqrt(); count]
}

fn validate_weights(weights: &[f64], tables: usize) -> Result<()> {
    if weights.len() != tables {
        return Err(Error::InvalidFamily(format!(
            "{} weights for {} tables",
            weights.len(),
            tables
        )));
    }
    if weights.iter().any(|w| *w <= 0.0) {
        return Err(Error::InvalidFamily("weights must be positive".into()));
    }
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    if (sum_sq - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidFamily(format!(
            "weights not normalized: Σρ² = {sum_sq}"
        )));
    }
    Ok(())
}

/// Builds one of the built-in families.
///
/// Supported sizes: search n from 2 to 12; constant-vs-balanced and period
/// finding n ∈ {2,3}; the permutation family is fixed at n = 2.
pub fn build_family(kind: FamilyKind, n: u32, weights: Option<Vec<f64>>) -> Result<ProblemFamily> {
    let mut family = match kind {
        FamilyKind::Grover => build_grover(n)?,
        FamilyKind::DeutschJozsa => build_deutsch_jozsa(n)?,
        FamilyKind::Simon => build_simon(n)?,
        FamilyKind::Permutation => {
            if n != 2 {
                return Err(Error::UnsupportedFamily("perm is fixed at n = 2".into()));
            }
            build_permutation()?
        }
        FamilyKind::Custom => {
            return Err(Error::UnsupportedFamily(
                "custom families are built from JSON".into(),
            ))
        }
    };
    if let Some(w) = weights {
        validate_weights(&w, family.tables.len())?;
        if kind == FamilyKind::DeutschJozsa {
            // Dual tables (bitwise complements) must share a weight.
            for (i, t) in family.tables.iter().enumerate() {
                let dual = t.suffix.complement();
                let j = family
                    .table_index_of(dual)
                    .ok_or_else(|| Error::InvalidFamily("missing dual table".into()))?;
                if (w[i] - w[j]).abs() > 1e-12 {
                    return Err(Error::InvalidFamily(
                        "dual tables must share the same weight".into(),
                    ));
                }
            }
        }
        family.weights = w;
    }
    Ok(family)
}

fn build_grover(n: u32) -> Result<ProblemFamily> {
    if !(2..=12).contains(&n) {
        return Err(Error::UnsupportedFamily(format!(
            "grover needs n in [2,12], got {n}"
        )));
    }
    let layout = RegisterLayout::new(n, n, 1)?;
    let count = 1u64 << n;
    let tables: Vec<FunctionTable> = (0..count)
        .map(|b| FunctionTable {
            suffix: BitString::new(b, n),
            values: (0..count).map(|a| u64::from(a == b)).collect(),
        })
        .collect();
    let solutions = tables.iter().map(|t| t.suffix.to_string()).collect();
    Ok(ProblemFamily {
        kind: FamilyKind::Grover,
        n,
        name: format!("grover({n})"),
        layout,
        weights: uniform_weights(tables.len()),
        tables,
        solutions,
        goodness: Goodness::NoHit,
        value_preparation: ValuePreparation::MinusAll,
    })
}

fn build_deutsch_jozsa(n: u32) -> Result<ProblemFamily> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedFamily(format!(
            "dj needs n in {{2,3}}, got {n}"
        )));
    }
    let rows = 1u64 << n;
    // Constant tables first, then balanced tables ascending, each followed
    // by its bitwise complement, matching the published column order.
    let mut suffixes = vec![0u64, (1 << rows) - 1];
    let half = rows / 2;
    for t in 1..(1u64 << rows) - 1 {
        if t.count_ones() as u64 == half && t & (1 << (rows - 1)) == 0 {
            // leading row is 0, so this is the representative of its dual pair
            suffixes.push(t);
        }
    }
    // Sort balanced representatives ascending and interleave with duals.
    let mut ordered = vec![suffixes[0], suffixes[1]];
    let mut reps: Vec<u64> = suffixes[2..].to_vec();
    reps.sort_unstable();
    for r in reps {
        ordered.push(r);
        ordered.push(r ^ ((1 << rows) - 1));
    }
    let tables: Vec<FunctionTable> = ordered
        .iter()
        .map(|&b| FunctionTable {
            suffix: BitString::new(b, rows as u32),
            values: (0..rows)
                .map(|a| BitString::new(b, rows as u32).bit(a as u32))
                .collect(),
        })
        .collect();
    let solutions = tables
        .iter()
        .map(|t| {
            if t.values.iter().all(|&v| v == t.values[0]) {
                "constant"
            } else {
                "balanced"
            }
            .to_string()
        })
        .collect();
    let layout = RegisterLayout::new(rows as u32, n, 1)?;
    Ok(ProblemFamily {
        kind: FamilyKind::DeutschJozsa,
        n,
        name: format!("dj({n})"),
        layout,
        weights: uniform_weights(tables.len()),
        tables,
        solutions,
        goodness: Goodness::EqualValues,
        value_preparation: ValuePreparation::MinusAll,
    })
}

/// The period of a table: the nonzero h with f(a) = f(a ⊕ h) for all a.
fn period_of(values: &[u64]) -> Option<u64> {
    let rows = values.len() as u64;
    (1..rows).find(|&h| (0..rows).all(|a| values[a as usize] == values[(a ^ h) as usize]))
}

fn build_simon(n: u32) -> Result<ProblemFamily> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedFamily(format!(
            "simon needs n in {{2,3}}, got {n}"
        )));
    }
    let rows = 1u64 << n;
    let value_bits = n - 1;
    let value_count = 1u64 << value_bits;
    let mut tables = Vec::new();
    for h in 1..rows {
        // Coset representatives of {0, h} in ascending order.
        let reps: Vec<u64> = (0..rows).filter(|a| a < &(a ^ h)).collect();
        debug_assert_eq!(reps.len() as u64, rows / 2);
        // All injective assignments of values to cosets.
        let mut assignment: Vec<u64> = (0..reps.len() as u64).collect();
        let mut assignments = Vec::new();
        permutations(&mut assignment, 0, &mut assignments);
        for assign in assignments {
            let mut values = vec![0u64; rows as usize];
            for (rep_i, &rep) in reps.iter().enumerate() {
                values[rep as usize] = assign[rep_i];
                values[(rep ^ h) as usize] = assign[rep_i];
            }
            debug_assert!(assign.iter().all(|&v| v < value_count));
            // Suffix = concatenation of the 2^n values, each on n-1 bits.
            let mut suffix = 0u64;
            for &v in &values {
                suffix = (suffix << value_bits) | v;
            }
            tables.push(FunctionTable {
                suffix: BitString::new(suffix, rows as u32 * value_bits),
                values,
            });
        }
    }
    if tables.len() > SIMON_SAMPLE_CAP {
        let mut rng = ChaCha8Rng::seed_from_u64(SIMON_SAMPLE_SEED);
        tables.shuffle(&mut rng);
        tables.truncate(SIMON_SAMPLE_CAP);
        tables.sort_by_key(|t| (period_of(&t.values).unwrap(), t.suffix));
    }
    let solutions = tables
        .iter()
        .map(|t| {
            BitString::new(period_of(&t.values).expect("periodic by construction"), n).to_string()
        })
        .collect();
    let layout = RegisterLayout::new(rows as u32 * value_bits, n, value_bits)?;
    Ok(ProblemFamily {
        kind: FamilyKind::Simon,
        n,
        name: format!("simon({n})"),
        layout,
        weights: uniform_weights(tables.len()),
        tables,
        solutions,
        goodness: Goodness::DistinctValues,
        value_preparation: ValuePreparation::AllZeros,
    })
}

fn permutations(items: &mut Vec<u64>, k: usize, out: &mut Vec<Vec<u64>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn build_permutation() -> Result<ProblemFamily> {
    let rows = 4u64;
    let mut perms = Vec::new();
    let mut items: Vec<u64> = (0..rows).collect();
    permutations(&mut items, 0, &mut perms);
    // Ascending suffix order keeps the catalog deterministic.
    perms.sort_by_key(|p| {
        let mut suffix = 0u64;
        for &v in p {
            suffix = (suffix << 2) | v;
        }
        suffix
    });
    let tables: Vec<FunctionTable> = perms
        .into_iter()
        .map(|values| {
            let mut suffix = 0u64;
            for &v in &values {
                suffix = (suffix << 2) | v;
            }
            FunctionTable {
                suffix: BitString::new(suffix, 8),
                values,
            }
        })
        .collect();
    let layout = RegisterLayout::new(8, 2, 2)?;
    let mut family = ProblemFamily {
        kind: FamilyKind::Permutation,
        n: 2,
        name: "perm".to_string(),
        layout,
        weights: uniform_weights(tables.len()),
        tables,
        solutions: Vec::new(),
        goodness: Goodness::Any,
        value_preparation: ValuePreparation::MinusAll,
    };
    let partition = partition_of(&family)?;
    family.solutions = family
        .tables
        .iter()
        .map(|t| partition[&t.suffix].to_string())
        .collect();
    Ok(family)
}

/// Groups the permutation tables by the argument-register basis state the
/// evaluation-plus-Hadamard flow correlates them with. The classes come
/// out as exactly three blocks of eight, correlated with |01>, |10>, and
/// |11>; the |00> outcome never occurs.
pub fn partition_of(family: &ProblemFamily) -> Result<BTreeMap<BitString, u8>> {
    if family.kind != FamilyKind::Permutation {
        return Err(Error::InvalidFamily(
            "partition_of needs the permutation family".into(),
        ));
    }
    let layout = family.layout;
    let prep = ProblemFamily {
        solutions: vec![String::new(); family.tables.len()],
        ..family.clone()
    };
    let state = prep.prepare_initial(ValuePreparation::MinusAll)?;
    let state = apply_unitary(&state, &family.oracle_unitary());
    let state = apply_unitary(
        &state,
        &QOp::Hadamard {
            target: Register::Argument,
        },
    );

    let mut partition = BTreeMap::new();
    let mut class_sizes = BTreeMap::new();
    let arg = RegisterSet::single(Register::Argument);
    for (i, branch) in state.branches().iter().enumerate() {
        // Per-branch argument distribution; the flow leaves it sharp.
        let mut weights = vec![0.0f64; layout.register_dim(Register::Argument) as usize];
        let total: f64 = branch.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        for (idx, z) in branch.amplitudes.iter().enumerate() {
            weights[layout.pack(idx as u64, &arg) as usize] += z.norm_sqr() / total;
        }
        let (a_star, w) = weights
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .expect("nonempty distribution");
        if (w - 1.0).abs() > 1e-12 {
            return Err(Error::Inconsistent(format!(
                "table {} not sharp on the argument register (weight {w})",
                family.tables[i].suffix
            )));
        }
        let class = match a_star {
            0b01 => 1u8,
            0b10 => 2,
            0b11 => 3,
            other => {
                return Err(Error::Inconsistent(format!(
                    "table {} correlates with argument state {other:02b}",
                    family.tables[i].suffix
                )))
            }
        };
        partition.insert(family.tables[i].suffix, class);
        *class_sizes.entry(class).or_insert(0u32) += 1;
    }
    if class_sizes.len() != 3 || class_sizes.values().any(|&c| c != 8) {
        return Err(Error::Inconsistent(format!(
            "partition classes {class_sizes:?} not 3 x 8"
        )));
    }
    Ok(partition)
}
