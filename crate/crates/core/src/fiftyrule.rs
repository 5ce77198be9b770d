//! Advance-information analysis: good half tables, exact minimax query
//! counts with and without them, the halved projections of the n = 2
//! search output, and the entropy accounting of back-evolved projections.

use std::collections::{BTreeMap, HashMap};

use crate::bits::{subsets_of_size, BitString};
use crate::error::{Error, Result};
use crate::problems::{FamilyKind, Goodness, ProblemFamily};
use crate::runner::{self, GroverRun};
use crate::statevec::{
    apply_unitary, back_evolve_projector, project, PhaseTaggedState, Projector, QOp, Register,
    RegisterSet,
};

/// Half of one function table: a constrained 50% subset of its rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfTable {
    /// The table the rows were taken from.
    pub suffix: BitString,
    /// argument -> value, exactly half of the table's rows.
    pub rows: BTreeMap<u64, u64>,
}

impl HalfTable {
    pub fn contains_argument(&self, a: u64) -> bool {
        self.rows.contains_key(&a)
    }

    /// Arguments not covered by the half table, ascending.
    pub fn outside_arguments(&self, argument_count: u64) -> Vec<u64> {
        (0..argument_count)
            .filter(|a| !self.contains_argument(*a))
            .collect()
    }

    /// Whether the rows satisfy a goodness constraint.
    pub fn satisfies(&self, goodness: Goodness) -> bool {
        let values: Vec<u64> = self.rows.values().copied().collect();
        match goodness {
            Goodness::NoHit => values.iter().all(|&v| v == 0),
            Goodness::EqualValues => values.iter().all(|&v| v == values[0]),
            Goodness::DistinctValues => {
                let mut seen = std::collections::BTreeSet::new();
                values.iter().all(|&v| seen.insert(v))
            }
            Goodness::Any => true,
        }
    }
}

/// All half tables of the given table that satisfy the family's goodness
/// constraint. The built-in families always have at least one.
pub fn enumerate_good_half_tables(family: &ProblemFamily, table_index: usize) -> Vec<HalfTable> {
    let table = family.table(table_index);
    let args = family.argument_count();
    let half = (args / 2) as u32;
    subsets_of_size(args as u32, half)
        .into_iter()
        .map(|subset| HalfTable {
            suffix: table.suffix,
            rows: subset.into_iter().map(|a| (a, table.value(a))).collect(),
        })
        .filter(|ht| ht.satisfies(family.goodness()))
        .collect()
}

/// The solver's knowledge: which tables remain possible, given the rows
/// observed so far.
#[derive(Clone, Debug)]
pub struct KnowledgeState {
    /// Indices into the family's table list, ascending.
    pub candidates: Vec<usize>,
    /// Observed (argument, value) pairs.
    pub log: Vec<(u64, u64)>,
}

impl KnowledgeState {
    /// Complete ignorance: every table is possible.
    pub fn full(family: &ProblemFamily) -> Self {
        Self {
            candidates: (0..family.len()).collect(),
            log: Vec::new(),
        }
    }

    /// Knowledge granted by a half table: the candidates are the tables
    /// consistent with every row.
    pub fn from_half_table(family: &ProblemFamily, half: &HalfTable) -> Result<Self> {
        let candidates: Vec<usize> = (0..family.len())
            .filter(|&i| {
                half.rows
                    .iter()
                    .all(|(&a, &v)| family.table(i).value(a) == v)
            })
            .collect();
        if candidates.is_empty() {
            return Err(Error::InvalidKnowledge(format!(
                "no table is consistent with the half table of {}",
                half.suffix
            )));
        }
        Ok(Self {
            candidates,
            log: half.rows.iter().map(|(&a, &v)| (a, v)).collect(),
        })
    }

    fn validate(&self, family: &ProblemFamily) -> Result<()> {
        if self.candidates.is_empty() {
            return Err(Error::InvalidKnowledge("empty candidate set".into()));
        }
        for &i in &self.candidates {
            if i >= family.len() {
                return Err(Error::InvalidKnowledge(format!(
                    "candidate {i} out of range"
                )));
            }
            for &(a, v) in &self.log {
                if family.table(i).value(a) != v {
                    return Err(Error::InvalidKnowledge(format!(
                        "candidate {} contradicts the log at argument {a}",
                        family.table(i).suffix
                    )));
                }
            }
        }
        Ok(())
    }
}

fn all_same_label(family: &ProblemFamily, candidates: &[usize]) -> bool {
    candidates
        .windows(2)
        .all(|w| family.solution(w[0]) == family.solution(w[1]))
}

fn minimax(
    family: &ProblemFamily,
    candidates: &[usize],
    memo: Option<&mut HashMap<Vec<usize>, u32>>,
) -> u32 {
    fn go(
        family: &ProblemFamily,
        candidates: &[usize],
        memo: &mut Option<&mut HashMap<Vec<usize>, u32>>,
    ) -> u32 {
        if all_same_label(family, candidates) {
            return 0;
        }
        if let Some(m) = memo {
            if let Some(&hit) = m.get(candidates) {
                return hit;
            }
        }
        let mut best = u32::MAX;
        for a in 0..family.argument_count() {
            let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for &i in candidates {
                groups.entry(family.table(i).value(a)).or_default().push(i);
            }
            if groups.len() < 2 {
                // The answer is forced; querying here cannot help.
                continue;
            }
            let worst = groups.values().map(|g| go(family, g, memo)).max().unwrap();
            best = best.min(1 + worst);
        }
        debug_assert_ne!(
            best,
            u32::MAX,
            "distinct tables always admit a splitting query"
        );
        if let Some(m) = memo {
            m.insert(candidates.to_vec(), best);
        }
        best
    }
    let mut memo = memo;
    go(family, candidates, &mut memo)
}

/// Exact minimax decision-tree depth: the worst-case number of function
/// evaluations a deterministic solver needs to pin down the solution label
/// with certainty, starting from the given knowledge.
pub fn classical_query_complexity(
    family: &ProblemFamily,
    knowledge: &KnowledgeState,
) -> Result<u32> {
    knowledge.validate(family)?;
    let mut memo = HashMap::new();
    Ok(minimax(family, &knowledge.candidates, Some(&mut memo)))
}

/// Same recursion without memoization; the reference oracle for the
/// memoized search on small families.
pub fn classical_query_complexity_naive(
    family: &ProblemFamily,
    knowledge: &KnowledgeState,
) -> Result<u32> {
    knowledge.validate(family)?;
    Ok(minimax(family, &knowledge.candidates, None))
}

/// Per-(table, half-table) breakdown entry of a query report.
#[derive(Clone, Debug)]
pub struct HalfTableCase {
    pub suffix: BitString,
    pub rows: BTreeMap<u64, u64>,
    pub consistent_tables: usize,
    pub queries_with_info: u32,
}

/// Worst-case query counts with and without advance knowledge, next to
/// the quantum evaluation count.
#[derive(Clone, Debug)]
pub struct QueryReport {
    pub family: String,
    pub quantum_evaluations: u32,
    pub classical_plain: u32,
    pub classical_with_info: u32,
    pub rule_holds: bool,
    pub cases: Vec<HalfTableCase>,
}

impl QueryReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "quantum": self.quantum_evaluations,
            "classical": self.classical_plain,
            "classical_with_half_table": self.classical_with_info,
            "rule_holds": self.rule_holds,
            "cases": self.cases.iter().map(|c| {
                serde_json::json!({
                    "table": c.suffix.to_string(),
                    "rows": c.rows.iter().map(|(a, v)| (a.to_string(), v.to_string()))
                        .collect::<std::collections::BTreeMap<_, _>>(),
                    "consistent_tables": c.consistent_tables,
                    "queries_with_info": c.queries_with_info,
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// One-row Markdown table with the same numbers as the JSON form.
    pub fn to_markdown(&self) -> String {
        format!(
            "| family | quantum | classical | classical + half table | rule holds |\n\
             |---|---|---|---|---|\n\
             | {} | {} | {} | {} | {} |\n",
            self.family,
            self.quantum_evaluations,
            self.classical_plain,
            self.classical_with_info,
            self.rule_holds
        )
    }
}

fn quantum_evaluation_count(family: &ProblemFamily, seed: u64) -> Result<u32> {
    match family.kind {
        FamilyKind::Grover => {
            let mut run = GroverRun::new(family.n);
            run.seed = seed;
            Ok(runner::run_grover(&run)?.oracle_evaluations)
        }
        FamilyKind::DeutschJozsa => Ok(runner::run_dj(family.n, None, seed)?.oracle_evaluations),
        FamilyKind::Simon => {
            // One evaluation per extracted string; the per-extraction count
            // is what the rule compares.
            let out = runner::run_simon(family.n, None, seed, 64)?;
            Ok(out.traces[0].oracle_evaluations)
        }
        FamilyKind::Permutation => Ok(runner::run_perm(None, seed)?.1.oracle_evaluations),
        FamilyKind::Custom => {
            let trace = runner::run_evaluate_and_rotate(family, None, seed, |_, _, _, _| {})?;
            Ok(trace.oracle_evaluations)
        }
    }
}

/// Checks the rule that the quantum evaluation count equals the worst-case
/// classical count once a good half table is known in advance.
pub fn verify_fifty_rule(family: &ProblemFamily) -> Result<QueryReport> {
    let supported = matches!(
        (family.kind, family.n),
        (FamilyKind::Grover, 2)
            | (FamilyKind::DeutschJozsa, 2)
            | (FamilyKind::DeutschJozsa, 3)
            | (FamilyKind::Simon, 2)
            | (FamilyKind::Permutation, 2)
    );
    if !supported {
        return Err(Error::UnsupportedFamily(format!(
            "fifty-rule verification covers grover(2), dj(2), dj(3), simon(2), perm; got {}",
            family.name
        )));
    }
    report_for(family, 0)
}

/// The same report without the built-in-family gate; used for custom
/// families, where the rule column is informational.
pub fn report_for(family: &ProblemFamily, seed: u64) -> Result<QueryReport> {
    let quantum_evaluations = quantum_evaluation_count(family, seed)?;
    let classical_plain = classical_query_complexity(family, &KnowledgeState::full(family))?;
    let mut cases = Vec::new();
    let mut classical_with_info = 0;
    for index in 0..family.len() {
        for half in enumerate_good_half_tables(family, index) {
            let knowledge = KnowledgeState::from_half_table(family, &half)?;
            let queries = classical_query_complexity(family, &knowledge)?;
            classical_with_info = classical_with_info.max(queries);
            cases.push(HalfTableCase {
                suffix: half.suffix,
                rows: half.rows,
                consistent_tables: knowledge.candidates.len(),
                queries_with_info: queries,
            });
        }
    }
    if cases.is_empty() {
        return Err(Error::InvalidHalfTable(format!(
            "family {} has no good half tables",
            family.name
        )));
    }
    Ok(QueryReport {
        family: family.name.clone(),
        quantum_evaluations,
        classical_plain,
        classical_with_info,
        rule_holds: quantum_evaluations == classical_with_info,
        cases,
    })
}

/// The six halved projections of the n = 2 search output: projectors onto
/// the span of two diagonal (problem, argument) basis pairs. Each keeps a
/// pair of problem values; composing two projections with overlapping
/// pairs projects onto the solution eigenstate.
pub fn halved_projections(
    family: &ProblemFamily,
) -> Result<Vec<(BitString, BitString, Projector)>> {
    if family.kind != FamilyKind::Grover || family.n != 2 {
        return Err(Error::UnsupportedFamily(
            "halved projections are defined on the n = 2 search output".into(),
        ));
    }
    let regs = RegisterSet::new(vec![Register::Problem, Register::Argument]);
    let a_dim = family.layout().register_dim(Register::Argument);
    let mut out = Vec::new();
    for x in 0..4u64 {
        for y in (x + 1)..4u64 {
            let projector = Projector::basis_subset(
                format!("diag{{{x:02b},{y:02b}}}"),
                regs.clone(),
                [x * a_dim + x, y * a_dim + y],
            );
            out.push((BitString::new(x, 2), BitString::new(y, 2), projector));
        }
    }
    Ok(out)
}

/// Back-evolves a projector through the algorithm's unitary part and
/// applies it to the prepared initial state. Returns the projected state
/// together with the problem-register entropy before and after.
pub fn back_evolved_knowledge(
    family: &ProblemFamily,
    projector: &Projector,
    forward: &[QOp],
) -> Result<(PhaseTaggedState, f64, f64)> {
    let initial = family.prepare_initial(family.value_preparation())?;
    let back = back_evolve_projector(projector, forward, family.layout())?;
    let (projected, _probability) = project(&initial, &back)?;
    let before = initial
        .reduced_density(&RegisterSet::single(Register::Problem))?
        .von_neumann_entropy();
    let after = projected
        .reduced_density(&RegisterSet::single(Register::Problem))?
        .von_neumann_entropy();
    Ok((projected, before, after))
}

/// For a dual pair of constant-vs-balanced tables (bitwise complements),
/// checks that projecting the problem register on its first qubit — which
/// only selects between the duals — leaves the argument-register entropy
/// of the evaluated state unchanged. True means the projection disclosed
/// nothing about the solution.
pub fn check_dual_projection_no_info(
    family: &ProblemFamily,
    pair: (BitString, BitString),
) -> Result<bool> {
    if family.kind != FamilyKind::DeutschJozsa || family.n != 2 {
        return Err(Error::UnsupportedFamily(
            "the dual-projection check is defined for the n = 2 constant-vs-balanced family".into(),
        ));
    }
    let (b1, b2) = pair;
    if b2 != b1.complement() {
        return Err(Error::InvalidFamily(format!(
            "{b1} and {b2} are not a dual pair"
        )));
    }
    for b in [b1, b2] {
        if family.table_index_of(b).is_none() {
            return Err(Error::InvalidFamily(format!(
                "{b} is not in family {}",
                family.name
            )));
        }
    }

    // Evaluated state: oracle then Hadamard on the argument register.
    let state = family.prepare_initial(family.value_preparation())?;
    let state = apply_unitary(&state, &family.oracle_unitary());
    let state = apply_unitary(
        &state,
        &QOp::Hadamard {
            target: Register::Argument,
        },
    );

    // Restrict to the dual pair, then project on first problem qubit = 0.
    let pair_projector = Projector::basis_subset(
        format!("B in {{{b1},{b2}}}"),
        RegisterSet::single(Register::Problem),
        [b1.value(), b2.value()],
    );
    let (pair_state, _) = project(&state, &pair_projector)?;
    let argument = RegisterSet::single(Register::Argument);
    let before = pair_state.reduced_density(&argument)?.von_neumann_entropy();

    let keep = if b1.bit(0) == 0 { b1 } else { b2 };
    let dual_projector = Projector::basis_subset(
        "B first qubit = 0",
        RegisterSet::single(Register::Problem),
        [keep.value()],
    );
    let (selected, _) = project(&pair_state, &dual_projector)?;
    let after = selected.reduced_density(&argument)?.von_neumann_entropy();
    Ok((before - after).abs() <= 1e-10)
}
