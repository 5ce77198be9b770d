//! Property tests: norm preservation, density conjugation, back-evolution
//! consistency, and monotonicity of the minimax query count under extra
//! knowledge, all over randomized inputs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use qhalf_core::fiftyrule::{
    classical_query_complexity, classical_query_complexity_naive, enumerate_good_half_tables,
    KnowledgeState,
};
use qhalf_core::problems::{family_from_json, FamilyFile, Goodness, TableEntry};
use qhalf_core::statevec::{
    apply_unitary, back_evolve_projector, project, Branch, PhaseTaggedState, Projector, QOp,
    Register, RegisterLayout, RegisterSet,
};

fn layout() -> RegisterLayout {
    RegisterLayout::new(2, 2, 0).unwrap()
}

/// Normalized random ensemble on the 2+2 qubit layout with up to three
/// branches.
fn arb_state() -> impl Strategy<Value = PhaseTaggedState> {
    let amp = (-1.0f64..1.0).prop_map(|x| x);
    let branch = proptest::collection::vec((amp.clone(), amp), 16);
    proptest::collection::vec(branch, 1..=3).prop_filter_map("needs weight", |branches| {
        let mut total = 0.0;
        let branches: Vec<Branch> = branches
            .into_iter()
            .enumerate()
            .map(|(tag, pairs)| {
                let amplitudes: Vec<Complex64> = pairs
                    .into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect();
                total += amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>();
                Branch {
                    tag: tag as u32,
                    amplitudes,
                }
            })
            .collect();
        if total < 1e-6 {
            return None;
        }
        let scale = 1.0 / total.sqrt();
        let branches = branches
            .into_iter()
            .map(|mut b| {
                for z in &mut b.amplitudes {
                    *z *= scale;
                }
                b
            })
            .collect();
        PhaseTaggedState::new(layout(), branches).ok()
    })
}

/// Haar-ish random unitary on the argument register via QR of a random
/// complex matrix, kept as the bare 4x4 matrix so tests can also build
/// its adjoint.
fn arb_argument_unitary() -> impl Strategy<Value = DMatrix<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16).prop_filter_map(
        "needs full rank",
        |entries| {
            let m = DMatrix::from_iterator(
                4,
                4,
                entries.into_iter().map(|(re, im)| Complex64::new(re, im)),
            );
            let q = m.qr().q();
            QOp::dense(RegisterSet::single(Register::Argument), q.clone())
                .ok()
                .map(|_| q)
        },
    )
}

fn argument_op(m: DMatrix<Complex64>) -> QOp {
    QOp::dense(RegisterSet::single(Register::Argument), m).unwrap()
}

/// Random projector keeping a nonempty proper subset of argument values.
fn arb_argument_projector() -> impl Strategy<Value = Projector> {
    (1u64..15).prop_map(|mask| {
        let values: Vec<u64> = (0..4).filter(|v| mask >> v & 1 == 1).collect();
        Projector::basis_subset(
            format!("arg mask {mask:#06b}"),
            RegisterSet::single(Register::Argument),
            values,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_preserve_the_total_norm(state in arb_state(), u in arb_argument_unitary()) {
        let out = apply_unitary(&state, &argument_op(u));
        prop_assert!((out.total_norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_conjugates_under_unitaries(state in arb_state(), u in arb_argument_unitary()) {
        let op = argument_op(u);
        let direct = apply_unitary(&state, &op).density().unwrap();
        let full = op.as_matrix(layout()).unwrap();
        let conjugated = &full * state.density().unwrap().entries() * full.adjoint();
        prop_assert!((direct.entries() - conjugated).norm() < 1e-12);
    }

    #[test]
    fn back_evolved_projection_commutes_with_the_flow(
        state in arb_state(),
        u in arb_argument_unitary(),
        projector in arb_argument_projector(),
    ) {
        let op = argument_op(u.clone());
        let ops = [op.clone()];
        // Evolve, project, undo the evolution...
        let evolved = apply_unitary(&state, &op);
        let late = project(&evolved, &projector);
        // ...versus projecting the back-evolved projector directly.
        let back = back_evolve_projector(&projector, &ops, layout()).unwrap();
        let early = project(&state, &back);
        match (late, early) {
            (Ok((late_state, p_late)), Ok((early_state, p_early))) => {
                prop_assert!((p_late - p_early).abs() < 1e-10);
                // Renormalization divides by sqrt(p), amplifying float
                // noise on nearly-annihilated states; compare states only
                // for outcomes with real support, as in the actual flows.
                if p_late >= 1e-6 {
                    let undone = apply_unitary(&late_state, &argument_op(u.adjoint()));
                    let d = undone.density_distance(&early_state).unwrap();
                    prop_assert!(d < 1e-10, "distance {d:.3e} at probability {p_late:.3e}");
                }
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "one side failed: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }
}

/// Random custom family on two argument bits with one-bit values and
/// arbitrary labels, built through the JSON path.
fn arb_family() -> impl Strategy<Value = qhalf_core::problems::ProblemFamily> {
    (
        proptest::collection::btree_set(0u64..16, 2..=8),
        proptest::collection::vec(0u8..3, 8),
    )
        .prop_map(|(suffixes, labels)| {
            let tables: Vec<TableEntry> = suffixes
                .iter()
                .map(|&b| TableEntry {
                    b: format!("{b:04b}"),
                    rows: (0..4u64)
                        .map(|a| (format!("{a:02b}"), format!("{}", (b >> (3 - a)) & 1)))
                        .collect(),
                })
                .collect();
            let solutions = suffixes
                .iter()
                .enumerate()
                .map(|(i, &b)| (format!("{b:04b}"), format!("label{}", labels[i])))
                .collect();
            let file = FamilyFile {
                schema: 1,
                name: "random".into(),
                n: 2,
                value_bits: 1,
                goodness: Goodness::Any,
                value_preparation: "minus-all".into(),
                tables,
                solutions,
                weights: None,
            };
            family_from_json(&file).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn advance_knowledge_never_hurts(family in arb_family()) {
        let plain = classical_query_complexity(&family, &KnowledgeState::full(&family)).unwrap();
        for index in 0..family.len() {
            for half in enumerate_good_half_tables(&family, index) {
                let k = KnowledgeState::from_half_table(&family, &half).unwrap();
                let with_info = classical_query_complexity(&family, &k).unwrap();
                prop_assert!(with_info <= plain, "{} > {} for {:?}", with_info, plain, half);
            }
        }
    }

    #[test]
    fn memoized_minimax_matches_naive_recursion(family in arb_family()) {
        let k = KnowledgeState::full(&family);
        prop_assert_eq!(
            classical_query_complexity(&family, &k).unwrap(),
            classical_query_complexity_naive(&family, &k).unwrap()
        );
    }
}
