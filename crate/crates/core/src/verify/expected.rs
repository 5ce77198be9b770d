//! Reference states written out amplitude by amplitude from their closed
//! forms. They are deliberately built without the oracle or rotation
//! operators, so the runner's stage states can be checked against an
//! independent construction.

use num_complex::Complex64;

use crate::error::Result;
use crate::statevec::{Branch, PhaseTaggedState, RegisterLayout};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sign(v: u64) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Layout of the three-register n = 2 search flow.
pub fn search_layout() -> RegisterLayout {
    RegisterLayout::new(2, 2, 1).expect("valid layout")
}

/// Mixed problem register, uniform argument register, value register in
/// the minus state: amplitude ±1/(4√2) per (b, a, v), one branch per b.
pub fn search_initial() -> Result<PhaseTaggedState> {
    let layout = search_layout();
    let amp = 1.0 / (4.0 * 2.0f64.sqrt());
    let branches = (0..4u64)
        .map(|b| {
            let mut v = vec![Complex64::ZERO; 32];
            for a in 0..4 {
                for w in 0..2 {
                    v[layout.index(b, a, w) as usize] = c(sign(w) * amp);
                }
            }
            Branch {
                tag: b as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// State after one evaluation: the amplitude at a = b flips sign.
pub fn search_evaluated() -> Result<PhaseTaggedState> {
    let layout = search_layout();
    let amp = 1.0 / (4.0 * 2.0f64.sqrt());
    let branches = (0..4u64)
        .map(|b| {
            let mut v = vec![Complex64::ZERO; 32];
            for a in 0..4 {
                let hit = if a == b { -1.0 } else { 1.0 };
                for w in 0..2 {
                    v[layout.index(b, a, w) as usize] = c(hit * sign(w) * amp);
                }
            }
            Branch {
                tag: b as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// State after the rotation: argument register sharp at the problem value.
pub fn search_rotated() -> Result<PhaseTaggedState> {
    let layout = search_layout();
    let amp = 1.0 / (2.0 * 2.0f64.sqrt());
    let branches = (0..4u64)
        .map(|b| {
            let mut v = vec![Complex64::ZERO; 32];
            for w in 0..2 {
                v[layout.index(b, b, w) as usize] = c(sign(w) * amp);
            }
            Branch {
                tag: b as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// The solution eigenstate for problem value 00.
pub fn search_solution_eigenstate() -> Result<PhaseTaggedState> {
    let layout = search_layout();
    let amp = 1.0 / 2.0f64.sqrt();
    let mut v = vec![Complex64::ZERO; 32];
    for w in 0..2 {
        v[layout.index(0, 0, w) as usize] = c(sign(w) * amp);
    }
    PhaseTaggedState::new(
        layout,
        vec![Branch {
            tag: 0,
            amplitudes: v,
        }],
    )
}

/// The rotated state projected on the first argument qubit reading 0:
/// the branches with problem value in {00, 01} survive.
pub fn search_half_projected_output() -> Result<PhaseTaggedState> {
    let layout = search_layout();
    let amp = 0.5;
    let branches = (0..2u64)
        .map(|b| {
            let mut v = vec![Complex64::ZERO; 32];
            for w in 0..2 {
                v[layout.index(b, b, w) as usize] = c(sign(w) * amp);
            }
            Branch {
                tag: b as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// The same projection carried back to the start of the flow: problem
/// register in an even mixture of {00, 01}, argument register uniform.
pub fn search_half_projected_initial() -> Result<PhaseTaggedState> {
    let layout = search_layout();
    let amp = 0.25;
    let branches = (0..2u64)
        .map(|b| {
            let mut v = vec![Complex64::ZERO; 32];
            for a in 0..4 {
                for w in 0..2 {
                    v[layout.index(b, a, w) as usize] = c(sign(w) * amp);
                }
            }
            Branch {
                tag: b as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// The value-register-free picture of the pre-measurement output: problem
/// and argument registers perfectly correlated, amplitude 1/2 per branch.
pub fn correlated_output_two_register() -> Result<PhaseTaggedState> {
    let layout = RegisterLayout::new(2, 2, 0)?;
    let branches = (0..4u64)
        .map(|b| {
            let mut v = vec![Complex64::ZERO; 16];
            v[layout.index(b, b, 0) as usize] = c(0.5);
            Branch {
                tag: b as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// Layout of the n = 2 constant-vs-balanced flow.
pub fn dj_layout() -> RegisterLayout {
    RegisterLayout::new(4, 2, 1).expect("valid layout")
}

/// The published n = 2 table suffixes in column order, with the sharp
/// argument state and sign each one acquires after evaluation plus
/// Hadamard.
pub const DJ_COLUMNS: [(&str, &str, f64); 8] = [
    ("0000", "00", 1.0),
    ("1111", "00", -1.0),
    ("0011", "10", 1.0),
    ("1100", "10", -1.0),
    ("0101", "01", 1.0),
    ("1010", "01", -1.0),
    ("0110", "11", 1.0),
    ("1001", "11", -1.0),
];

/// Initial state of the constant-vs-balanced flow with weights ρ_i:
/// amplitude ρ_i (−1)^v / (2√2) per (b_i, a, v).
pub fn dj_initial(weights: &[f64]) -> Result<PhaseTaggedState> {
    let layout = dj_layout();
    let branches = DJ_COLUMNS
        .iter()
        .enumerate()
        .map(|(i, (suffix, _, _))| {
            let b = u64::from_str_radix(suffix, 2).expect("valid suffix");
            let amp = weights[i] / (2.0 * 2.0f64.sqrt());
            let mut v = vec![Complex64::ZERO; layout.dim() as usize];
            for a in 0..4 {
                for w in 0..2 {
                    v[layout.index(b, a, w) as usize] = c(sign(w) * amp);
                }
            }
            Branch {
                tag: i as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// Evaluated-and-rotated state: each branch sharp on its argument state,
/// with the sign pattern of `DJ_COLUMNS`.
pub fn dj_rotated(weights: &[f64]) -> Result<PhaseTaggedState> {
    let layout = dj_layout();
    let branches = DJ_COLUMNS
        .iter()
        .enumerate()
        .map(|(i, (suffix, argument, sigma))| {
            let b = u64::from_str_radix(suffix, 2).expect("valid suffix");
            let a = u64::from_str_radix(argument, 2).expect("valid argument");
            let amp = sigma * weights[i] / 2.0f64.sqrt();
            let mut v = vec![Complex64::ZERO; layout.dim() as usize];
            for w in 0..2 {
                v[layout.index(b, a, w) as usize] = c(sign(w) * amp);
            }
            Branch {
                tag: i as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// Layout of the n = 2 period-finding flow.
pub fn simon_layout() -> RegisterLayout {
    RegisterLayout::new(4, 2, 1).expect("valid layout")
}

/// The published periodic tables for n = 2: (suffix, period).
pub const SIMON_COLUMNS: [(&str, &str); 6] = [
    ("0011", "01"),
    ("1100", "01"),
    ("0101", "10"),
    ("1010", "10"),
    ("0110", "11"),
    ("1001", "11"),
];

/// Initial state of the period-finding flow: value register all zeroes,
/// amplitude ρ_i / 2 per (b_i, a).
pub fn simon_initial(weights: &[f64]) -> Result<PhaseTaggedState> {
    let layout = simon_layout();
    let branches = SIMON_COLUMNS
        .iter()
        .enumerate()
        .map(|(i, (suffix, _))| {
            let b = u64::from_str_radix(suffix, 2).expect("valid suffix");
            let amp = weights[i] / 2.0;
            let mut v = vec![Complex64::ZERO; layout.dim() as usize];
            for a in 0..4 {
                v[layout.index(b, a, 0) as usize] = c(amp);
            }
            Branch {
                tag: i as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}

/// Evaluated-and-rotated state of the period-finding flow: per branch,
/// amplitude ρ_i (−1)^(rep·s) / 2 at (b, s, f(rep)) for the two argument
/// strings s orthogonal to the period, where rep runs over the coset
/// representatives.
pub fn simon_rotated(weights: &[f64]) -> Result<PhaseTaggedState> {
    let layout = simon_layout();
    let branches = SIMON_COLUMNS
        .iter()
        .enumerate()
        .map(|(i, (suffix, period))| {
            let b = u64::from_str_radix(suffix, 2).expect("valid suffix");
            let h = u64::from_str_radix(period, 2).expect("valid period");
            // Table values read off the suffix: row a is bit a of the
            // 4-bit string.
            let value = |a: u64| (b >> (3 - a)) & 1;
            let amp = weights[i] / 2.0;
            let mut v = vec![Complex64::ZERO; layout.dim() as usize];
            for s in 0..4u64 {
                if (s & h).count_ones() % 2 != 0 {
                    continue;
                }
                for rep in 0..4u64 {
                    if rep < (rep ^ h) {
                        let phase = sign((rep & s).count_ones() as u64);
                        let idx = layout.index(b, s, value(rep));
                        v[idx as usize] += c(phase * amp);
                    }
                }
            }
            Branch {
                tag: i as u32,
                amplitudes: v,
            }
        })
        .collect();
    PhaseTaggedState::new(layout, branches)
}
