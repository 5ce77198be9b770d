//! Register bookkeeping for states living on B (problem) ⊗ A (argument)
//! ⊗ V (value) with B occupying the most significant bits of the flat index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the per-branch amplitude count.
pub const AMPLITUDE_BUDGET: u64 = 1 << 24;

/// Cap on the total amplitude count of a whole phase-tagged ensemble.
pub const ENSEMBLE_BUDGET: u64 = 1 << 26;

/// Largest dimension for which dense matrices (densities, back-evolved
/// projectors, full unitaries) are materialized.
pub const MAX_DENSE_DIM: u64 = 1 << 11;

/// The three registers of the extended representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Register {
    /// Bob's problem register (holds the table suffix b).
    Problem,
    /// Alice's argument/solution register (holds a).
    Argument,
    /// The result register receiving XOR-ed function values.
    Value,
}

pub const ALL_REGISTERS: [Register; 3] = [Register::Problem, Register::Argument, Register::Value];

/// An ordered subset of registers, kept in (Problem, Argument, Value) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterSet(Vec<Register>);

impl RegisterSet {
    pub fn new(mut regs: Vec<Register>) -> Self {
        regs.sort();
        regs.dedup();
        Self(regs)
    }

    pub fn single(r: Register) -> Self {
        Self(vec![r])
    }

    pub fn contains(&self, r: Register) -> bool {
        self.0.contains(&r)
    }

    pub fn registers(&self) -> &[Register] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Registers not in this set.
    pub fn complement(&self) -> Self {
        Self(
            ALL_REGISTERS
                .iter()
                .copied()
                .filter(|r| !self.contains(*r))
                .collect(),
        )
    }
}

impl From<Register> for RegisterSet {
    fn from(r: Register) -> Self {
        Self::single(r)
    }
}

/// Qubit counts of the three registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    problem_qubits: u32,
    argument_qubits: u32,
    value_qubits: u32,
}

impl RegisterLayout {
    /// A value register of width zero is allowed; the other two must be
    /// at least one qubit wide, and the full dimension must fit the
    /// amplitude budget.
    pub fn new(problem_qubits: u32, argument_qubits: u32, value_qubits: u32) -> Result<Self> {
        if problem_qubits == 0 || argument_qubits == 0 {
            return Err(Error::InvalidLayout(
                "problem and argument registers need at least one qubit".into(),
            ));
        }
        let total = problem_qubits + argument_qubits + value_qubits;
        if total > 63 || (1u64 << total) > AMPLITUDE_BUDGET {
            return Err(Error::MemoryBudget {
                amplitudes: 1u64.checked_shl(total).unwrap_or(u64::MAX),
                budget: AMPLITUDE_BUDGET,
            });
        }
        Ok(Self {
            problem_qubits,
            argument_qubits,
            value_qubits,
        })
    }

    pub fn qubits(&self, r: Register) -> u32 {
        match r {
            Register::Problem => self.problem_qubits,
            Register::Argument => self.argument_qubits,
            Register::Value => self.value_qubits,
        }
    }

    pub fn total_qubits(&self) -> u32 {
        self.problem_qubits + self.argument_qubits + self.value_qubits
    }

    pub fn dim(&self) -> u64 {
        1 << self.total_qubits()
    }

    pub fn register_dim(&self, r: Register) -> u64 {
        1 << self.qubits(r)
    }

    /// Right-shift that brings a register's bits to the least significant
    /// position. B is most significant, then A, then V.
    pub fn shift(&self, r: Register) -> u32 {
        match r {
            Register::Problem => self.argument_qubits + self.value_qubits,
            Register::Argument => self.value_qubits,
            Register::Value => 0,
        }
    }

    pub fn index(&self, b: u64, a: u64, v: u64) -> u64 {
        debug_assert!(b < self.register_dim(Register::Problem));
        debug_assert!(a < self.register_dim(Register::Argument));
        debug_assert!(v < self.register_dim(Register::Value));
        (b << self.shift(Register::Problem)) | (a << self.shift(Register::Argument)) | v
    }

    pub fn split(&self, index: u64) -> (u64, u64, u64) {
        (
            self.extract(index, Register::Problem),
            self.extract(index, Register::Argument),
            self.extract(index, Register::Value),
        )
    }

    pub fn extract(&self, index: u64, r: Register) -> u64 {
        (index >> self.shift(r)) & (self.register_dim(r) - 1)
    }

    /// Dimension of the joint subspace of a register subset.
    pub fn subset_dim(&self, regs: &RegisterSet) -> u64 {
        regs.registers()
            .iter()
            .map(|r| self.register_dim(*r))
            .product()
    }

    /// Packs the given registers' bits of `index` into a contiguous
    /// sub-index, preserving (B, A, V) significance order.
    pub fn pack(&self, index: u64, regs: &RegisterSet) -> u64 {
        let mut out = 0;
        for r in regs.registers() {
            out = (out << self.qubits(*r)) | self.extract(index, *r);
        }
        out
    }

    /// Inverse of `pack` combined with the complement's packed index:
    /// rebuilds the full index from a target sub-index and a complement
    /// sub-index.
    pub fn weave(&self, regs: &RegisterSet, target_sub: u64, comp_sub: u64) -> u64 {
        let comp = regs.complement();
        let mut index = 0u64;
        let mut t = target_sub;
        for r in regs.registers().iter().rev() {
            let d = self.register_dim(*r);
            index |= (t % d) << self.shift(*r);
            t /= d;
        }
        let mut c = comp_sub;
        for r in comp.registers().iter().rev() {
            let d = self.register_dim(*r);
            index |= (c % d) << self.shift(*r);
            c /= d;
        }
        index
    }
}
