//! Finite unitary circuits standing in for acceptance functions.
//!
//! A [`QuantumFunction`] owns a table of registers laid out on consecutive
//! wires in declaration order. Input registers are replicated `q(ℓ)` times
//! (ℓ = total qubits over input registers), witness and ancilla registers
//! occupy a single block. The function value is the probability that the
//! output wire reads `1` after every op has run.

mod gate;
mod json;
pub mod library;
mod sim;
mod transform;

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use gate::Gate;
pub use json::CircuitFile;

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::Qustring;

/// Values assigned to non-ancilla registers, keyed by register name.
pub type Assignment = BTreeMap<String, Qustring>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Witness,
    Ancilla,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub role: Role,
    pub qubits: usize,
    /// Overrides the copy polynomial for an input register.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_copies: Option<usize>,
}

impl Register {
    pub fn new(name: impl Into<String>, role: Role, qubits: usize) -> Self {
        Register { name: name.into(), role, qubits, fixed_copies: None }
    }
}

/// Copy count `q(ℓ) = c0 + c1·ℓ + c2·ℓ² + …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CopyPolynomial(pub Vec<u64>);

impl Default for CopyPolynomial {
    fn default() -> Self {
        CopyPolynomial(vec![1])
    }
}

impl CopyPolynomial {
    pub fn constant(c: u64) -> Self {
        CopyPolynomial(vec![c])
    }

    pub fn eval(&self, ell: usize) -> usize {
        self.0.iter().rev().fold(0u64, |acc, &c| acc.saturating_mul(ell as u64).saturating_add(c)) as usize
    }

    pub fn scaled(&self, t: u64) -> Self {
        CopyPolynomial(self.0.iter().map(|c| c * t).collect())
    }
}

/// One circuit step.
#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate(Gate),
    /// Full computational-basis decoherence of the listed wires.
    Dephase(Vec<usize>),
}

impl Op {
    fn wires(&self) -> &[usize] {
        match self {
            Op::Gate(g) => g.wires(),
            Op::Dephase(w) => w,
        }
    }

    fn remapped(&self, map: impl Fn(usize) -> usize) -> Op {
        match self {
            Op::Gate(g) => Op::Gate(g.remapped(map)),
            Op::Dephase(w) => Op::Dephase(w.iter().map(|&x| map(x)).collect()),
        }
    }
}

/// Placement of one register on the wire line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub start: usize,
    pub qubits: usize,
    pub copies: usize,
}

impl Slot {
    pub fn span(&self) -> usize {
        self.qubits * self.copies
    }

    pub fn wires(&self) -> Range<usize> {
        self.start..self.start + self.span()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumFunction {
    registers: Vec<Register>,
    ops: Vec<Op>,
    output_wire: usize,
    copy_count: CopyPolynomial,
    slots: Vec<Slot>,
}

/// Incremental construction of a [`QuantumFunction`].
#[derive(Debug, Clone, Default)]
pub struct Builder {
    registers: Vec<Register>,
    ops: Vec<Op>,
    output_wire: Option<usize>,
    copy_count: CopyPolynomial,
}

impl Builder {
    pub fn register(mut self, name: impl Into<String>, role: Role, qubits: usize) -> Self {
        self.registers.push(Register::new(name, role, qubits));
        self
    }

    pub fn registers(mut self, regs: impl IntoIterator<Item = Register>) -> Self {
        self.registers.extend(regs);
        self
    }

    pub fn gate(mut self, g: Gate) -> Self {
        self.ops.push(Op::Gate(g));
        self
    }

    pub fn gates(mut self, gs: impl IntoIterator<Item = Gate>) -> Self {
        self.ops.extend(gs.into_iter().map(Op::Gate));
        self
    }

    pub fn dephase(mut self, wires: Vec<usize>) -> Self {
        self.ops.push(Op::Dephase(wires));
        self
    }

    pub fn op(mut self, op: Op) -> Self {
        self.ops.push(op);
        self
    }

    pub fn output(mut self, wire: usize) -> Self {
        self.output_wire = Some(wire);
        self
    }

    pub fn copies(mut self, q: CopyPolynomial) -> Self {
        self.copy_count = q;
        self
    }

    pub fn build(self) -> Result<QuantumFunction> {
        let output = self.output_wire.ok_or_else(|| Error::RegisterMismatch("no output wire".into()))?;
        QuantumFunction::from_parts(self.registers, self.ops, output, self.copy_count)
    }
}

impl QuantumFunction {
    pub fn builder() -> Builder {
        Builder::default()
    }

    pub fn from_parts(registers: Vec<Register>, ops: Vec<Op>, output_wire: usize, copy_count: CopyPolynomial) -> Result<Self> {
        let mut names = std::collections::BTreeSet::new();
        for r in &registers {
            if r.qubits == 0 {
                return Err(Error::RegisterMismatch(format!("register {} has no qubits", r.name)));
            }
            if !names.insert(r.name.as_str()) {
                return Err(Error::RegisterMismatch(format!("duplicate register {}", r.name)));
            }
            if r.fixed_copies == Some(0) {
                return Err(Error::RegisterMismatch(format!("register {} has zero copies", r.name)));
            }
        }
        let ell: usize = registers.iter().filter(|r| r.role == Role::Input).map(|r| r.qubits).sum();
        let q = copy_count.eval(ell);
        if q == 0 {
            return Err(Error::RegisterMismatch(format!("copy polynomial evaluates to 0 at ℓ={ell}")));
        }
        let mut slots = Vec::with_capacity(registers.len());
        let mut start = 0;
        for r in &registers {
            let copies = match r.role {
                Role::Input => r.fixed_copies.unwrap_or(q),
                Role::Witness | Role::Ancilla => 1,
            };
            let slot = Slot { start, qubits: r.qubits, copies };
            start += slot.span();
            slots.push(slot);
        }
        let wires = start;
        if output_wire >= wires {
            return Err(Error::RegisterMismatch(format!("output wire {output_wire} outside 0..{wires}")));
        }
        for op in &ops {
            if let Some(&w) = op.wires().iter().find(|&&w| w >= wires) {
                return Err(Error::RegisterMismatch(format!("op touches wire {w} outside 0..{wires}")));
            }
            if let Op::Gate(g) = op {
                let defect = linalg::unitarity_defect(g.matrix());
                if defect > 1e-10 {
                    return Err(Error::InvalidGate(format!("{} is not unitary (defect {defect:e})", g.name())));
                }
            }
        }
        Ok(QuantumFunction { registers, ops, output_wire, copy_count, slots })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn output_wire(&self) -> usize {
        self.output_wire
    }

    pub fn copy_count(&self) -> &CopyPolynomial {
        &self.copy_count
    }

    pub fn wire_count(&self) -> usize {
        self.slots.last().map(|s| s.start + s.span()).unwrap_or(0)
    }

    /// Longest chain of ops sharing a wire, the circuit's time bound.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.wire_count()];
        for op in &self.ops {
            let d = op.wires().iter().map(|&w| level[w]).max().unwrap_or(0) + 1;
            for &w in op.wires() {
                level[w] = d;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    pub fn register_index(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::RegisterMismatch(format!("no register named {name}")))
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        Ok(&self.registers[self.register_index(name)?])
    }

    pub fn slot(&self, name: &str) -> Result<&Slot> {
        Ok(&self.slots[self.register_index(name)?])
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Names of registers with the given role, in declaration order.
    pub fn registers_with_role(&self, role: Role) -> Vec<&str> {
        self.registers.iter().filter(|r| r.role == role).map(|r| r.name.as_str()).collect()
    }

    fn check_assignment(&self, assignment: &Assignment, free: &[&str]) -> Result<()> {
        for name in assignment.keys() {
            let reg = self.register(name)?;
            if reg.role == Role::Ancilla {
                return Err(Error::RegisterMismatch(format!("ancilla register {name} cannot be assigned")));
            }
            if free.contains(&name.as_str()) {
                return Err(Error::RegisterMismatch(format!("register {name} is both fixed and free")));
            }
        }
        for r in &self.registers {
            if r.role == Role::Ancilla || free.contains(&r.name.as_str()) {
                continue;
            }
            let q =
                assignment.get(&r.name).ok_or_else(|| Error::RegisterMismatch(format!("register {} is unassigned", r.name)))?;
            if q.size() != r.qubits {
                return Err(Error::RegisterMismatch(format!(
                    "register {} has {} qubits, assigned a {}-qubit state",
                    r.name,
                    r.qubits,
                    q.size()
                )));
            }
        }
        Ok(())
    }

    /// Acceptance probability on the given register values.
    pub fn evaluate(&self, assignment: &Assignment, budgets: &Budgets) -> Result<f64> {
        self.check_assignment(assignment, &[])?;
        budgets.check_qubits(self.wire_count())?;
        let init = self.initial_state(assignment, &[], 0)?;
        let branches = sim::run(self.wire_count(), &self.ops, vec![init]);
        Ok(sim::accept_probability(self.wire_count(), self.output_wire, &branches).clamp(0.0, 1.0))
    }

    /// Builds the register-file state; `free` registers take basis values
    /// decoded from `free_index` (first free register most significant).
    fn initial_state(&self, assignment: &Assignment, free: &[&str], free_index: usize) -> Result<Vec<num_complex::Complex64>> {
        let mut free_values = BTreeMap::new();
        let mut rem = free_index;
        for name in free.iter().rev() {
            let reg = self.register(name)?;
            let d = 1usize << reg.qubits;
            free_values.insert(name.to_string(), Qustring::basis(reg.qubits, rem % d));
            rem /= d;
        }
        let mut state = vec![crate::linalg::ONE];
        for (reg, slot) in self.registers.iter().zip(&self.slots) {
            let value = match reg.role {
                Role::Ancilla => Qustring::zero(reg.qubits),
                _ => free_values
                    .get(&reg.name)
                    .or_else(|| assignment.get(&reg.name))
                    .cloned()
                    .ok_or_else(|| Error::RegisterMismatch(format!("register {} is unassigned", reg.name)))?,
            };
            for _ in 0..slot.copies {
                state = sim::kron(&state, value.amplitudes());
            }
        }
        Ok(state)
    }

    /// Hermitian `M` with `⟨ψ|M|ψ⟩ = evaluate(fixed ∪ {free → ψ})` for every
    /// state `ψ` on the (joint) free registers.
    pub fn acceptance_operator(&self, fixed: &Assignment, free: &[&str], budgets: &Budgets) -> Result<AcceptanceOperator> {
        if free.is_empty() {
            return Err(Error::RegisterMismatch("no free register".into()));
        }
        let mut free_qubits = 0;
        for (i, name) in free.iter().enumerate() {
            if free[..i].contains(name) {
                return Err(Error::RegisterMismatch(format!("free register {name} listed twice")));
            }
            let reg = self.register(name)?;
            let slot = self.slot(name)?;
            if reg.role == Role::Ancilla {
                return Err(Error::RegisterMismatch(format!("ancilla register {name} cannot be free")));
            }
            if slot.copies != 1 {
                return Err(Error::NotSupported(format!(
                    "free register {name} is read {} times; the acceptance value is not quadratic in it",
                    slot.copies
                )));
            }
            free_qubits += reg.qubits;
        }
        self.check_assignment(fixed, free)?;
        budgets.check_qubits(self.wire_count())?;
        let dim = 1usize << free_qubits;
        budgets.check_matrix_dim(dim)?;

        let n = self.wire_count();
        // Each column: the accepted component of every branch.
        let columns: Vec<Vec<Vec<num_complex::Complex64>>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let init = self.initial_state(fixed, free, i)?;
                let branches = sim::run(n, &self.ops, vec![init]);
                Ok(branches.iter().map(|b| sim::accepted_part(n, self.output_wire, b)).collect())
            })
            .collect::<Result<_>>()?;

        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let mut acc = linalg::ZERO;
                for (bi, bj) in columns[i].iter().zip(&columns[j]) {
                    acc += bi.iter().zip(bj).map(|(a, b)| a.conj() * b).sum::<num_complex::Complex64>();
                }
                m[(i, j)] = acc;
                m[(j, i)] = acc.conj();
            }
        }
        Ok(AcceptanceOperator { matrix: m })
    }
}

/// The POVM element an acceptance function induces on a free register.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceOperator {
    matrix: CMatrix,
}

impl AcceptanceOperator {
    /// Wraps a matrix after checking it is Hermitian with spectrum in [0, 1].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let op = AcceptanceOperator { matrix };
        op.validate()?;
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn value(&self, psi: &Qustring) -> f64 {
        linalg::expectation(&self.matrix, psi.amplitudes())
    }

    pub fn complement(&self) -> AcceptanceOperator {
        let d = self.dim();
        AcceptanceOperator { matrix: CMatrix::identity(d, d) - &self.matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.matrix.nrows();
        if d == 0 || d != self.matrix.ncols() || !d.is_power_of_two() {
            return Err(Error::DimMismatch { left: d, right: self.matrix.ncols() });
        }
        if linalg::max_hermitian_deviation(&self.matrix) > 1e-10 {
            return Err(Error::InvalidInstance("acceptance operator is not Hermitian".into()));
        }
        let (vals, _) = linalg::hermitian_eigen(&self.matrix);
        let (lo, hi) = (vals[0], vals[d - 1]);
        if lo < -1e-10 || hi > 1.0 + 1e-10 {
            return Err(Error::InvalidInstance(format!("acceptance operator spectrum [{lo}, {hi}] leaves [0, 1]")));
        }
        Ok(())
    }
}
