//! Circuit-to-circuit constructions: complementing, classical mixing of an
//! input register, and t-fold majority voting.

use super::{Gate, Op, QuantumFunction, Register, Role};
use crate::error::{Error, Result};

impl QuantumFunction {
    /// `1 - f`: flips the output wire after the last op.
    pub fn negated(&self) -> QuantumFunction {
        let mut ops = self.ops.clone();
        ops.push(Op::Gate(Gate::x(self.output_wire)));
        QuantumFunction { ops, ..self.clone() }
    }

    /// The mixed function `h'(…, φ, …) = Σ_x |⟨x|φ⟩|² h(…, |x⟩, …)`.
    ///
    /// The register is dephased in the computational basis before `h` runs.
    /// When `h` reads `q > 1` copies of the register, the mixed function
    /// reads a single copy and fans the measured basis value out into `q`
    /// fresh ancilla copies, which `h` then consumes.
    pub fn classical_mix(&self, register: &str) -> Result<QuantumFunction> {
        let idx = self.register_index(register)?;
        if self.registers[idx].role == Role::Ancilla {
            return Err(Error::RegisterMismatch(format!("cannot mix ancilla register {register}")));
        }
        let slot = self.slots[idx].clone();
        if slot.copies == 1 {
            let mut ops = vec![Op::Dephase(slot.wires().collect())];
            ops.extend(self.ops.iter().cloned());
            return QuantumFunction::from_parts(self.registers.clone(), ops, self.output_wire, self.copy_count.clone());
        }

        let mut registers = self.registers.clone();
        registers[idx].fixed_copies = Some(1);
        let fan_name = format!("{register}.copies");
        registers.push(Register::new(fan_name.clone(), Role::Ancilla, slot.span()));
        // Provisional layout to find the new wire positions.
        let probe = QuantumFunction::from_parts(registers.clone(), Vec::new(), 0, self.copy_count.clone())?;
        let fan_start = probe.slot(&fan_name)?.start;
        let new_input = probe.slots[idx].clone();

        let map = |w: usize| -> usize {
            let (r, old) = self.slots.iter().enumerate().find(|(_, s)| s.wires().contains(&w)).expect("validated wire");
            let offset = w - old.start;
            if r == idx {
                fan_start + offset
            } else {
                probe.slots[r].start + offset
            }
        };

        let mut ops = vec![Op::Dephase(new_input.wires().collect())];
        for copy in 0..slot.copies {
            for j in 0..slot.qubits {
                ops.push(Op::Gate(Gate::cnot(new_input.start + j, fan_start + copy * slot.qubits + j)));
            }
        }
        ops.extend(self.ops.iter().map(|op| op.remapped(map)));
        QuantumFunction::from_parts(registers, ops, map(self.output_wire), self.copy_count.clone())
    }

    /// Runs `t` independent copies of the circuit and writes the majority of
    /// their output bits to a fresh output wire.
    ///
    /// Input registers read `t` times as many copies; witness and ancilla
    /// registers grow to `t` blocks of their former width, block `j` feeding
    /// copy `j` of the circuit.
    pub fn majority_vote(&self, t: usize) -> Result<QuantumFunction> {
        if t.is_multiple_of(2) {
            return Err(Error::EvenT(t));
        }
        let mut registers: Vec<Register> = self
            .registers
            .iter()
            .map(|r| {
                let mut r = r.clone();
                match r.role {
                    Role::Input => r.fixed_copies = r.fixed_copies.map(|c| c * t),
                    Role::Witness | Role::Ancilla => r.qubits *= t,
                }
                r
            })
            .collect();
        let out_name = "majority.out".to_string();
        registers.push(Register::new(out_name.clone(), Role::Ancilla, 1));
        let copy_count = self.copy_count.scaled(t as u64);
        let probe = QuantumFunction::from_parts(registers.clone(), Vec::new(), 0, copy_count.clone())?;
        let out_wire = probe.slot(&out_name)?.start;

        let block_map = |j: usize| {
            let probe = &probe;
            move |w: usize| -> usize {
                let (r, old) = self.slots.iter().enumerate().find(|(_, s)| s.wires().contains(&w)).expect("validated wire");
                probe.slots[r].start + j * old.span() + (w - old.start)
            }
        };

        let mut ops = Vec::with_capacity(self.ops.len() * t + 1);
        let mut votes = Vec::with_capacity(t + 1);
        for j in 0..t {
            let map = block_map(j);
            ops.extend(self.ops.iter().map(|op| op.remapped(map)));
            votes.push(map(self.output_wire));
        }
        votes.push(out_wire);
        let majority = Gate::permutation(format!("MAJ{t}"), votes, |x| {
            let ones = (x >> 1).count_ones() as usize;
            x ^ usize::from(2 * ones > t)
        })?;
        ops.push(Op::Gate(majority));
        QuantumFunction::from_parts(registers, ops, out_wire, copy_count)
    }
}
