//! Dense state-vector execution with branch ensembles for dephasing.
//!
//! A dephasing op replaces every branch `|ψ⟩` by the projections
//! `(|x⟩⟨x| ⊗ I)|ψ⟩` for all basis values `x` of the dephased wires, so the
//! ensemble `Σ_b |ψ_b⟩⟨ψ_b|` is exactly the block-diagonal density matrix.
//! Zero-weight branches are kept so ensembles from different initial states
//! stay aligned branch by branch.

use num_complex::Complex64 as C64;

use super::{Gate, Op};
use crate::linalg::ZERO;

pub(crate) fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

#[inline]
fn bit(n: usize, wire: usize) -> usize {
    1usize << (n - 1 - wire)
}

/// Index offsets of the `2^k` gate basis states, `wires[0]` most significant.
fn offsets(n: usize, wires: &[usize]) -> Vec<usize> {
    let k = wires.len();
    (0..1usize << k)
        .map(|x| wires.iter().enumerate().filter(|(i, _)| x >> (k - 1 - i) & 1 == 1).map(|(_, &w)| bit(n, w)).sum())
        .collect()
}

pub(crate) fn apply_gate(n: usize, state: &mut [C64], gate: &Gate) {
    let offs = offsets(n, gate.wires());
    let mask: usize = gate.wires().iter().map(|&w| bit(n, w)).sum();
    let m = gate.matrix();
    let d = offs.len();
    let mut buf = vec![ZERO; d];
    for base in 0..state.len() {
        if base & mask != 0 {
            continue;
        }
        for (slot, off) in buf.iter_mut().zip(&offs) {
            *slot = state[base + off];
        }
        for (r, off) in offs.iter().enumerate() {
            let mut acc = ZERO;
            for c in 0..d {
                acc += m[(r, c)] * buf[c];
            }
            state[base + off] = acc;
        }
    }
}

fn dephase(n: usize, state: &[C64], wires: &[usize]) -> Vec<Vec<C64>> {
    let offs = offsets(n, wires);
    let mask: usize = wires.iter().map(|&w| bit(n, w)).sum();
    offs.iter().map(|&value| state.iter().enumerate().map(|(i, &a)| if i & mask == value { a } else { ZERO }).collect()).collect()
}

pub(crate) fn run(n: usize, ops: &[Op], mut branches: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    for op in ops {
        match op {
            Op::Gate(g) => {
                for b in branches.iter_mut() {
                    apply_gate(n, b, g);
                }
            }
            Op::Dephase(wires) => {
                branches = branches.iter().flat_map(|b| dephase(n, b, wires)).collect();
            }
        }
    }
    branches
}

/// Amplitudes of the branch with the output wire reading `1`.
pub(crate) fn accepted_part(n: usize, output: usize, state: &[C64]) -> Vec<C64> {
    let b = bit(n, output);
    state.iter().enumerate().filter(|(i, _)| i & b != 0).map(|(_, &a)| a).collect()
}

pub(crate) fn accept_probability(n: usize, output: usize, branches: &[Vec<C64>]) -> f64 {
    let b = bit(n, output);
    branches.iter().flat_map(|s| s.iter().enumerate().filter(|(i, _)| i & b != 0).map(|(_, a)| a.norm_sqr())).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    #[test]
    fn cnot_on_plus_entangles() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut st = vec![C64::new(s, 0.0), ZERO, C64::new(s, 0.0), ZERO];
        apply_gate(2, &mut st, &Gate::cnot(0, 1));
        assert!((st[3].re - s).abs() < 1e-15 && st[2].norm() < 1e-15);
    }

    #[test]
    fn gate_wire_order_is_respected() {
        // CNOT with control on wire 1: |01⟩ -> |11⟩.
        let mut st = vec![ZERO, ONE, ZERO, ZERO];
        apply_gate(2, &mut st, &Gate::cnot(1, 0));
        assert_eq!(st[3], ONE);
    }

    #[test]
    fn dephase_keeps_aligned_zero_branches() {
        let st = vec![ONE, ZERO, ZERO, ZERO];
        let out = dephase(2, &st, &[0]);
        assert_eq!(out.len(), 2);
        assert!(out[1].iter().all(|a| a.norm() == 0.0));
    }
}
