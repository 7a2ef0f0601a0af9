//! Ready-made acceptance functions used by the examples, tests and suites.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{Gate, QuantumFunction, Role};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// RY angle whose `|1⟩` population is `p`.
pub fn ry_angle(p: f64) -> f64 {
    2.0 * p.clamp(0.0, 1.0).sqrt().asin()
}

/// Accepts with probability `p` and ignores every listed register.
pub fn constant(p: f64, ignored: &[(&str, Role, usize)]) -> Result<QuantumFunction> {
    let mut b = QuantumFunction::builder();
    let mut wires = 0;
    for &(name, role, q) in ignored {
        b = b.register(name, role, q);
        wires += q;
    }
    b.register("out", Role::Ancilla, 1).gate(Gate::ry(ry_angle(p), wires)).output(wires).build()
}

/// Copies a one-qubit register straight to the output wire.
pub fn measure_qubit(name: &str, role: Role) -> Result<QuantumFunction> {
    QuantumFunction::builder().register(name, role, 1).register("out", Role::Ancilla, 1).gate(Gate::cnot(0, 1)).output(1).build()
}

/// Accepts iff two one-qubit registers agree when measured in the
/// computational basis.
pub fn equality_test(a: (&str, Role), b: (&str, Role)) -> Result<QuantumFunction> {
    QuantumFunction::builder()
        .register(a.0, a.1, 1)
        .register(b.0, b.1, 1)
        .register("out", Role::Ancilla, 1)
        .gates([Gate::cnot(0, 1), Gate::x(1), Gate::cnot(1, 2)])
        .output(2)
        .build()
}

/// Circuit whose acceptance operator on the joint registers is `m`.
///
/// `m` must be Hermitian with spectrum in [0, 1]. The circuit rotates into
/// the eigenbasis of `m` and then loads eigenvalue `d_k` into the output
/// amplitude with a `k`-controlled RY.
pub fn from_acceptance_matrix(registers: &[(&str, Role, usize)], m: &CMatrix) -> Result<QuantumFunction> {
    let qubits: usize = registers.iter().map(|r| r.2).sum();
    let dim = 1usize << qubits;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimMismatch { left: m.nrows(), right: dim });
    }
    let (vals, vecs) = linalg::hermitian_eigen(m);
    if vals[0] < -1e-10 || vals[dim - 1] > 1.0 + 1e-10 {
        return Err(Error::InvalidInstance(format!("spectrum [{}, {}] leaves [0, 1]", vals[0], vals[dim - 1])));
    }
    let mut load = CMatrix::zeros(2 * dim, 2 * dim);
    for (k, &d) in vals.iter().enumerate() {
        let (s, c) = (ry_angle(d) / 2.0).sin_cos();
        let base = 2 * k;
        load[(base, base)] = C64::new(c, 0.0);
        load[(base, base + 1)] = C64::new(-s, 0.0);
        load[(base + 1, base)] = C64::new(s, 0.0);
        load[(base + 1, base + 1)] = C64::new(c, 0.0);
    }
    let reg_wires: Vec<usize> = (0..qubits).collect();
    let mut all = reg_wires.clone();
    all.push(qubits);
    let mut b = QuantumFunction::builder();
    for &(name, role, q) in registers {
        b = b.register(name, role, q);
    }
    b.register("out", Role::Ancilla, 1)
        .gate(Gate::custom("EIGBASIS", vecs.adjoint(), reg_wires)?)
        .gate(Gate::custom("LOAD", load, all)?)
        .output(qubits)
        .build()
}

/// Accepts `|+⟩` with probability 1/2 and `|−⟩` never: acceptance operator
/// `½|+⟩⟨+|` on a one-qubit input, ignoring an optional witness.
pub fn half_plus_acceptor(with_witness: bool) -> Result<QuantumFunction> {
    let mut b = QuantumFunction::builder();
    let mut w = 0;
    if with_witness {
        b = b.register("w1", Role::Witness, 1);
        w = 1;
    }
    // H maps |+⟩ to |0⟩; X turns that into the control value; the coin halves it.
    b.register("in", Role::Input, 1)
        .register("coin", Role::Ancilla, 1)
        .register("out", Role::Ancilla, 1)
        .gates([Gate::h(w), Gate::x(w), Gate::ry(PI / 2.0, w + 1), Gate::toffoli(w, w + 1, w + 2)])
        .output(w + 2)
        .build()
}
