//! JSON circuit description.
//!
//! ```json
//! {
//!   "registers": [{"name": "in", "role": "input", "qubits": 1},
//!                 {"name": "out", "role": "ancilla", "qubits": 1}],
//!   "gates": [{"name": "H", "wires": [0]},
//!             {"name": "RY", "params": [0.25], "wires": [1]},
//!             {"name": "CNOT", "wires": [0, 1]},
//!             {"name": "DEPHASE", "wires": [0]}],
//!   "output_wire": 1,
//!   "copy_count": [1]
//! }
//! ```
//!
//! A gate may carry an explicit `matrix` (rows of `[re, im]` pairs), which
//! takes precedence over its name. Serialization always writes matrices so
//! files round-trip bit for bit.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{CopyPolynomial, Gate, Op, QuantumFunction, Register};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub registers: Vec<Register>,
    pub gates: Vec<GateEntry>,
    pub output_wire: usize,
    #[serde(default)]
    pub copy_count: CopyPolynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    pub wires: Vec<usize>,
}

const DEPHASE: &str = "DEPHASE";

impl GateEntry {
    fn to_op(&self) -> Result<Op> {
        if self.name.eq_ignore_ascii_case(DEPHASE) {
            return Ok(Op::Dephase(self.wires.clone()));
        }
        match &self.matrix {
            Some(rows) => {
                let dim = rows.len();
                if rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::InvalidGate(format!("{}: matrix is not square", self.name)));
                }
                let m = CMatrix::from_fn(dim, dim, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
                Ok(Op::Gate(Gate::custom(self.name.clone(), m, self.wires.clone())?))
            }
            None => Ok(Op::Gate(Gate::named(&self.name, &self.params, &self.wires)?)),
        }
    }

    fn from_op(op: &Op) -> Self {
        match op {
            Op::Dephase(w) => GateEntry { name: DEPHASE.into(), matrix: None, params: Vec::new(), wires: w.clone() },
            Op::Gate(g) => {
                let m = g.matrix();
                let rows = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
                GateEntry { name: g.name().to_string(), matrix: Some(rows), params: Vec::new(), wires: g.wires().to_vec() }
            }
        }
    }
}

impl TryFrom<CircuitFile> for QuantumFunction {
    type Error = Error;

    fn try_from(file: CircuitFile) -> Result<Self> {
        let ops = file.gates.iter().map(GateEntry::to_op).collect::<Result<Vec<_>>>()?;
        QuantumFunction::from_parts(file.registers, ops, file.output_wire, file.copy_count)
    }
}

impl From<&QuantumFunction> for CircuitFile {
    fn from(f: &QuantumFunction) -> Self {
        CircuitFile {
            registers: f.registers.clone(),
            gates: f.ops.iter().map(GateEntry::from_op).collect(),
            output_wire: f.output_wire,
            copy_count: f.copy_count.clone(),
        }
    }
}

impl QuantumFunction {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitFile::from(self)).expect("circuit serializes")
    }
}
