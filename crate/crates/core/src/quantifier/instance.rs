use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::eigen::Quantifier;
use crate::circuit::{Assignment, CircuitFile, QuantumFunction, Role};
use crate::error::{Error, Result};
use crate::state::Qustring;
use crate::Budgets;

/// A quantified acceptance problem: `opr₁ ψ⃗₁ opr₂ ψ⃗₂ … f(φ⃗, ψ⃗₁, …, ψ⃗_k)`
/// with alternating quantifiers starting from `leading`.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyInstance {
    base: QuantumFunction,
    levels: Vec<Vec<String>>,
    leading: Quantifier,
    inputs: Assignment,
    grid_precision: u32,
}

impl HierarchyInstance {
    /// `levels[i]` lists the witness registers bound at level `i`. Every
    /// level has the same arity and every witness register the same width
    /// `p`; the default grid precision for modeled levels is `3p`.
    pub fn new(base: QuantumFunction, levels: Vec<Vec<String>>, leading: Quantifier, inputs: Assignment) -> Result<Self> {
        let witnesses: BTreeSet<&str> = base.registers_with_role(Role::Witness).into_iter().collect();
        let mut bound = BTreeSet::new();
        let arity = levels.first().map_or(0, Vec::len);
        let mut width = None;
        for (i, level) in levels.iter().enumerate() {
            if level.is_empty() || level.len() != arity {
                return Err(Error::InvalidInstance(format!("level {} has arity {}, expected {arity}", i + 1, level.len())));
            }
            for name in level {
                if !witnesses.contains(name.as_str()) {
                    return Err(Error::InvalidInstance(format!("{name} is not a witness register")));
                }
                if !bound.insert(name.as_str()) {
                    return Err(Error::InvalidInstance(format!("{name} is bound twice")));
                }
                let q = base.register(name)?.qubits;
                if *width.get_or_insert(q) != q {
                    return Err(Error::InvalidInstance(format!("{name} has {q} qubits, other witnesses {}", width.unwrap_or(q))));
                }
                if base.slot(name)?.copies != 1 {
                    return Err(Error::NotSupported(format!("witness {name} is read more than once")));
                }
            }
        }
        if bound.len() != witnesses.len() {
            let free: Vec<_> = witnesses.difference(&bound).collect();
            return Err(Error::InvalidInstance(format!("witness registers {free:?} are not bound by any level")));
        }
        for name in base.registers_with_role(Role::Input) {
            let q = inputs.get(name).ok_or_else(|| Error::RegisterMismatch(format!("input {name} is unassigned")))?;
            if q.size() != base.register(name)?.qubits {
                return Err(Error::RegisterMismatch(format!("input {name} has the wrong width")));
            }
        }
        for name in inputs.keys() {
            if base.register(name)?.role != Role::Input {
                return Err(Error::RegisterMismatch(format!("{name} is not an input register")));
            }
        }
        let p = width.unwrap_or(1);
        Ok(HierarchyInstance { base, levels, leading, inputs, grid_precision: 3 * p as u32 })
    }

    pub fn with_grid_precision(mut self, r: u32) -> Self {
        self.grid_precision = r;
        self
    }

    pub fn base(&self) -> &QuantumFunction {
        &self.base
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    pub fn leading(&self) -> Quantifier {
        self.leading
    }

    pub fn inputs(&self) -> &Assignment {
        &self.inputs
    }

    pub fn grid_precision(&self) -> u32 {
        self.grid_precision
    }

    /// Number of quantified levels `k`.
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    /// Witness registers per level `m` (zero when `k = 0`).
    pub fn m(&self) -> usize {
        self.levels.first().map_or(0, Vec::len)
    }

    /// Qubits per witness register `p` (zero when `k = 0`).
    pub fn p(&self) -> usize {
        self.levels.first().and_then(|l| l.first()).map_or(0, |n| self.base.register(n).map_or(0, |r| r.qubits))
    }

    /// Quantifier of level `i` (zero-based).
    pub fn quantifier(&self, i: usize) -> Quantifier {
        if i.is_multiple_of(2) {
            self.leading
        } else {
            self.leading.flip()
        }
    }

    pub fn with_inputs(&self, inputs: Assignment) -> Result<Self> {
        let mut inst = HierarchyInstance::new(self.base.clone(), self.levels.clone(), self.leading, inputs)?;
        inst.grid_precision = self.grid_precision;
        Ok(inst)
    }

    /// `1 - f` with every quantifier flipped.
    pub fn complement(&self) -> HierarchyInstance {
        HierarchyInstance { base: self.base.negated(), leading: self.leading.flip(), ..self.clone() }
    }

    /// The same function with the level order reversed, so the quantifier
    /// prefix reads from the innermost level outward.
    pub fn transposed(&self) -> HierarchyInstance {
        let mut levels = self.levels.clone();
        levels.reverse();
        let leading = if self.k() == 0 { self.leading } else { self.quantifier(self.k() - 1) };
        HierarchyInstance { levels, leading, ..self.clone() }
    }

    /// Majority vote over `t` runs of the base circuit. Witness registers
    /// widen to `t·p` qubits, so provers may entangle the copies.
    pub fn amplify(&self, t: usize, budgets: &Budgets) -> Result<HierarchyInstance> {
        let base = self.base.majority_vote(t)?;
        budgets.check_qubits(base.wire_count())?;
        let mut inst = HierarchyInstance::new(base, self.levels.clone(), self.leading, self.inputs.clone())?;
        inst.grid_precision = 3 * inst.p() as u32;
        Ok(inst)
    }

    /// Full assignment for a complete choice of witnesses, level by level.
    pub(crate) fn assignment(&self, witnesses: &[Vec<Qustring>]) -> Assignment {
        let mut a = self.inputs.clone();
        for (level, values) in self.levels.iter().zip(witnesses) {
            for (name, v) in level.iter().zip(values) {
                a.insert(name.clone(), v.clone());
            }
        }
        a
    }
}

/// JSON instance description.
///
/// ```json
/// {"circuit": {…}, "levels": [["w1"], ["w2"]], "leading": "sup",
///  "inputs": {"x": {"size_n": 1, "amplitudes": [[1, 0], [0, 0]]}},
///  "grid_precision": 3}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub circuit: CircuitFile,
    #[serde(default)]
    pub levels: Vec<Vec<String>>,
    #[serde(default = "default_leading")]
    pub leading: Quantifier,
    #[serde(default)]
    pub inputs: Assignment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_precision: Option<u32>,
}

fn default_leading() -> Quantifier {
    Quantifier::Sup
}

impl TryFrom<InstanceFile> for HierarchyInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let inst = HierarchyInstance::new(f.circuit.try_into()?, f.levels, f.leading, f.inputs)?;
        Ok(match f.grid_precision {
            Some(r) => inst.with_grid_precision(r),
            None => inst,
        })
    }
}

impl From<&HierarchyInstance> for InstanceFile {
    fn from(inst: &HierarchyInstance) -> Self {
        InstanceFile {
            circuit: CircuitFile::from(&inst.base),
            levels: inst.levels.clone(),
            leading: inst.leading,
            inputs: inst.inputs.clone(),
            grid_precision: Some(inst.grid_precision),
        }
    }
}

impl HierarchyInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<InstanceFile>(text)?.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self)).expect("instance serializes")
    }
}
