use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};

/// A unitary acting on an ordered list of wires; `wires[0]` is the most
/// significant bit of the gate's matrix index.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub(crate) name: String,
    pub(crate) matrix: CMatrix,
    pub(crate) wires: Vec<usize>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl Gate {
    /// Arbitrary unitary; checked to 1e-10.
    pub fn custom(name: impl Into<String>, matrix: CMatrix, wires: Vec<usize>) -> Result<Self> {
        let name = name.into();
        let dim = 1usize << wires.len();
        if wires.is_empty() || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidGate(format!(
                "{name}: matrix is {}x{}, {} wires need {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols(),
                wires.len()
            )));
        }
        let mut seen = wires.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != wires.len() {
            return Err(Error::InvalidGate(format!("{name}: repeated wire in {wires:?}")));
        }
        let defect = linalg::unitarity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::InvalidGate(format!("{name}: not unitary (defect {defect:e})")));
        }
        Ok(Gate { name, matrix, wires })
    }

    fn fixed(name: &str, entries: &[C64], wires: Vec<usize>) -> Self {
        let dim = 1usize << wires.len();
        Gate { name: name.into(), matrix: CMatrix::from_row_slice(dim, dim, entries), wires }
    }

    pub fn h(w: usize) -> Self {
        let s = c(FRAC_1_SQRT_2);
        Self::fixed("H", &[s, s, s, -s], vec![w])
    }

    pub fn x(w: usize) -> Self {
        Self::fixed("X", &[ZERO, ONE, ONE, ZERO], vec![w])
    }

    pub fn y(w: usize) -> Self {
        let i = C64::new(0.0, 1.0);
        Self::fixed("Y", &[ZERO, -i, i, ZERO], vec![w])
    }

    pub fn z(w: usize) -> Self {
        Self::fixed("Z", &[ONE, ZERO, ZERO, -ONE], vec![w])
    }

    pub fn s(w: usize) -> Self {
        Self::fixed("S", &[ONE, ZERO, ZERO, C64::new(0.0, 1.0)], vec![w])
    }

    pub fn t(w: usize) -> Self {
        Self::fixed("T", &[ONE, ZERO, ZERO, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)], vec![w])
    }

    /// `exp(-iθY/2)`.
    pub fn ry(theta: f64, w: usize) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::fixed("RY", &[c(co), c(-s), c(s), c(co)], vec![w])
    }

    /// `exp(-iθZ/2)`.
    pub fn rz(theta: f64, w: usize) -> Self {
        Self::fixed("RZ", &[C64::from_polar(1.0, -theta / 2.0), ZERO, ZERO, C64::from_polar(1.0, theta / 2.0)], vec![w])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::controlled_fixed("CNOT", &Self::x(0).matrix, &[control], target)
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self::controlled_fixed("CZ", &Self::z(0).matrix, &[control], target)
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Self::controlled_fixed("CCX", &Self::x(0).matrix, &[c0, c1], target)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::fixed(
            "SWAP",
            &[ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ONE],
            vec![a, b],
        )
    }

    fn controlled_fixed(name: &str, u: &CMatrix, controls: &[usize], target: usize) -> Self {
        let k = controls.len();
        let dim = 1usize << (k + 1);
        let mut m = CMatrix::identity(dim, dim);
        let base = dim - 2;
        for i in 0..2 {
            for j in 0..2 {
                m[(base + i, base + j)] = u[(i, j)];
            }
        }
        let mut wires = controls.to_vec();
        wires.push(target);
        Gate { name: name.into(), matrix: m, wires }
    }

    /// `u` applied to `target` when every control wire is `|1⟩`.
    pub fn controlled(u: &CMatrix, controls: &[usize], target: usize) -> Result<Self> {
        if u.nrows() != 2 || u.ncols() != 2 {
            return Err(Error::InvalidGate("controlled gates take a 2x2 target unitary".into()));
        }
        let g = Self::controlled_fixed("CU", u, controls, target);
        Self::custom(g.name, g.matrix, g.wires)
    }

    /// Basis permutation `|x⟩ ↦ |perm(x)⟩` on the listed wires.
    pub fn permutation(name: impl Into<String>, wires: Vec<usize>, perm: impl Fn(usize) -> usize) -> Result<Self> {
        let dim = 1usize << wires.len();
        let mut m = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            let y = perm(x);
            if y >= dim {
                return Err(Error::InvalidGate(format!("permutation maps {x} outside 0..{dim}")));
            }
            m[(y, x)] = ONE;
        }
        Self::custom(name, m, wires)
    }

    /// Named gates understood by the circuit file format.
    pub fn named(name: &str, params: &[f64], wires: &[usize]) -> Result<Self> {
        let arity = |n: usize| -> Result<()> {
            if wires.len() != n {
                return Err(Error::InvalidGate(format!("{name} takes {n} wires, got {}", wires.len())));
            }
            Ok(())
        };
        let param = |n: usize| -> Result<f64> {
            params.get(n).copied().ok_or_else(|| Error::InvalidGate(format!("{name} needs parameter {n}")))
        };
        let gate = match name.to_ascii_uppercase().as_str() {
            "H" => arity(1).map(|_| Self::h(wires[0]))?,
            "X" => arity(1).map(|_| Self::x(wires[0]))?,
            "Y" => arity(1).map(|_| Self::y(wires[0]))?,
            "Z" => arity(1).map(|_| Self::z(wires[0]))?,
            "S" => arity(1).map(|_| Self::s(wires[0]))?,
            "T" => arity(1).map(|_| Self::t(wires[0]))?,
            "RY" => {
                arity(1)?;
                Self::ry(param(0)?, wires[0])
            }
            "RZ" => {
                arity(1)?;
                Self::rz(param(0)?, wires[0])
            }
            "CNOT" | "CX" => arity(2).map(|_| Self::cnot(wires[0], wires[1]))?,
            "CZ" => arity(2).map(|_| Self::cz(wires[0], wires[1]))?,
            "CCX" | "TOFFOLI" => arity(3).map(|_| Self::toffoli(wires[0], wires[1], wires[2]))?,
            "SWAP" => arity(2).map(|_| Self::swap(wires[0], wires[1]))?,
            other => return Err(Error::InvalidGate(format!("unknown gate {other} without a matrix"))),
        };
        if gate.wires.iter().collect::<std::collections::BTreeSet<_>>().len() != gate.wires.len() {
            return Err(Error::InvalidGate(format!("{name}: repeated wire in {wires:?}")));
        }
        Ok(gate)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub(crate) fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate { name: self.name.clone(), matrix: self.matrix.clone(), wires: self.wires.iter().map(|&w| map(w)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_gates_are_unitary() {
        for g in [
            Gate::h(0),
            Gate::x(0),
            Gate::y(0),
            Gate::z(0),
            Gate::s(0),
            Gate::t(0),
            Gate::ry(0.3, 0),
            Gate::rz(1.1, 0),
            Gate::cnot(0, 1),
            Gate::cz(0, 1),
            Gate::toffoli(0, 1, 2),
            Gate::swap(0, 1),
        ] {
            assert!(linalg::unitarity_defect(&g.matrix) < 1e-14, "{}", g.name);
        }
    }

    #[test]
    fn rejects_non_unitary_and_bad_shapes() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(Gate::custom("bad", m, vec![0]), Err(Error::InvalidGate(_))));
        assert!(Gate::custom("shape", CMatrix::identity(2, 2), vec![0, 1]).is_err());
        assert!(Gate::named("CNOT", &[], &[1, 1]).is_err());
        assert!(Gate::named("RY", &[], &[0]).is_err());
        assert!(Gate::named("FOO", &[], &[0]).is_err());
    }

    #[test]
    fn permutation_must_stay_in_range() {
        assert!(Gate::permutation("p", vec![0], |x| x + 1).is_err());
        assert!(Gate::permutation("p", vec![0], |x| 1 - x).is_ok());
    }
}
