use serde::{Deserialize, Serialize};

use crate::circuit::AcceptanceOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::state::Qustring;
use crate::Budgets;

/// Quantifier over a witness level: `Sup` is ∃-like, `Inf` is ∀-like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Sup,
    Inf,
}

impl Quantifier {
    pub fn flip(self) -> Self {
        match self {
            Quantifier::Sup => Quantifier::Inf,
            Quantifier::Inf => Quantifier::Sup,
        }
    }

    /// Whether `candidate` strictly improves on `incumbent`.
    pub fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Quantifier::Sup => candidate > incumbent,
            Quantifier::Inf => candidate < incumbent,
        }
    }

    /// The worst possible value, the identity of the fold.
    pub fn start(self) -> f64 {
        match self {
            Quantifier::Sup => f64::NEG_INFINITY,
            Quantifier::Inf => f64::INFINITY,
        }
    }
}

/// Eigenvalues closer than this to the extreme count as degenerate with it.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Extreme eigenvalue of `M` and a unit eigenvector reaching it.
///
/// In a degenerate extreme eigenspace the witness is the normalized
/// projection of the first basis vector `|i⟩` (lowest `i`) that has a
/// nonvanishing projection, phase-fixed so its first nonzero amplitude is
/// real and positive.
pub fn eigen_oracle(m: &AcceptanceOperator, mode: Quantifier, budgets: &Budgets) -> Result<(f64, Qustring)> {
    budgets.check_matrix_dim(m.dim())?;
    extreme_eigenpair(m.matrix(), mode)
}

pub(crate) fn extreme_eigenpair(m: &CMatrix, mode: Quantifier) -> Result<(f64, Qustring)> {
    let d = m.nrows();
    if d == 0 || !d.is_power_of_two() || m.ncols() != d {
        return Err(Error::DimMismatch { left: d, right: m.ncols() });
    }
    let (vals, vecs) = linalg::hermitian_eigen(m);
    let (extreme, in_space): (f64, Vec<usize>) = match mode {
        Quantifier::Sup => {
            let top = vals[d - 1];
            (top, (0..d).filter(|&i| top - vals[i] <= DEGENERACY_TOLERANCE).collect())
        }
        Quantifier::Inf => {
            let bottom = vals[0];
            (bottom, (0..d).filter(|&i| vals[i] - bottom <= DEGENERACY_TOLERANCE).collect())
        }
    };
    let mut witness = None;
    for basis in 0..d {
        // P|basis⟩ with P the projector onto the extreme eigenspace.
        let mut v = vec![ZERO; d];
        for &c in &in_space {
            let coeff = vecs[(basis, c)].conj();
            for (row, slot) in v.iter_mut().enumerate() {
                *slot += vecs[(row, c)] * coeff;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            witness = Some(v);
            break;
        }
    }
    let mut v = witness.expect("a nonzero eigenspace has a basis vector with nonzero projection");
    linalg::fix_phase(&mut v);
    let psi = Qustring::normalized(v)?;
    // Report the Rayleigh quotient; it equals the eigenvalue up to rounding.
    let value = linalg::expectation(m, psi.amplitudes());
    debug_assert!((value - extreme).abs() < 1e-9);
    Ok((value, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use num_complex::Complex64 as C64;

    fn op(entries: &[f64]) -> AcceptanceOperator {
        let d = (entries.len() as f64).sqrt() as usize;
        AcceptanceOperator::new(CMatrix::from_row_slice(d, d, &entries.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>()))
            .unwrap()
    }

    #[test]
    fn identity_returns_first_basis_state() {
        let (v, w) = eigen_oracle(&op(&[1.0, 0.0, 0.0, 1.0]), Quantifier::Sup, &Budgets::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(w, Qustring::basis(1, 0));
    }

    #[test]
    fn diagonal_sup_and_inf() {
        let m = op(&[0.9, 0.0, 0.0, 0.1]);
        let (v, w) = eigen_oracle(&m, Quantifier::Sup, &Budgets::default()).unwrap();
        assert!((v - 0.9).abs() < 1e-12 && w.same_state(&Qustring::basis(1, 0), 1e-9));
        let (v, w) = eigen_oracle(&m, Quantifier::Inf, &Budgets::default()).unwrap();
        assert!((v - 0.1).abs() < 1e-12 && w.same_state(&Qustring::basis(1, 1), 1e-9));
    }

    #[test]
    fn scaled_plus_projector() {
        let m = op(&[0.4, 0.4, 0.4, 0.4]);
        let (v, w) = eigen_oracle(&m, Quantifier::Sup, &Budgets::default()).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
        assert!(w.same_state(&Qustring::plus(1), 1e-9));
        assert!(w.amplitudes()[0].re > 0.0 && w.amplitudes()[0].im == 0.0);
    }

    #[test]
    fn degenerate_space_prefers_low_basis_index() {
        // Top eigenspace spanned by |1⟩ and |2⟩ in a 4-dim space.
        let m = op(&[0.2, 0.0, 0.0, 0.0, 0.0, 0.7, 0.0, 0.0, 0.0, 0.0, 0.7, 0.0, 0.0, 0.0, 0.0, 0.1]);
        let (v, w) = eigen_oracle(&m, Quantifier::Sup, &Budgets::default()).unwrap();
        assert!((v - 0.7).abs() < 1e-12);
        assert!(w.same_state(&Qustring::basis(2, 1), 1e-9));
        assert_eq!(w.amplitudes()[1], ONE);
    }

    #[test]
    fn budget_is_enforced() {
        let m = op(&[1.0, 0.0, 0.0, 1.0]);
        let tiny = Budgets { matrix_dim: 1, ..Budgets::default() };
        assert!(matches!(eigen_oracle(&m, Quantifier::Sup, &tiny), Err(Error::BudgetExceeded { .. })));
    }
}
