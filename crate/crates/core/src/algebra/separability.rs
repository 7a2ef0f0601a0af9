use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{QTuple, Qustring};
use crate::Budgets;

/// Amplitudes with modulus at or below this count as zero.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

/// A probe `(φ⃗, ψ⃗)`: `phi` holds `m` qustrings of `n` qubits each, `psi`
/// the remaining, unconstrained components (possibly none).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub phi: Vec<Qustring>,
    #[serde(default)]
    pub psi: Vec<Qustring>,
}

impl Probe {
    pub fn new(phi: Vec<Qustring>, psi: Vec<Qustring>) -> Self {
        Probe { phi, psi }
    }

    /// `φ⃗` followed by `ψ⃗` as one tuple.
    pub fn tuple(&self) -> Result<QTuple> {
        QTuple::new(self.phi.iter().chain(&self.psi).cloned().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    /// The implication held on every probe examined.
    pub verified: bool,
    /// Probes examined: the supplied ones plus one basis probe per basis
    /// tuple and distinct `ψ⃗`.
    pub probes_checked: usize,
    /// First violating probe, in probe order.
    pub counterexample: Option<Probe>,
}

/// Checks the separability implication on a finite universe: for each probe
/// `(φ⃗, ψ⃗)`, if every basis tuple `x⃗` has `⟨x⃗|φ⃗⟩ = 0` or `(x⃗, ψ⃗) ∈ S`, then
/// `(φ⃗, ψ⃗) ∈ S`. Membership answers come from `member`.
pub fn is_classically_separable<F>(
    member: F,
    n: usize,
    m: usize,
    probes: &[Probe],
    budgets: &Budgets,
) -> Result<SeparabilityReport>
where
    F: Fn(&QTuple) -> Result<bool> + Sync,
{
    let bits = n
        .checked_mul(m)
        .filter(|&b| b < usize::BITS as usize)
        .ok_or(Error::SizeOverflow { requested: usize::MAX, budget: budgets.qubits })?;
    budgets.check_grid("basis tuples", 1u128 << bits)?;
    for p in probes {
        if p.phi.len() != m || p.phi.iter().any(|q| q.size() != n) {
            return Err(Error::RegisterMismatch(format!("probe φ⃗ must hold {m} qustrings of {n} qubits")));
        }
    }
    let basis_count = 1usize << bits;
    let basis_tuple = |code: usize| -> Vec<Qustring> {
        (0..m).map(|j| Qustring::basis(n, code >> (n * (m - 1 - j)) & ((1 << n) - 1))).collect()
    };

    // Basis probes for every distinct ψ⃗, then the supplied probes.
    let mut psis: Vec<&Vec<Qustring>> = Vec::new();
    for p in probes {
        if !psis.iter().any(|q| q.len() == p.psi.len() && q.iter().zip(&p.psi).all(|(a, b)| a.same_state(b, 1e-10))) {
            psis.push(&p.psi);
        }
    }
    if psis.is_empty() {
        psis.push(&EMPTY);
    }
    let mut all: Vec<Probe> = Vec::new();
    for psi in &psis {
        for code in 0..basis_count {
            all.push(Probe::new(basis_tuple(code), psi.to_vec()));
        }
    }
    all.extend(probes.iter().cloned());

    let outcomes: Vec<bool> = all
        .par_iter()
        .map(|probe| {
            // ⟨x⃗|φ⃗⟩ is the product of per-part amplitudes.
            for code in 0..basis_count {
                let x = basis_tuple(code);
                let amp: f64 = probe.phi.iter().zip(&x).map(|(phi, xi)| phi.inner(xi).norm()).product();
                if amp > SUPPORT_TOLERANCE && !member(&Probe::new(x, probe.psi.clone()).tuple()?)? {
                    return Ok(true);
                }
            }
            member(&probe.tuple()?)
        })
        .collect::<Result<_>>()?;
    let counterexample = outcomes.iter().position(|ok| !ok).map(|i| all[i].clone());
    Ok(SeparabilityReport { verified: counterexample.is_none(), probes_checked: all.len(), counterexample })
}

static EMPTY: Vec<Qustring> = Vec::new();
