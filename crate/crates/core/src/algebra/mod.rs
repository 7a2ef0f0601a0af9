//! Partial decision problems `(A, B)`: set algebra, classical parts and the
//! finite-universe separability check.

mod classical;
mod problem;
mod separability;
#[cfg(test)]
mod tests;

pub use classical::{classical_part, pair, unpair, ClassicalPart, ClassicalParts};
pub use problem::{
    complement, includes, intersect, union, ExplicitProblem, Membership, PartialProblem, ProblemFile, ThresholdProblem,
    STATE_TOLERANCE,
};
pub use separability::{is_classically_separable, Probe, SeparabilityReport, SUPPORT_TOLERANCE};

use crate::error::Result;
use crate::state::Qustring;
use crate::Budgets;

/// Which half of a partial problem to treat as the set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Accept,
    Reject,
}

/// Separability of the accept (or reject) set of a single-input problem
/// whose input register holds `n` qubits.
pub fn problem_separability(
    p: &PartialProblem,
    side: Side,
    n: usize,
    probes: &[Qustring],
    budgets: &Budgets,
) -> Result<SeparabilityReport> {
    let wanted = match side {
        Side::Accept => Membership::Accept,
        Side::Reject => Membership::Reject,
    };
    let probes: Vec<Probe> = probes.iter().map(|q| Probe::new(vec![q.clone()], Vec::new())).collect();
    is_classically_separable(|t| Ok(p.membership(t)? == wanted), n, 1, &probes, budgets)
}
