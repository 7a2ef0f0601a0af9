//! Quantum-quantified acceptance values: eigenvalue oracle, grid ranges,
//! nested sup/inf evaluation, classical quantifiers, promise decisions and
//! majority-vote amplification.

mod eigen;
mod grid;
mod instance;
mod kdtree;
mod qopt;
#[cfg(test)]
mod tests;

pub use eigen::{eigen_oracle, Quantifier, DEGENERACY_TOLERANCE};
pub use grid::{norm_precision, truncate_to_grid, truncation_norm_deviation, GridSpec, DEDUP_LIMIT};
pub use instance::{HierarchyInstance, InstanceFile};
pub use qopt::{
    classical_quantifier_value, decide, majority_probability, qopt_value, DecisionThresholds, Method, QoptResult, Verdict,
    GAP_TOLERANCE,
};

use crate::error::Result;
use crate::Budgets;

/// `t`-fold majority-vote amplification of an instance.
pub fn amplify(inst: &HierarchyInstance, t: usize, budgets: &Budgets) -> Result<HierarchyInstance> {
    inst.amplify(t, budgets)
}

/// `1 - f` with every quantifier flipped.
pub fn complement_instance(inst: &HierarchyInstance) -> HierarchyInstance {
    inst.complement()
}
