use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource caps applied before any exponential-size allocation or enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Maximum number of qubits in any simulated register file.
    pub qubits: usize,
    /// Maximum number of raw grid vectors a single enumeration may visit.
    pub grid_count: u128,
    /// Maximum dimension of an extracted acceptance operator.
    pub matrix_dim: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { qubits: 20, grid_count: 1 << 24, matrix_dim: 1 << 10 }
    }
}

impl Budgets {
    pub fn check_qubits(&self, requested: usize) -> Result<()> {
        if requested > self.qubits {
            return Err(Error::SizeOverflow { requested, budget: self.qubits });
        }
        Ok(())
    }

    pub fn check_matrix_dim(&self, dim: usize) -> Result<()> {
        if dim > self.matrix_dim {
            return Err(Error::BudgetExceeded {
                what: "acceptance operator dimension",
                count: dim as u128,
                budget: self.matrix_dim as u128,
            });
        }
        Ok(())
    }

    pub fn check_grid(&self, what: &'static str, count: u128) -> Result<()> {
        if count > self.grid_count {
            return Err(Error::BudgetExceeded { what, count, budget: self.grid_count });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 || self.grid_count == 0 || self.matrix_dim == 0 {
            return Err(Error::ConfigInvalid("budgets must be positive".into()));
        }
        Ok(())
    }
}
