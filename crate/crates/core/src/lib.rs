pub mod algebra;
pub mod budget;
pub mod circuit;
pub mod codec;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod quantifier;
pub mod random;
pub mod state;

pub use budget::Budgets;
pub use error::{Error, Result};
