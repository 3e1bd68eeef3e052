//! Equilibrium computation and verification for all-pay contests in which
//! only the top `n2` of `n1` players by ability are admitted.

pub mod beliefs;
pub mod designer;
pub mod equilibrium;
pub mod error;
pub mod math_kernel;
pub mod model;
pub mod oracle;
pub mod two_stage;

pub use error::{Error, Result};
pub use math_kernel::Quadrature;
pub use model::{AbilityDistribution, ContestSpec, CostFn, Prior, PrizeTemplate};
