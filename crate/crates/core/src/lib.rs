//! Exact computations for Lie superalgebras on purely odd superspaces.

pub mod clifford;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod poisson;
pub mod zoo;
pub mod rat;
pub mod solver;
pub mod conventions;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod supercore;

pub use error::{Error, Result};
pub use rat::Rat;
pub use supercore::{SuperMonomial, SuperPoly, Var, VarTable};
