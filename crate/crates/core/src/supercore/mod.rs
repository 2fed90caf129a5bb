//! Supercommutative polynomial kernel: signed monomials, Koszul products,
//! odd derivatives, substitution and the Berezin integral.

mod monomial;
mod poly;
mod random;
mod vars;

pub use monomial::{odd_after, odd_before, reorder_sign, SuperMonomial};
pub use poly::{Side, SuperPoly};
pub use random::{random_homogeneous, random_homogeneous_with};
pub use vars::{grassmann_names, same_table, Var, VarTable, MAX_ODD_VARS};

#[cfg(test)]
mod tests;
