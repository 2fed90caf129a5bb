//! The deformed Clifford superalgebra, its Fock module and traces.

mod element;
mod fock;
mod hpoly;
mod moments;
mod odd;
mod word;

pub use element::{quantize, CliffordElement};
pub use fock::{word_supertrace, FockRep, SuperMatrix};
pub use hpoly::HPoly;
pub use moments::{
    lemma4_defect, lemma4_scan, moment, moment_report, proportionality, quantize_generic,
    quantize_po, supertrace, MomentReport, Quantized,
};
pub use odd::{
    matrix_qtr, matrix_qtr_constant, odd_decompose, odd_generators, odd_structure, qtr,
    quantize_odd, signature, theta_blade, theta_from_coeffs, theta_hat, ThetaElement,
};
pub use word::{word_product, CliffordWord, ProductTable, WordTerm};

#[cfg(test)]
mod tests;
