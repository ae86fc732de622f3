//! Free δ-rings over `Z[1/p]`, optionally with coefficients truncated in `s = q - 1`.
//!
//! Frobenius lift, `δ`, divided powers `γ(f) = f^p/p`, q-divided powers
//! `γ_q(f) = φ(f)/[p]_q - δ(f)`, and constructive decompositions of iterated
//! divided powers into q-divided powers and back.

pub mod error;
pub mod poly;
pub mod random;
pub mod rules;
pub mod series;
pub mod witness;

pub use error::{Error, Result};
pub use poly::{DeltaPoly, Monomial, Sym};
pub use rules::{gamma_split, verify_product_rules, verify_sum_rules, IdentityCheck, RuleReport};
pub use witness::{decompose_gamma_iterate, decompose_gammaq_iterate, Witness, WitnessReport};
