//! Finite-precision models of q-PD envelopes: the Nygaard filtration on
//! `⊕ Z_p[[q-1]] x^i/[⌊i⌋]_q!`, q-factorial divisibility, and lifts of
//! divided powers into the q-Hodge filtration of `qD_α`.

pub mod envelope;
pub mod error;
pub mod factorial;
pub mod module;
pub mod report;

pub use envelope::{alpha_one_obstruction, build_gamma_q_tilde, filtration_residue, gammaq_qminus1_closed_form, GammaTilde, QPDElement};
pub use error::{Error, Result};
pub use factorial::{phi_divided_power_divisibility, q_factorial_unit_ratio};
pub use module::{nygaard_rationalised_image, QDivModule};
pub use report::Report;
