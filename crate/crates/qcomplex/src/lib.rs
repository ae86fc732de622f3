//! Coordinate q-de Rham and q-Hodge complexes of toric algebras, split into
//! multidegree pieces, with exact cohomology over `Z[q]/(q^m - 1)^k`.

pub mod cohomology;
pub mod complex;
pub mod error;
pub mod filtration;
pub mod rational;
pub mod spec;

pub use cohomology::{bockstein, cohomology_mod, frobenius_transition, CohomologyEntry, CohomologyTable, FrobeniusTransition};
pub use complex::{build_complex, build_complex_at, decalage, tensor, Piece, PolyMatrix, QKoszul};
pub use error::{Error, Result};
pub use filtration::{qhodge_filtration, FilteredQComplex};
pub use rational::{rational_qpartial, QPartialReport};
pub use spec::{Base, Flavor, ToricAlgebraSpec};
