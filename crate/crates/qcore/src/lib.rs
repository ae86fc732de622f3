//! Exact arithmetic kernel: integer Laurent polynomials in `q`, cyclotomic
//! polynomials and q-analogues, truncated completions of `Z[q]`, expansions at
//! roots of unity, and integer linear algebra.

pub mod arith;
pub mod error;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod qanalog;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use local::{unit_decompose, LocalElement, ModulusKind, Precision};
pub use poly::{Integer, ZqPoly};
pub use ring::QuotientRing;
pub use series::{embed_cyclotomic, reexpand, taylor_at_root, RootSeries};
