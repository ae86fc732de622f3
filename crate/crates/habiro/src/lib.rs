//! Habiro-ring arithmetic: elements as compatible expansions at roots of unity,
//! the `(q;q)_n` ladder, and relative Habiro rings of etale algebras.

pub mod element;
pub mod error;
pub mod etale;
pub mod glued;
pub mod ladder;

pub use element::{consistency_check, habiro_from_poly, CheckRecord, HabiroElement, HabiroPrecision};
pub use error::{Error, Result};
pub use etale::{adams, discriminant, frobenius_lift, EtaleAlgebraSpec, EtaleSpecJson, FrobeniusLift};
pub use glued::{build_relative_habiro, compare_qwitt, ghost, glued_constant, glued_element, glued_q, GluedElement, GluedRing, QWittReport, RelativePrecision};
pub use ladder::{ladder, ladder_stage, nakayama_probe, quotient_by, resolution_window_check, NakayamaReport, Presentation, ResolutionReport};
