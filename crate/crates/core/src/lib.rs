//! Quantum speed limit times for two-qubit Bell-diagonal states under local
//! phase-flip, bit-flip and bit-phase-flip noise.
//!
//! Two independent routes compute the speed limit: closed-form case formulas
//! ([`qslt::closed_form_initial`], [`qslt::closed_form_from_time`]) and a
//! direct numerical evaluation of the unified Margolus-Levitin /
//! Mandelstam-Tamm bound ([`qslt::numeric_qslt`]) built from density
//! matrices, singular values and trapezoid time averages. The
//! [`correlations`] module tracks classical correlation and discord along
//! the same trajectories.

pub mod channels;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod qslt;
pub mod states;

pub use channels::{ChannelKind, FlipChannel};
pub use correlations::CorrelationTriple;
pub use error::{Error, Result};
pub use linalg::ComplexMatrix4;
pub use qslt::{Branch, CaseLabel, QsltResult};
pub use states::{BellCoefficients, BellSpectrum};
