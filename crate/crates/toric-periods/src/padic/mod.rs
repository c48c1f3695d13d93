//! Truncated arithmetic in two-step towers over Q_p (p odd): elements, norms
//! and traces, unit-group presentations, square classes and Hilbert symbols.

pub mod arith;
pub mod element;
pub mod field;
pub mod hilbert;
pub mod residue;
pub mod units;

pub use element::{ElementJson, LocalElement, Subfield};
pub use field::{make_local_field, qp, FieldDescriptor, LocalField};
pub use hilbert::{hilbert_symbol, hilbert_symbol_rational, square_class, SquareClass};
pub use units::UnitPresentation;
