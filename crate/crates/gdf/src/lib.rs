//! Gauss diagram formulas for finite type invariants of long knots.
//!
//! The crate implements the machinery that turns a finite type invariant
//! into a combinatorial formula counting subdiagrams: the subdiagram
//! expansion `s` and its signed inverse on virtual long-knot Gauss diagrams,
//! the decomposition of a diagram into a decorated tree, the descending
//! projection onto realizable diagrams, an exact Alexander-polynomial oracle
//! supplying the concrete type-2 invariant c2, and the analogous subword
//! formulas on group-algebra words.

pub mod braid;
pub mod diagram;
pub mod error;
pub mod expansion;
pub mod formal;
pub mod oracle;
pub mod projection;
pub mod tree;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
