//! Khovanov homology over GF(2) for links given as PD codes, Seifert-framed
//! cables of knots, and an unknot-detection pipeline driven by the rank of
//! the 2-cable's homology.

pub mod braid;
pub mod cable;
pub mod cube;
pub mod diagram;
pub mod homology;
pub mod invariants;

pub use diagram::{BasePoint, LinkDiagram};
pub use homology::{Algorithm, BettiTable, Caps};
