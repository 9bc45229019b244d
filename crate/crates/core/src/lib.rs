//! Tutte, Bollobás-Riordan and multivariate ribbon graph polynomials,
//! their behaviour under 2-sums and tensor products, and the Kauffman
//! bracket of link diagrams through the all-A ribbon graph.

pub mod error;
pub mod poly;
pub mod ribbon;
pub mod statesum;
pub mod compose;
pub mod knots;
pub mod generate;
pub mod verify;

pub use error::{Error, Result, Violation};
pub use poly::{Monomial, MultiPoly, RationalFn, Var};
pub use ribbon::{MarkedPiece, RibbonGraph, SpanningState, TwoDecomposition};
