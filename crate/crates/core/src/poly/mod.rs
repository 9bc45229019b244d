//! Exact Laurent polynomials and rational functions over the integers.

mod monomial;
mod multi;
mod parse;
mod rational;

pub use monomial::{Monomial, Var};
pub use multi::MultiPoly;
pub use rational::{solve_2x2, substitute_poly, RationalFn};
