//! Engine for the Maker-Breaker "affine copy" game on the naturals.
//!
//! Maker wins by claiming a copy `a·S + b` of a fixed finite target set `S`.
//! The crate classifies targets by their symmetry, builds and validates
//! strategy trees that win in `|S|` (or, for non-symmetric 4-sets, five)
//! moves, plays games against pluggable Breaker policies, and carries two
//! independent checkers: a bounded exhaustive solver and an exact polynomial
//! toolkit for the degeneracy analysis of the generic 4-set tree.

pub mod error;
pub mod exactnum;
pub mod game;
pub mod polycalc;
pub mod sample;
pub mod solver;
pub mod strategy;
pub mod symmetry;

pub use error::{Error, ErrorClass, Result};
pub use exactnum::{AffineMap, CopyMode, Orientation, Pattern, Rational};
