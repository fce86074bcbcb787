//! Command-line and HTTP front end for the affine copy game engine.

pub mod api;
pub mod cli;
pub mod reports;
pub mod session;
