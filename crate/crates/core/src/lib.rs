//! Gap labels for Jacobi operators driven by dynamical systems.
//!
//! The crate computes label groups of affine automorphisms of tori and finite
//! cyclic groups, estimates Schwartzman winding rates on suspensions, models
//! the dyadic solenoid in three equivalent forms, and compares predicted labels
//! with the spectra of finite Jacobi truncations.

pub mod error;
pub mod intlin;
pub mod jacobi;
pub mod schwartzman;
pub mod solenoid;
pub mod systems;

pub use error::{Error, Result};
