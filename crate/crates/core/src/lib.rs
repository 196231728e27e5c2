//! Computational toolkit for characteristic p-Frattini towers of finite
//! groups: Frattini levels and their kernel modules, Nielsen classes and
//! braid orbits, Hurwitz-space component data, Schur quotients, and
//! g-completeness tests.

pub mod builtin;
pub mod error;
pub mod extension;
pub mod frattini;
pub mod gcomplete;
pub mod group;
pub mod hurwitz;
pub mod induction;
pub mod linalg;
pub mod loewy;
pub mod module;
pub mod nielsen;
pub mod perm;
pub mod presentation;
pub mod schur;

pub use error::{Error, ErrorFamily, Result};
pub use group::{ConjClass, FiniteGroup};
pub use perm::Perm;
