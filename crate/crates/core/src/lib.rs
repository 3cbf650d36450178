//! SAGBI data and toric degenerations of Kronecker quiver moduli spaces.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod matching;
pub mod mirror;
pub mod polyhedra;
pub mod reproduce;
pub mod semiinvariant;
pub mod tableaux;

pub use error::{Error, Result};
