//! Exact algebra for conormal spaces, relative conormals and Thom's `A_f`
//! condition: polynomials over Q, Groebner bases, conormal and Rees
//! constructions, and arc-based strict dependence.

pub mod arcs;
pub mod conormal;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod rees;

pub use error::{Error, Result};
pub use groebner::{GbConfig, Ideal, MonomialOrder};
pub use poly::{Polynomial, Rational, VarList};
