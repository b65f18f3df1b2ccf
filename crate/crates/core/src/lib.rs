//! Finite-dimensional Hilbertian operator spaces and the JC*-triple
//! machinery around them.
//!
//! The crate builds the concrete spaces `C_n`, `R_n`, `H_n^k` and `Phi_n`
//! as families of complex matrices, provides the triple product and Peirce
//! calculus, antisymmetric Fock space creation operators, the contractive
//! projections `P_n^k` and `P^n`, the rank-one classifier, and witness-based
//! lower bounds for completely bounded Banach-Mazur distances.
//!
//! Everything here is pure computation over `alloc`; file formats and the
//! command line live in the `opspace` crate.

#![no_std]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod classify;
pub mod combinat;
pub mod error;
pub mod exact;
pub mod fock;
pub mod matrix;
pub mod norms;
pub mod projections;
pub mod sampling;
pub mod spaces;
pub mod span;
pub mod triple;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ToleranceConfig, C64};
