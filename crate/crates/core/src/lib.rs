//! Exact computations around a family of pseudo-Anosov mapping classes on
//! nonorientable surfaces whose dilatations are the largest real roots of
//! `x^(2k-1) - x^k - x^(k-1) - 1`.
//!
//! * [`exactalg`]: integer polynomial arithmetic, resultants, factorization.
//! * [`surface`]: chord diagram, intersection graph, and topology of the surface.
//! * [`penner`]: twist and rotation matrices and characteristic polynomials.
//! * [`irreducibility`]: multi-engine irreducibility certificates.
//! * [`dilatation`]: certified root isolation, maximality, and word search.

pub mod dilatation;
pub mod error;
pub mod exactalg;
pub mod irreducibility;
pub mod penner;
pub mod surface;
pub mod wire;

pub use error::{Error, Result};
