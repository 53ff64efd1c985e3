//! Exact-arithmetic toolkit for the combinatorics and point counts of the
//! GL(n) Hitchin fibration.
//!
//! * [`algebra`]: finite fields, polynomials over `F_q` and `F_q(t)`,
//!   squarefree decomposition, discriminants, exact rationals.
//! * [`numerology`]: dimension formulas of the Hitchin base and fibers, the
//!   stratification of the base by component data and the support-exclusion
//!   ledger.
//! * [`nilstrata`]: dimensions of the strata of the global nilpotent cone.
//! * [`spectral`]: characteristic polynomials over the projective line and
//!   their classification over finite fields.
//! * [`census`]: brute-force groupoid counts of nilpotent Higgs pairs on the
//!   projective line.

pub mod algebra;
pub mod census;
pub mod error;
pub mod nilstrata;
pub mod numerology;
pub mod spectral;

pub use algebra::rational::BigRational;
pub use error::{Error, Result};

/// Polynomials over a prime field, lowest coefficient first.
pub type PolyFq = algebra::Poly<u32>;
/// Polynomial arithmetic over `F_q`.
pub type PolyRingFq = algebra::PolyRing<algebra::Fq>;
