//! Exact arithmetic kernel: finite fields, univariate and bivariate
//! polynomials, linear algebra and rationals.

pub mod bivar;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod ratfun;

pub use bivar::{factor_u, resultant_discriminant, squarefree_decomposition_u, BivarPoly};
pub use field::{Field, Fq};
pub use poly::{Poly, PolyFq, PolyRing};
pub use ratfun::{FunctionField, RatFun};

/// Monic gcd of two polynomials over `F_q`; `gcd(0, 0) = 0`.
pub fn poly_gcd(ring: &PolyRing<Fq>, f: &PolyFq, g: &PolyFq) -> PolyFq {
    ring.gcd(f, g)
}
