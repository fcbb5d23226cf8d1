//! Exact intersection theory for trigonal curves.
//!
//! The crate is layered bottom-up: exact scalars and polynomials, graded
//! rings with truncated normal forms, Chern calculus on top of them, and
//! then the concrete geometry (Hirzebruch surfaces, jet bundles, the
//! pushforward along the universal P¹, the strata relations) together with
//! a laboratory of explicit curves used to cross-check the symbolic side.

pub mod chern;
pub mod cubic;
pub mod dynamic;
pub mod error;
pub mod graded;
pub mod grr;
pub mod hirzebruch;
pub mod jets;
pub mod kl;
pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod scalar;
pub mod trigonal;

pub use error::{Error, Result};
pub use poly::{parse_poly, Poly, UPoly};
pub use ratfn::RatFn;
pub use scalar::{Field, Fp, Rational};

/// Polynomials with rational coefficients.
pub type QPoly = Poly<Rational>;
/// Polynomials over the default experiment prime.
pub type FpPoly = Poly<Fp<1_000_003>>;
