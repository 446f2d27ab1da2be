//! Exact computations with Ulrich bundles on polarized Hirzebruch surfaces.
//!
//! The library is organized in four layers:
//!
//! - [`picard`]: divisor arithmetic and intersection theory on
//!   `Pic(X_e) = Z·C0 ⊕ Z·f`;
//! - [`cohomology`]: closed-form cohomology of every line bundle, with an
//!   independent brute-force toric Čech oracle for validation;
//! - [`numerics`]: the integer theory — Chern conditions, resolution and
//!   monad exponents, admissible-pair enumeration, rank thresholds, moduli
//!   dimensions;
//! - [`coxring`] and [`forge`]: bigraded polynomial arithmetic over a prime
//!   field and the seeded construct-and-certify pipeline that produces
//!   verifiable [`forge::UlrichCertificate`]s.
//!
//! All arithmetic is exact: integers, exact rationals, and `F_p`.

pub mod cohomology;
pub mod coxring;
pub mod forge;
pub mod fp;
pub mod numerics;
pub mod picard;

pub use cohomology::{CohomologyTriple, LatticeBox};
pub use coxring::{BigradedPoly, FormMatrix, GradedPieceMap, Monomial};
pub use forge::{ConstructionKind, ProbeResult, UlrichCertificate};
pub use fp::{FieldPrime, FpMatrix};
pub use numerics::{AdmissiblePair, BundleNumerics, ExponentsCoker, ExponentsKer, MonadExponents};
pub use picard::{Divisor, Polarization, SurfaceParams};
