//! Exact computation of spaces of global sections of the line bundles
//! `O(m,k)` on nested Hilbert schemes of points in the plane.
//!
//! The bigraded dimension series of these section spaces is computed along
//! three independent routes and cross-checked coefficient by coefficient:
//!
//! - [`localization`]: the equivariant Euler characteristic as a sum over
//!   torus fixed points (a Young diagram with one added box), expanded as
//!   an exact truncated series in `(q, t)`;
//! - [`lattice`]: enumeration of the trailing-term exponent set `P(m,k)`
//!   and the dimension series as a weighted lattice-point count, together
//!   with lift/sum decompositions and the limiting polyhedron `Delta(m,k)`;
//! - [`sections`]: brute-force linear algebra on explicit determinantal
//!   generators, with trailing monomials extracted by lex elimination.
//!
//! All arithmetic is exact. Coefficients are arbitrary-precision rationals
//! and the three routes are compared with no tolerances of any kind.

pub mod error;
pub mod lattice;
pub mod localization;
pub mod mvpoly;
pub mod sections;
pub mod series;
pub mod util;
pub mod young;

pub use error::{Error, Result};
