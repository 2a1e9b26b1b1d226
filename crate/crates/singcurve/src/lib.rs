//! Exact-arithmetic analysis of complex plane curve germs.
//!
//! The crate decomposes a germ f(x, y) = 0 into branches by fractional
//! power series expansion, computes the classical equisingularity data of
//! each branch (Puiseux characteristic, semigroup, intersection numbers,
//! exponents of contact) and the link-side invariants of the associated
//! iterated torus knots (cabling invariants, Alexander polynomials in
//! symbol form), together with the inverse maps between these invariants.
//!
//! All computation is exact: rationals with arbitrary precision, Gaussian
//! rationals at the base, and dynamically split algebraic extension
//! towers above them. No floating point anywhere.

pub mod bipoly;
pub mod branch;
pub mod contact;
pub mod error;
pub mod gauss;
pub mod intpoly;
pub mod knot;
pub mod newton;
pub mod par;
pub mod semigroup;
pub mod series;
pub mod tower;
pub mod upoly;

pub use error::{Error, Result};
