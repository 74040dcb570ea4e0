//! Exact arithmetic for characteristic-p valuation polygons.
//!
//! The crate computes, over the perfection of a sparse Laurent polynomial
//! ring in characteristic p:
//!
//! * toric (monomial) valuations and their finite value windows,
//! * the leading-valuation invariants `np` and `npinf` of truncated fiber
//!   series, together with symbols and the weak-admissibility test,
//! * Artin-Schreier mollifiers: the single reduction step, the terminating
//!   minimal loop, the explicit monomial-weight construction with its
//!   negative certificate, and the divisor-chain procedure,
//! * piecewise-affine lower envelopes of line families (valuation polygons),
//! * additive polynomials and Frobenius-twisted linear recurrences,
//!   including kernel computation over finite fields and the telescoping
//!   partial-sum identity.
//!
//! Everything is exact: values are arbitrary-precision rationals, field
//! arithmetic is modular, and no floating point appears anywhere. The crate
//! is `no_std` (with `alloc`); IO, serialization and the CLI live in the
//! companion `molly-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ffield;
pub mod lrr;
pub mod mollify;
pub mod np;
pub mod perfring;
pub mod polygon;
pub mod rat;
pub mod series;
pub mod valuation;

pub use rat::Rat;
