//! Exact-arithmetic toolkit for 1-cocycles of `SL(n, K)` with coefficients in
//! the dual adjoint module, modeled as square matrices modulo scalars.
//!
//! The crate provides:
//!
//! * [`field`] — small finite fields `F_q` and the rational function field
//!   `F_p(x)`, with derivations;
//! * [`matgroup`] — dense matrices, the elementary / Weyl / torus generators
//!   of `SL(n)`, and words in them;
//! * [`adjmod`] — the traceless module, its dual modeled as matrices modulo
//!   scalars, and the trace pairing;
//! * [`cocycle`] — construction, evaluation, verification, coboundary
//!   recognition, canonicalization and derivation extraction for 1-cocycles;
//! * [`h1compute`] — exhaustive first-cohomology computation for
//!   `SL(n, F_q)` at small scale via Cayley-graph closure.

pub mod adjmod;
pub mod cocycle;
pub mod field;
pub mod h1compute;
pub mod linalg;
pub mod matgroup;
pub mod poly;
pub mod relations;
pub mod rng;
