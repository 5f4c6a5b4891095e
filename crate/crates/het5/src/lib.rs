//! Exact symbolic verifier for SU(2)-structures, metric connections with
//! skew torsion, and heterotic identities on invariant coframes of
//! 5-dimensional Lie algebras.
//!
//! Everything is computed over the fraction field of multivariate
//! polynomials with rational coefficients ([`ring`]), on forms and tensors
//! in a fixed orthonormal coframe ([`exterior`]). Lie algebras enter
//! through their invariant structure equations ([`liealg`], parsed from
//! the small DSL in [`dsl`]); connections, curvature and Pontrjagin forms
//! live in [`connection`]; the almost-contact/SU(2) machinery in [`su2`];
//! and the anomaly, equations-of-motion and classification checks in
//! [`heterotic`], with report rendering in [`report`].
//!
//! All values are immutable after construction and all operations are pure
//! functions, so independent computations can run in parallel freely.

pub mod connection;
pub mod dsl;
pub mod error;
pub mod exterior;
pub mod heterotic;
pub mod liealg;
pub mod report;
pub mod ring;
pub mod su2;

pub use error::{Error, Result};
