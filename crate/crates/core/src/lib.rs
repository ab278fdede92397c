//! Exact-arithmetic q-series engine and verification toolkit for the
//! 5-adic congruence family of the Rogers-Ramanujan subpartition count
//! `A_1(m)`.
//!
//! The crate is organized around one computational substrate and four
//! consumers of it:
//!
//! - [`qseries`]: truncated Laurent series over arbitrary-precision
//!   integers, with precision tracked through every operation;
//! - [`partition`]: partition-theoretic ground truth (`A_1`, `p(m)`, the
//!   generating functions, the congruence checker);
//! - [`etaquot`]: eta quotients on `Gamma_0(N)` (modularity criterion,
//!   cusps, order formula, expansion);
//! - [`operators`]: the named modular functions, the `U^(0)`/`U^(1)`
//!   operators, the fifth-degree modular equation, and the twenty
//!   fundamental relations;
//! - [`induction`]: the L-sequence, module decompositions, valuation
//!   certificates, and the skeleton arrays.
//!
//! All verification is by exact coefficient comparison on explicit finite
//! windows; every verdict records the window it was checked on.

pub mod etaquot;
pub mod induction;
mod linalg;
pub mod operators;
pub mod partition;
pub mod qseries;
pub mod tpoly;

pub use qseries::{LaurentSeries, Precision, SeriesError};
