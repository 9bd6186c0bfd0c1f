//! Computable machinery for Chung-type small-time laws of the iterated
//! logarithm for pure-jump Lévy and Lévy-type (Feller) processes.
//!
//! * [`measure`] / [`symbol`]: Lévy measures, symbols `p(x, ξ)`, the maximal
//!   symbol `p^U`, tail masses, sector constants and lower envelopes;
//! * [`norming`]: the norming functions `u(x, R)`, its generalized inverse,
//!   the Chung rate, upper functions `v` and the regularity constant `κ(x)`;
//! * [`classify`]: numerical convergence tests for integrals at `0⁺` and the
//!   liminf dichotomy of `t·g(1/w(t))`;
//! * [`simulate`]: path ensembles for stable, compound Poisson and
//!   stable-like processes;
//! * [`mc`]: Monte Carlo estimates of small-time probabilities and checks
//!   of the associated inequalities;
//! * [`scenario`]: declarative scenario files driving all of the above.

// Negated comparisons reject NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod mc;
pub mod measure;
pub mod norming;
pub mod profile;
pub mod quad;
pub mod scenario;
pub mod simulate;
pub mod stats;
pub mod symbol;

pub use error::{Error, Result};
pub use measure::{eval_exponent, eval_pu, tail_mass, Atom, ComplexValue, LevyMeasureSpec, LevyTriplet, MeasureKind, ScaleSpec};
pub use profile::Profile;
pub use symbol::{sector_estimate, LowerEnvelope, SectorEstimate, SymbolFamily};
