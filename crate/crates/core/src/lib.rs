//! Fractional Poisson processes through exact power-series algebra.
//!
//! The crate evaluates state probabilities, probability generating functions
//! and first-waiting-time survival functions of the classical Poisson process
//! and its time-, space-, space-time- and Saigo-space-time-fractional
//! generalisations. Distributions are available through closed-form series,
//! through an Adomian decomposition engine acting on finite sums of power
//! terms `c·t^ρ`, and through Monte-Carlo subordination, so each route can be
//! checked against the others.
//!
//! Module map:
//!
//! * [`specfun`]: gamma, reciprocal gamma, Mittag-Leffler, Gauss ₂F₁.
//! * [`adm`]: power series, Riemann-Liouville integration, the linear
//!   Adomian solver and the Adomian polynomial generator.
//! * [`saigo`]: Saigo integrals and the Caputo-type Saigo derivative on powers.
//! * [`processes`]: closed forms, tables and residual checks.
//! * [`simulate`]: subordinator samplers and goodness-of-fit.
//! * [`cli`]: the `fracpois` command-line front end.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adm;
pub mod cli;
pub mod control;
pub mod error;
pub mod processes;
pub mod saigo;
pub mod simulate;
pub mod specfun;

pub use control::SeriesControl;
pub use error::{Error, Result};
pub use processes::{FractionalParams, PmfTable, Variant};
