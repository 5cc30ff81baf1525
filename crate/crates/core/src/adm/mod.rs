//! Power-series algebra and the Adomian decomposition engine.
//!
//! Every ADM iterate of a linear fractional system started from constants is
//! a finite sum of power terms `c·t^ρ`, and fractional integrals act on such
//! terms in closed form. [`PowerSeries`] holds those sums exactly (up to
//! floating-point coefficients), [`IntegralOperator`] applies an integral
//! operator term-wise, and [`adm_solve_linear`] runs the decomposition.

mod adomian;
mod series;
mod solver;

pub use crate::control::SeriesControl;
pub use adomian::{adomian_polynomial, adomian_polynomials, MAX_ADOMIAN_ORDER};
pub use series::{
    evaluate, rl_integrate, IntegralOperator, PowerSeries, PowerTerm, RiemannLiouville, EXPONENT_MERGE_TOLERANCE,
};
pub use solver::{adm_solve_linear, AdmState, TruncationWarning, COEFF_OVERFLOW};
