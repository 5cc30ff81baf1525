//! Saigo fractional integrals and the Caputo-type Saigo derivative.
//!
//! On power functions both operators act in closed form:
//!
//! ```text
//! I^{α,β,γ} t^{ρ−1} = Γ(ρ)Γ(ρ−β+γ) / (Γ(ρ−β)Γ(ρ+α+γ)) · t^{ρ−β−1}
//! ```
//!
//! and the derivative `∂^{α,β,γ} f = I^{1−α, −β−1, α+γ} f′` is built from
//! it. Setting `β = −α` recovers the Riemann-Liouville integral and the
//! Caputo derivative. A quadrature of the defining integral with its ₂F₁
//! kernel is provided as an independent cross-check.

mod operators;
mod quadrature;

pub use operators::{
    ck_coefficients, composition_check, index_law_residual, saigo_caputo_derivative_power, saigo_integral_power,
    semigroup_counterexample, SaigoIntegral, SaigoParams, SemigroupComparison, SEMIGROUP_EXAMPLE,
};
pub use quadrature::saigo_integral_quadrature;

pub(crate) use operators::ln_ck_factor;
