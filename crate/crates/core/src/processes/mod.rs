//! Distributions of the classical and fractional Poisson processes.
//!
//! Every variant's state probabilities are a special case of
//!
//! ```text
//! p(n, t) = Σ_k C_k (−x)^k / Γ(1−kβ) · (−1)^n binom(kν, n),   x = λ^ν t^{−β}
//! ```
//!
//! with `C_k ≡ 1` unless the Saigo parameters are genuinely more general
//! than Riemann-Liouville. The time- and space-fractional processes and the
//! classical process also have their own historical closed forms, which
//! are implemented separately so that the reductions between variants are
//! real cross-checks rather than identities of code.

mod closed_form;
mod params;
mod table;
mod verify;

pub use closed_form::{
    binomial, poisson_pmf, sfpp_pmf, sfpp_pmf_with, sstfpp_pgf, sstfpp_pgf_with, sstfpp_pmf, sstfpp_pmf_with,
    stfpp_pmf, stfpp_pmf_with, tail_mass, tfpp_pmf, tfpp_pmf_with, waiting_survival, waiting_survival_with,
    ARGUMENT_GUARD,
};
pub use params::{FractionalParams, Variant};
pub use table::PmfTable;
pub use verify::{
    adm_closed_form_diff, adm_pmf, adm_solve, closed_form_term, coupling, kolmogorov_residual, pgf_cauchy_residual,
    KolmogorovResidual,
};
