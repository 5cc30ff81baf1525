use crate::adm::{IntegralOperator, PowerSeries, PowerTerm};
use crate::error::{Error, Result};
use crate::specfun::{gamma_ratio, ln_gamma_pos};

/// Relative gap above which the two operator orders count as different.
const DIFFER_THRESHOLD: f64 = 1e-9;

/// Parameters `(α, β, γ)` of a Saigo operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaigoParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_p: f64,
}

impl SaigoParams {
    pub fn new(alpha: f64, beta: f64, gamma_p: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma_p.is_finite()) {
            return Err(Error::domain("Saigo parameters must be finite"));
        }
        if !(alpha > 0.0) {
            return Err(Error::domain(format!(
                "Saigo order alpha must be positive, got {alpha}"
            )));
        }
        Ok(SaigoParams { alpha, beta, gamma_p })
    }

    /// The Riemann-Liouville special case `β = −α`.
    pub fn riemann_liouville(alpha: f64) -> Result<Self> {
        Self::new(alpha, -alpha, 0.0)
    }

    /// Number of classical derivatives `m = ⌈α⌉` taken by the Caputo-type
    /// derivative.
    pub fn derivative_order(&self) -> u32 {
        self.alpha.ceil() as u32
    }

    /// Parameters of the integral inside `∂^{α,β,γ}`: `(m−α, −β−m, α+γ)`.
    fn inner(&self) -> (f64, f64, f64) {
        let m = f64::from(self.derivative_order());
        (m - self.alpha, -self.beta - m, self.alpha + self.gamma_p)
    }
}

/// Power-map multiplier without the `α > 0` check, so the derivative may use a
/// zero-order inner operator (the identity) when `α = 1`.
fn integral_power_raw(alpha: f64, beta: f64, gamma_p: f64, rho: f64) -> Result<PowerTerm> {
    if !(rho > 0.0) {
        return Err(Error::domain(format!(
            "Saigo integral of t^(rho-1) needs rho > 0, got {rho}"
        )));
    }
    if !(rho > beta - gamma_p) {
        return Err(Error::domain(format!(
            "Saigo integral needs rho > beta - gamma ({rho} <= {})",
            beta - gamma_p
        )));
    }
    let m = gamma_ratio(&[rho, rho - beta + gamma_p], &[rho - beta, rho + alpha + gamma_p])?;
    Ok(PowerTerm::new(m, rho - beta - 1.0))
}

/// Image of `t^{ρ−1}` under `I^{α,β,γ}`: the returned term holds the
/// multiplier as `coeff` and the output exponent `ρ−β−1`.
pub fn saigo_integral_power(p: &SaigoParams, rho: f64) -> Result<PowerTerm> {
    integral_power_raw(p.alpha, p.beta, p.gamma_p, rho)
}

/// Image of `t^ρ` under the Caputo-type Saigo derivative
/// `∂^{α,β,γ} f = I^{1−α, −β−1, α+γ} f′`, for `0 < α ≤ 1`.
///
/// Constants (`ρ = 0`) map to the zero term.
pub fn saigo_caputo_derivative_power(p: &SaigoParams, rho: f64) -> Result<PowerTerm> {
    if p.derivative_order() > 1 {
        return Err(Error::Unsupported(format!(
            "Caputo-Saigo derivative of order {} (alpha = {}) is not implemented",
            p.derivative_order(),
            p.alpha
        )));
    }
    if rho == 0.0 {
        return Ok(PowerTerm::new(0.0, 0.0));
    }
    if !(rho > 0.0) {
        return Err(Error::domain(format!(
            "Caputo-Saigo derivative needs rho >= 0, got {rho}"
        )));
    }
    let (a, b, g) = p.inner();
    // d/dt t^ρ = ρ·t^{ρ−1}, then the inner integral on t^{ρ−1}
    let inner = integral_power_raw(a, b, g, rho)?;
    Ok(PowerTerm::new(rho * inner.coeff, inner.exponent))
}

/// Saigo integral as a term-wise operator on power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaigoIntegral {
    pub params: SaigoParams,
}

impl SaigoIntegral {
    pub fn new(params: SaigoParams) -> Self {
        SaigoIntegral { params }
    }
}

impl IntegralOperator for SaigoIntegral {
    fn apply(&self, series: &PowerSeries) -> Result<PowerSeries> {
        series.try_map_terms(|t| {
            let m = saigo_integral_power(&self.params, t.exponent + 1.0)?;
            Ok(PowerTerm::new(t.coeff * m.coeff, m.exponent))
        })
    }
}

/// Both orders of applying two Saigo integrals to `t^{ρ−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupComparison {
    /// Multiplier of `I^{p1} I^{p2} t^{ρ−1}`.
    pub lhs: f64,
    /// Multiplier of `I^{p2} I^{p1} t^{ρ−1}`.
    pub rhs: f64,
    /// Common output exponent `ρ−β−δ−1`.
    pub exponent: f64,
    pub differ: bool,
}

impl SemigroupComparison {
    pub fn relative_difference(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(self.rhs.abs())
    }
}

/// A documented tuple `(p1, p2, ρ)` on which the two orders disagree.
pub const SEMIGROUP_EXAMPLE: (SaigoParams, SaigoParams, f64) = (
    SaigoParams {
        alpha: 0.5,
        beta: -0.2,
        gamma_p: 0.3,
    },
    SaigoParams {
        alpha: 0.7,
        beta: -0.4,
        gamma_p: 0.1,
    },
    1.0,
);

/// Applies `I^{p1}I^{p2}` and `I^{p2}I^{p1}` to `t^{ρ−1}` and reports
/// whether the two multipliers differ beyond `1e-9` relative. Saigo
/// integrals with different parameters do not commute in general.
pub fn semigroup_counterexample(p1: &SaigoParams, p2: &SaigoParams, rho: f64) -> Result<SemigroupComparison> {
    let (b, g) = (p1.beta, p1.gamma_p);
    let (d, x) = (p2.beta, p2.gamma_p);
    let bound = (b - g).max(d - x).max(b - g + d).max(d - x + b);
    if !(rho > bound) {
        return Err(Error::domain(format!(
            "semigroup comparison needs rho > {bound}, got {rho}"
        )));
    }
    let inner2 = saigo_integral_power(p2, rho)?;
    let outer1 = saigo_integral_power(p1, inner2.exponent + 1.0)?;
    let inner1 = saigo_integral_power(p1, rho)?;
    let outer2 = saigo_integral_power(p2, inner1.exponent + 1.0)?;
    let lhs = outer1.coeff * inner2.coeff;
    let rhs = outer2.coeff * inner1.coeff;
    let scale = lhs.abs().max(rhs.abs());
    let differ = scale > 0.0 && (lhs - rhs).abs() > DIFFER_THRESHOLD * scale;
    Ok(SemigroupComparison {
        lhs,
        rhs,
        exponent: outer1.exponent,
        differ,
    })
}

/// Relative residual of the index law
/// `I^{α,β,γ} I^{η,δ,α+γ} = I^{α+η, β+δ, γ}` on `t^{ρ−1}`.
pub fn index_law_residual(p: &SaigoParams, eta: f64, delta: f64, rho: f64) -> Result<f64> {
    let inner = SaigoParams::new(eta, delta, p.alpha + p.gamma_p)?;
    let combined = SaigoParams::new(p.alpha + eta, p.beta + delta, p.gamma_p)?;
    let first = saigo_integral_power(&inner, rho)?;
    let second = saigo_integral_power(p, first.exponent + 1.0)?;
    let direct = saigo_integral_power(&combined, rho)?;
    let chained = first.coeff * second.coeff;
    Ok((chained - direct.coeff).abs() / direct.coeff.abs())
}

/// `|I^{α,β,γ}(∂^{α,β,γ} t^ρ) − t^ρ|` at `t`, which vanishes for `ρ > 0`.
///
/// The integral of the derivative is evaluated in two ways: directly from
/// the two power maps, and through the index law, which collapses
/// `I^{α,β,γ} I^{1−α,−β−1,α+γ}` to the ordinary integral `I^{1,−1,γ}`. The
/// larger residual is returned.
pub fn composition_check(p: &SaigoParams, rho: f64, t: f64) -> Result<f64> {
    if !(p.alpha > 0.0 && p.alpha <= 1.0) {
        return Err(Error::domain(format!(
            "composition needs 0 < alpha <= 1, got {}",
            p.alpha
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("composition is checked at t > 0, got {t}")));
    }
    let target = t.powf(rho);
    let derivative = saigo_caputo_derivative_power(p, rho)?;
    let integral = saigo_integral_power(p, derivative.exponent + 1.0)?;
    let direct = derivative.coeff * integral.coeff * t.powf(integral.exponent);

    let (a, b, _) = p.inner();
    let collapsed = SaigoParams::new(p.alpha + a, p.beta + b, p.gamma_p)?;
    let ordinary = saigo_integral_power(&collapsed, rho)?;
    let chained = rho * ordinary.coeff * t.powf(ordinary.exponent);

    Ok((direct - target).abs().max((chained - target).abs()))
}

/// `C_0, …, C_{k_max}` with
/// `C_k = Π_{j=1}^{k} Γ(1+γ−jβ) / Γ(1+γ+α−(j−1)β)`, accumulated in log space.
///
/// For `β = −α` every factor is one and the coefficients are returned as
/// exact ones.
pub fn ck_coefficients(p: &SaigoParams, k_max: usize) -> Result<Vec<f64>> {
    if !(p.beta < 0.0) {
        return Err(Error::domain(format!("C_k coefficients need beta < 0, got {}", p.beta)));
    }
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(1.0);
    let mut ln_c = 0.0;
    for j in 1..=k_max {
        ln_c += ln_ck_factor(p, j)?;
        out.push(ln_c.exp());
    }
    Ok(out)
}

/// `ln[Γ(1+γ−jβ) / Γ(1+γ+α−(j−1)β)]`, the `j`-th factor of `C_k`; exactly
/// zero when `β = −α`.
pub(crate) fn ln_ck_factor(p: &SaigoParams, j: usize) -> Result<f64> {
    if !(p.beta < 0.0) {
        return Err(Error::domain(format!("C_k coefficients need beta < 0, got {}", p.beta)));
    }
    if p.beta == -p.alpha {
        return Ok(0.0);
    }
    let jf = j as f64;
    let num = 1.0 + p.gamma_p - jf * p.beta;
    let den = 1.0 + p.gamma_p + p.alpha - (jf - 1.0) * p.beta;
    if !(num > 0.0 && den > 0.0) {
        return Err(Error::domain(format!(
            "C_k factor j={j} has non-positive gamma argument ({num}, {den})"
        )));
    }
    Ok(ln_gamma_pos(num) - ln_gamma_pos(den))
}
