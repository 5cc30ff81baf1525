use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{gamma_ratio, CompensatedSum};

/// Exponents closer than this are merged when a series is normalised.
pub const EXPONENT_MERGE_TOLERANCE: f64 = 1e-12;

/// A single term `coeff · t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        PowerTerm { coeff, exponent }
    }

    pub fn constant(coeff: f64) -> Self {
        PowerTerm { coeff, exponent: 0.0 }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        if self.exponent == 0.0 {
            self.coeff
        } else {
            self.coeff * t.powf(self.exponent)
        }
    }
}

/// Finite sum of power terms, sorted by strictly increasing exponent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    terms: Vec<PowerTerm>,
}

impl PowerSeries {
    pub fn zero() -> Self {
        PowerSeries { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(vec![PowerTerm::constant(c)])
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self::from_terms(vec![PowerTerm::new(coeff, exponent)])
    }

    /// Builds a normalised series: sorted, equal exponents merged, zero
    /// (or subnormal) coefficients dropped.
    pub fn from_terms(mut terms: Vec<PowerTerm>) -> Self {
        terms.retain(|t| t.coeff.is_nan() || t.coeff.abs() >= f64::MIN_POSITIVE);
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut out: Vec<PowerTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if (t.exponent - last.exponent).abs() <= EXPONENT_MERGE_TOLERANCE => {
                    last.coeff += t.coeff;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff.is_nan() || t.coeff.abs() >= f64::MIN_POSITIVE);
        PowerSeries { terms: out }
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the term whose exponent matches `exponent` within the
    /// merge tolerance, or zero.
    pub fn coeff_at(&self, exponent: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| (t.exponent - exponent).abs() <= EXPONENT_MERGE_TOLERANCE)
            .map_or(0.0, |t| t.coeff)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    pub fn scale(&self, s: f64) -> PowerSeries {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PowerTerm::new(t.coeff * s, t.exponent))
                .collect(),
        )
    }

    /// Applies `f` to every term, collecting the images into a new series.
    pub fn try_map_terms<F>(&self, mut f: F) -> Result<PowerSeries>
    where
        F: FnMut(&PowerTerm) -> Result<PowerTerm>,
    {
        let mapped = self.terms.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(mapped))
    }

    /// `Σ c·t^ρ` with compensated summation.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        evaluate(self, t)
    }

    /// `Σ |c|·t^ρ`, the scale against which rounding in [`Self::evaluate`]
    /// is measured.
    pub fn evaluate_abs(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| PowerTerm::new(term.coeff.abs(), term.exponent).evaluate(t))
            .sum()
    }
}

/// Evaluates a series at `t ≥ 0`.
pub fn evaluate(series: &PowerSeries, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "series evaluation requires finite t >= 0, got {t}"
        )));
    }
    if t == 0.0 && series.terms.iter().any(|term| term.exponent < 0.0) {
        return Err(Error::domain("negative exponent evaluated at t = 0"));
    }
    let acc: CompensatedSum = series.terms.iter().map(|term| term.evaluate(t)).collect();
    Ok(acc.value())
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        PowerSeries::from_terms(terms)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self + &(-rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        PowerSeries {
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm::new(-t.coeff, t.exponent))
                .collect(),
        }
    }
}

impl Mul<&PowerSeries> for f64 {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        rhs.scale(self)
    }
}

/// A linear operator that maps power series to power series term by term.
pub trait IntegralOperator {
    fn apply(&self, series: &PowerSeries) -> Result<PowerSeries>;
}

/// Riemann-Liouville fractional integral of order `alpha ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannLiouville {
    pub alpha: f64,
}

impl RiemannLiouville {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("RL order must lie in (0, 1], got {alpha}")));
        }
        Ok(RiemannLiouville { alpha })
    }

    /// Image of `c·t^{ρ−1}`: `c·Γ(ρ)/Γ(ρ+α)·t^{ρ+α−1}`.
    pub fn apply_term(&self, term: &PowerTerm) -> Result<PowerTerm> {
        rl_term(term, self.alpha)
    }
}

impl IntegralOperator for RiemannLiouville {
    fn apply(&self, series: &PowerSeries) -> Result<PowerSeries> {
        series.try_map_terms(|t| rl_term(t, self.alpha))
    }
}

fn rl_term(term: &PowerTerm, alpha: f64) -> Result<PowerTerm> {
    let rho = term.exponent + 1.0;
    if !(rho > 0.0) {
        return Err(Error::domain(format!(
            "RL integral of t^{} diverges at 0 (exponent must exceed -1)",
            term.exponent
        )));
    }
    let m = gamma_ratio(&[rho], &[rho + alpha])?;
    Ok(PowerTerm::new(term.coeff * m, term.exponent + alpha))
}

/// Riemann-Liouville integral of order `alpha ∈ (0, 1]`.
pub fn rl_integrate(series: &PowerSeries, alpha: f64) -> Result<PowerSeries> {
    RiemannLiouville::new(alpha)?.apply(series)
}
