use crate::control::SeriesControl;
use crate::error::{Error, Result};

use super::series::{IntegralOperator, PowerSeries};

/// Coefficients beyond this magnitude abort a solve.
pub const COEFF_OVERFLOW: f64 = 1e300;

/// Raised when the first dropped iterate is not negligible at the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    pub state: usize,
    pub horizon: f64,
    /// `|p_{max_k+1}(state, horizon)|`, the largest dropped term.
    pub dropped: f64,
    pub tol_abs: f64,
}

/// ADM iterates `p_k(n, t)` for `n ≤ n_max` and `k ≤ max_k`.
///
/// One extra order `k = max_k + 1` is computed and kept aside as the first
/// dropped term, which is what truncation diagnostics are based on.
#[derive(Debug, Clone)]
pub struct AdmState {
    iterates: Vec<Vec<PowerSeries>>,
    dropped: Vec<PowerSeries>,
    control: SeriesControl,
}

impl AdmState {
    pub fn n_max(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn max_k(&self) -> usize {
        self.control.max_k
    }

    pub fn control(&self) -> &SeriesControl {
        &self.control
    }

    /// The `k`-th iterate at state `n`.
    pub fn iterate(&self, n: usize, k: usize) -> &PowerSeries {
        &self.iterates[n][k]
    }

    pub fn iterates(&self, n: usize) -> &[PowerSeries] {
        &self.iterates[n]
    }

    /// First iterate beyond the truncation order at state `n`.
    pub fn dropped(&self, n: usize) -> &PowerSeries {
        &self.dropped[n]
    }

    /// Truncated solution `Σ_{k ≤ max_k} p_k(n, ·)`.
    pub fn solution(&self, n: usize) -> PowerSeries {
        let terms = self.iterates[n]
            .iter()
            .flat_map(|s| s.terms().iter().copied())
            .collect();
        PowerSeries::from_terms(terms)
    }

    pub fn evaluate(&self, n: usize, t: f64) -> Result<f64> {
        self.solution(n).evaluate(t)
    }

    /// Reports the worst state whose first dropped iterate exceeds `tol_abs`
    /// at `horizon`.
    pub fn truncation_warning(&self, horizon: f64) -> Result<Option<TruncationWarning>> {
        let mut worst: Option<TruncationWarning> = None;
        for (state, d) in self.dropped.iter().enumerate() {
            let dropped = d.evaluate(horizon)?.abs();
            if dropped > self.control.tol_abs && worst.is_none_or(|w| dropped > w.dropped) {
                worst = Some(TruncationWarning {
                    state,
                    horizon,
                    dropped,
                    tol_abs: self.control.tol_abs,
                });
            }
        }
        Ok(worst)
    }
}

/// Runs the Adomian decomposition for the linear triangular system
///
/// ```text
/// p(n, t) = initial[n] + L[ Σ_{r=0}^{n} coupling(n, r) · p(n − r, t) ]
/// ```
///
/// where `L` is a linear integral operator. Because the system is linear
/// the Adomian polynomials are the iterates themselves, which gives
/// `p_0(n) = initial[n]` and
/// `p_k(n) = L[ Σ_r coupling(n, r) · p_{k−1}(n − r) ]`.
pub fn adm_solve_linear<Op, C>(
    integral_op: &Op,
    coupling: C,
    initial: &[f64],
    n_max: usize,
    control: &SeriesControl,
) -> Result<AdmState>
where
    Op: IntegralOperator + ?Sized,
    C: Fn(usize, usize) -> f64,
{
    control.validate()?;
    if initial.len() != n_max + 1 {
        return Err(Error::domain(format!(
            "expected {} initial values, got {}",
            n_max + 1,
            initial.len()
        )));
    }
    let couplings: Vec<Vec<f64>> = (0..=n_max).map(|n| (0..=n).map(|r| coupling(n, r)).collect()).collect();

    let orders = control.max_k + 2;
    let mut iterates: Vec<Vec<PowerSeries>> = initial
        .iter()
        .map(|&c| {
            let mut v = Vec::with_capacity(orders);
            v.push(PowerSeries::constant(c));
            v
        })
        .collect();

    for k in 1..orders {
        for n in 0..=n_max {
            let mut terms = Vec::new();
            for (r, &w) in couplings[n].iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                terms.extend(iterates[n - r][k - 1].terms().iter().map(|t| {
                    let mut t = *t;
                    t.coeff *= w;
                    t
                }));
            }
            let next = integral_op.apply(&PowerSeries::from_terms(terms))?;
            let worst = next.max_abs_coeff();
            if !(worst <= COEFF_OVERFLOW) {
                return Err(Error::Truncation(format!(
                    "ADM coefficient {worst:e} at state {n}, order {k} exceeds {COEFF_OVERFLOW:e}"
                )));
            }
            iterates[n].push(next);
        }
    }

    let dropped = iterates.iter_mut().map(|v| v.pop().unwrap_or_default()).collect();
    Ok(AdmState {
        iterates,
        dropped,
        control: *control,
    })
}
