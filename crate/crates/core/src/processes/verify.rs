use crate::adm::{adm_solve_linear, AdmState, PowerSeries, PowerTerm, RiemannLiouville};
use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::saigo::{ck_coefficients, saigo_caputo_derivative_power, SaigoIntegral, SaigoParams};
use crate::specfun::ln_gamma_pos;

use super::closed_form::binomial;
use super::params::FractionalParams;

/// Coupling of the difference-differential system:
/// `coupling(n, r) = −λ^ν (−1)^r (ν)_r / r!`, the weight of `p(n−r)` on the
/// right-hand side.
pub fn coupling(params: &FractionalParams) -> impl Fn(usize, usize) -> f64 {
    let lnu = params.lambda.powf(params.nu);
    let nu = params.nu;
    move |_n, r| {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        -lnu * sign * binomial(nu, r as u32)
    }
}

/// The `k`-th closed-form iterate at state `n`:
/// `(−1)^n/n! (kν)_n · C_k (−λ^ν)^k / Γ(1−kβ) · t^{−kβ}`.
pub fn closed_form_term(params: &FractionalParams, n: usize, k: usize) -> Result<PowerTerm> {
    let c = if params.is_riemann_liouville() {
        1.0
    } else {
        ck_coefficients(&params.saigo(), k)?[k]
    };
    Ok(closed_term_with(params, c, n, k))
}

fn closed_term_with(params: &FractionalParams, c_k: f64, n: usize, k: usize) -> PowerTerm {
    let kf = k as f64;
    let lnu = params.lambda.powf(params.nu);
    let mag = (kf * lnu.ln() - ln_gamma_pos(1.0 - kf * params.beta)).exp();
    let sign = if (n + k).is_multiple_of(2) { 1.0 } else { -1.0 };
    PowerTerm::new(sign * c_k * mag * binomial(kf * params.nu, n as u32), -kf * params.beta)
}

fn closed_series(params: &FractionalParams, n: usize, c: &[f64]) -> PowerSeries {
    PowerSeries::from_terms(
        c.iter()
            .enumerate()
            .map(|(k, &ck)| closed_term_with(params, ck, n, k))
            .collect(),
    )
}

/// Runs the decomposition for the variant's time operator: the
/// Riemann-Liouville integral when `β = −α`, the Saigo integral otherwise.
pub fn adm_solve(params: &FractionalParams, n_max: usize, control: &SeriesControl) -> Result<AdmState> {
    params.validate()?;
    let mut initial = vec![0.0; n_max + 1];
    initial[0] = 1.0;
    if params.is_riemann_liouville() {
        let op = RiemannLiouville::new(params.alpha)?;
        adm_solve_linear(&op, coupling(params), &initial, n_max, control)
    } else {
        let op = SaigoIntegral::new(params.saigo());
        adm_solve_linear(&op, coupling(params), &initial, n_max, control)
    }
}

/// Largest absolute coefficient discrepancy between the ADM iterates and
/// the closed-form terms over `n ≤ n_max`, `k ≤ k_trunc`.
pub fn adm_closed_form_diff(params: &FractionalParams, n_max: usize, k_trunc: usize) -> Result<f64> {
    let control = SeriesControl {
        max_k: k_trunc,
        ..SeriesControl::default()
    };
    let state = adm_solve(params, n_max, &control)?;
    let c = ck_coefficients(&params.saigo(), k_trunc)?;
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        for (k, &ck) in c.iter().enumerate() {
            let t = closed_term_with(params, ck, n, k);
            let expected = PowerSeries::monomial(t.coeff, t.exponent);
            worst = worst.max((state.iterate(n, k) - &expected).max_abs_coeff());
        }
    }
    Ok(worst)
}

/// State probabilities `p(0..=n_max, t)` summed from the ADM iterates.
pub fn adm_pmf(params: &FractionalParams, t: f64, n_max: usize, control: &SeriesControl) -> Result<Vec<f64>> {
    let state = adm_solve(params, n_max, control)?;
    (0..=n_max).map(|n| state.evaluate(n, t)).collect()
}

/// Residual of the forward equation for a truncated pmf series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KolmogorovResidual {
    /// `|∂^{α,β,γ} p(n, t) − RHS|` with both sides built from `k ≤ k_trunc`.
    pub residual: f64,
    /// Size of the unmatched top-order terms plus a first-order rounding
    /// allowance built from per-term condition numbers.
    pub tail_bound: f64,
}

/// Evaluates both sides of
/// `∂^{α,β,γ} p(n, t) = −λ^ν Σ_{r=0}^{n} (−1)^r (ν)_r/r! · p(n−r, t)`
/// on the closed-form series truncated at `k_trunc`, the left side by
/// term-wise Caputo-Saigo differentiation.
///
/// Differentiation maps order `k` to order `k−1`, so the right side's
/// order-`k_trunc` terms have no partner; their absolute size is the
/// truncation tail bound.
pub fn kolmogorov_residual(params: &FractionalParams, t: f64, n: usize, k_trunc: usize) -> Result<KolmogorovResidual> {
    params.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("residual is evaluated at t > 0, got {t}")));
    }
    let c = ck_coefficients(&params.saigo(), k_trunc)?;
    let sp = params.saigo();
    let states: Vec<PowerSeries> = (0..=n).map(|m| closed_series(params, m, &c)).collect();

    let lhs = states[n].try_map_terms(|term| {
        let d = saigo_caputo_derivative_power(&sp, term.exponent)?;
        Ok(PowerTerm::new(term.coeff * d.coeff, d.exponent))
    })?;
    let w = coupling(params);
    let mut rhs = PowerSeries::zero();
    let mut top = 0.0;
    for r in 0..=n {
        rhs = &rhs + &states[n - r].scale(w(n, r));
        top += (w(n, r) * closed_term_with(params, c[k_trunc], n - r, k_trunc).coeff).abs();
    }
    let residual = (lhs.evaluate(t)? - rhs.evaluate(t)?).abs();

    // first-order rounding model: each term carries a relative error of
    // `ε·cond`, summed in absolute value over both sides
    let mut rounding = 0.0;
    let ln_t = t.ln();
    for r in 0..=n {
        let m = n - r;
        for (k, &ck) in c.iter().enumerate() {
            let term = closed_term_with(params, ck, m, k);
            if term.coeff == 0.0 {
                continue;
            }
            let cond = term_condition(params, &sp, m, k, term) + (term.exponent * ln_t).abs();
            let size = term.coeff.abs() * t.powf(term.exponent);
            rounding += (w(n, r) * size).abs() * cond;
            if r == 0 && k > 0 {
                let d = saigo_caputo_derivative_power(&sp, term.exponent)?;
                let dt = (d.exponent * ln_t).abs();
                rounding += (term.coeff * d.coeff).abs()
                    * t.powf(d.exponent)
                    * (cond + ROUNDING_SLACK + d.coeff.abs().ln().abs() + dt);
            }
        }
    }
    let tail_bound = top * t.powf(-(k_trunc as f64) * params.beta) + f64::EPSILON * rounding;
    Ok(KolmogorovResidual { residual, tail_bound })
}

/// Flat per-operation allowance, in units of ε, for a handful of roundings.
const ROUNDING_SLACK: f64 = 16.0;

/// Relative error, in units of ε, of the closed-form coefficient of order
/// `k` at state `m`. Terms are assembled in log space, so the error grows
/// with the magnitudes of the logarithms involved; the falling factorial
/// `(kν)(kν−1)…(kν−m+1)` loses accuracy when a factor nearly cancels.
fn term_condition(params: &FractionalParams, sp: &SaigoParams, m: usize, k: usize, term: PowerTerm) -> f64 {
    let kf = k as f64;
    let x = kf * params.nu;
    let mut cond = ROUNDING_SLACK + term.coeff.abs().ln().abs() + ln_gamma_pos(1.0 - kf * params.beta).abs();
    for j in 0..m {
        let d = (x - j as f64).abs();
        if d > 0.0 {
            cond += (x + j as f64) / d;
        }
    }
    if !params.is_riemann_liouville() {
        for j in 1..=k {
            let jf = j as f64;
            cond += ln_gamma_pos(1.0 + sp.gamma_p - jf * sp.beta).abs()
                + ln_gamma_pos(1.0 + sp.gamma_p + sp.alpha - (jf - 1.0) * sp.beta).abs();
        }
    }
    cond
}

/// Largest relative coefficient mismatch in the pgf equation
/// `∂^{α,β,γ} G(u, t) = −λ^ν (1−u)^ν G(u, t)` over orders `1..=k_trunc`,
/// with `G` the series `Σ_k C_k (−λ^ν (1−u)^ν)^k t^{−kβ} / Γ(1−kβ)`.
pub fn pgf_cauchy_residual(params: &FractionalParams, u: f64, k_trunc: usize) -> Result<f64> {
    params.validate()?;
    if !(u.abs() < 1.0) {
        return Err(Error::domain(format!("pgf needs |u| < 1, got {u}")));
    }
    let sp = params.saigo();
    let c = ck_coefficients(&sp, k_trunc)?;
    let s = params.lambda.powf(params.nu) * (1.0 - u).powf(params.nu);
    let coeff = |k: usize| {
        let kf = k as f64;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * c[k] * (kf * s.ln() - ln_gamma_pos(1.0 - kf * params.beta)).exp()
    };
    let mut worst: f64 = 0.0;
    for k in 1..=k_trunc {
        let d = saigo_caputo_derivative_power(&sp, -(k as f64) * params.beta)?;
        let lhs = coeff(k) * d.coeff;
        let rhs = -s * coeff(k - 1);
        let expected_exponent = -((k - 1) as f64) * params.beta;
        if (d.exponent - expected_exponent).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "derivative exponent {} does not match {expected_exponent}",
                d.exponent
            )));
        }
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{sstfpp_pmf, tail_mass};

    #[test]
    fn adm_examples() {
        let p = FractionalParams::stfpp(1.3, 0.7, 0.5).unwrap();
        assert!(adm_closed_form_diff(&p, 5, 10).unwrap() <= 1e-10);
        let p = FractionalParams::sstfpp(1.0, 0.8, -0.5, 0.1, 0.6).unwrap();
        assert!(adm_closed_form_diff(&p, 4, 8).unwrap() <= 1e-10);

        let p = FractionalParams::tfpp(1.5, 0.6).unwrap();
        let state = adm_solve(
            &p,
            6,
            &SeriesControl {
                max_k: 10,
                ..SeriesControl::default()
            },
        )
        .unwrap();
        for n in 0..=6 {
            for k in 0..n {
                assert!(state.iterate(n, k).is_empty());
            }
        }
    }

    #[test]
    fn adm_route_matches_closed_form() {
        let p = FractionalParams::sstfpp(1.0, 0.8, -0.5, 0.1, 0.6).unwrap();
        let control = SeriesControl::default();
        let adm = adm_pmf(&p, 1.0, 8, &control).unwrap();
        for (n, v) in adm.iter().enumerate() {
            assert!((v - sstfpp_pmf(&p, 1.0, n as u32).unwrap()).abs() < 1e-12);
        }
        let total: f64 = adm.iter().sum::<f64>() + tail_mass(&p, 1.0, 8, &control).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kolmogorov_examples() {
        let classical = FractionalParams::classical(1.0).unwrap();
        for n in 0..4 {
            let r = kolmogorov_residual(&classical, 2.0, n, 40).unwrap();
            assert!(r.residual <= 1e-9);
            assert!(r.residual <= r.tail_bound);
        }
        let p = FractionalParams::stfpp(1.0, 0.7, 0.6).unwrap();
        let r = kolmogorov_residual(&p, 1.0, 2, 40).unwrap();
        assert!(r.residual <= 10.0 * r.tail_bound);
        let r = kolmogorov_residual(&p, 1.0, 0, 12).unwrap();
        assert!(r.residual <= r.tail_bound && r.residual > 0.0);
    }

    #[test]
    fn pgf_cauchy_examples() {
        let p = FractionalParams::sstfpp(1.2, 0.8, -0.5, 0.1, 0.6).unwrap();
        for u in [-0.7, 0.0, 0.5] {
            assert!(pgf_cauchy_residual(&p, u, 30).unwrap() <= 1e-10);
        }
    }
}
