use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::saigo::ln_ck_factor;
use crate::specfun::{gamma_ratio, ln_gamma_pos, CompensatedSum};

use super::params::{FractionalParams, Variant};

/// Largest series argument (`λ^ν t^{−β}` and its relatives) accepted before
/// cancellation in double precision is declared fatal.
pub const ARGUMENT_GUARD: f64 = 30.0;

/// Generalised binomial coefficient `x(x−1)…(x−n+1)/n!`.
///
/// Built as a running product of `(x−j+1)/j`, so an integer `x < n` gives an
/// exact zero.
pub fn binomial(x: f64, n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * (x - f64::from(j) + 1.0) / f64::from(j))
}

// upper bound on |binomial(x, n)| for x > −1
fn binomial_bound(x: f64, n: u32) -> f64 {
    let nf = f64::from(n);
    if n == 0 {
        1.0
    } else if x >= nf - 1.0 && x > 0.0 {
        (nf * x.ln() - ln_gamma_pos(nf + 1.0)).exp()
    } else if x >= 0.0 {
        2f64.powf(x + 1.0)
    } else {
        1.0
    }
}

// first k for which kν ≥ n − 1, plus one
fn first_monotone_k(n: u32, nu: f64) -> usize {
    ((f64::from(n) - 1.0).max(0.0) / nu).ceil() as usize + 1
}

/// Sums `Σ_k term(k)` where `term` yields the term value and an envelope
/// `≥ |term|`. Summation stops at `k ≥ k_min` once the envelope ratio drops
/// below 1/2 and the implied geometric tail is below the tolerance.
fn sum_series<F>(label: &str, k_min: usize, control: &SeriesControl, mut term: F) -> Result<f64>
where
    F: FnMut(usize) -> Result<(f64, f64)>,
{
    let mut acc = CompensatedSum::default();
    let mut max_abs: f64 = 0.0;
    let mut prev_env = f64::INFINITY;
    for k in 0..control.term_cap {
        let (value, env) = term(k)?;
        if !value.is_finite() || !env.is_finite() {
            return Err(Error::convergence(format!("{label}: term {k} overflows")));
        }
        acc.add(value);
        max_abs = max_abs.max(value.abs());
        if k >= k_min.max(1) {
            let r = if prev_env > 0.0 {
                env / prev_env
            } else if env == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            if r < 0.5 && env * r / (1.0 - r) <= control.tail_tolerance(acc.value()) {
                let rounding = max_abs * f64::EPSILON * (k + 1) as f64;
                if rounding > control.max_rounding {
                    return Err(Error::convergence(format!(
                        "{label}: cancellation (largest term {max_abs:e}) leaves rounding error {rounding:e}"
                    )));
                }
                return Ok(acc.value());
            }
        }
        prev_env = env;
    }
    Err(Error::convergence(format!(
        "{label}: no convergence within {} terms",
        control.term_cap
    )))
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

fn check_argument(label: &str, x: f64) -> Result<()> {
    if x > ARGUMENT_GUARD {
        return Err(Error::convergence(format!(
            "{label}: series argument {x} exceeds {ARGUMENT_GUARD}; double precision cannot resolve the cancellation"
        )));
    }
    Ok(())
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Signed coefficients `g_k = C_k (−x)^k / Γ(1−kβ)`, generated in order.
struct KernelTerms {
    params: FractionalParams,
    ln_x: f64,
    ln_c: f64,
}

impl KernelTerms {
    fn new(params: &FractionalParams, x: f64) -> Self {
        KernelTerms {
            params: *params,
            ln_x: x.ln(),
            ln_c: 0.0,
        }
    }

    // must be called with k = 0, 1, 2, … in order
    fn next(&mut self, k: usize) -> Result<(f64, f64)> {
        if k > 0 {
            self.ln_c += ln_ck_factor(&self.params.saigo(), k)?;
        }
        let kf = k as f64;
        let ln = self.ln_c + kf * self.ln_x - ln_gamma_pos(1.0 - kf * self.params.beta);
        let mag = ln.exp();
        Ok((sign(k) * mag, mag))
    }
}

/// `Σ_k g_k · weight(k)` with the kernel coefficients of `params` at `x`.
fn kernel_sum<W, B>(
    label: &str,
    params: &FractionalParams,
    x: f64,
    k_min: usize,
    control: &SeriesControl,
    weight: W,
    bound: B,
) -> Result<f64>
where
    W: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    let mut g = KernelTerms::new(params, x);
    sum_series(label, k_min, control, |k| {
        let (gk, mag) = g.next(k)?;
        Ok((gk * weight(k), mag * bound(k)))
    })
}

/// Classical Poisson pmf `e^{−λt}(λt)^n/n!`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, t: f64, n: u32) -> f64 {
    let mu = lambda * t;
    if mu == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = f64::from(n);
    (-mu + nf * mu.ln() - ln_gamma_pos(nf + 1.0)).exp()
}

/// Time-fractional pmf with default control.
pub fn tfpp_pmf(params: &FractionalParams, t: f64, n: u32) -> Result<f64> {
    tfpp_pmf_with(params, t, n, &SeriesControl::default())
}

/// Time-fractional pmf from its own series
/// `(λt^α)^n/n! · Σ_k (k+n)!/k! · (−λt^α)^k / Γ((k+n)α+1)`.
///
/// Requires `ν = 1` and `β = −α`.
pub fn tfpp_pmf_with(params: &FractionalParams, t: f64, n: u32, control: &SeriesControl) -> Result<f64> {
    params.validate()?;
    if !(params.nu == 1.0 && params.is_riemann_liouville()) {
        return Err(Error::InvalidParams(
            "tfpp series needs nu = 1 and beta = -alpha".into(),
        ));
    }
    check_time(t)?;
    let y = params.lambda * t.powf(params.alpha);
    check_argument("tfpp pmf", y)?;
    if y == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = f64::from(n);
    let ln_y = y.ln();
    let ln_prefix = nf * ln_y - ln_gamma_pos(nf + 1.0);
    sum_series("tfpp pmf", 1, control, |k| {
        let kf = k as f64;
        let ln = ln_prefix + ln_gamma_pos(kf + nf + 1.0) - ln_gamma_pos(kf + 1.0) + kf * ln_y
            - ln_gamma_pos((kf + nf) * params.alpha + 1.0);
        let mag = ln.exp();
        Ok((sign(k) * mag, mag))
    })
}

/// Space-fractional pmf with default control.
pub fn sfpp_pmf(params: &FractionalParams, t: f64, n: u32) -> Result<f64> {
    sfpp_pmf_with(params, t, n, &SeriesControl::default())
}

/// Space-fractional pmf from its own series
/// `(−1)^n/n! · Σ_k (−λ^ν t)^k/k! · Γ(kν+1)/Γ(kν+1−n)`; gamma poles in the
/// denominator zero the corresponding terms.
///
/// Requires `α = 1` and `β = −1`.
pub fn sfpp_pmf_with(params: &FractionalParams, t: f64, n: u32, control: &SeriesControl) -> Result<f64> {
    params.validate()?;
    if !(params.alpha == 1.0 && params.beta == -1.0) {
        return Err(Error::InvalidParams("sfpp series needs alpha = 1 and beta = -1".into()));
    }
    check_time(t)?;
    let z = params.lambda.powf(params.nu) * t;
    check_argument("sfpp pmf", z)?;
    if z == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = f64::from(n);
    let ln_z = z.ln();
    let sign_n = sign(n as usize);
    let ln_nfact = ln_gamma_pos(nf + 1.0);
    sum_series("sfpp pmf", first_monotone_k(n, params.nu), control, |k| {
        let kf = k as f64;
        let x = kf * params.nu;
        let mag = (kf * ln_z - ln_gamma_pos(kf + 1.0)).exp();
        let ratio = gamma_ratio(&[x + 1.0], &[x + 1.0 - nf])? * (-ln_nfact).exp();
        Ok((sign_n * sign(k) * mag * ratio, mag * binomial_bound(x, n)))
    })
}

/// Space-time-fractional pmf with default control.
pub fn stfpp_pmf(params: &FractionalParams, t: f64, n: u32) -> Result<f64> {
    stfpp_pmf_with(params, t, n, &SeriesControl::default())
}

/// Space-time-fractional pmf
/// `(−1)^n/n! · Σ_k (−λ^ν t^α)^k / Γ(kα+1) · (kν)(kν−1)…(kν−n+1)`.
///
/// Requires `β = −α`.
pub fn stfpp_pmf_with(params: &FractionalParams, t: f64, n: u32, control: &SeriesControl) -> Result<f64> {
    params.validate()?;
    if !params.is_riemann_liouville() {
        return Err(Error::InvalidParams("stfpp series needs beta = -alpha".into()));
    }
    kernel_pmf(params, t, n, control)
}

/// Saigo space-time-fractional pmf with default control.
pub fn sstfpp_pmf(params: &FractionalParams, t: f64, n: u32) -> Result<f64> {
    sstfpp_pmf_with(params, t, n, &SeriesControl::default())
}

/// Saigo space-time-fractional pmf
/// `(−1)^n/n! · Σ_k C_k (−λ^ν t^{−β})^k / Γ(1−kβ) · (kν)(kν−1)…(kν−n+1)`.
///
/// With `β = −α` all `C_k` are exactly one and the result is bit-for-bit
/// the space-time-fractional pmf.
pub fn sstfpp_pmf_with(params: &FractionalParams, t: f64, n: u32, control: &SeriesControl) -> Result<f64> {
    params.validate()?;
    kernel_pmf(params, t, n, control)
}

fn kernel_pmf(params: &FractionalParams, t: f64, n: u32, control: &SeriesControl) -> Result<f64> {
    check_time(t)?;
    let x = params.series_argument(t);
    check_argument("pmf", x)?;
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let sign_n = sign(n as usize);
    let nu = params.nu;
    kernel_sum(
        "pmf",
        params,
        x,
        first_monotone_k(n, nu),
        control,
        |k| sign_n * binomial(k as f64 * nu, n),
        |k| binomial_bound(k as f64 * nu, n),
    )
}

/// Probability generating function with default control.
pub fn sstfpp_pgf(params: &FractionalParams, u: f64, t: f64) -> Result<f64> {
    sstfpp_pgf_with(params, u, t, &SeriesControl::default())
}

/// `G(u, t) = Σ_k C_k (−λ^ν (1−u)^ν t^{−β})^k / Γ(1−kβ)` for `|u| < 1`.
///
/// Valid for every variant, each being a special case.
pub fn sstfpp_pgf_with(params: &FractionalParams, u: f64, t: f64, control: &SeriesControl) -> Result<f64> {
    params.validate()?;
    check_time(t)?;
    if !(u.abs() < 1.0) {
        return Err(Error::domain(format!("pgf needs |u| < 1, got {u}")));
    }
    let x = params.series_argument(t) * (1.0 - u).powf(params.nu);
    check_argument("pgf", x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    kernel_sum("pgf", params, x, 1, control, |_| 1.0, |_| 1.0)
}

/// First waiting-time survival `Pr{X > t}` with default control.
pub fn waiting_survival(params: &FractionalParams, t: f64) -> Result<f64> {
    waiting_survival_with(params, t, &SeriesControl::default())
}

/// `Pr{X > t}`, the probability of no event by time `t`.
pub fn waiting_survival_with(params: &FractionalParams, t: f64, control: &SeriesControl) -> Result<f64> {
    params.pmf_with(t, 0, control)
}

/// `Pr{N(t) > n_max}` from the identity
/// `Σ_{n≤N} (−1)^n binom(x, n) = (−1)^N binom(x−1, N)`, which turns the tail
/// into `−(−1)^N Σ_{k≥1} g_k binom(kν−1, N)`.
pub fn tail_mass(params: &FractionalParams, t: f64, n_max: u32, control: &SeriesControl) -> Result<f64> {
    params.validate()?;
    check_time(t)?;
    let x = params.series_argument(t);
    check_argument("tail mass", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let nu = params.nu;
    let sign_n = -sign(n_max as usize);
    let k_min = (f64::from(n_max) / nu).ceil() as usize + 1;
    kernel_sum(
        "tail mass",
        params,
        x,
        k_min,
        control,
        |k| {
            if k == 0 {
                0.0
            } else {
                sign_n * binomial(k as f64 * nu - 1.0, n_max)
            }
        },
        |k| {
            if k == 0 {
                0.0
            } else {
                binomial_bound(k as f64 * nu - 1.0, n_max)
            }
        },
    )
}

impl FractionalParams {
    /// State probability `p(n, t)` from the variant's closed form.
    pub fn pmf_with(&self, t: f64, n: u32, control: &SeriesControl) -> Result<f64> {
        match self.variant {
            Variant::Classical => {
                self.validate()?;
                check_time(t)?;
                Ok(poisson_pmf(self.lambda, t, n))
            }
            Variant::Tfpp => tfpp_pmf_with(self, t, n, control),
            Variant::Sfpp => sfpp_pmf_with(self, t, n, control),
            Variant::Stfpp => stfpp_pmf_with(self, t, n, control),
            Variant::Sstfpp => sstfpp_pmf_with(self, t, n, control),
        }
    }

    pub fn pmf(&self, t: f64, n: u32) -> Result<f64> {
        self.pmf_with(t, n, &SeriesControl::default())
    }

    pub fn pgf_with(&self, u: f64, t: f64, control: &SeriesControl) -> Result<f64> {
        sstfpp_pgf_with(self, u, t, control)
    }

    pub fn survival_with(&self, t: f64, control: &SeriesControl) -> Result<f64> {
        waiting_survival_with(self, t, control)
    }
}
