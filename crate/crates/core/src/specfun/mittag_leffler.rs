use super::gamma::ln_gamma_pos;
use super::CompensatedSum;
use crate::control::SeriesControl;
use crate::error::{Error, Result};

/// Largest admissible magnitude of a single series term.
const TERM_OVERFLOW: f64 = 1e300;

/// Below this argument the alternating series loses too many digits for α < 1.
const NEGATIVE_ARGUMENT_GUARD: f64 = -30.0;

/// One-parameter Mittag-Leffler function `E_α(x) = Σ x^k / Γ(αk + 1)`.
pub fn mittag_leffler(alpha: f64, x: f64) -> Result<f64> {
    mittag_leffler_with(alpha, x, &SeriesControl::default())
}

/// [`mittag_leffler`] with explicit series control.
///
/// The series is summed directly with compensated summation. Summation stops
/// once the geometric bound on the remaining terms falls below the control
/// tolerance; the term ratios `|x|Γ(αk+1)/Γ(αk+α+1)` decrease in `k`, so the
/// bound is rigorous.
pub fn mittag_leffler_with(alpha: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "Mittag-Leffler order must lie in (0, 1], got {alpha}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::domain("Mittag-Leffler argument must be finite"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if alpha == 1.0 {
        if x > TERM_OVERFLOW.ln() {
            return Err(Error::convergence(format!("E_1({x}) overflows")));
        }
        return Ok(x.exp());
    }
    if x < NEGATIVE_ARGUMENT_GUARD {
        return Err(Error::convergence(format!(
            "E_{alpha}({x}): alternating series cancels below x = {NEGATIVE_ARGUMENT_GUARD}"
        )));
    }

    let ln_abs_x = x.abs().ln();
    let negative = x < 0.0;
    let ln_term = |k: usize| k as f64 * ln_abs_x - ln_gamma_pos(alpha * k as f64 + 1.0);
    let signed = |k: usize, ln: f64| {
        let m = ln.exp();
        if negative && k % 2 == 1 {
            -m
        } else {
            m
        }
    };

    let mut acc = CompensatedSum::default();
    let mut ln_current = 0.0;
    for k in 0..control.term_cap {
        if ln_current > TERM_OVERFLOW.ln() {
            return Err(Error::convergence(format!("E_{alpha}({x}): term {k} overflows")));
        }
        acc.add(signed(k, ln_current));
        let ln_next = ln_term(k + 1);
        let ratio = (ln_next - ln_current).exp();
        if ratio < 1.0 {
            let tail = ln_next.exp() / (1.0 - ratio);
            if tail <= control.tail_tolerance(acc.value()) {
                return Ok(acc.value());
            }
        }
        ln_current = ln_next;
    }
    Err(Error::convergence(format!(
        "E_{alpha}({x}) did not converge within {} terms",
        control.term_cap
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_exp() {
        assert!((mittag_leffler(1.0, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        for x in [-20.0, -3.3, -0.1, 0.7, 5.0, 40.0] {
            let v = mittag_leffler(1.0, x).unwrap();
            assert!(((v - x.exp()) / x.exp()).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_argument() {
        assert_eq!(mittag_leffler(0.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn half_order_matches_erfc_oracle() {
        // E_{1/2}(-1) = e·erfc(1), mpmath at 50 digits
        let v = mittag_leffler(0.5, -1.0).unwrap();
        assert!((v - 0.427_583_576_155_807).abs() < 1e-12, "{v}");
    }

    #[test]
    fn near_order_one_matches_exp() {
        let v = mittag_leffler(1.0 - 1e-12, -2.0).unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn monotone_on_positive_axis() {
        for alpha in [0.2, 0.5, 0.8, 1.0] {
            let mut last = 0.0;
            for i in 0..=12 {
                let v = mittag_leffler(alpha, i as f64 * 0.25).unwrap();
                assert!(v > last, "alpha={alpha} i={i}");
                last = v;
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(mittag_leffler(0.3, -31.0), Err(Error::Convergence(_))));
        assert!(matches!(mittag_leffler(0.2, 400.0), Err(Error::Convergence(_))));
        assert!(matches!(mittag_leffler(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(mittag_leffler(1.5, 1.0), Err(Error::Domain(_))));
        let tight = SeriesControl {
            term_cap: 5,
            ..SeriesControl::default()
        };
        assert!(matches!(
            mittag_leffler_with(0.5, -3.0, &tight),
            Err(Error::Convergence(_))
        ));
    }
}
