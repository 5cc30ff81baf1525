//! Scalar special functions: gamma family, Mittag-Leffler, Gauss ₂F₁.
//!
//! All functions are pure and reentrant.

mod gamma;
mod hypergeometric;
mod mittag_leffler;

pub use gamma::{falling_factorial, gamma, gamma_ratio, ln_gamma_abs, log_gamma, rgamma, POLE_TOLERANCE};
pub use hypergeometric::gauss_2f1;
pub use mittag_leffler::{mittag_leffler, mittag_leffler_with};

pub(crate) use gamma::ln_gamma_pos;
pub(crate) use hypergeometric::gauss_2f1_with;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
