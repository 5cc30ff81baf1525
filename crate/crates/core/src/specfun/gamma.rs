#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Distance to the nearest non-positive integer below which an argument is
/// treated as a gamma pole.
pub const POLE_TOLERANCE: f64 = 1e-9;

// Lanczos approximation with g = 671/128 and 14 terms
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS_C: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// zeta(k) - 1 for k = 2, 3, ...
const ZETA_MINUS_ONE: [f64; 29] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_942_9e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214_3e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891_5e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049_3e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064_5e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_110_6e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504_3e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
];

/// `ln Γ(2 + z) = z(1 − γ) + Σ_{k≥2} (−1)^k (ζ(k) − 1) z^k / k`, |z| small.
fn ln_gamma_two_plus(z: f64) -> f64 {
    let mut acc = 0.0;
    let mut zk = z;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        zk *= -z;
        acc -= zm1 * zk / k;
    }
    z * (1.0 - EULER_GAMMA) + acc
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let ser = LANCZOS_C
        .iter()
        .enumerate()
        .fold(LANCZOS_C0, |acc, (j, c)| acc + c / (x + 1.0 + j as f64));
    tmp + (SQRT_2PI * ser / x).ln()
}

/// sin(πx) with argument reduction so that integers give exact zeros.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let z1 = x - 1.0;
    if z1.abs() < 0.3 {
        return ln_gamma_two_plus(z1) - z1.ln_1p();
    }
    let z2 = x - 2.0;
    if z2.abs() < 0.3 {
        return ln_gamma_two_plus(z2);
    }
    ln_gamma_lanczos(x)
}

/// Returns `true` when `x` is within [`POLE_TOLERANCE`] of 0, −1, −2, …
pub(crate) fn is_gamma_pole(x: f64) -> bool {
    let n = x.round();
    n <= 0.0 && (x - n).abs() < POLE_TOLERANCE
}

/// `(ln|Γ(x)|, sign Γ(x))`; `None` at poles.
pub fn ln_gamma_abs(x: f64) -> Option<(f64, f64)> {
    if is_gamma_pole(x) || !x.is_finite() {
        return None;
    }
    if x > 0.0 {
        return Some((ln_gamma_pos(x), 1.0));
    }
    // Γ(x)Γ(1−x) = π / sin(πx)
    let s = sin_pi(x);
    let ln = PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x);
    Some((ln, s.signum()))
}

/// `1/Γ(x)`; exactly zero at non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    match ln_gamma_abs(x) {
        None => 0.0,
        Some((ln, sign)) => sign * (-ln).exp(),
    }
}

/// `Γ(x)`; infinite at poles.
pub fn gamma(x: f64) -> f64 {
    match ln_gamma_abs(x) {
        None => f64::INFINITY,
        Some((ln, sign)) => sign * ln.exp(),
    }
}

/// `∏ Γ(num_i) / ∏ Γ(den_j)` evaluated through log-gamma differences.
///
/// A pole in the denominator makes the ratio zero; a pole in the numerator
/// is a domain error.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &x in den {
        match ln_gamma_abs(x) {
            None => return Ok(0.0),
            Some((l, s)) => {
                ln -= l;
                sign *= s;
            }
        }
    }
    for &x in num {
        match ln_gamma_abs(x) {
            None => return Err(Error::domain(format!("gamma pole at {x} in numerator"))),
            Some((l, s)) => {
                ln += l;
                sign *= s;
            }
        }
    }
    Ok(sign * ln.exp())
}

/// Falling factorial `x(x−1)…(x−r+1)`; one for `r = 0`.
pub fn falling_factorial(x: f64, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, j| acc * (x - j as f64))
}
