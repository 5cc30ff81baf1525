//! Monte-Carlo cross-validation by subordination.
//!
//! The time-fractional process is a Poisson process run on the inverse
//! α-stable clock `E_α(t)`, the space-fractional one on the ν-stable
//! subordinator `D_ν(t)`, and the space-time-fractional one on
//! `D_ν(E_α(t))`. Sampling is split into fixed-size chunks, each driven by
//! its own ChaCha stream derived from the master seed, so histograms do not
//! depend on the number of worker threads.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::processes::{tail_mass, FractionalParams, Variant};

/// Samples per independently seeded stream.
pub const CHUNK_SIZE: u64 = 4096;

/// Poisson means up to this value are drawn by inversion.
const INVERSION_LIMIT: f64 = 30.0;

/// Poisson means above this are reported as `u64::MAX`; such counts always
/// land in the overflow bin.
const MEAN_CLAMP: f64 = 1e15;

/// Minimum expected count of a chi-square bin.
const MIN_EXPECTED: f64 = 5.0;

/// One draw of `D_ν(t)`, the one-sided stable variate with Laplace transform
/// `E e^{−s D_ν(t)} = e^{−t s^ν}`, by Kanter's representation
/// `D_ν(1) = sin(νU)/sin(U)^{1/ν} · (sin((1−ν)U)/W)^{(1−ν)/ν}` with
/// `U ~ U(0, π)`, `W ~ Exp(1)`.
pub fn sample_stable<R: Rng + ?Sized>(nu: f64, t: f64, rng: &mut R) -> Result<f64> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::domain(format!("stable index must lie in (0, 1), got {nu}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("subordinator time must be positive, got {t}")));
    }
    // open interval keeps sin(U) away from zero
    let u = PI
        * loop {
            let v: f64 = rng.gen();
            if v > 0.0 {
                break v;
            }
        };
    let w: f64 = Exp1.sample(rng);
    let s = (nu * u).sin() / u.sin().powf(1.0 / nu) * ((((1.0 - nu) * u).sin()) / w).powf((1.0 - nu) / nu);
    Ok(t.powf(1.0 / nu) * s)
}

/// One draw of `E_α(t)`, the first passage of `D_α` above `t`, via the
/// identity `E_α(t) = (t / D_α(1))^α` in distribution.
pub fn sample_inverse_stable<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "inverse stable index must lie in (0, 1), got {alpha}"
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("subordinator time must be positive, got {t}")));
    }
    let d = sample_stable(alpha, 1.0, rng)?;
    Ok((t / d).powf(alpha))
}

fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if !(mean >= 0.0) {
        return Err(Error::domain(format!("Poisson mean must be non-negative, got {mean}")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    if mean > MEAN_CLAMP {
        return Ok(u64::MAX);
    }
    if mean <= INVERSION_LIMIT {
        let u: f64 = rng.gen();
        let mut p = (-mean).exp();
        let mut cdf = p;
        let mut n = 0u64;
        while u > cdf && p > 0.0 {
            n += 1;
            p *= mean / n as f64;
            cdf += p;
        }
        return Ok(n);
    }
    let d = Poisson::new(mean).map_err(|e| Error::domain(e.to_string()))?;
    Ok(d.sample(rng) as u64)
}

/// One draw of the process value at `t` by subordination.
pub fn sample_process<R: Rng + ?Sized>(params: &FractionalParams, t: f64, rng: &mut R) -> Result<u64> {
    params.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(0);
    }
    let clock = match params.variant {
        Variant::Classical => t,
        Variant::Tfpp => inverse_stable_or_identity(params.alpha, t, rng)?,
        Variant::Sfpp => stable_or_identity(params.nu, t, rng)?,
        Variant::Stfpp => {
            let e = inverse_stable_or_identity(params.alpha, t, rng)?;
            if e == 0.0 {
                0.0
            } else {
                stable_or_identity(params.nu, e, rng)?
            }
        }
        Variant::Sstfpp => {
            return Err(Error::Unsupported(
                "sstfpp has no subordination representation; simulation is unavailable".into(),
            ))
        }
    };
    sample_poisson(params.lambda * clock, rng)
}

fn stable_or_identity<R: Rng + ?Sized>(nu: f64, t: f64, rng: &mut R) -> Result<f64> {
    if nu == 1.0 {
        Ok(t)
    } else {
        sample_stable(nu, t, rng)
    }
}

fn inverse_stable_or_identity<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> Result<f64> {
    if alpha == 1.0 {
        Ok(t)
    } else {
        sample_inverse_stable(alpha, t, rng)
    }
}

/// Histogram of simulated process values at a fixed time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalPmf {
    pub params: FractionalParams,
    pub t: f64,
    pub n_max: u32,
    /// `counts[n]` for `n ≤ n_max`.
    pub counts: Vec<u64>,
    /// Draws above `n_max`.
    pub overflow: u64,
    pub sample_count: u64,
    pub seed: u64,
}

impl EmpiricalPmf {
    pub fn frequency(&self, n: usize) -> f64 {
        self.counts[n] as f64 / self.sample_count as f64
    }
}

/// The stream for chunk `index` of the master `seed`.
pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `n_samples` values and bins them; deterministic for a fixed seed.
pub fn empirical_pmf(params: &FractionalParams, t: f64, n_samples: u64, n_max: u32, seed: u64) -> Result<EmpiricalPmf> {
    if n_samples < 1 {
        return Err(Error::InvalidParams("sample count must be at least 1".into()));
    }
    params.validate()?;
    if params.variant == Variant::Sstfpp {
        // fail before spawning any work
        sample_process(params, t, &mut chunk_rng(seed, 0))?;
    }
    let bins = n_max as usize + 1;
    let chunks = n_samples.div_ceil(CHUNK_SIZE);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let len = CHUNK_SIZE.min(n_samples - c * CHUNK_SIZE);
            let mut counts = vec![0u64; bins + 1];
            for _ in 0..len {
                let n = sample_process(params, t, &mut rng)?;
                counts[(n.min(bins as u64)) as usize] += 1;
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u64; bins + 1];
    for part in partial {
        for (a, b) in counts.iter_mut().zip(part) {
            *a += b;
        }
    }
    let overflow = counts.pop().unwrap_or(0);
    Ok(EmpiricalPmf {
        params: *params,
        t,
        n_max,
        counts,
        overflow,
        sample_count: n_samples,
        seed,
    })
}

/// Result of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of pooled bins.
    pub bins: usize,
}

/// Pearson chi-square of observed against expected probabilities; adjacent
/// cells are pooled left to right until each bin expects at least five
/// draws, and a short remainder joins the last bin.
pub fn chi_square(observed: &[u64], expected_prob: &[f64], total: u64) -> Result<ChiSquareTest> {
    if observed.len() != expected_prob.len() {
        return Err(Error::domain("observed and expected cells differ in length"));
    }
    let n = total as f64;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_prob) {
        obs += o as f64;
        exp += p.max(0.0) * n;
        if exp >= MIN_EXPECTED {
            pooled.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if obs > 0.0 || exp > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => pooled.push((obs, exp)),
        }
    }
    if pooled.len() < 2 {
        return Err(Error::domain(
            "chi-square needs at least two bins with expected count >= 5",
        ));
    }
    let statistic = pooled.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::domain(e.to_string()))?;
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: dist.sf(statistic),
        bins: pooled.len(),
    })
}

/// One row of an empirical-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: u32,
    pub empirical: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub overflow_empirical: f64,
    pub overflow_closed_form: f64,
    pub chi_square: ChiSquareTest,
}

/// Compares a histogram with the closed-form pmf, including the mass above
/// `n_max` as its own cell.
pub fn compare(emp: &EmpiricalPmf, control: &SeriesControl) -> Result<Comparison> {
    let p = &emp.params;
    let total = emp.sample_count as f64;
    let mut rows = Vec::with_capacity(emp.counts.len());
    let mut expected = Vec::with_capacity(emp.counts.len() + 1);
    for (n, &c) in emp.counts.iter().enumerate() {
        let closed = p.pmf_with(emp.t, n as u32, control)?;
        let empirical = c as f64 / total;
        rows.push(ComparisonRow {
            n: n as u32,
            empirical,
            closed_form: closed,
            abs_diff: (empirical - closed).abs(),
        });
        expected.push(closed);
    }
    let tail = tail_mass(p, emp.t, emp.n_max, control)?;
    expected.push(tail);
    let mut observed = emp.counts.clone();
    observed.push(emp.overflow);
    let chi = chi_square(&observed, &expected, emp.sample_count)?;
    Ok(Comparison {
        rows,
        overflow_empirical: emp.overflow as f64 / total,
        overflow_closed_form: tail,
        chi_square: chi,
    })
}

/// Standard error of a binomial proportion `p` over `n` trials.
pub fn binomial_standard_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::waiting_survival;

    #[test]
    fn stable_laplace_transform() {
        let mut rng = chunk_rng(7, 0);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_stable(0.5, 1.0, &mut rng).unwrap()).collect();
        assert!(draws.iter().all(|&d| d >= 0.0));
        let lt: Vec<f64> = draws.iter().map(|d| (-d).exp()).collect();
        let mean = lt.iter().sum::<f64>() / n as f64;
        let var = lt.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        assert!((mean - (-1.0f64).exp()).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn stable_domain() {
        let mut rng = chunk_rng(1, 0);
        assert!(sample_stable(1.0, 1.0, &mut rng).is_err());
        assert!(sample_inverse_stable(1.0, 1.0, &mut rng).is_err());
        assert!(sample_stable(0.5, 0.0, &mut rng).is_err());
    }

    #[test]
    fn inverse_stable_survival() {
        let p = FractionalParams::tfpp(1.0, 0.6).unwrap();
        let emp = empirical_pmf(&p, 1.0, 100_000, 10, 11).unwrap();
        let want = waiting_survival(&p, 1.0).unwrap();
        let se = binomial_standard_error(want, emp.sample_count);
        assert!((emp.frequency(0) - want).abs() < 3.0 * se);
    }

    #[test]
    fn space_fractional_survival() {
        let p = FractionalParams::sfpp(1.0, 0.5).unwrap();
        let emp = empirical_pmf(&p, 1.0, 100_000, 10, 12).unwrap();
        let want = (-1.0f64).exp();
        let se = binomial_standard_error(want, emp.sample_count);
        assert!((emp.frequency(0) - want).abs() < 3.0 * se);
    }

    #[test]
    fn histogram_basics() {
        let p = FractionalParams::classical(1.0).unwrap();
        let one = empirical_pmf(&p, 1.0, 1, 5, 3).unwrap();
        assert_eq!(one.counts.iter().sum::<u64>() + one.overflow, 1);
        let a = empirical_pmf(&p, 1.0, 20_000, 8, 99).unwrap();
        let b = empirical_pmf(&p, 1.0, 20_000, 8, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>() + a.overflow, 20_000);
        let mode = (0..a.counts.len()).max_by_key(|&n| a.counts[n]).unwrap();
        assert!(mode <= 1);
        assert!(empirical_pmf(&p, 1.0, 0, 8, 99).is_err());
    }

    #[test]
    fn determinism_across_thread_counts() {
        let p = FractionalParams::stfpp(1.0, 0.7, 0.6).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| empirical_pmf(&p, 1.0, 30_000, 12, 5).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn classical_goodness_of_fit() {
        let p = FractionalParams::classical(1.0).unwrap();
        let emp = empirical_pmf(&p, 1.0, 100_000, 15, 2024).unwrap();
        let cmp = compare(&emp, &SeriesControl::default()).unwrap();
        assert!(cmp.chi_square.p_value > 0.01, "{:?}", cmp.chi_square);
    }

    #[test]
    fn saigo_variant_is_unsupported() {
        let p = FractionalParams::sstfpp(1.0, 0.8, -0.5, 0.1, 0.6).unwrap();
        assert!(matches!(empirical_pmf(&p, 1.0, 10, 5, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn large_means_use_rejection() {
        let mut rng = chunk_rng(3, 0);
        let n = 20_000;
        let mean = (0..n)
            .map(|_| sample_poisson(250.0, &mut rng).unwrap() as f64)
            .sum::<f64>()
            / n as f64;
        assert!((mean - 250.0).abs() < 3.0 * (250.0f64 / n as f64).sqrt() * 1.5);
        assert_eq!(sample_poisson(1e20, &mut rng).unwrap(), u64::MAX);
    }

    #[test]
    fn chi_square_pooling() {
        let t = chi_square(&[50, 50, 0, 0], &[0.5, 0.49, 0.005, 0.005], 100).unwrap();
        assert_eq!(t.bins, 2);
        assert!(t.p_value > 0.5);
    }
}
