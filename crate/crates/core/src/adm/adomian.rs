use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest order for which partitions are enumerated.
pub const MAX_ADOMIAN_ORDER: usize = 30;

/// A partition of `n` stored as `(part, multiplicity)` pairs.
type Partition = Vec<(usize, u32)>;

fn partitions(n: usize) -> Arc<Vec<Partition>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Partition>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Arc::clone(p);
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate(n, n, &mut current, &mut out);
    let out = Arc::new(out);
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(n, Arc::clone(&out));
    out
}

// parts are emitted in decreasing order, each at most `largest`
fn enumerate(rest: usize, largest: usize, current: &mut Partition, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=largest.min(rest)).rev() {
        for mult in 1..=(rest / part) as u32 {
            current.push((part, mult));
            enumerate(rest - part * mult as usize, part - 1, current, out);
            current.pop();
        }
    }
}

/// Adomian polynomial `A_n` by Rach's partition formula
///
/// ```text
/// A_n = Σ_{k=1}^{n} N^{(k)}(u₀) · Σ_{Σ j·k_j = n, Σ k_j = k} Π_j u_j^{k_j} / k_j!
/// ```
///
/// with `A_0 = N(u₀)`. `derivative(k)` must return `N^{(k)}(u₀)`; `u` holds
/// the components `u₀, …, u_n` (extra entries are ignored).
pub fn adomian_polynomial<F>(derivative: F, u: &[f64], n: usize) -> Result<f64>
where
    F: Fn(usize) -> f64,
{
    if n > MAX_ADOMIAN_ORDER {
        return Err(Error::domain(format!(
            "Adomian order {n} exceeds the cap {MAX_ADOMIAN_ORDER}"
        )));
    }
    if u.len() <= n {
        return Err(Error::domain(format!(
            "A_{n} needs components u_0..u_{n}, got {}",
            u.len()
        )));
    }
    if n == 0 {
        return Ok(derivative(0));
    }
    let mut by_k = vec![0.0; n + 1];
    for p in partitions(n).iter() {
        let mut k = 0usize;
        let mut weight = 1.0;
        for &(j, kj) in p {
            k += kj as usize;
            let fact: f64 = (1..=kj).map(f64::from).product();
            weight *= u[j].powi(kj as i32) / fact;
        }
        by_k[k] += weight;
    }
    Ok((1..=n).map(|k| by_k[k] * derivative(k)).sum())
}

/// `A_0, …, A_{u.len()−1}`.
pub fn adomian_polynomials<F>(derivative: F, u: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(usize) -> f64,
{
    (0..u.len()).map(|n| adomian_polynomial(&derivative, u, n)).collect()
}
