use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{OutputFormat, RunConfig};
use crate::error::Result;
use crate::processes::{adm_closed_form_diff, adm_pmf, kolmogorov_residual, pgf_cauchy_residual, tail_mass, PmfTable};
use crate::saigo::{composition_check, semigroup_counterexample, SEMIGROUP_EXAMPLE};
use crate::simulate::{compare, empirical_pmf};

const KOLMOGOROV_THRESHOLD: f64 = 1.0;
const ADM_THRESHOLD: f64 = 1e-10;
const COMPOSITION_THRESHOLD: f64 = 1e-10;
const SEMIGROUP_THRESHOLD: f64 = 1e-3;
const NORMALIZATION_THRESHOLD: f64 = 1e-6;
const PGF_THRESHOLD: f64 = 1e-10;
const PGF_CHECK_POINTS: [f64; 5] = [-0.7, -0.3, 0.0, 0.3, 0.7];

/// Seventeen significant digits, which round-trips any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn params_json(cfg: &RunConfig) -> Value {
    let p = &cfg.params;
    json!({
        "variant": p.variant,
        "lambda": p.lambda,
        "alpha": p.alpha,
        "nu": p.nu,
        "beta": p.beta,
        "gamma": p.gamma_p,
        "times": cfg.times,
        "n_max": cfg.n_max,
        "control": cfg.control,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable output");
    s.push('\n');
    s
}

/// Rows `t,n,p,tail_mass`.
pub fn cmd_pmf(cfg: &RunConfig) -> Result<String> {
    let table = PmfTable::compute(&cfg.params, &cfg.times, cfg.n_max, &cfg.control)?;
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("t,n,p,tail_mass\n");
            for (i, &t) in table.times.iter().enumerate() {
                let tail = format_float(table.tail_mass[i]);
                for (n, &p) in table.probs[i].iter().enumerate() {
                    writeln!(out, "{},{n},{},{tail}", format_float(t), format_float(p)).unwrap();
                }
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = table
                .times
                .iter()
                .enumerate()
                .flat_map(|(i, &t)| {
                    let tail = table.tail_mass[i];
                    table.probs[i]
                        .iter()
                        .enumerate()
                        .map(move |(n, &p)| json!({"t": t, "n": n, "p": p, "tail_mass": tail}))
                })
                .collect();
            Ok(to_json(&json!({"params": params_json(cfg), "rows": rows})))
        }
    }
}

/// Rows `t,u,pgf`.
pub fn cmd_pgf(cfg: &RunConfig) -> Result<String> {
    let mut rows = Vec::new();
    for &t in &cfg.times {
        for &u in &cfg.u {
            rows.push((t, u, cfg.params.pgf_with(u, t, &cfg.control)?));
        }
    }
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("t,u,pgf\n");
            for (t, u, g) in rows {
                writeln!(out, "{},{},{}", format_float(t), format_float(u), format_float(g)).unwrap();
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|&(t, u, g)| json!({"t": t, "u": u, "pgf": g}))
                .collect();
            to_json(&json!({"params": params_json(cfg), "u": cfg.u, "rows": rows}))
        }
    })
}

/// Rows `t,survival`.
pub fn cmd_survival(cfg: &RunConfig) -> Result<String> {
    let rows = cfg
        .times
        .iter()
        .map(|&t| Ok((t, cfg.params.survival_with(t, &cfg.control)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("t,survival\n");
            for (t, s) in rows {
                writeln!(out, "{},{}", format_float(t), format_float(s)).unwrap();
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows.iter().map(|&(t, s)| json!({"t": t, "survival": s})).collect();
            to_json(&json!({"params": params_json(cfg), "rows": rows}))
        }
    })
}

fn check(name: &str, residual: f64, threshold: f64) -> Value {
    json!({"name": name, "residual": residual, "threshold": threshold, "pass": residual <= threshold})
}

/// Runs every residual check and returns the JSON report and whether all
/// checks passed.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(String, bool)> {
    let p = &cfg.params;
    let k = cfg.control.max_k;
    let n_max = cfg.n_max as usize;
    let positive_times: Vec<f64> = cfg.times.iter().copied().filter(|&t| t > 0.0).collect();

    // residual relative to the truncation bound: passes while ≤ 1
    let mut kolmogorov: f64 = 0.0;
    for &t in &positive_times {
        for n in 0..=n_max {
            let r = kolmogorov_residual(p, t, n, k)?;
            let ratio = if r.tail_bound > 0.0 {
                r.residual / r.tail_bound
            } else if r.residual == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            kolmogorov = kolmogorov.max(ratio);
        }
    }

    let adm = adm_closed_form_diff(p, n_max, k)?;

    // powers t^{−jβ} are the ones the pmf series is made of
    let mut composition: f64 = 0.0;
    for &t in &positive_times {
        for j in 1..=4 {
            let rho = -(j as f64) * p.beta;
            composition = composition.max(composition_check(&p.saigo(), rho, t)? / t.powf(rho));
        }
    }

    let (p1, p2, rho) = SEMIGROUP_EXAMPLE;
    let semigroup = semigroup_counterexample(&p1, &p2, rho)?;
    let gap = semigroup.relative_difference();

    let mut normalization: f64 = 0.0;
    for &t in &cfg.times {
        let probs = adm_pmf(p, t, n_max, &cfg.control)?;
        let total = probs.iter().sum::<f64>() + tail_mass(p, t, cfg.n_max, &cfg.control)?;
        normalization = normalization.max((total - 1.0).abs());
    }

    let mut pgf: f64 = 0.0;
    for u in PGF_CHECK_POINTS {
        pgf = pgf.max(pgf_cauchy_residual(p, u, k)?);
    }

    let checks = vec![
        check("kolmogorov", kolmogorov, KOLMOGOROV_THRESHOLD),
        check("adm_closed_form_diff", adm, ADM_THRESHOLD),
        check("composition", composition, COMPOSITION_THRESHOLD),
        json!({
            "name": "semigroup",
            "residual": gap,
            "threshold": SEMIGROUP_THRESHOLD,
            "pass": semigroup.differ && gap > SEMIGROUP_THRESHOLD,
            "differ": semigroup.differ,
            "lhs": semigroup.lhs,
            "rhs": semigroup.rhs,
            "p1": {"alpha": p1.alpha, "beta": p1.beta, "gamma": p1.gamma_p},
            "p2": {"alpha": p2.alpha, "beta": p2.beta, "gamma": p2.gamma_p},
            "rho": rho,
        }),
        check("normalization", normalization, NORMALIZATION_THRESHOLD),
        check("pgf_cauchy", pgf, PGF_THRESHOLD),
    ];
    let pass = checks.iter().all(|c| c["pass"] == Value::Bool(true));
    Ok((
        to_json(&json!({"checks": checks, "params": params_json(cfg), "pass": pass})),
        pass,
    ))
}

/// Rows `n,empirical,closed_form,abs_diff` and a footer with the
/// chi-square statistic.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<String> {
    let t = cfg.times[0];
    let emp = empirical_pmf(&cfg.params, t, cfg.samples, cfg.n_max, cfg.seed)?;
    let cmp = compare(&emp, &cfg.control)?;
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("n,empirical,closed_form,abs_diff\n");
            for r in &cmp.rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    r.n,
                    format_float(r.empirical),
                    format_float(r.closed_form),
                    format_float(r.abs_diff)
                )
                .unwrap();
            }
            let c = &cmp.chi_square;
            writeln!(out, "# overflow_empirical={}", format_float(cmp.overflow_empirical)).unwrap();
            writeln!(out, "# overflow_closed_form={}", format_float(cmp.overflow_closed_form)).unwrap();
            writeln!(out, "# chi_square={}", format_float(c.statistic)).unwrap();
            writeln!(out, "# dof={}", c.dof).unwrap();
            writeln!(out, "# p_value={}", format_float(c.p_value)).unwrap();
            writeln!(out, "# samples={}", emp.sample_count).unwrap();
            writeln!(out, "# seed={}", emp.seed).unwrap();
            out
        }
        OutputFormat::Json => to_json(&json!({
            "params": params_json(cfg),
            "t": t,
            "samples": emp.sample_count,
            "seed": emp.seed,
            "rows": cmp.rows,
            "overflow_empirical": cmp.overflow_empirical,
            "overflow_closed_form": cmp.overflow_closed_form,
            "chi_square": cmp.chi_square,
        })),
    })
}
