use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use fracpois_ffi::*;

fn params(variant: FpVariant, lambda: f64, alpha: f64, nu: f64, beta: f64, gamma: f64) -> *mut FpParams {
    let mut p = ptr::null_mut();
    let st = unsafe { fp_params_new(variant, lambda, alpha, nu, beta, gamma, &mut p) };
    assert_eq!(st, FpStatus::Ok, "{:?}", last_error());
    assert!(!p.is_null());
    p
}

fn last_error() -> Option<String> {
    let p = fp_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn classical_values_through_handles() {
    let p = params(FpVariant::Classical, 1.0, 1.0, 1.0, -1.0, 0.0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(fp_pmf(p, 1.0, 0, &mut v), FpStatus::Ok);
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(fp_pmf(p, 2.0, 3, &mut v), FpStatus::Ok);
        assert!((v - 8.0 / 6.0 * (-2.0f64).exp()).abs() < 1e-14);
        assert_eq!(fp_pgf(p, 0.3, 1.0, &mut v), FpStatus::Ok);
        assert!((v - (-0.7f64).exp()).abs() < 1e-12);
        assert_eq!(fp_survival(p, 1.5, &mut v), FpStatus::Ok);
        assert!((v - (-1.5f64).exp()).abs() < 1e-14);
        assert_eq!(fp_tail_mass(p, 1.0, 0, &mut v), FpStatus::Ok);
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        fp_params_free(p);
    }
    assert!(last_error().is_none());
}

#[test]
fn mittag_leffler_entry() {
    let mut v = 0.0;
    assert_eq!(unsafe { fp_mittag_leffler(1.0, -2.0, &mut v) }, FpStatus::Ok);
    assert!((v - (-2.0f64).exp()).abs() < 1e-14);
    assert_eq!(unsafe { fp_mittag_leffler(0.0, 1.0, &mut v) }, FpStatus::InvalidParams);
}

#[test]
fn table_matches_pointwise() {
    let p = params(FpVariant::Stfpp, 1.0, 0.7, 0.6, -0.7, 0.0);
    let times = [0.5, 1.0, 2.0];
    let mut table = ptr::null_mut();
    unsafe {
        assert_eq!(
            fp_pmf_table_new(p, times.as_ptr(), times.len(), 10, &mut table),
            FpStatus::Ok
        );
        for (i, &t) in times.iter().enumerate() {
            let mut total = 0.0;
            for n in 0..=10 {
                let (mut a, mut b) = (0.0, 0.0);
                assert_eq!(fp_pmf_table_get(table, i, n, &mut a), FpStatus::Ok);
                assert_eq!(fp_pmf(p, t, n, &mut b), FpStatus::Ok);
                assert_eq!(a.to_bits(), b.to_bits());
                total += a;
            }
            let mut tail = 0.0;
            assert_eq!(fp_pmf_table_tail(table, i, &mut tail), FpStatus::Ok);
            assert!((total + tail - 1.0).abs() < 1e-9);
        }
        let mut v = 0.0;
        assert_eq!(fp_pmf_table_get(table, 3, 0, &mut v), FpStatus::IndexOutOfRange);
        assert_eq!(fp_pmf_table_get(table, 0, 11, &mut v), FpStatus::IndexOutOfRange);
        assert_eq!(fp_pmf_table_tail(table, 9, &mut v), FpStatus::IndexOutOfRange);
        assert!(last_error().is_some());
        fp_pmf_table_free(table);
        fp_params_free(p);
    }
}

#[test]
fn invalid_parameters_are_reported() {
    let mut p = ptr::null_mut();
    let st = unsafe { fp_params_new(FpVariant::Stfpp, -1.0, 0.7, 0.6, -0.7, 0.0, &mut p) };
    assert_eq!(st, FpStatus::InvalidParams);
    assert!(p.is_null());
    assert!(!last_error().unwrap().is_empty());

    let st = unsafe { fp_params_new(FpVariant::Tfpp, 1.0, 1.5, 1.0, -1.5, 0.0, &mut p) };
    assert_eq!(st, FpStatus::InvalidParams);

    let q = params(FpVariant::Classical, 1.0, 1.0, 1.0, -1.0, 0.0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(fp_pmf(q, -1.0, 0, &mut v), FpStatus::InvalidParams);
        assert_eq!(fp_pgf(q, 1.5, 1.0, &mut v), FpStatus::InvalidParams);
        fp_params_free(q);
    }
}

#[test]
fn null_pointers_are_rejected() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(fp_pmf(ptr::null(), 1.0, 0, &mut v), FpStatus::NullPointer);
        assert_eq!(
            fp_params_new(FpVariant::Classical, 1.0, 1.0, 1.0, -1.0, 0.0, ptr::null_mut()),
            FpStatus::NullPointer
        );
        let p = params(FpVariant::Classical, 1.0, 1.0, 1.0, -1.0, 0.0);
        assert_eq!(fp_pmf(p, 1.0, 0, ptr::null_mut()), FpStatus::NullPointer);
        let mut table = ptr::null_mut();
        assert_eq!(
            fp_pmf_table_new(p, ptr::null(), 2, 5, &mut table),
            FpStatus::NullPointer
        );
        assert_eq!(fp_pmf_table_new(p, ptr::null(), 0, 5, &mut table), FpStatus::Ok);
        fp_pmf_table_free(table);
        fp_pmf_table_free(ptr::null_mut());
        fp_params_free(ptr::null_mut());
        fp_params_free(p);
    }
}

#[test]
fn empirical_counts_are_seeded() {
    let p = params(FpVariant::Stfpp, 1.0, 0.7, 0.6, -0.7, 0.0);
    let run = || {
        let mut counts = [0u64; 11];
        let mut over = 0u64;
        let st = unsafe { fp_empirical_pmf(p, 1.0, 5000, 10, 42, counts.as_mut_ptr(), counts.len(), &mut over) };
        assert_eq!(st, FpStatus::Ok);
        (counts, over)
    };
    let (a, oa) = run();
    let (b, ob) = run();
    assert_eq!(a, b);
    assert_eq!(oa, ob);
    assert_eq!(a.iter().sum::<u64>() + oa, 5000);

    let mut short = [0u64; 4];
    let mut over = 0;
    let st = unsafe { fp_empirical_pmf(p, 1.0, 10, 10, 1, short.as_mut_ptr(), short.len(), &mut over) };
    assert_eq!(st, FpStatus::IndexOutOfRange);

    let s = params(FpVariant::Sstfpp, 1.0, 0.7, 0.6, -0.5, 0.0);
    let mut counts = [0u64; 11];
    let st = unsafe { fp_empirical_pmf(s, 1.0, 10, 10, 1, counts.as_mut_ptr(), counts.len(), &mut over) };
    assert_eq!(st, FpStatus::Unsupported);
    unsafe {
        fp_params_free(s);
        fp_params_free(p);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fracpois.h")
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "fp_last_error_message",
        "fp_params_new",
        "fp_params_free",
        "fp_pmf(",
        "fp_pgf",
        "fp_survival",
        "fp_tail_mass",
        "fp_mittag_leffler",
        "fp_pmf_table_new",
        "fp_pmf_table_get",
        "fp_pmf_table_tail",
        "fp_pmf_table_free",
        "fp_empirical_pmf",
        "FP_STATUS_NULL_POINTER = 5",
        "typedef struct FpParams FpParams",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "fracpois.h"

int main(void) {
    FpParams *p = NULL;
    if (fp_params_new(FP_VARIANT_CLASSICAL, 1.0, 1.0, 1.0, -1.0, 0.0, &p) != FP_STATUS_OK) return 10;
    double v = 0.0;
    if (fp_pmf(p, 1.0, 0, &v) != FP_STATUS_OK) return 11;
    if (fabs(v - exp(-1.0)) > 1e-15) return 12;
    if (fp_pmf(p, -1.0, 0, &v) != FP_STATUS_INVALID_PARAMS) return 13;
    if (fp_last_error_message() == NULL) return 14;
    double times[2] = {0.5, 1.0};
    FpPmfTable *tab = NULL;
    if (fp_pmf_table_new(p, times, 2, 5, &tab) != FP_STATUS_OK) return 15;
    if (fp_pmf_table_get(tab, 1, 0, &v) != FP_STATUS_OK || fabs(v - exp(-1.0)) > 1e-15) return 16;
    fp_pmf_table_free(tab);
    fp_params_free(p);
    printf("%.17g\n", v);
    return 0;
}
"#;

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let inc = header().parent().unwrap().to_path_buf();
    let st = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&inc)
        .arg(&src)
        .status()
        .unwrap();
    assert!(st.success());
    if Command::new("c++").arg("--version").output().is_ok() {
        let st = Command::new("c++")
            .args(["-x", "c++", "-fsyntax-only", "-I"])
            .arg(&inc)
            .arg(&src)
            .status()
            .unwrap();
        assert!(st.success());
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libfracpois_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("skipping: no C compiler or {} missing", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    let exe = dir.path().join("probe");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let st = Command::new("cc")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success(), "link failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "probe exited with {:?}", out.status.code());
    let printed: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert_eq!(printed, (-1.0f64).exp());
}
