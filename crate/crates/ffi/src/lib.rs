//! C ABI for the `fracpois` library.
//!
//! Parameters and tables live behind opaque handles created and destroyed
//! by this library. Every function returns an [`FpStatus`]; on failure the
//! message is available from [`fp_last_error_message`] on the same thread.
//! Panics never cross the boundary: they are caught and reported as
//! `FP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracpois::processes::tail_mass;
use fracpois::simulate::empirical_pmf;
use fracpois::specfun::mittag_leffler;
use fracpois::{Error, FractionalParams, PmfTable, SeriesControl, Variant};

/// Result codes. Values 2–4 match the exit codes of the `fracpois` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpStatus {
    Ok = 0,
    InvalidParams = 2,
    Convergence = 3,
    Unsupported = 4,
    NullPointer = 5,
    IndexOutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpVariant {
    Classical = 0,
    Tfpp = 1,
    Sfpp = 2,
    Stfpp = 3,
    Sstfpp = 4,
}

impl From<FpVariant> for Variant {
    fn from(v: FpVariant) -> Self {
        match v {
            FpVariant::Classical => Variant::Classical,
            FpVariant::Tfpp => Variant::Tfpp,
            FpVariant::Sfpp => Variant::Sfpp,
            FpVariant::Stfpp => Variant::Stfpp,
            FpVariant::Sstfpp => Variant::Sstfpp,
        }
    }
}

/// Opaque process parameters.
pub struct FpParams(FractionalParams);

/// Opaque pmf table.
pub struct FpPmfTable(PmfTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> FpStatus {
    match err {
        Error::Domain(_) | Error::InvalidParams(_) => FpStatus::InvalidParams,
        Error::Convergence(_) | Error::Truncation(_) | Error::Quadrature(_) => FpStatus::Convergence,
        Error::Unsupported(_) => FpStatus::Unsupported,
    }
}

fn fail(status: FpStatus, msg: impl Into<String>) -> FpStatus {
    set_error(msg.into());
    status
}

// runs `f`, translating library errors and panics into status codes
fn guarded<F>(f: F) -> FpStatus
where
    F: FnOnce() -> Result<(), FpStatus>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FpStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(FpStatus::Panic, "panic inside fracpois"),
    }
}

fn lib<T>(r: fracpois::Result<T>) -> Result<T, FpStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

/// # Safety
/// `p` must be null or a live pointer obtained from this library.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, FpStatus> {
    p.as_ref()
        .ok_or_else(|| fail(FpStatus::NullPointer, format!("{what} is null")))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), FpStatus> {
    if out.is_null() {
        return Err(fail(FpStatus::NullPointer, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn fp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Validates parameters and stores a new handle in `*out`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fp_params_new(
    variant: FpVariant,
    lambda: f64,
    alpha: f64,
    nu: f64,
    beta: f64,
    gamma: f64,
    out: *mut *mut FpParams,
) -> FpStatus {
    guarded(|| {
        let p = lib(FractionalParams::new(variant.into(), lambda, alpha, nu, beta, gamma))?;
        write_out(out, Box::into_raw(Box::new(FpParams(p))))
    })
}

/// Releases a handle from [`fp_params_new`]; null is ignored.
///
/// # Safety
/// `params` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn fp_params_free(params: *mut FpParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// `p(n, t)` with default series control.
///
/// # Safety
/// `params` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_pmf(params: *const FpParams, t: f64, n: u32, out: *mut f64) -> FpStatus {
    guarded(|| {
        let p = deref(params, "params")?;
        write_out(out, lib(p.0.pmf(t, n))?)
    })
}

/// Probability generating function `G(u, t)`, `|u| < 1`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_pgf(params: *const FpParams, u: f64, t: f64, out: *mut f64) -> FpStatus {
    guarded(|| {
        let p = deref(params, "params")?;
        write_out(out, lib(p.0.pgf_with(u, t, &SeriesControl::default()))?)
    })
}

/// First waiting-time survival `Pr{X > t}`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_survival(params: *const FpParams, t: f64, out: *mut f64) -> FpStatus {
    guarded(|| {
        let p = deref(params, "params")?;
        write_out(out, lib(p.0.survival_with(t, &SeriesControl::default()))?)
    })
}

/// `Pr{N(t) > n_max}`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_tail_mass(params: *const FpParams, t: f64, n_max: u32, out: *mut f64) -> FpStatus {
    guarded(|| {
        let p = deref(params, "params")?;
        write_out(out, lib(tail_mass(&p.0, t, n_max, &SeriesControl::default()))?)
    })
}

/// Mittag-Leffler function `E_α(x)`, `0 < α ≤ 1`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_mittag_leffler(alpha: f64, x: f64, out: *mut f64) -> FpStatus {
    guarded(|| write_out(out, lib(mittag_leffler(alpha, x))?))
}

/// Computes `p(n, times[i])` for `n ≤ n_max` and stores a table handle.
///
/// # Safety
/// `times` must point to `n_times` readable doubles (or be null with
/// `n_times == 0`), `params` must be a live handle and `out` valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fp_pmf_table_new(
    params: *const FpParams,
    times: *const f64,
    n_times: usize,
    n_max: u32,
    out: *mut *mut FpPmfTable,
) -> FpStatus {
    guarded(|| {
        let p = deref(params, "params")?;
        let times = if n_times == 0 {
            &[][..]
        } else if times.is_null() {
            return Err(fail(FpStatus::NullPointer, "times is null"));
        } else {
            std::slice::from_raw_parts(times, n_times)
        };
        let table = lib(PmfTable::compute(&p.0, times, n_max, &SeriesControl::default()))?;
        write_out(out, Box::into_raw(Box::new(FpPmfTable(table))))
    })
}

/// Entry `p(n, times[time_index])` of a table.
///
/// # Safety
/// `table` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_pmf_table_get(
    table: *const FpPmfTable,
    time_index: usize,
    n: u32,
    out: *mut f64,
) -> FpStatus {
    guarded(|| {
        let t = deref(table, "table")?;
        let v =
            t.0.probs
                .get(time_index)
                .and_then(|row| row.get(n as usize))
                .ok_or_else(|| fail(FpStatus::IndexOutOfRange, format!("no entry ({time_index}, {n})")))?;
        write_out(out, *v)
    })
}

/// Tail mass above `n_max` at `times[time_index]`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_pmf_table_tail(table: *const FpPmfTable, time_index: usize, out: *mut f64) -> FpStatus {
    guarded(|| {
        let t = deref(table, "table")?;
        let v =
            t.0.tail_mass
                .get(time_index)
                .ok_or_else(|| fail(FpStatus::IndexOutOfRange, format!("no time index {time_index}")))?;
        write_out(out, *v)
    })
}

/// Releases a table handle; null is ignored.
///
/// # Safety
/// `table` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn fp_pmf_table_free(table: *mut FpPmfTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Simulates `n_samples` draws at `t` and writes the histogram of
/// `0..=n_max` into `counts` (length `counts_len`, which must equal
/// `n_max + 1`) and the number of larger draws into `*overflow`.
///
/// # Safety
/// `params` must be a live handle, `counts` valid for `counts_len` writes
/// and `overflow` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fp_empirical_pmf(
    params: *const FpParams,
    t: f64,
    n_samples: u64,
    n_max: u32,
    seed: u64,
    counts: *mut u64,
    counts_len: usize,
    overflow: *mut u64,
) -> FpStatus {
    guarded(|| {
        let p = deref(params, "params")?;
        if counts.is_null() || overflow.is_null() {
            return Err(fail(FpStatus::NullPointer, "output buffer is null"));
        }
        if counts_len != n_max as usize + 1 {
            return Err(fail(
                FpStatus::IndexOutOfRange,
                format!(
                    "counts buffer holds {counts_len} entries, n_max + 1 = {} required",
                    n_max as usize + 1
                ),
            ));
        }
        let emp = lib(empirical_pmf(&p.0, t, n_samples, n_max, seed))?;
        std::slice::from_raw_parts_mut(counts, counts_len).copy_from_slice(&emp.counts);
        write_out(overflow, emp.overflow)
    })
}
