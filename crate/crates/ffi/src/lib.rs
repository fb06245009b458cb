//! C ABI over `ahp-core`.
//!
//! Every fallible call returns an [`AhpStatus`]; on failure the message is
//! available from [`ahp_last_error_message`] on the same thread. Matrices are
//! opaque handles released with [`ahp_matrix_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ahp_core::matrix::UpperJudgments;
use ahp_core::simulate::estimate_random_index;
use ahp_core::stats::{pearson_from_r, t_test_from_summary, Summary, TestResult};
use ahp_core::{
    build_matrix, consistency_report, derive_weights, random_index_lookup, ComparisonMatrix, Error, JudgmentScale,
    WeightMethod,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AhpStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Domain = 3,
    NonConvergence = 4,
    UnsupportedOrder = 5,
    BufferTooSmall = 6,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AhpMethod {
    Eigenvector = 0,
    Rowsum = 1,
}

/// Opaque comparison matrix.
pub struct AhpMatrix(ComparisonMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AhpConsistency {
    pub order: usize,
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub consistent: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AhpTestResult {
    pub statistic: f64,
    pub df1: f64,
    pub df2: f64,
    pub p_value: f64,
    pub degenerate: bool,
}

impl From<&TestResult> for AhpTestResult {
    fn from(t: &TestResult) -> Self {
        AhpTestResult { statistic: t.statistic, df1: t.df.0, df2: t.df.1, p_value: t.p_value, degenerate: t.degenerate }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: AhpStatus, msg: impl Into<String>) -> AhpStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> AhpStatus {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Schema(_) => AhpStatus::Parse,
        Error::NonConvergence { .. } => AhpStatus::NonConvergence,
        Error::UnsupportedOrder(_) => AhpStatus::UnsupportedOrder,
        _ => AhpStatus::Domain,
    }
}

fn guard(f: impl FnOnce() -> Result<(), AhpStatus>) -> AhpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AhpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(AhpStatus::Internal, "internal panic"),
    }
}

fn lift<T>(r: ahp_core::Result<T>) -> Result<T, AhpStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T) -> Result<(), AhpStatus> {
    if p.is_null() {
        Err(fail(AhpStatus::NullPointer, "null pointer argument"))
    } else {
        Ok(())
    }
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("C{k}")).collect()
}

/// Builds an `n`x`n` matrix from its strict upper triangle, row-major
/// (`n(n-1)/2` values: (0,1), (0,2), ..., (n-2,n-1)). Items are labeled C1..Cn.
///
/// # Safety
/// `upper` must point to `n(n-1)/2` doubles (may be null when `n < 2`);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_matrix_from_upper(n: usize, upper: *const f64, out: *mut *mut AhpMatrix) -> AhpStatus {
    guard(|| {
        non_null(out)?;
        let count = n * n.saturating_sub(1) / 2;
        if count > 0 {
            non_null(upper)?;
        }
        let vals: &[f64] = if count == 0 { &[] } else { std::slice::from_raw_parts(upper, count) };
        let mut judgments = UpperJudgments::new();
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                judgments.insert((i, j), vals[k]);
                k += 1;
            }
        }
        let names = labels(n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let m = lift(build_matrix(&refs, &judgments))?;
        *out = Box::into_raw(Box::new(AhpMatrix(m)));
        Ok(())
    })
}

/// Parses a matrix CSV held in memory.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_matrix_parse_csv(data: *const u8, len: usize, out: *mut *mut AhpMatrix) -> AhpStatus {
    guard(|| {
        non_null(out)?;
        non_null(data)?;
        let bytes = std::slice::from_raw_parts(data, len);
        let m = lift(ahp_core::ingest::parse_matrix_csv(bytes))?;
        *out = Box::into_raw(Box::new(AhpMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ahp_matrix_free(m: *mut AhpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Order of the matrix, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ahp_matrix_order(m: *const AhpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.order())
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_matrix_get(m: *const AhpMatrix, i: usize, j: usize, out: *mut f64) -> AhpStatus {
    guard(|| {
        non_null(m)?;
        non_null(out)?;
        let m = &(*m).0;
        if i >= m.order() || j >= m.order() {
            return Err(fail(AhpStatus::Domain, format!("index ({i},{j}) outside order {}", m.order())));
        }
        *out = m.get(i, j);
        Ok(())
    })
}

/// Writes the normalized weights into `out[0..order]`.
///
/// # Safety
/// `m` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ahp_weights(m: *const AhpMatrix, method: AhpMethod, out: *mut f64, len: usize) -> AhpStatus {
    guard(|| {
        non_null(m)?;
        non_null(out)?;
        let m = &(*m).0;
        if len < m.order() {
            return Err(fail(AhpStatus::BufferTooSmall, format!("buffer holds {len}, need {}", m.order())));
        }
        let method = match method {
            AhpMethod::Eigenvector => WeightMethod::Eigenvector,
            AhpMethod::Rowsum => WeightMethod::Rowsum,
        };
        let w = lift(derive_weights(m, method))?;
        std::slice::from_raw_parts_mut(out, m.order()).copy_from_slice(w.weights());
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_consistency(m: *const AhpMatrix, out: *mut AhpConsistency) -> AhpStatus {
    guard(|| {
        non_null(m)?;
        non_null(out)?;
        let r = lift(consistency_report(&(*m).0))?;
        *out = AhpConsistency {
            order: r.order,
            lambda_max: r.lambda_max,
            ci: r.ci,
            ri: r.ri,
            cr: r.cr,
            consistent: r.consistent,
        };
        Ok(())
    })
}

/// Tabulated random index for orders 1..=15.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_random_index(n: usize, out: *mut f64) -> AhpStatus {
    guard(|| {
        non_null(out)?;
        *out = lift(random_index_lookup(n))?;
        Ok(())
    })
}

/// Monte Carlo random index on the 17-value scale; deterministic in `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_estimate_random_index(n: usize, samples: usize, seed: u64, out: *mut f64) -> AhpStatus {
    guard(|| {
        non_null(out)?;
        *out = lift(estimate_random_index(n, samples, seed, &JudgmentScale::saaty()))?.mean_ci;
        Ok(())
    })
}

/// Pooled two-sample t-test from group summaries.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_t_test_from_summary(
    n1: usize,
    mean1: f64,
    sd1: f64,
    n2: usize,
    mean2: f64,
    sd2: f64,
    out: *mut AhpTestResult,
) -> AhpStatus {
    guard(|| {
        non_null(out)?;
        let a = lift(Summary::new(n1, mean1, sd1))?;
        let b = lift(Summary::new(n2, mean2, sd2))?;
        *out = (&lift(t_test_from_summary(a, b))?).into();
        Ok(())
    })
}

/// Significance of a Pearson correlation `r` over `n` pairs.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ahp_pearson_from_r(r: f64, n: usize, out: *mut AhpTestResult) -> AhpStatus {
    guard(|| {
        non_null(out)?;
        *out = (&lift(pearson_from_r(r, n))?).into();
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ahp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}
