//! C ABI over `symtest`.
//!
//! Every function returns a [`SymtestStatus`]; on failure the message is
//! kept per thread and read with [`symtest_last_error_message`]. String
//! outputs use caller buffers: `*out_len` always receives the size needed
//! including the terminating NUL, and a null `buf` only queries that size.
//! Handles come from `*_new` and are released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::ToPrimitive;
use symtest::hypothesis::{beta_optimal, sample_complexity, BetaMethod, ErrorBudget};
use symtest::integrals::RngStream;
use symtest::numfmt::{format_rational, parse_rational};
use symtest::protocol::{build_optimal_protocol, simulate, ParallelProtocol};
use symtest::rep::{branching_table, theorem2_value, BranchingTable, SubgroupFamily, SubgroupKind};
use symtest::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymtestStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    SizeGuard = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymtestSubgroup {
    Identity = 0,
    Z = 1,
    T = 2,
}

impl SymtestSubgroup {
    fn kind(self) -> SubgroupKind {
        SubgroupKind::qubit(match self {
            SymtestSubgroup::Identity => SubgroupFamily::Trivial,
            SymtestSubgroup::Z => SubgroupFamily::Torus,
            SymtestSubgroup::T => SubgroupFamily::Orthogonal,
        })
    }
}

/// Outcome of [`symtest_protocol_simulate`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SymtestSimulation {
    pub type_i_worst: f64,
    pub type_ii_mean: f64,
    pub type_ii_stderr: f64,
    pub target_beta: f64,
}

/// Branching table of one subgroup at `n` queries.
pub struct SymtestTable {
    table: BranchingTable,
}

/// Optimal parallel protocol.
pub struct SymtestProtocol {
    protocol: ParallelProtocol,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SymtestStatus {
    match e {
        Error::InvalidArgument(_) | Error::UnknownEta(_) | Error::UnsupportedDimension { .. } => {
            SymtestStatus::InvalidArgument
        }
        e if e.is_size_guard() => SymtestStatus::SizeGuard,
        _ => SymtestStatus::Numerical,
    }
}

struct Fail(SymtestStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SymtestStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> SymtestStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SymtestStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SymtestStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SymtestStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize, out_len: *mut usize) -> Result<(), Fail> {
    let need = s.len() + 1;
    *out_ref(out_len, "out_len")? = need;
    if buf.is_null() {
        return Ok(());
    }
    if cap < need {
        return Err(Fail(
            SymtestStatus::BufferTooSmall,
            format!("buffer holds {cap} bytes, {need} needed"),
        ));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Size of the last error message on this thread, including the NUL.
#[no_mangle]
pub extern "C" fn symtest_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len() + 1)
}

/// Copies the last error message on this thread into `buf`.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn symtest_last_error_message(buf: *mut c_char, cap: usize, out_len: *mut usize) -> SymtestStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match catch_unwind(AssertUnwindSafe(|| write_str(&msg, buf, cap, out_len))) {
        Ok(Ok(())) => SymtestStatus::Ok,
        Ok(Err(Fail(status, _))) => status,
        Err(_) => SymtestStatus::Panic,
    }
}

/// `β(ε)` as a double. `numeric` selects the eigenvalue path.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn symtest_beta(
    subgroup: SymtestSubgroup,
    n: u32,
    eps: f64,
    numeric: bool,
    out: *mut f64,
) -> SymtestStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let method = if numeric { BetaMethod::Numeric } else { BetaMethod::Analytic };
        let beta = beta_optimal(subgroup.kind(), n, &ErrorBudget::from_f64(eps)?, method)?;
        *out = beta.to_f64();
        Ok(())
    })
}

/// Exact `β(ε)` as `"p/q = decimal"`. `eps` is a decimal or fraction string.
///
/// # Safety
/// `eps` must be a NUL-terminated string, `buf` null or valid for `cap`
/// bytes, and `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn symtest_beta_exact(
    subgroup: SymtestSubgroup,
    n: u32,
    eps: *const c_char,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> SymtestStatus {
    guard(|| {
        let eps = ErrorBudget::new(parse_rational(read_str(eps, "eps")?)?)?;
        let beta = beta_optimal(subgroup.kind(), n, &eps, BetaMethod::Analytic)?;
        write_str(&beta.to_string(), buf, cap, out_len)
    })
}

/// Fewest queries with `β ≤ delta`.
///
/// # Safety
/// `out_n` and `out_beta` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn symtest_sample_complexity(
    subgroup: SymtestSubgroup,
    delta: f64,
    out_n: *mut u32,
    out_beta: *mut f64,
) -> SymtestStatus {
    guard(|| {
        let out_n = out_ref(out_n, "out_n")?;
        let out_beta = out_ref(out_beta, "out_beta")?;
        let r = sample_complexity(subgroup.kind(), delta)?;
        *out_n = r.n_star;
        *out_beta = r.beta_at_n_star.to_f64().unwrap_or(f64::NAN);
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn symtest_table_new(subgroup: SymtestSubgroup, n: u32, out: *mut *mut SymtestTable) -> SymtestStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let table = branching_table(subgroup.kind(), n)?;
        *out = Box::into_raw(Box::new(SymtestTable { table }));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or come from [`symtest_table_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn symtest_table_free(table: *mut SymtestTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Table as JSON.
///
/// # Safety
/// `table` must be a live handle, `buf` null or valid for `cap` bytes, and
/// `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn symtest_table_json(
    table: *const SymtestTable,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> SymtestStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        write_str(&t.table.to_json(), buf, cap, out_len)
    })
}

/// `e^{Dmax}` of the table as `"p/q = decimal"`.
///
/// # Safety
/// As for [`symtest_table_json`].
#[no_mangle]
pub unsafe extern "C" fn symtest_table_exp_dmax(
    table: *const SymtestTable,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> SymtestStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let e = theorem2_value(&t.table).exp_dmax;
        write_str(&format!("{e} = {}", format_rational(&e)), buf, cap, out_len)
    })
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn symtest_protocol_new(
    subgroup: SymtestSubgroup,
    n: u32,
    out: *mut *mut SymtestProtocol,
) -> SymtestStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let protocol = build_optimal_protocol(subgroup.kind(), n)?;
        *out = Box::into_raw(Box::new(SymtestProtocol { protocol }));
        Ok(())
    })
}

/// # Safety
/// `protocol` must be null or come from [`symtest_protocol_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn symtest_protocol_free(protocol: *mut SymtestProtocol) {
    if !protocol.is_null() {
        drop(Box::from_raw(protocol));
    }
}

/// # Safety
/// `protocol` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn symtest_protocol_reference_free(protocol: *const SymtestProtocol, out: *mut bool) -> SymtestStatus {
    guard(|| {
        let p = protocol.as_ref().ok_or_else(|| null("protocol"))?;
        *out_ref(out, "out")? = p.protocol.reference_free;
        Ok(())
    })
}

/// Protocol as JSON, complex entries as `[re, im]`.
///
/// # Safety
/// As for [`symtest_table_json`].
#[no_mangle]
pub unsafe extern "C" fn symtest_protocol_json(
    protocol: *const SymtestProtocol,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> SymtestStatus {
    guard(|| {
        let p = protocol.as_ref().ok_or_else(|| null("protocol"))?;
        write_str(&p.protocol.to_json(), buf, cap, out_len)
    })
}

/// Simulates the protocol under both hypotheses.
///
/// # Safety
/// `protocol` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn symtest_protocol_simulate(
    protocol: *const SymtestProtocol,
    shots_null: usize,
    shots_alt: usize,
    seed: u64,
    stream: u64,
    out: *mut SymtestSimulation,
) -> SymtestStatus {
    guard(|| {
        let p = protocol.as_ref().ok_or_else(|| null("protocol"))?;
        let out = out_ref(out, "out")?;
        let r = simulate(&p.protocol, shots_null, shots_alt, RngStream::new(seed, stream))?;
        *out = SymtestSimulation {
            type_i_worst: r.type_i_worst,
            type_ii_mean: r.type_ii_mean,
            type_ii_stderr: r.type_ii_stderr,
            target_beta: r.target_beta,
        };
        Ok(())
    })
}
