//! C ABI over the means library.
//!
//! Every fallible entry point returns an [`MlStatus`] and writes results
//! through out pointers. The detail text of the most recent failure on the
//! calling thread is readable with [`ml_last_error`]; [`ml_strerror`] gives
//! a static description of a status code. All entry points catch panics at
//! the boundary, so unwinding never crosses into C.
//!
//! The only stateful object is the opaque [`MlCtx`], which carries the
//! quadrature tolerance and the decimal precision used by escalated
//! evaluation. Contexts are cheap; create one per configuration and free it
//! with [`ml_ctx_free`]. A null context is accepted everywhere and means
//! "defaults".

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use meanlab::hiprec::PrecisionConfig;
use meanlab::integral::{integral_mean, j_from_i};
use meanlab::lab::{
    gamma_sandwich_check, high_precision_eval, scan_counterexample, verify_chain, ChainId, ExprId,
    ScanRegion,
};
use meanlab::mean::{MeanFunction, MeanKind};
use meanlab::transform::{s_mean, t_mean};
use meanlab::{Error, PositivePair, Tolerance};

/// Status code returned by every fallible FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    /// Null pointer, unknown name, or numeric argument out of range.
    InvalidArgument = 1,
    /// Quadrature exhausted its budget without meeting the tolerance.
    NoConvergence = 2,
    /// The operation needs a capability the precision backend cannot offer.
    Unsupported = 3,
    /// The caller's buffer is too small; retry with the reported size.
    BufferTooSmall = 4,
    Io = 5,
    /// An internal invariant failed; the library state is still consistent.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    // Interior NULs cannot come from our error texts, but a C string must
    // not contain them regardless of origin.
    let clean: String = msg
        .chars()
        .map(|c| if c == '\0' { ' ' } else { c })
        .collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).expect("NULs stripped above");
    });
}

struct FfiError {
    status: MlStatus,
    message: String,
}

fn invalid(message: String) -> FfiError {
    FfiError {
        status: MlStatus::InvalidArgument,
        message,
    }
}

impl From<Error> for FfiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NoConvergence { .. } => MlStatus::NoConvergence,
            Error::Domain(msg) if msg.starts_with("precision backend") => MlStatus::Unsupported,
            Error::Io(_) => MlStatus::Io,
            _ => MlStatus::InvalidArgument,
        };
        FfiError {
            status,
            message: e.to_string(),
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), FfiError>) -> MlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            MlStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.message);
            e.status
        }
        Err(_) => {
            set_last_error("internal panic caught at the FFI boundary");
            MlStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to a NUL-terminated string valid for the call.
unsafe fn require_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, FfiError> {
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn require_out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, FfiError> {
    if p.is_null() {
        return Err(invalid(format!("{what} pointer is null")));
    }
    Ok(&mut *p)
}

fn parse_mean(name: &str) -> Result<MeanFunction, FfiError> {
    MeanKind::parse(name)
        .map(MeanFunction::from_kind)
        .ok_or_else(|| invalid(format!("unknown mean '{name}'")))
}

/// Opaque handle: quadrature tolerance plus escalated-evaluation precision.
pub struct MlCtx {
    tol: Tolerance,
    prec: PrecisionConfig,
}

impl MlCtx {
    fn defaults() -> Self {
        MlCtx {
            tol: Tolerance::default(),
            prec: PrecisionConfig::new(50).expect("50 digits is in range"),
        }
    }
}

/// Resolves a possibly-null context pointer to a value; null means defaults.
///
/// # Safety
/// `ctx` must be null or a pointer returned by [`ml_ctx_new`] that has not
/// been freed.
unsafe fn resolve_ctx(ctx: *const MlCtx) -> MlCtx {
    if ctx.is_null() {
        MlCtx::defaults()
    } else {
        MlCtx {
            tol: (*ctx).tol,
            prec: (*ctx).prec,
        }
    }
}

/// Creates a context. `precision_digits == 0` selects the default
/// (50 decimal digits); `tol_abs == tol_rel == 0` selects the default
/// tolerance. Returns null on invalid input, with the detail available
/// through [`ml_last_error`].
#[no_mangle]
pub extern "C" fn ml_ctx_new(precision_digits: u32, tol_abs: f64, tol_rel: f64) -> *mut MlCtx {
    let made = catch_unwind(|| -> Result<MlCtx, FfiError> {
        let prec = if precision_digits == 0 {
            PrecisionConfig::new(50)?
        } else {
            PrecisionConfig::new(precision_digits)?
        };
        let tol = if tol_abs == 0.0 && tol_rel == 0.0 {
            Tolerance::default()
        } else {
            Tolerance::new(tol_abs, tol_rel)?
        };
        Ok(MlCtx { tol, prec })
    });
    match made {
        Ok(Ok(ctx)) => {
            set_last_error("");
            Box::into_raw(Box::new(ctx))
        }
        Ok(Err(e)) => {
            set_last_error(&e.message);
            ptr::null_mut()
        }
        Err(_) => {
            set_last_error("internal panic caught at the FFI boundary");
            ptr::null_mut()
        }
    }
}

/// Frees a context returned by [`ml_ctx_new`]. Null is a no-op.
///
/// # Safety
/// `ctx` must be null or a pointer returned by [`ml_ctx_new`] that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn ml_ctx_free(ctx: *mut MlCtx) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ml_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ml_strerror(status: MlStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MlStatus::Ok => b"ok\0",
        MlStatus::InvalidArgument => b"invalid argument\0",
        MlStatus::NoConvergence => b"quadrature did not converge\0",
        MlStatus::Unsupported => b"precision backend cannot perform the operation\0",
        MlStatus::BufferTooSmall => b"buffer too small\0",
        MlStatus::Io => b"io error\0",
        MlStatus::Panic => b"internal panic\0",
    };
    s.as_ptr() as *const c_char
}

/// Copies the calling thread's most recent error message into `buf`,
/// always NUL-terminated, truncating if necessary. Returns the full length
/// of the message including the NUL; pass a null `buf` to query the size.
///
/// # Safety
/// `buf` must be null or valid for writing `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ml_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Evaluates a registered mean by name (`"A"`, `"G"`, `"H"`, `"C"`, `"r"`,
/// `"g"`, `"Hn"`, `"AGhalf"`, `"min"`, `"max"`) at a positive pair.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ml_mean(
    name: *const c_char,
    a: f64,
    b: f64,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let name = require_str(name, "mean name")?;
        let out = require_out(out, "out")?;
        let m = parse_mean(name)?;
        let p = PositivePair::new(a, b)?;
        *out = m.eval_pair(&p);
        Ok(())
    })
}

/// Integral mean I_M over [a,b]²: exact or closed form for registered
/// kinds, adaptive cubature otherwise.
///
/// # Safety
/// `ctx` must be null or a live context; `name` a NUL-terminated string;
/// `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ml_integral_mean(
    ctx: *const MlCtx,
    name: *const c_char,
    a: f64,
    b: f64,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let name = require_str(name, "mean name")?;
        let out = require_out(out, "out")?;
        let m = parse_mean(name)?;
        let p = PositivePair::new(a, b)?;
        *out = integral_mean(&m, &p, ctx.tol)?.value;
        Ok(())
    })
}

/// The affine companion J_M = 3 I_M − 2 A.
///
/// # Safety
/// Same contract as [`ml_integral_mean`].
#[no_mangle]
pub unsafe extern "C" fn ml_j_mean(
    ctx: *const MlCtx,
    name: *const c_char,
    a: f64,
    b: f64,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let name = require_str(name, "mean name")?;
        let out = require_out(out, "out")?;
        let m = parse_mean(name)?;
        let p = PositivePair::new(a, b)?;
        *out = j_from_i(integral_mean(&m, &p, ctx.tol)?.value, &p);
        Ok(())
    })
}

/// Trigonometric selector mean S_M with the default selector weights.
///
/// # Safety
/// Same contract as [`ml_integral_mean`].
#[no_mangle]
pub unsafe extern "C" fn ml_s_mean(
    ctx: *const MlCtx,
    name: *const c_char,
    a: f64,
    b: f64,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let name = require_str(name, "mean name")?;
        let out = require_out(out, "out")?;
        let m = parse_mean(name)?;
        let p = PositivePair::new(a, b)?;
        *out = s_mean(&m, &p, ctx.tol)?;
        Ok(())
    })
}

/// Composite mean T_{M1,M2}: averages `outer(M2(a,b), x)` for x over [a,b].
///
/// # Safety
/// `ctx` must be null or a live context; `outer` and `inner` must be
/// NUL-terminated strings; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ml_t_mean(
    ctx: *const MlCtx,
    outer: *const c_char,
    inner: *const c_char,
    a: f64,
    b: f64,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let outer = require_str(outer, "outer mean name")?;
        let inner = require_str(inner, "inner mean name")?;
        let out = require_out(out, "out")?;
        let m1 = parse_mean(outer)?;
        let m2 = parse_mean(inner)?;
        let p = PositivePair::new(a, b)?;
        *out = t_mean(&m1, &m2, &p, ctx.tol)?;
        Ok(())
    })
}

/// Evaluates a registered lab expression (`"N0"`, `"N(c)"`, `"L0"`,
/// `"L(c)"`, `"JId"`, `"JTsin"`, `"JLnsq"`, or any mean name) in double
/// precision.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ml_expr_eval(
    expr: *const c_char,
    a: f64,
    b: f64,
    out: *mut f64,
) -> MlStatus {
    guard(|| {
        let expr = require_str(expr, "expression")?;
        let out = require_out(out, "out")?;
        let e = ExprId::parse(expr)?;
        let p = PositivePair::new(a, b)?;
        *out = e.eval_f64(&p)?;
        Ok(())
    })
}

/// Evaluates a registered lab expression at the context's decimal precision
/// and renders the full decimal expansion into `buf` (NUL terminated).
/// `*needed` always receives the required size including the NUL; if `buf`
/// is null or too small the call returns `BufferTooSmall` and writes
/// nothing else.
///
/// # Safety
/// `ctx` must be null or a live context; `expr` a NUL-terminated string;
/// `buf` null or valid for writing `buf_len` bytes; `needed` valid for
/// writing.
#[no_mangle]
pub unsafe extern "C" fn ml_expr_eval_decimal(
    ctx: *const MlCtx,
    expr: *const c_char,
    a: f64,
    b: f64,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let expr = require_str(expr, "expression")?;
        let needed = require_out(needed, "needed")?;
        let e = ExprId::parse(expr)?;
        let p = PositivePair::new(a, b)?;
        let decimal = high_precision_eval(&e, &p, ctx.prec)?;
        let c = CString::new(decimal).expect("decimal expansions contain no NUL");
        let bytes = c.as_bytes_with_nul();
        *needed = bytes.len();
        if buf.is_null() || buf_len < bytes.len() {
            return Err(FfiError {
                status: MlStatus::BufferTooSmall,
                message: format!("decimal expansion needs {} bytes", bytes.len()),
            });
        }
        ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        Ok(())
    })
}

/// Runs a named inequality chain (`"classical"`, `"integral"`, `"s-means"`,
/// `"t-means"`) over `samples` seeded pairs and reports the violation count.
/// A nonzero count is a finding, not an error: the call still returns `Ok`.
///
/// # Safety
/// `ctx` must be null or a live context; `chain` a NUL-terminated string;
/// `violations` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ml_verify_chain(
    ctx: *const MlCtx,
    chain: *const c_char,
    samples: u64,
    seed: u64,
    violations: *mut u64,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let chain = require_str(chain, "chain name")?;
        let violations = require_out(violations, "violations")?;
        let id = ChainId::parse(chain)
            .ok_or_else(|| invalid(format!("unknown chain '{chain}'")))?;
        if samples == 0 {
            return Err(invalid("samples must be at least 1".into()));
        }
        let report = verify_chain(id, samples, seed, ctx.tol)?;
        *violations = report.violations.len() as u64;
        Ok(())
    })
}

/// Searches the box `[a_lo,a_hi]×[b_lo,b_hi]` for a point where `lhs < rhs`,
/// certifying any candidate at the context's precision. On return `*found`
/// is 1 with the witness and the signed difference `lhs−rhs` filled in, or
/// 0 with the out values zeroed. Exhausting the budget without a find is
/// `Ok` with `*found == 0`.
///
/// # Safety
/// `ctx` must be null or a live context; `lhs` and `rhs` NUL-terminated
/// strings; `found`, `witness_a`, `witness_b`, `difference` valid for
/// writing.
#[no_mangle]
pub unsafe extern "C" fn ml_scan(
    ctx: *const MlCtx,
    lhs: *const c_char,
    rhs: *const c_char,
    a_lo: f64,
    a_hi: f64,
    b_lo: f64,
    b_hi: f64,
    budget: u64,
    found: *mut i32,
    witness_a: *mut f64,
    witness_b: *mut f64,
    difference: *mut f64,
) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let lhs = require_str(lhs, "lhs expression")?;
        let rhs = require_str(rhs, "rhs expression")?;
        let found = require_out(found, "found")?;
        let witness_a = require_out(witness_a, "witness_a")?;
        let witness_b = require_out(witness_b, "witness_b")?;
        let difference = require_out(difference, "difference")?;
        let lhs = ExprId::parse(lhs)?;
        let rhs = ExprId::parse(rhs)?;
        let region = ScanRegion::new((a_lo, a_hi), (b_lo, b_hi))?;
        match scan_counterexample(&lhs, &rhs, region, budget, ctx.prec)? {
            Some(cert) => {
                *found = 1;
                *witness_a = cert.witness.a();
                *witness_b = cert.witness.b();
                *difference = cert.difference;
            }
            None => {
                *found = 0;
                *witness_a = 0.0;
                *witness_b = 0.0;
                *difference = 0.0;
            }
        }
        Ok(())
    })
}

/// Checks the two-sided gamma sandwich through both the constant route and
/// the mean route at the context's precision. `*holds` is 1 only if every
/// strict inequality verifies.
///
/// # Safety
/// `ctx` must be null or a live context; `holds` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn ml_gamma_sandwich(ctx: *const MlCtx, holds: *mut i32) -> MlStatus {
    guard(|| {
        let ctx = resolve_ctx(ctx);
        let holds = require_out(holds, "holds")?;
        let check = gamma_sandwich_check(ctx.prec)?;
        *holds = i32::from(check.holds && check.mean_route_holds);
        Ok(())
    })
}
