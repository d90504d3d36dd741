//! C ABI for `qubopress`.
//!
//! Instances live behind the opaque `QpQubo` handle. Every function returns a
//! `QpStatus`; on failure `qp_last_error_message` describes the error for the
//! calling thread. Panics are caught at the boundary and reported as
//! `QP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qubopress::bounds::BoundMethod;
use qubopress::compress::{compress, CompressionConfig, HeuristicChoice, Selection};
use qubopress::enumerate::{brute_force_minima_with_limit, optimum_included, spectral_gap, DEFAULT_ENUMERATION_LIMIT};
use qubopress::io::{read_qubo, write_qubo};
use qubopress::range::diff_stats;
use qubopress::{QuboError, QuboInstance};

/// Opaque instance handle.
pub struct QpQubo(QuboInstance);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IndexOutOfRange = 3,
    Parse = 4,
    Io = 5,
    EnumerationLimit = 6,
    Degenerate = 7,
    BufferTooSmall = 8,
    Panic = 9,
    Other = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpHeuristic {
    G = 0,
    G0 = 1,
    M = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpSelection {
    Random = 0,
    Sequential = 1,
    GreedyImpact = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpBoundMethod {
    Auto = 0,
    Exhaustive = 1,
    Heuristic = 2,
    HeuristicRoofDual = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QpCompressOptions {
    pub heuristic: QpHeuristic,
    pub selection: QpSelection,
    pub bound_method: QpBoundMethod,
    pub max_iterations: usize,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QpDiffStats {
    pub min_diff: f64,
    pub max_diff: f64,
    pub dr_bits: f64,
    pub distinct_values: usize,
    pub degenerate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QpSpectralGap {
    pub y1: f64,
    pub y2: f64,
    pub gamma: f64,
    pub alpha_star: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &QuboError) -> QpStatus {
    match e {
        QuboError::IndexOutOfRange { .. } | QuboError::LowerTriangle { .. } => QpStatus::IndexOutOfRange,
        QuboError::Parse { .. } | QuboError::Json(_) => QpStatus::Parse,
        QuboError::Io { .. } => QpStatus::Io,
        QuboError::EnumerationLimit { .. } => QpStatus::EnumerationLimit,
        QuboError::Degenerate | QuboError::NoSpectralGap => QpStatus::Degenerate,
        QuboError::DimensionMismatch { .. }
        | QuboError::EmptyInstance
        | QuboError::NonFinite { .. }
        | QuboError::InvalidBit { .. }
        | QuboError::InvalidScale(_)
        | QuboError::InvalidArgument(_) => QpStatus::InvalidArgument,
        _ => QpStatus::Other,
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), QpStatus>) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside qubopress".into());
            QpStatus::Panic
        }
    }
}

fn check<T>(r: qubopress::Result<T>) -> Result<T, QpStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

fn null() -> QpStatus {
    set_error("null pointer argument".into());
    QpStatus::NullPointer
}

unsafe fn handle<'a>(q: *const QpQubo) -> Result<&'a QuboInstance, QpStatus> {
    q.as_ref().map(|h| &h.0).ok_or_else(null)
}

unsafe fn handle_mut<'a>(q: *mut QpQubo) -> Result<&'a mut QuboInstance, QpStatus> {
    q.as_mut().map(|h| &mut h.0).ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, QpStatus> {
    p.as_mut().ok_or_else(null)
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a str, QpStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("path is not valid UTF-8".into());
        QpStatus::InvalidArgument
    })
}

fn boxed(q: QuboInstance) -> *mut QpQubo {
    Box::into_raw(Box::new(QpQubo(q)))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// All-zero instance with `n` variables.
///
/// # Safety
/// `out_q` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_new(n: usize, out_q: *mut *mut QpQubo) -> QpStatus {
    guard(|| {
        let slot = out(out_q)?;
        *slot = boxed(check(QuboInstance::zeros(n))?);
        Ok(())
    })
}

/// Instance from an `n * n` row-major matrix; entries below the diagonal
/// must be zero.
///
/// # Safety
/// `values` must point to `n * n` readable doubles; `out_q` as in
/// [`qp_qubo_new`].
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_from_dense(n: usize, values: *const f64, out_q: *mut *mut QpQubo) -> QpStatus {
    guard(|| {
        if values.is_null() {
            return Err(null());
        }
        let slot = out(out_q)?;
        let len = n.checked_mul(n).ok_or_else(|| {
            set_error("matrix size overflows".into());
            QpStatus::InvalidArgument
        })?;
        let flat = std::slice::from_raw_parts(values, len);
        let rows: Vec<&[f64]> = flat.chunks(n.max(1)).collect();
        *slot = boxed(check(QuboInstance::from_dense(&rows))?);
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `q` must be NULL or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_free(q: *mut QpQubo) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// # Safety
/// `q` must be a live handle and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_dim(q: *const QpQubo, n: *mut usize) -> QpStatus {
    guard(|| {
        *out(n)? = handle(q)?.n();
        Ok(())
    })
}

/// Sets the upper-triangle entry `(i, j)`, `i <= j`.
///
/// # Safety
/// `q` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_set(q: *mut QpQubo, i: usize, j: usize, value: f64) -> QpStatus {
    guard(|| check(handle_mut(q)?.set(i, j, value)))
}

/// # Safety
/// `q` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_get(q: *const QpQubo, i: usize, j: usize, value: *mut f64) -> QpStatus {
    guard(|| {
        *out(value)? = check(handle(q)?.try_get(i, j))?;
        Ok(())
    })
}

/// Energy of the bit vector `x` of length `len` (entries 0 or 1).
///
/// # Safety
/// `x` must point to `len` readable bytes; `energy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_energy(q: *const QpQubo, x: *const u8, len: usize, energy: *mut f64) -> QpStatus {
    guard(|| {
        if x.is_null() {
            return Err(null());
        }
        let bits = std::slice::from_raw_parts(x, len);
        *out(energy)? = check(handle(q)?.energy(bits))?;
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle and `stats` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_diff_stats(q: *const QpQubo, stats: *mut QpDiffStats) -> QpStatus {
    guard(|| {
        let s = diff_stats(handle(q)?);
        *out(stats)? = QpDiffStats {
            min_diff: s.min_diff,
            max_diff: s.max_diff,
            dr_bits: s.dr_bits,
            distinct_values: s.distinct_count(),
            degenerate: s.degenerate,
        };
        Ok(())
    })
}

/// Exact minimum by enumeration. Minimizers are written as bit masks
/// (bit `i` is `x_i`) into `masks`, at most `capacity` of them; `count`
/// receives the total number. A short buffer yields
/// `QP_STATUS_BUFFER_TOO_SMALL` with `min_value` and `count` still set.
///
/// # Safety
/// `masks` must hold `capacity` writable values (it may be NULL when
/// `capacity` is 0); `min_value` and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_solve(
    q: *const QpQubo,
    min_value: *mut f64,
    masks: *mut u64,
    capacity: usize,
    count: *mut usize,
) -> QpStatus {
    guard(|| {
        let r = check(brute_force_minima_with_limit(handle(q)?, DEFAULT_ENUMERATION_LIMIT))?;
        *out(min_value)? = r.min_value;
        *out(count)? = r.minimizers.len();
        if capacity > 0 {
            if masks.is_null() {
                return Err(null());
            }
            let dst = std::slice::from_raw_parts_mut(masks, capacity);
            let k = capacity.min(r.minimizers.len());
            dst[..k].copy_from_slice(&r.minimizers[..k]);
        }
        if capacity < r.minimizers.len() {
            set_error(format!("{} minimizers, buffer holds {capacity}", r.minimizers.len()));
            return Err(QpStatus::BufferTooSmall);
        }
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle and `gap` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_spectral_gap(q: *const QpQubo, gap: *mut QpSpectralGap) -> QpStatus {
    guard(|| {
        let g = check(spectral_gap(handle(q)?))?;
        *out(gap)? = QpSpectralGap { y1: g.y1, y2: g.y2, gamma: g.gamma, alpha_star: g.alpha_star };
        Ok(())
    })
}

/// Whether every global minimizer of `reference` minimizes `candidate`.
///
/// # Safety
/// Both handles must be live and `included` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_optimum_included(
    candidate: *const QpQubo,
    reference: *const QpQubo,
    included: *mut bool,
) -> QpStatus {
    guard(|| {
        *out(included)? = check(optimum_included(handle(candidate)?, handle(reference)?))?;
        Ok(())
    })
}

/// Reads a text or JSON (`.json`) instance file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out_q` as in [`qp_qubo_new`].
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_read(path: *const c_char, out_q: *mut *mut QpQubo) -> QpStatus {
    guard(|| {
        let p = path_arg(path)?;
        let slot = out(out_q)?;
        *slot = boxed(check(read_qubo(p))?);
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qp_qubo_write(q: *const QpQubo, path: *const c_char) -> QpStatus {
    guard(|| check(write_qubo(handle(q)?, path_arg(path)?)))
}

/// Options matching the library defaults: `G0`, random selection, automatic
/// bounds, 1000 iterations, seed 0.
#[no_mangle]
pub extern "C" fn qp_compress_options_default() -> QpCompressOptions {
    QpCompressOptions {
        heuristic: QpHeuristic::G0,
        selection: QpSelection::Random,
        bound_method: QpBoundMethod::Auto,
        max_iterations: 1000,
        seed: 0,
    }
}

/// Compresses `q` into a new handle; `q` is left untouched. `final_dr` may be
/// NULL.
///
/// # Safety
/// `q` must be a live handle, `options` readable (NULL selects the
/// defaults), `out_q` as in [`qp_qubo_new`].
#[no_mangle]
pub unsafe extern "C" fn qp_compress(
    q: *const QpQubo,
    options: *const QpCompressOptions,
    out_q: *mut *mut QpQubo,
    final_dr: *mut f64,
) -> QpStatus {
    guard(|| {
        let q = handle(q)?;
        let slot = out(out_q)?;
        let o = options.as_ref().copied().unwrap_or_else(|| qp_compress_options_default());
        let cfg = CompressionConfig {
            heuristic: match o.heuristic {
                QpHeuristic::G => HeuristicChoice::G,
                QpHeuristic::G0 => HeuristicChoice::G0,
                QpHeuristic::M => HeuristicChoice::M,
            },
            selection: match o.selection {
                QpSelection::Random => Selection::Random,
                QpSelection::Sequential => Selection::Sequential,
                QpSelection::GreedyImpact => Selection::GreedyImpact,
            },
            bound_method: match o.bound_method {
                QpBoundMethod::Auto => BoundMethod::Auto,
                QpBoundMethod::Exhaustive => BoundMethod::Exhaustive,
                QpBoundMethod::Heuristic => BoundMethod::Heuristic,
                QpBoundMethod::HeuristicRoofDual => BoundMethod::HeuristicRoofDual,
            },
            max_iterations: o.max_iterations,
            rng_seed: o.seed,
            record_bounds: false,
            ..CompressionConfig::default()
        };
        let (qc, trace) = check(compress(q, &cfg))?;
        if let Some(dr) = final_dr.as_mut() {
            *dr = trace.final_dr;
        }
        *slot = boxed(qc);
        Ok(())
    })
}
