//! C interface to `nchull`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every call returns an [`NchullStatus`]; on
//! failure `nchull_last_error` describes what went wrong on this thread.
//! Strings handed out by the library are released with
//! `nchull_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nchull::lattice::NCLattice;
use nchull::scd::{scd_with, verify_scd};
use nchull::trees::{self, TreeContext};
use nchull::{build_lattice, ChainDecomposition, Error, Forest, HullConfig};

/// Result codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NchullStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    BudgetExceeded = 4,
    NoBlankSide = 5,
    OutOfRange = 6,
    BufferTooSmall = 7,
    Failed = 8,
    Panic = 9,
}

pub struct NchullLattice {
    inner: NCLattice,
}

pub struct NchullScd {
    inner: ChainDecomposition,
}

pub struct NchullTrees {
    inner: Vec<Forest>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NchullStatus {
    match e {
        Error::MalformedShape(_)
        | Error::TooFewSides(_)
        | Error::TooFewPoints(_)
        | Error::MalformedEdges(_)
        | Error::InvalidPartition(_)
        | Error::InvalidForest(_) => NchullStatus::ParseError,
        Error::BudgetExceeded(_) => NchullStatus::BudgetExceeded,
        Error::NoBlankSide => NchullStatus::NoBlankSide,
        Error::ElementOutOfRange(_)
        | Error::IndexOutOfRange { .. }
        | Error::PointOutOfRange { .. } => NchullStatus::OutOfRange,
        _ => NchullStatus::Failed,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (NchullStatus, String)>) -> NchullStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NchullStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NchullStatus::Panic
        }
    }
}

fn lib(e: Error) -> (NchullStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NchullStatus, String) {
    (NchullStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (NchullStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (NchullStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, (NchullStatus, String)> {
    h.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (NchullStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library strings contain no nul")
        .into_raw()
}

/// Copies `values` into `buf` if it holds `cap` entries; `out_len` always
/// receives the full length.
unsafe fn fill(
    values: &[usize],
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> Result<(), (NchullStatus, String)> {
    write_out(out_len, values.len())?;
    if values.len() > cap {
        return Err((
            NchullStatus::BufferTooSmall,
            format!("need room for {} entries", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nchull_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nchull_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds NC(P) for a shape such as `[1;1;1]` or `segment:5`.
///
/// # Safety
/// `shape` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_new(
    shape: *const c_char,
    out: *mut *mut NchullLattice,
) -> NchullStatus {
    guard(|| {
        let config: HullConfig = read_str(shape, "shape")?.parse().map_err(lib)?;
        let inner = build_lattice(&config).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(NchullLattice { inner })))
    })
}

/// # Safety
/// `lattice` must come from `nchull_lattice_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_free(lattice: *mut NchullLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_len(
    lattice: *const NchullLattice,
    out: *mut usize,
) -> NchullStatus {
    guard(|| write_out(out, handle(lattice, "lattice")?.inner.len()))
}

/// Number of elements of each rank, lowest rank first.
///
/// # Safety
/// `lattice` must be a live handle; `buf` must hold `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_rank_vector(
    lattice: *const NchullLattice,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> NchullStatus {
    guard(|| {
        fill(
            &handle(lattice, "lattice")?.inner.rank_polynomial(),
            buf,
            cap,
            out_len,
        )
    })
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_is_graded(
    lattice: *const NchullLattice,
    out: *mut bool,
) -> NchullStatus {
    guard(|| write_out(out, handle(lattice, "lattice")?.inner.is_graded()))
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_is_rank_symmetric(
    lattice: *const NchullLattice,
    out: *mut bool,
) -> NchullStatus {
    guard(|| write_out(out, handle(lattice, "lattice")?.inner.is_rank_symmetric()))
}

/// Element `index` as a string like `0,2|1`; free with `nchull_string_free`.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_element(
    lattice: *const NchullLattice,
    index: usize,
    out: *mut *mut c_char,
) -> NchullStatus {
    guard(|| {
        let p = handle(lattice, "lattice")?
            .inner
            .element(index)
            .map_err(lib)?;
        write_out(out, to_c_string(p.to_string()))
    })
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_leq(
    lattice: *const NchullLattice,
    a: usize,
    b: usize,
    out: *mut bool,
) -> NchullStatus {
    guard(|| {
        let l = &handle(lattice, "lattice")?.inner;
        if a >= l.len() || b >= l.len() {
            return Err(lib(Error::ElementOutOfRange(a.max(b))));
        }
        write_out(out, l.leq(a, b))
    })
}

/// The lattice as JSON `{shape, n, elements, ranks, covers}`.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_lattice_to_json(
    lattice: *const NchullLattice,
    out: *mut *mut c_char,
) -> NchullStatus {
    guard(|| {
        let json = serde_json::to_string(&handle(lattice, "lattice")?.inner.to_json())
            .map_err(|e| (NchullStatus::Failed, e.to_string()))?;
        write_out(out, to_c_string(json))
    })
}

/// Symmetric chain decomposition. `blank_side` is 1-based; 0 picks the
/// first blank side.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_scd_new(
    lattice: *const NchullLattice,
    blank_side: usize,
    out: *mut *mut NchullScd,
) -> NchullStatus {
    guard(|| {
        let l = &handle(lattice, "lattice")?.inner;
        let side = (blank_side > 0).then_some(blank_side);
        let inner = scd_with(l, side).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(NchullScd { inner })))
    })
}

/// # Safety
/// `scd` must come from `nchull_scd_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn nchull_scd_free(scd: *mut NchullScd) {
    if !scd.is_null() {
        drop(Box::from_raw(scd));
    }
}

/// # Safety
/// `scd` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_scd_num_chains(
    scd: *const NchullScd,
    out: *mut usize,
) -> NchullStatus {
    guard(|| write_out(out, handle(scd, "decomposition")?.inner.len()))
}

/// Element indices of chain `index`, bottom first.
///
/// # Safety
/// `scd` must be a live handle; `buf` must hold `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn nchull_scd_chain(
    scd: *const NchullScd,
    index: usize,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> NchullStatus {
    guard(|| {
        let d = &handle(scd, "decomposition")?.inner;
        let chain = d
            .chains
            .get(index)
            .ok_or_else(|| lib(Error::ElementOutOfRange(index)))?;
        fill(chain, buf, cap, out_len)
    })
}

/// Whether the decomposition is disjoint, covering, saturated and centered.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_scd_verify(
    lattice: *const NchullLattice,
    scd: *const NchullScd,
    out: *mut bool,
) -> NchullStatus {
    guard(|| {
        let l = &handle(lattice, "lattice")?.inner;
        let d = &handle(scd, "decomposition")?.inner;
        write_out(out, verify_scd(l, d).passed())
    })
}

/// All noncrossing spanning trees with convex geodesics.
///
/// # Safety
/// `shape` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_trees_new(
    shape: *const c_char,
    out: *mut *mut NchullTrees,
) -> NchullStatus {
    guard(|| {
        let config: HullConfig = read_str(shape, "shape")?.parse().map_err(lib)?;
        let inner = TreeContext::new(&config)
            .enumerate_cg_trees(trees::DEFAULT_MAX_TREES)
            .map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(NchullTrees { inner })))
    })
}

/// # Safety
/// `trees` must come from `nchull_trees_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn nchull_trees_free(trees: *mut NchullTrees) {
    if !trees.is_null() {
        drop(Box::from_raw(trees));
    }
}

/// # Safety
/// `trees` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_trees_len(
    trees: *const NchullTrees,
    out: *mut usize,
) -> NchullStatus {
    guard(|| write_out(out, handle(trees, "trees")?.inner.len()))
}

/// Tree `index` as `0-1;1-2`; free with `nchull_string_free`.
///
/// # Safety
/// `trees` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nchull_trees_get(
    trees: *const NchullTrees,
    index: usize,
    out: *mut *mut c_char,
) -> NchullStatus {
    guard(|| {
        let t = handle(trees, "trees")?
            .inner
            .get(index)
            .ok_or_else(|| lib(Error::ElementOutOfRange(index)))?;
        write_out(out, to_c_string(t.to_string()))
    })
}
