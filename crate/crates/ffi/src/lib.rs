//! C ABI over `khlab`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Every fallible call returns a
//! [`KhStatus`]; on failure a message is kept per thread and can be copied
//! out with [`khlab_last_error_message`]. Strings returned through `char**`
//! out-parameters are freed with [`khlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use khlab::braid::{braid_closure, parse_braid};
use khlab::cube::build_complex;
use khlab::diagram::{from_pd, Diagram};
use khlab::homology::{homology_table, BigradedGroup, HomologyEntry};
use khlab::invariants::{jones_state_sum, verify_positive_braid};
use khlab::KhError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    ResourceLimit = 5,
    OutOfRange = 6,
    VerifyFailed = 7,
    Panic = 8,
}

/// A link diagram: a braid closure or a signed PD code.
pub struct KhDiagram {
    inner: Diagram,
    braid: Option<khlab::BraidWord>,
}

/// A computed bigraded homology table.
pub struct KhTable {
    entries: Vec<((i32, i32), HomologyEntry)>,
}

/// One table entry. Torsion orders are read with [`khlab_table_torsion`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KhEntry {
    pub i: i32,
    pub j: i32,
    pub rank: u64,
    pub torsion_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &KhError) -> KhStatus {
    match e {
        KhError::BraidParse(_) | KhError::PdParse { .. } => KhStatus::ParseError,
        e if e.is_resource() => KhStatus::ResourceLimit,
        _ => KhStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and turning panics into [`KhStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), (KhStatus, String)>) -> KhStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KhStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KhStatus::Panic
        }
    }
}

fn kh(e: KhError) -> (KhStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (KhStatus, String) {
    (KhStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (KhStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (KhStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (KhStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Static version string of the library.
#[no_mangle]
pub extern "C" fn khlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy of the last error on this thread, or null if the last call succeeded.
/// Free with [`khlab_string_free`].
#[no_mangle]
pub extern "C" fn khlab_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn khlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a braid word such as `"p=4; 1 3 -2"` and builds its closure.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_from_braid(text: *const c_char, out: *mut *mut KhDiagram) -> KhStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let word = parse_braid(text).map_err(kh)?;
        let d = Box::new(KhDiagram { inner: braid_closure(&word), braid: Some(word) });
        write_out(out, Box::into_raw(d), "out")
    })
}

/// Parses signed PD text, one `X[a,b,c,d] +|-` record per line.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_from_pd(text: *const c_char, out: *mut *mut KhDiagram) -> KhStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let d = from_pd(text).map_err(kh)?;
        write_out(out, Box::into_raw(Box::new(KhDiagram { inner: d, braid: None })), "out")
    })
}

/// # Safety
/// `d` must come from a `khlab_diagram_from_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_free(d: *mut KhDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Crossing count, positive and negative crossing counts, and link components.
///
/// # Safety
/// `d` must be a live diagram handle; each out-pointer may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_info(
    d: *const KhDiagram,
    crossings: *mut usize,
    n_plus: *mut usize,
    n_minus: *mut usize,
    components: *mut usize,
) -> KhStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("diagram"))?;
        for (p, v) in [
            (crossings, d.inner.crossing_count()),
            (n_plus, d.inner.n_plus()),
            (n_minus, d.inner.n_minus()),
            (components, d.inner.component_count()),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Integral homology table with the normalised bigrading. Fails with
/// `KH_STATUS_RESOURCE_LIMIT` when the diagram has more than `cap` crossings.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology(d: *const KhDiagram, cap: usize, out: *mut *mut KhTable) -> KhStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("diagram"))?;
        let c = build_complex(&d.inner, cap).map_err(kh)?;
        let t: BigradedGroup = homology_table(&c).map_err(kh)?;
        let entries = t.entries().map(|(k, e)| (k, e.clone())).collect();
        write_out(out, Box::into_raw(Box::new(KhTable { entries })), "out")
    })
}

/// # Safety
/// `t` must come from [`khlab_homology`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn khlab_table_free(t: *mut KhTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of nonzero entries.
///
/// # Safety
/// `t` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_table_len(t: *const KhTable, out: *mut usize) -> KhStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        write_out(out, t.entries.len(), "out")
    })
}

/// Entry `index`, in `(i, j)` order.
///
/// # Safety
/// `t` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_table_entry(t: *const KhTable, index: usize, out: *mut KhEntry) -> KhStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let ((i, j), e) = t
            .entries
            .get(index)
            .ok_or_else(|| (KhStatus::OutOfRange, format!("entry {index} of {}", t.entries.len())))?;
        write_out(out, KhEntry { i: *i, j: *j, rank: e.rank, torsion_count: e.torsion.len() }, "out")
    })
}

/// Torsion order `k` of entry `index`.
///
/// # Safety
/// `t` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_table_torsion(t: *const KhTable, index: usize, k: usize, out: *mut u64) -> KhStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let order = t
            .entries
            .get(index)
            .and_then(|(_, e)| e.torsion.get(k))
            .ok_or_else(|| (KhStatus::OutOfRange, format!("torsion {k} of entry {index}")))?;
        write_out(out, *order, "out")
    })
}

/// The table as a JSON array of `{"i","j","rank","torsion"}` objects.
///
/// # Safety
/// `t` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_table_to_json(t: *const KhTable, out: *mut *mut c_char) -> KhStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let rows: Vec<serde_json::Value> = t
            .entries
            .iter()
            .map(|((i, j), e)| serde_json::json!({"i": i, "j": j, "rank": e.rank, "torsion": e.torsion}))
            .collect();
        write_out(out, into_c_string(serde_json::Value::Array(rows).to_string()), "out")
    })
}

/// Jones polynomial (unnormalised, unknot = q + q^-1) as a JSON object
/// mapping exponents to coefficients.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_jones_json(d: *const KhDiagram, cap: usize, out: *mut *mut c_char) -> KhStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("diagram"))?;
        let j = jones_state_sum(&d.inner, cap).map_err(kh)?;
        let text = serde_json::to_string(&j).map_err(|e| (KhStatus::Panic, e.to_string()))?;
        write_out(out, into_c_string(text), "out")
    })
}

/// Runs the positive-braid structure checks on a diagram built from a braid.
/// The JSON report is written to `out` whenever the checks ran, including
/// when the result is `KH_STATUS_VERIFY_FAILED`.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_verify_json(d: *const KhDiagram, cap: usize, out: *mut *mut c_char) -> KhStatus {
    let mut failed = false;
    let status = guard(|| {
        let d = d.as_ref().ok_or_else(|| null("diagram"))?;
        let word =
            d.braid.as_ref().ok_or_else(|| (KhStatus::InvalidInput, "diagram was not built from a braid".into()))?;
        let report = verify_positive_braid(word, cap).map_err(kh)?;
        failed = !report.all_passed();
        let text = serde_json::to_string(&report).map_err(|e| (KhStatus::Panic, e.to_string()))?;
        write_out(out, into_c_string(text), "out")
    });
    if status == KhStatus::Ok && failed {
        set_error("at least one check failed");
        return KhStatus::VerifyFailed;
    }
    status
}
