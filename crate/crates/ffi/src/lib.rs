//! C interface to `sizematch`.
//!
//! Objects are opaque handles created by `sm_*_new`/`sm_*_extract` and
//! released with the matching `sm_*_free`. Fallible calls return an
//! [`SmStatus`] and write results through out-pointers; the message of the
//! last failure on the calling thread is available from `sm_last_error`.
//! Strings returned by the library must be released with `sm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;
use std::slice;

use sizematch::{Diagram, Error, SizePair};

/// A connected graph with real vertex values.
pub struct SmSizePair(SizePair);

/// A cornerpoint diagram.
pub struct SmDiagram(Diagram);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    EmptyGraph = 2,
    Disconnected = 3,
    NonFinite = 4,
    InvalidGraph = 5,
    OutsideHalfPlane = 6,
    InvalidDiagram = 7,
    Parse = 8,
    NonIsomorphic = 9,
    SizeCap = 10,
    OutOfRange = 11,
    Internal = 12,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn status_of(err: &Error) -> SmStatus {
    match err {
        Error::EmptyGraph => SmStatus::EmptyGraph,
        Error::Disconnected { .. } => SmStatus::Disconnected,
        Error::NonFiniteValue { .. } => SmStatus::NonFinite,
        Error::DuplicateVertex(_)
        | Error::UnknownVertex(_)
        | Error::SelfLoop(_)
        | Error::DuplicateEdge(..) => SmStatus::InvalidGraph,
        Error::OutsideHalfPlane { .. } => SmStatus::OutsideHalfPlane,
        Error::InvalidDiagram(_) => SmStatus::InvalidDiagram,
        Error::Parse { .. } => SmStatus::Parse,
        Error::NonIsomorphic | Error::NotIsomorphism(_) => SmStatus::NonIsomorphic,
        Error::SizeCap { .. } => SmStatus::SizeCap,
        _ => SmStatus::Internal,
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard<F>(body: F) -> SmStatus
where
    F: FnOnce() -> Result<(), SmError> + UnwindSafe,
{
    match catch_unwind(body) {
        Ok(Ok(())) => SmStatus::Ok,
        Ok(Err(SmError(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside sizematch".into());
            SmStatus::Internal
        }
    }
}

struct SmError(SmStatus, String);

impl From<Error> for SmError {
    fn from(err: Error) -> Self {
        SmError(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> SmError {
    SmError(SmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, SmError> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], SmError> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), SmError> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds a size pair on vertices `0..n_vertices` with `values[i]` on vertex
/// `i`. `edges` holds `2 * n_edges` vertex indices, two per edge.
///
/// # Safety
/// `values` must point to `n_vertices` doubles, `edges` to `2 * n_edges`
/// indices, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_sizepair_new(
    values: *const f64,
    n_vertices: usize,
    edges: *const usize,
    n_edges: usize,
    out: *mut *mut SmSizePair,
) -> SmStatus {
    guard(|| {
        let values = as_slice(values, n_vertices, "values")?;
        let flat = as_slice(edges, 2 * n_edges, "edges")?;
        if let Some(&bad) = flat.iter().find(|&&v| v >= n_vertices) {
            return Err(SmError(
                SmStatus::InvalidGraph,
                format!("edge endpoint {bad} out of range"),
            ));
        }
        let pairs: Vec<(usize, usize)> = flat.chunks(2).map(|e| (e[0], e[1])).collect();
        let sp = SizePair::from_indexed(values.to_vec(), &pairs)?;
        write(out, Box::into_raw(Box::new(SmSizePair(sp))), "out")
    })
}

/// # Safety
/// `sp` must be null or a handle from `sm_sizepair_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sm_sizepair_free(sp: *mut SmSizePair) {
    if !sp.is_null() {
        drop(Box::from_raw(sp));
    }
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `sp` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_sizepair_len(sp: *const SmSizePair) -> usize {
    sp.as_ref().map_or(0, |sp| sp.0.len())
}

/// Evaluates the reduced size function at `(x, y)`, `x < y`.
///
/// # Safety
/// `sp` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_reduced_size_function(
    sp: *const SmSizePair,
    x: f64,
    y: f64,
    out: *mut usize,
) -> SmStatus {
    guard(|| {
        let sp = as_ref(sp, "size pair")?;
        let value = sizematch::reduced_size_function(&sp.0, x, y)?;
        write(out, value, "out")
    })
}

/// Extracts the cornerpoint diagram of a size pair.
///
/// # Safety
/// `sp` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_extract(
    sp: *const SmSizePair,
    out: *mut *mut SmDiagram,
) -> SmStatus {
    guard(|| {
        let sp = as_ref(sp, "size pair")?;
        let d = sizematch::extract_diagram(&sp.0);
        write(out, Box::into_raw(Box::new(SmDiagram(d))), "out")
    })
}

/// Builds a diagram from its point at infinity and `n_points` proper points
/// `(xs[i], ys[i])` with multiplicities `mults[i] ≥ 1`.
///
/// # Safety
/// The three arrays must hold `n_points` entries and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_new(
    infinity_x: f64,
    xs: *const f64,
    ys: *const f64,
    mults: *const usize,
    n_points: usize,
    out: *mut *mut SmDiagram,
) -> SmStatus {
    guard(|| {
        let xs = as_slice(xs, n_points, "xs")?;
        let ys = as_slice(ys, n_points, "ys")?;
        let mults = as_slice(mults, n_points, "mults")?;
        let points = (0..n_points).map(|i| (xs[i], ys[i], mults[i]));
        let d = Diagram::new(infinity_x, points)?;
        write(out, Box::into_raw(Box::new(SmDiagram(d))), "out")
    })
}

/// Parses Diagram JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_from_json(
    json: *const c_char,
    out: *mut *mut SmDiagram,
) -> SmStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| SmError(SmStatus::Parse, e.to_string()))?;
        let d = sizematch::io::diagram_from_json(text)?;
        write(out, Box::into_raw(Box::new(SmDiagram(d))), "out")
    })
}

/// Serializes a diagram to JSON; null for a null handle. Release the result
/// with `sm_string_free`.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_to_json(d: *const SmDiagram) -> *mut c_char {
    match d.as_ref() {
        Some(d) => CString::new(sizematch::io::diagram_to_json(&d.0))
            .map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `d` must be null or a live diagram handle.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_free(d: *mut SmDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Abscissa of the point at infinity; NaN for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_infinity_x(d: *const SmDiagram) -> f64 {
    d.as_ref().map_or(f64::NAN, |d| d.0.infinity_x())
}

/// Number of distinct proper points; 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_point_count(d: *const SmDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.points().len())
}

/// The `index`-th proper point in `(x, y)` order.
///
/// # Safety
/// `d` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_diagram_point(
    d: *const SmDiagram,
    index: usize,
    x: *mut f64,
    y: *mut f64,
    mult: *mut usize,
) -> SmStatus {
    guard(|| {
        let d = as_ref(d, "diagram")?;
        let &(p, m) = d.0.points().get(index).ok_or_else(|| {
            SmError(
                SmStatus::OutOfRange,
                format!("point index {index} out of range"),
            )
        })?;
        write(x, p.x, "x")?;
        write(y, p.y, "y")?;
        write(mult, m, "mult")
    })
}

/// Matching distance between two diagrams.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_matching_distance(
    d1: *const SmDiagram,
    d2: *const SmDiagram,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let (d1, d2) = (as_ref(d1, "first diagram")?, as_ref(d2, "second diagram")?);
        write(out, sizematch::matching_distance(&d1.0, &d2.0).0, "out")
    })
}

/// Lower bound for the matching distance from jumps of the size functions.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_earlier_bound(
    d1: *const SmDiagram,
    d2: *const SmDiagram,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let (d1, d2) = (as_ref(d1, "first diagram")?, as_ref(d2, "second diagram")?);
        write(out, sizematch::earlier_bound(&d1.0, &d2.0).value, "out")
    })
}

/// Minimum over graph isomorphisms of the largest value change; fails with
/// `SM_STATUS_NON_ISOMORPHIC` or `SM_STATUS_SIZE_CAP`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_exact_graph_pseudo_distance(
    sp1: *const SmSizePair,
    sp2: *const SmSizePair,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let (a, b) = (
            as_ref(sp1, "first size pair")?,
            as_ref(sp2, "second size pair")?,
        );
        write(
            out,
            sizematch::exact_graph_pseudo_distance(&a.0, &b.0)?,
            "out",
        )
    })
}
