//! C ABI over `babgraph`.
//!
//! Graphs live behind an opaque `BabGraph` handle. Every fallible call
//! returns a `BabStatus`; on failure the message is available from
//! `bab_last_error` on the same thread until the next failing call.
//! Strings handed out by this library must be released with
//! `bab_string_free`, graphs with `bab_graph_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use babgraph::report::{analyze, AnalyzeOptions};
use babgraph::{Error, Graph};

/// Opaque graph handle.
pub struct BabGraph(Graph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed edge list or edge array.
    InvalidGraph = 3,
    /// The graph is larger than the exact routine accepts.
    SizeGuard = 4,
    CapExceeded = 5,
    /// Independent computation routes disagreed.
    RoutesDisagree = 6,
    Internal = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BabStatus {
    match e {
        Error::Parse { .. } | Error::VertexOutOfRange { .. } | Error::SelfLoop(_) | Error::DuplicateEdge(..) => {
            BabStatus::InvalidGraph
        }
        Error::SizeGuard { .. } => BabStatus::SizeGuard,
        Error::CapExceeded { .. } => BabStatus::CapExceeded,
        Error::RoutesDisagree(_) => BabStatus::RoutesDisagree,
        _ => BabStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guarded<F: FnOnce() -> Result<(), (BabStatus, String)>>(f: F) -> BabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BabStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            BabStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (BabStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (BabStatus, String) {
    (BabStatus::NullArgument, "null pointer argument".into())
}

unsafe fn graph_ref<'a>(g: *const BabGraph) -> Result<&'a Graph, (BabStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(null)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (BabStatus, String)> {
    let c = CString::new(s).map_err(|_| (BabStatus::Internal, "string contains a nul byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses an edge list (`n m` header, then one `u v` pair per line).
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bab_graph_parse(text: *const c_char, out: *mut *mut BabGraph) -> BabStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let s = CStr::from_ptr(text).to_str().map_err(|e| (BabStatus::InvalidUtf8, e.to_string()))?;
        let g = Graph::parse_edge_list(s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BabGraph(g)));
        Ok(())
    })
}

/// Builds a graph from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values (it may be null when
/// `edge_count` is zero) and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bab_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut BabGraph,
) -> BabStatus {
    guarded(|| {
        if out.is_null() || (edges.is_null() && edge_count > 0) {
            return Err(null());
        }
        *out = ptr::null_mut();
        let flat = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let g = Graph::from_edges(n, flat.chunks_exact(2).map(|p| (p[0], p[1]))).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BabGraph(g)));
        Ok(())
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bab_graph_free(g: *mut BabGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bab_graph_order(g: *const BabGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// Number of edges, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bab_graph_size(g: *const BabGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Independence number.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bab_alpha(g: *const BabGraph, out: *mut usize) -> BabStatus {
    guarded(|| {
        let g = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = babgraph::independence::alpha(g).map_err(lib_err)?.0;
        Ok(())
    })
}

/// Matching number.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bab_matching_number(g: *const BabGraph, out: *mut usize) -> BabStatus {
    guarded(|| {
        let g = graph_ref(g)?;
        *out.as_mut().ok_or_else(null)? = babgraph::matching::matching_number(g);
        Ok(())
    })
}

/// Number of vertices left exposed by a maximum matching.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bab_deficiency(g: *const BabGraph, out: *mut usize) -> BabStatus {
    guarded(|| {
        let g = graph_ref(g)?;
        *out.as_mut().ok_or_else(null)? = babgraph::matching::deficiency(g);
        Ok(())
    })
}

/// Exact adjacency determinant as a decimal string.
///
/// # Safety
/// `g` must be a live handle and `out` valid; free the result with
/// `bab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bab_determinant(g: *const BabGraph, out: *mut *mut c_char) -> BabStatus {
    guarded(|| {
        let g = graph_ref(g)?;
        if out.is_null() {
            return Err(null());
        }
        write_string(out, babgraph::spectral::adjacency_determinant(g).to_string())
    })
}

/// Full analysis report as JSON. `oracle` additionally cross-checks every
/// fast path; `max_n` of 0 means the default size guard.
///
/// # Safety
/// `g` must be a live handle and `out` valid; free the result with
/// `bab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bab_analyze_json(
    g: *const BabGraph,
    oracle: bool,
    max_n: usize,
    out: *mut *mut c_char,
) -> BabStatus {
    guarded(|| {
        let g = graph_ref(g)?;
        if out.is_null() {
            return Err(null());
        }
        let mut opts = AnalyzeOptions { oracle, ..Default::default() };
        if max_n > 0 {
            opts.max_n = max_n;
        }
        let r = analyze(g, opts).map_err(lib_err)?;
        write_string(out, r.to_json())
    })
}

/// BAB structure as JSON, or the string `null` when none was found.
///
/// # Safety
/// `g` must be a live handle and `out` valid; free the result with
/// `bab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bab_recognize_json(g: *const BabGraph, out: *mut *mut c_char) -> BabStatus {
    guarded(|| {
        let g = graph_ref(g)?;
        if out.is_null() {
            return Err(null());
        }
        let r = babgraph::bab::recognize_bab(g).map_err(lib_err)?;
        let json = r.structure.map_or_else(|| "null".to_string(), |s| s.to_json());
        write_string(out, json)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
