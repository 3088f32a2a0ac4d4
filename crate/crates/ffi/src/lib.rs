//! C interface to `biclaw-core`.
//!
//! Graphs are passed around as opaque `BiclawGraph` handles created by
//! `biclaw_graph_new`, `biclaw_graph_parse` or `biclaw_graph_generate` and
//! released with `biclaw_graph_free`. Every fallible call returns a
//! `BiclawStatus`; on anything other than `BICLAW_STATUS_OK` a message is
//! available from `biclaw_last_error` on the same thread. Strings handed out
//! by the library must be released with `biclaw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{Duration, Instant};

use biclaw_core::detect::{BiclawSearch, DetectError};
use biclaw_core::hamilton::{hamiltonian_cycle_with, verify_cycle, CycleWitness, HamiltonOptions};
use biclaw_core::structure::{density_report, DensityOptions};
use biclaw_core::{BipartiteGraph, Diameter, GenSpec};

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiclawStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    /// A pipeline stage failed; no cycle was produced.
    StageFailure = 5,
    Timeout = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Opaque graph handle.
pub struct BiclawGraph {
    inner: BipartiteGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(BiclawStatus, String);

impl Fail {
    fn new(status: BiclawStatus, msg: impl Into<String>) -> Self {
        Fail(status, msg.into())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> BiclawStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BiclawStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            BiclawStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::new(BiclawStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::new(BiclawStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `g` must be null or a live handle.
unsafe fn graph_ref<'a>(g: *const BiclawGraph) -> Result<&'a BipartiteGraph, Fail> {
    g.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Fail::new(BiclawStatus::NullPointer, "graph handle is null"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library strings have no NULs").into_raw()
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::new(BiclawStatus::NullPointer, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

fn deadline(budget_ms: u64) -> Option<Instant> {
    (budget_ms > 0).then(|| Instant::now() + Duration::from_millis(budget_ms))
}

fn boxed(g: BipartiteGraph) -> *mut BiclawGraph {
    Box::into_raw(Box::new(BiclawGraph { inner: g }))
}

/// Builds a graph from `edge_count` pairs stored flat in `edges` as
/// `x0, y0, x1, y1, ...`. `edges` may be null when `edge_count` is 0.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_new(
    nx: usize,
    ny: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut BiclawGraph,
) -> BiclawStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(Fail::new(BiclawStatus::NullPointer, "edges is null"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs = flat.chunks_exact(2).map(|c| (c[0], c[1]));
        let g = BipartiteGraph::new(nx, ny, pairs)
            .map_err(|e| Fail::new(BiclawStatus::InvalidArgument, e.to_string()))?;
        put(out, boxed(g))
    })
}

/// Parses the `bip nx ny m` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_parse(text: *const c_char, out: *mut *mut BiclawGraph) -> BiclawStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let g = BipartiteGraph::parse(text).map_err(|e| Fail::new(BiclawStatus::ParseError, e.to_string()))?;
        put(out, boxed(g))
    })
}

/// Generates a graph from a spec such as `"complete_minus_sparse:n=20,removal=3,t=3,seed=1"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_generate(spec: *const c_char, out: *mut *mut BiclawGraph) -> BiclawStatus {
    guard(|| {
        let text = read_str(spec, "spec")?;
        let spec: GenSpec = text
            .parse()
            .map_err(|e: biclaw_core::BadSpec| Fail::new(BiclawStatus::ParseError, e.to_string()))?;
        let g = spec
            .generate()
            .map_err(|e| Fail::new(BiclawStatus::InvalidArgument, e.to_string()))?;
        put(out, boxed(g))
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_free(g: *mut BiclawGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Size of the X side, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_nx(g: *const BiclawGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.nx())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_ny(g: *const BiclawGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.ny())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_edge_count(g: *const BiclawGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.edge_count())
}

/// Serializes to the text format.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_graph_to_text(g: *const BiclawGraph, out: *mut *mut c_char) -> BiclawStatus {
    guard(|| {
        let g = graph_ref(g)?;
        put(out, into_c_string(g.to_text()))
    })
}

fn search(g: &BipartiteGraph, a: usize, b: usize, budget_ms: u64) -> Result<Option<biclaw_core::BiclawEmbedding>, Fail> {
    BiclawSearch::new(a, b)
        .deadline(deadline(budget_ms))
        .run(g)
        .map_err(|e| match e {
            DetectError::Timeout => Fail::new(BiclawStatus::Timeout, "detector budget exhausted"),
            other => Fail::new(BiclawStatus::InvalidArgument, other.to_string()),
        })
}

/// Writes whether `g` has no induced `S_{a,b}`. `budget_ms` of 0 means no limit.
///
/// # Safety
/// `g` must be a live handle; `out_free` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_is_biclaw_free(
    g: *const BiclawGraph,
    a: usize,
    b: usize,
    budget_ms: u64,
    out_free: *mut bool,
) -> BiclawStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let w = search(g, a, b, budget_ms)?;
        put(out_free, w.is_none())
    })
}

/// Writes a witness record such as `"biclaw x=0 y=0 A=1 B=2"`, or null when
/// the graph has no induced `S_{a,b}`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_find_induced_biclaw(
    g: *const BiclawGraph,
    a: usize,
    b: usize,
    budget_ms: u64,
    out: *mut *mut c_char,
) -> BiclawStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let w = search(g, a, b, budget_ms)?;
        put(out, w.map_or(ptr::null_mut(), |w| into_c_string(w.to_string())))
    })
}

/// Runs the Hamiltonian pipeline and writes the cycle as
/// whitespace-separated tokens. Returns `BICLAW_STATUS_STAGE_FAILURE` if
/// no cycle was produced; the message names the failing stage.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_hamiltonian_cycle(
    g: *const BiclawGraph,
    epsilon: f64,
    out: *mut *mut c_char,
) -> BiclawStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Fail::new(BiclawStatus::InvalidArgument, format!("epsilon {epsilon} outside (0, 1)")));
        }
        let opts = HamiltonOptions {
            epsilon,
            ..HamiltonOptions::default()
        };
        let outcome = hamiltonian_cycle_with(g, &opts).map_err(|f| Fail::new(BiclawStatus::StageFailure, f.to_string()))?;
        put(out, into_c_string(outcome.cycle.to_string()))
    })
}

/// Checks a cycle given as tokens (`"X0 Y0 X1 Y1"`). On a rejected cycle
/// the status is still OK, `*out_valid` is false and `biclaw_last_error`
/// describes the violation.
///
/// # Safety
/// `g` must be a live handle; `cycle` a NUL-terminated string; `out_valid`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_verify_cycle(
    g: *const BiclawGraph,
    cycle: *const c_char,
    out_valid: *mut bool,
) -> BiclawStatus {
    let mut violation = None;
    let status = guard(|| {
        let g = graph_ref(g)?;
        let text = read_str(cycle, "cycle")?;
        let c: CycleWitness = text.parse().map_err(|e: biclaw_core::GraphError| Fail::new(BiclawStatus::ParseError, e.to_string()))?;
        let check = verify_cycle(g, &c);
        violation = check.violation.map(|v| v.to_string());
        put(out_valid, check.valid)
    });
    if let Some(v) = violation {
        set_last_error(&v);
    }
    status
}

/// Writes the diameter, or -1 when the graph is disconnected or empty.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_diameter(g: *const BiclawGraph, out: *mut i64) -> BiclawStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let d = match biclaw_core::diameter(g) {
            Diameter::Finite(d) => d as i64,
            Diameter::Infinite => -1,
        };
        put(out, d)
    })
}

/// Writes the density report for one epsilon as a JSON object.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn biclaw_density_report_json(
    g: *const BiclawGraph,
    epsilon: f64,
    seed: u64,
    out: *mut *mut c_char,
) -> BiclawStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Fail::new(BiclawStatus::InvalidArgument, format!("epsilon {epsilon} outside (0, 1)")));
        }
        let opts = DensityOptions {
            epsilons: vec![epsilon],
            pairs: None,
            seed,
        };
        let report = density_report(g, &opts);
        let text = serde_json::to_string(&report).map_err(|e| Fail::new(BiclawStatus::InvalidArgument, e.to_string()))?;
        put(out, into_c_string(text))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biclaw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn biclaw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
