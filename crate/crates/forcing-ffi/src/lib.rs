//! C ABI over the certification library so other languages can bind:
//! opaque graph handles, status codes mirroring the CLI exit contract,
//! and JSON report documents returned as C strings.
//!
//! Every returned `char*` is owned by the caller and must be released
//! with [`forcing_string_free`]. [`forcing_last_error`] returns a
//! thread-local message describing the most recent failure; the pointer
//! stays valid until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use forcing_core::graphs::{parse_graph, write_graph, BipartiteGraph, FamilyExpr};
use forcing_core::pipeline::{
    run_certify, run_oracle, CertifyMode, CertifyRequest, PipelineError, StageLog,
};
use forcing_core::report::GraphDescriptor;

/// Result of every fallible call; numeric values match the CLI exit
/// codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ForcingStatus {
    Ok = 0,
    ParseError = 2,
    PreconditionFailed = 3,
    VerificationFailed = 4,
    BudgetExceeded = 5,
    InternalError = 6,
    NullArgument = 7,
    InvalidUtf8 = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &PipelineError) -> ForcingStatus {
    match e.exit_code() {
        2 => ForcingStatus::ParseError,
        3 => ForcingStatus::PreconditionFailed,
        4 => ForcingStatus::VerificationFailed,
        5 => ForcingStatus::BudgetExceeded,
        _ => ForcingStatus::InternalError,
    }
}

fn fail(e: &PipelineError) -> ForcingStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Opaque handle around a bipartite graph.
pub struct ForcingGraph {
    inner: BipartiteGraph,
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ForcingStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(ForcingStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        ForcingStatus::InvalidUtf8
    })
}

fn give_string(out: *mut *mut c_char, s: String) -> ForcingStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL byte");
            return ForcingStatus::InternalError;
        }
    };
    unsafe { *out = c.into_raw() };
    ForcingStatus::Ok
}

fn guarded(f: impl FnOnce() -> ForcingStatus) -> ForcingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            ForcingStatus::InternalError
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn forcing_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread; do not free.
#[no_mangle]
pub extern "C" fn forcing_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn forcing_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build a graph from a family expression (e.g. "prod(Kmn:2,2;C:6)").
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out_graph` a valid
/// pointer; on success the caller owns the handle and must release it
/// with [`forcing_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn forcing_graph_build(
    expr: *const c_char,
    out_graph: *mut *mut ForcingGraph,
) -> ForcingStatus {
    guarded(|| {
        if out_graph.is_null() {
            set_error("null pointer argument");
            return ForcingStatus::NullArgument;
        }
        let expr = match read_str(expr) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let parsed = match FamilyExpr::parse(expr) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return ForcingStatus::ParseError;
            }
        };
        match parsed.build() {
            Ok(g) => {
                *out_graph = Box::into_raw(Box::new(ForcingGraph { inner: g }));
                ForcingStatus::Ok
            }
            Err(e) => fail(&PipelineError::from(e)),
        }
    })
}

/// Parse a graph from the line-oriented graph file format.
///
/// # Safety
/// Same contract as [`forcing_graph_build`].
#[no_mangle]
pub unsafe extern "C" fn forcing_graph_parse(
    text: *const c_char,
    out_graph: *mut *mut ForcingGraph,
) -> ForcingStatus {
    guarded(|| {
        if out_graph.is_null() {
            set_error("null pointer argument");
            return ForcingStatus::NullArgument;
        }
        let text = match read_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse_graph(text) {
            Ok(g) => {
                *out_graph = Box::into_raw(Box::new(ForcingGraph { inner: g }));
                ForcingStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                ForcingStatus::ParseError
            }
        }
    })
}

/// Vertex, edge, and side counts of a graph handle.
///
/// # Safety
/// `graph` must be a live handle; out pointers may be null to skip a
/// count.
#[no_mangle]
pub unsafe extern "C" fn forcing_graph_counts(
    graph: *const ForcingGraph,
    vertices: *mut usize,
    edges: *mut usize,
    x_size: *mut usize,
    y_size: *mut usize,
) -> ForcingStatus {
    guarded(|| {
        let Some(g) = graph.as_ref() else {
            set_error("null graph handle");
            return ForcingStatus::NullArgument;
        };
        if !vertices.is_null() {
            *vertices = g.inner.vertex_count();
        }
        if !edges.is_null() {
            *edges = g.inner.edge_count();
        }
        if !x_size.is_null() {
            *x_size = g.inner.x_vertices().len();
        }
        if !y_size.is_null() {
            *y_size = g.inner.y_vertices().len();
        }
        ForcingStatus::Ok
    })
}

/// The graph file text for a handle.
///
/// # Safety
/// `graph` must be a live handle and `out_text` a valid pointer; the
/// returned string is freed with [`forcing_string_free`].
#[no_mangle]
pub unsafe extern "C" fn forcing_graph_to_text(
    graph: *const ForcingGraph,
    out_text: *mut *mut c_char,
) -> ForcingStatus {
    guarded(|| {
        let Some(g) = graph.as_ref() else {
            set_error("null graph handle");
            return ForcingStatus::NullArgument;
        };
        if out_text.is_null() {
            set_error("null out pointer");
            return ForcingStatus::NullArgument;
        }
        give_string(out_text, write_graph(&g.inner))
    })
}

/// Release a graph handle.
///
/// # Safety
/// `graph` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn forcing_graph_free(graph: *mut ForcingGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Certify f(G x C_2k) (k >= 2) or, with k = 0, f(G x K2) for the base
/// family `expr`. `field` selects the scalar field ("Q", "GFp:7",
/// "Qsqrt:2") or may be null for the per-family default. The full report
/// document is written even when a verification stage fails.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `field` may be null;
/// `out_report_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn forcing_certify(
    expr: *const c_char,
    k: usize,
    field: *const c_char,
    trials: u64,
    seed: u64,
    out_report_json: *mut *mut c_char,
) -> ForcingStatus {
    guarded(|| {
        if out_report_json.is_null() {
            set_error("null out pointer");
            return ForcingStatus::NullArgument;
        }
        let expr_text = match read_str(expr) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let field_spec = if field.is_null() {
            None
        } else {
            let text = match read_str(field) {
                Ok(s) => s,
                Err(status) => return status,
            };
            match forcing_core::fields::FieldSpec::parse(text) {
                Ok(spec) => Some(spec),
                Err(e) => {
                    set_error(&e.to_string());
                    return ForcingStatus::ParseError;
                }
            }
        };
        let parsed = match FamilyExpr::parse(expr_text) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return ForcingStatus::ParseError;
            }
        };
        let mode = if k == 0 {
            CertifyMode::Prism
        } else if k >= 2 {
            CertifyMode::Circular(k)
        } else {
            set_error("k must be 0 (prism) or >= 2 (circular)");
            return ForcingStatus::PreconditionFailed;
        };
        let request = CertifyRequest {
            expr: Some(parsed),
            mode,
            field: field_spec,
            trials,
            seed,
            cert_text: None,
            command: format!("forcing_certify({expr_text}, k={k})"),
        };
        let outcome = run_certify(&request);
        let status = match &outcome.result {
            Ok(_) => ForcingStatus::Ok,
            Err(e) => fail(e),
        };
        let emit = give_string(out_report_json, outcome.document.to_json());
        if emit != ForcingStatus::Ok {
            return emit;
        }
        status
    })
}

/// Exact minimum forcing number by exhaustion; `cap` of 0 means
/// unlimited, and a cap that truncates the enumeration yields
/// `BudgetExceeded` with the partial report still written.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out_report_json` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn forcing_oracle(
    expr: *const c_char,
    cap: usize,
    out_report_json: *mut *mut c_char,
) -> ForcingStatus {
    guarded(|| {
        if out_report_json.is_null() {
            set_error("null out pointer");
            return ForcingStatus::NullArgument;
        }
        let expr_text = match read_str(expr) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let parsed = match FamilyExpr::parse(expr_text) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return ForcingStatus::ParseError;
            }
        };
        let graph = match parsed.build() {
            Ok(g) => g,
            Err(e) => return fail(&PipelineError::from(e)),
        };
        let mut log = StageLog::new();
        let cap = if cap == 0 { None } else { Some(cap) };
        let result = run_oracle(&mut log, &graph, None, cap, false);
        let (verdict, status) = match &result {
            Ok(o) if o.closure == forcing_core::forcing::Closure::Truncated => (
                format!("PARTIAL f <= {} (enumeration capped)", o.value),
                ForcingStatus::BudgetExceeded,
            ),
            Ok(o) => (format!("EXACT f = {}", o.value), ForcingStatus::Ok),
            Err(e) => (format!("FAILED: {e}"), fail(e)),
        };
        let doc = log.into_document(
            format!("forcing_oracle({expr_text})"),
            Some(GraphDescriptor::new(expr_text, &graph)),
            None,
            verdict,
        );
        let emit = give_string(out_report_json, doc.to_json());
        if emit != ForcingStatus::Ok {
            return emit;
        }
        status
    })
}
