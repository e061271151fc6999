//! Exercises the C ABI from Rust: handle lifecycle, status codes, and
//! report payloads.

use std::ffi::{CStr, CString};
use std::ptr;

use forcing_ffi::{
    forcing_certify, forcing_graph_build, forcing_graph_counts, forcing_graph_free,
    forcing_graph_parse, forcing_graph_to_text, forcing_last_error, forcing_oracle,
    forcing_string_free, forcing_version, ForcingGraph, ForcingStatus,
};

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { forcing_string_free(p) };
    s
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(forcing_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn graph_handle_lifecycle() {
    let expr = CString::new("prod(Kmn:2,2;C:6)").unwrap();
    let mut graph: *mut ForcingGraph = ptr::null_mut();
    let status = unsafe { forcing_graph_build(expr.as_ptr(), &mut graph) };
    assert_eq!(status, ForcingStatus::Ok);
    let (mut v, mut e, mut x, mut y) = (0usize, 0usize, 0usize, 0usize);
    let status = unsafe { forcing_graph_counts(graph, &mut v, &mut e, &mut x, &mut y) };
    assert_eq!(status, ForcingStatus::Ok);
    assert_eq!((v, e, x, y), (24, 48, 12, 12));

    let mut text: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { forcing_graph_to_text(graph, &mut text) },
        ForcingStatus::Ok
    );
    let text = take_string(text);
    assert!(text.starts_with("p bipartite 12 12"));

    // The emitted text parses back into an equivalent handle.
    let ctext = CString::new(text).unwrap();
    let mut back: *mut ForcingGraph = ptr::null_mut();
    assert_eq!(
        unsafe { forcing_graph_parse(ctext.as_ptr(), &mut back) },
        ForcingStatus::Ok
    );
    unsafe {
        forcing_graph_free(graph);
        forcing_graph_free(back);
    }
}

#[test]
fn build_failures_set_the_error_message() {
    let expr = CString::new("C:5").unwrap();
    let mut graph: *mut ForcingGraph = ptr::null_mut();
    let status = unsafe { forcing_graph_build(expr.as_ptr(), &mut graph) };
    assert_eq!(status, ForcingStatus::PreconditionFailed);
    let msg = unsafe { CStr::from_ptr(forcing_last_error()) };
    assert!(msg.to_str().unwrap().contains("even"));

    let garbage = CString::new("]]").unwrap();
    let status = unsafe { forcing_graph_build(garbage.as_ptr(), &mut graph) };
    assert_eq!(status, ForcingStatus::ParseError);

    assert_eq!(
        unsafe { forcing_graph_build(ptr::null(), &mut graph) },
        ForcingStatus::NullArgument
    );
}

#[test]
fn certify_returns_the_report_document() {
    let expr = CString::new("Kmn:2,2").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { forcing_certify(expr.as_ptr(), 2, ptr::null(), 0, 0, &mut json) };
    assert_eq!(status, ForcingStatus::Ok);
    let json = take_string(json);
    assert!(json.contains("\"verdict\": \"EXACT f = 4\""), "{json}");

    // Prism mode through k = 0, with an explicit field.
    let field = CString::new("GFp:7").unwrap();
    let expr = CString::new("Kmn:3,3").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status =
        unsafe { forcing_certify(expr.as_ptr(), 0, field.as_ptr(), 0, 0, &mut json) };
    assert_eq!(status, ForcingStatus::Ok);
    let json = take_string(json);
    assert!(json.contains("\"EXACT f = 3\""), "{json}");
}

#[test]
fn certify_precondition_failures_still_produce_documents() {
    let expr = CString::new("Kmn:2,3").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { forcing_certify(expr.as_ptr(), 2, ptr::null(), 0, 0, &mut json) };
    assert_eq!(status, ForcingStatus::PreconditionFailed);
    let json = take_string(json);
    assert!(json.contains("\"status\": \"fail\""), "{json}");
    let msg = unsafe { CStr::from_ptr(forcing_last_error()) };
    assert!(msg.to_str().unwrap().contains("not balanced"));
}

#[test]
fn oracle_statuses() {
    let expr = CString::new("Q:3").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { forcing_oracle(expr.as_ptr(), 0, &mut json) };
    assert_eq!(status, ForcingStatus::Ok);
    let json = take_string(json);
    assert!(json.contains("EXACT f = 2"), "{json}");

    let expr = CString::new("Kmn:3,3").unwrap();
    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { forcing_oracle(expr.as_ptr(), 2, &mut json) };
    assert_eq!(status, ForcingStatus::BudgetExceeded);
    take_string(json);
}
