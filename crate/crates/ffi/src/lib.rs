//! C ABI over the er-lab core: opaque graph handles, status codes, and
//! flat numeric entry points for the bounds, oracle and experiment APIs.
//!
//! Conventions:
//! * every fallible call returns [`ErLabStatus`]; outputs go through
//!   out-pointers that are written only on `ER_LAB_STATUS_OK`;
//! * the message for the most recent error on the calling thread is
//!   available via `er_lab_last_error_message` (free it with
//!   `er_lab_string_free`);
//! * graph handles come from the `er_lab_graph_*` constructors and must be
//!   released with `er_lab_graph_free`;
//! * no call unwinds across the boundary.
//!
//! The matching header is generated into `include/er_lab.h` at build time.

// The safety contract is the same for every entry point (valid pointers per
// the conventions above); it lives here rather than on each function.
#![allow(clippy::missing_safety_doc)]
// NaN-rejecting validation, as in the core crate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};

use er_lab::bounds;
use er_lab::components;
use er_lab::experiments::{self, ExperimentConfig};
use er_lab::oracle::{self, ProbScalar};
use er_lab::sampler::{sample_gnp, GraphSample, SampleSpec};
use er_lab::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErLabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    Io = 4,
    Parse = 5,
    BufferTooSmall = 6,
    Utf8 = 7,
    Internal = 8,
}

/// Giant-size and probability constants of the large-C estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErLabTheorem2Constants {
    pub giant_lower: f64,
    pub prob_lower: f64,
    pub prob_lower_proof: f64,
    pub small_sum_upper: f64,
}

/// Opaque graph handle (not exported; forward-declared in the header).
pub struct ErLabGraph {
    inner: GraphSample,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error message had NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ErLabStatus, msg: impl Into<String>) -> ErLabStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> ErLabStatus {
    let status = match &e {
        Error::InvalidParameter(_) => ErLabStatus::InvalidArgument,
        Error::InvalidConfig(_) => ErLabStatus::InvalidConfig,
        Error::EdgeListParse { .. } => ErLabStatus::Parse,
        Error::Io(_) => ErLabStatus::Io,
        Error::Json(_) => ErLabStatus::Parse,
    };
    fail(status, e.to_string())
}

/// Run `f`, converting panics into `Internal` instead of unwinding out.
fn guarded(f: impl FnOnce() -> ErLabStatus) -> ErLabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(ErLabStatus::Internal, "internal panic"),
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> ErLabStatus {
    if out.is_null() {
        return fail(ErLabStatus::NullPointer, "null output pointer");
    }
    unsafe { out.write(value) };
    ErLabStatus::Ok
}

unsafe fn graph_ref<'a>(g: *const ErLabGraph) -> Option<&'a GraphSample> {
    unsafe { g.as_ref().map(|h| &h.inner) }
}

unsafe fn cstr<'a>(s: *const c_char) -> Result<&'a str, ErLabStatus> {
    if s.is_null() {
        return Err(fail(ErLabStatus::NullPointer, "null string pointer"));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| fail(ErLabStatus::Utf8, "string is not valid UTF-8"))
}

fn alloc_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn er_lab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent error on this thread, or null. Free the
/// returned string with `er_lab_string_free`.
#[no_mangle]
pub extern "C" fn er_lab_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Free a string allocated by this library. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn er_lab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Sample G(n, p) with the given seed into a new graph handle.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_sample(
    n: u64,
    p: f64,
    seed: u64,
    out: *mut *mut ErLabGraph,
) -> ErLabStatus {
    guarded(|| {
        let spec = match SampleSpec::new(n, p, seed) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        match sample_gnp(&spec) {
            Ok(g) => unsafe {
                write_out(out, Box::into_raw(Box::new(ErLabGraph { inner: g })))
            },
            Err(e) => from_error(e),
        }
    })
}

/// Sample G(n, C/n) with the given seed into a new graph handle.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_sample_mean_degree(
    n: u64,
    c: f64,
    seed: u64,
    out: *mut *mut ErLabGraph,
) -> ErLabStatus {
    guarded(|| {
        let spec = match SampleSpec::from_mean_degree(n, c, seed) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        match sample_gnp(&spec) {
            Ok(g) => unsafe {
                write_out(out, Box::into_raw(Box::new(ErLabGraph { inner: g })))
            },
            Err(e) => from_error(e),
        }
    })
}

/// Read an edge-list file ("n m" header, then "i j" lines) into a handle.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_read_edge_list(
    path: *const c_char,
    out: *mut *mut ErLabGraph,
) -> ErLabStatus {
    guarded(|| {
        let path = match unsafe { cstr(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) => return fail(ErLabStatus::Io, e.to_string()),
        };
        match er_lab::io::read_edge_list(BufReader::new(file)) {
            Ok(g) => unsafe {
                write_out(out, Box::into_raw(Box::new(ErLabGraph { inner: g })))
            },
            Err(e) => from_error(e),
        }
    })
}

/// Write a graph to an edge-list file.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_write_edge_list(
    g: *const ErLabGraph,
    path: *const c_char,
) -> ErLabStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return fail(ErLabStatus::NullPointer, "null graph handle");
        };
        let path = match unsafe { cstr(path) } {
            Ok(p) => p,
            Err(s) => return s,
        };
        let file = match File::create(path) {
            Ok(f) => f,
            Err(e) => return fail(ErLabStatus::Io, e.to_string()),
        };
        match er_lab::io::write_edge_list(BufWriter::new(file), g) {
            Ok(()) => ErLabStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Release a graph handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_free(g: *mut ErLabGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_vertex_count(
    g: *const ErLabGraph,
    out: *mut u64,
) -> ErLabStatus {
    match unsafe { graph_ref(g) } {
        Some(g) => unsafe { write_out(out, g.vertex_count()) },
        None => fail(ErLabStatus::NullPointer, "null graph handle"),
    }
}

#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_edge_count(
    g: *const ErLabGraph,
    out: *mut u64,
) -> ErLabStatus {
    match unsafe { graph_ref(g) } {
        Some(g) => unsafe { write_out(out, g.edge_count()) },
        None => fail(ErLabStatus::NullPointer, "null graph handle"),
    }
}

/// Copy edges as 1-based (i, j) pairs flattened into `buf` (capacity in
/// u64 slots, so 2 * edge_count slots are needed). `written` receives the
/// number of slots filled.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_copy_edges(
    g: *const ErLabGraph,
    buf: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> ErLabStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return fail(ErLabStatus::NullPointer, "null graph handle");
        };
        let needed = g.edges().len() * 2;
        if capacity < needed {
            return fail(
                ErLabStatus::BufferTooSmall,
                format!("need {needed} u64 slots, got {capacity}"),
            );
        }
        if buf.is_null() && needed > 0 {
            return fail(ErLabStatus::NullPointer, "null edge buffer");
        }
        for (idx, &(i, j)) in g.edges().iter().enumerate() {
            unsafe {
                buf.add(2 * idx).write(i as u64);
                buf.add(2 * idx + 1).write(j as u64);
            }
        }
        unsafe { write_out(written, needed) }
    })
}

/// Number of connected components.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_component_count(
    g: *const ErLabGraph,
    out: *mut u64,
) -> ErLabStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return fail(ErLabStatus::NullPointer, "null graph handle");
        };
        let profile = components::component_profile(g);
        unsafe { write_out(out, profile.sizes().len() as u64) }
    })
}

/// Component sizes sorted descending, copied into `buf` (capacity in u64
/// slots). `written` receives the number of sizes.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_component_sizes(
    g: *const ErLabGraph,
    buf: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> ErLabStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return fail(ErLabStatus::NullPointer, "null graph handle");
        };
        let profile = components::component_profile(g);
        let sizes = profile.sizes();
        if capacity < sizes.len() {
            return fail(
                ErLabStatus::BufferTooSmall,
                format!("need {} u64 slots, got {capacity}", sizes.len()),
            );
        }
        if buf.is_null() && !sizes.is_empty() {
            return fail(ErLabStatus::NullPointer, "null size buffer");
        }
        for (idx, &s) in sizes.iter().enumerate() {
            unsafe { buf.add(idx).write(s) };
        }
        unsafe { write_out(written, sizes.len()) }
    })
}

/// Size of the component containing the 1-based `vertex`.
#[no_mangle]
pub unsafe extern "C" fn er_lab_graph_component_size_containing(
    g: *const ErLabGraph,
    vertex: u64,
    out: *mut u64,
) -> ErLabStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return fail(ErLabStatus::NullPointer, "null graph handle");
        };
        match components::component_size_containing(g, vertex) {
            Ok(s) => unsafe { write_out(out, s) },
            Err(e) => from_error(e),
        }
    })
}

/// ln of the tree-counting bound on P(#C1 = r).
#[no_mangle]
pub unsafe extern "C" fn er_lab_tree_bound_log(
    n: u64,
    p: f64,
    r: u64,
    out: *mut f64,
) -> ErLabStatus {
    match bounds::tree_bound_log(n, p, r) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    }
}

/// ln of the simplified chain bound for r >= 2.
#[no_mangle]
pub unsafe extern "C" fn er_lab_simplified_bound_log(
    n: u64,
    c: f64,
    r: u64,
    out: *mut f64,
) -> ErLabStatus {
    match bounds::simplified_bound_log(n, c, r) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    }
}

/// delta = C(1 - theta) - 1 - ln C.
#[no_mangle]
pub unsafe extern "C" fn er_lab_delta(c: f64, theta: f64, out: *mut f64) -> ErLabStatus {
    if !(c > 0.0) {
        return fail(ErLabStatus::InvalidArgument, format!("C must be positive, got {c}"));
    }
    unsafe { write_out(out, bounds::delta(c, theta)) }
}

/// gamma = 1/(C(e^delta - 1)), requiring delta > 0.
#[no_mangle]
pub unsafe extern "C" fn er_lab_gamma(c: f64, delta_val: f64, out: *mut f64) -> ErLabStatus {
    match bounds::gamma(c, delta_val) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    }
}

/// delta_1 = -1 - ln C, requiring C < 1/e.
#[no_mangle]
pub unsafe extern "C" fn er_lab_delta1(c: f64, out: *mut f64) -> ErLabStatus {
    match bounds::delta1(c) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    }
}

/// Smallest positive integer M with e^{-rate M log n} <= n^{-target}.
#[no_mangle]
pub unsafe extern "C" fn er_lab_min_m(
    rate: f64,
    n: u64,
    target_exponent: f64,
    out: *mut u64,
) -> ErLabStatus {
    match bounds::min_m(rate, n, target_exponent) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    }
}

/// Markov threshold gamma(1+alpha)n and failure bound 1/(1+alpha).
#[no_mangle]
pub unsafe extern "C" fn er_lab_markov_bound(
    gamma_val: f64,
    alpha: f64,
    n: u64,
    out_threshold: *mut f64,
    out_prob_bound: *mut f64,
) -> ErLabStatus {
    match bounds::markov_bound(gamma_val, alpha, n) {
        Ok(mb) => {
            let s = unsafe { write_out(out_threshold, mb.threshold) };
            if s != ErLabStatus::Ok {
                return s;
            }
            unsafe { write_out(out_prob_bound, mb.prob_bound) }
        }
        Err(e) => from_error(e),
    }
}

/// Probe for "C large enough": delta(C, default theta) >= C/4.
#[no_mangle]
pub extern "C" fn er_lab_theorem2_c_passes(c: f64) -> bool {
    bounds::theorem2_c_passes(c)
}

/// Giant-size and probability constants of the large-C estimate.
#[no_mangle]
pub unsafe extern "C" fn er_lab_theorem2_constants(
    c: f64,
    n: u64,
    out: *mut ErLabTheorem2Constants,
) -> ErLabStatus {
    match bounds::theorem2_constants(c, n) {
        Ok(t) => unsafe {
            write_out(
                out,
                ErLabTheorem2Constants {
                    giant_lower: t.giant_lower,
                    prob_lower: t.prob_lower,
                    prob_lower_proof: t.prob_lower_proof,
                    small_sum_upper: t.small_sum_upper,
                },
            )
        },
        Err(e) => from_error(e),
    }
}

/// Probability that G(k, p) is connected (float recursion, k <= 64).
#[no_mangle]
pub unsafe extern "C" fn er_lab_connectivity_probability(
    k: u64,
    p: f64,
    out: *mut f64,
) -> ErLabStatus {
    guarded(|| match oracle::connectivity_probability(k, &p) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    })
}

/// Exact distribution of the vertex-1 component size (float recursion,
/// 2 <= n <= 64). `out_probs` must hold n doubles; slot r-1 receives
/// P(#C1 = r).
#[no_mangle]
pub unsafe extern "C" fn er_lab_exact_distribution(
    n: u64,
    p: f64,
    out_probs: *mut f64,
    capacity: usize,
) -> ErLabStatus {
    guarded(|| {
        if capacity < n as usize {
            return fail(
                ErLabStatus::BufferTooSmall,
                format!("need {n} double slots, got {capacity}"),
            );
        }
        if out_probs.is_null() {
            return fail(ErLabStatus::NullPointer, "null probability buffer");
        }
        match oracle::exact_component_distribution(n, &p) {
            Ok(d) => {
                for (idx, q) in d.probs().iter().enumerate() {
                    unsafe { out_probs.add(idx).write(q.to_f64_lossy()) };
                }
                ErLabStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Run a Monte Carlo experiment from a JSON config (same schema as the CLI).
/// On success `out_report_csv` and `out_trials_csv` receive newly allocated
/// CSV strings; free both with `er_lab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn er_lab_experiment_run_json(
    config_json: *const c_char,
    out_report_csv: *mut *mut c_char,
    out_trials_csv: *mut *mut c_char,
) -> ErLabStatus {
    guarded(|| {
        let json = match unsafe { cstr(config_json) } {
            Ok(j) => j,
            Err(s) => return s,
        };
        if out_report_csv.is_null() || out_trials_csv.is_null() {
            return fail(ErLabStatus::NullPointer, "null output pointer");
        }
        let config = match ExperimentConfig::from_json(json) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        match experiments::run_experiment(&config) {
            Ok(report) => {
                let report_csv = alloc_string(experiments::render_report_csv(&report));
                let trials_csv = alloc_string(experiments::render_trials_csv(&report));
                if report_csv.is_null() || trials_csv.is_null() {
                    return fail(ErLabStatus::Internal, "CSV contained NUL");
                }
                unsafe {
                    out_report_csv.write(report_csv);
                    out_trials_csv.write(trials_csv);
                }
                ErLabStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
