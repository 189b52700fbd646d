//! Exercise the C ABI through its extern entry points, the way a foreign
//! binding would: statuses, out-params, handle lifecycle and error text.

use std::ffi::{CStr, CString};
use std::ptr;

use er_lab_ffi::*;

fn last_error() -> String {
    let p = er_lab_last_error_message();
    assert!(!p.is_null(), "expected an error message");
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { er_lab_string_free(p) };
    s
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(er_lab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn sample_profile_and_free() {
    let mut g: *mut ErLabGraph = ptr::null_mut();
    let status = unsafe { er_lab_graph_sample(5, 1.0, 3, &mut g) };
    assert_eq!(status, ErLabStatus::Ok);
    assert!(!g.is_null());

    let mut n = 0u64;
    assert_eq!(unsafe { er_lab_graph_vertex_count(g, &mut n) }, ErLabStatus::Ok);
    assert_eq!(n, 5);
    let mut m = 0u64;
    assert_eq!(unsafe { er_lab_graph_edge_count(g, &mut m) }, ErLabStatus::Ok);
    assert_eq!(m, 10);

    let mut edges = vec![0u64; 20];
    let mut written = 0usize;
    let status = unsafe { er_lab_graph_copy_edges(g, edges.as_mut_ptr(), edges.len(), &mut written) };
    assert_eq!(status, ErLabStatus::Ok);
    assert_eq!(written, 20);
    assert_eq!(&edges[..4], &[1, 2, 1, 3]);

    let mut count = 0u64;
    assert_eq!(unsafe { er_lab_graph_component_count(g, &mut count) }, ErLabStatus::Ok);
    assert_eq!(count, 1);

    let mut sizes = vec![0u64; count as usize];
    let mut len = 0usize;
    let status =
        unsafe { er_lab_graph_component_sizes(g, sizes.as_mut_ptr(), sizes.len(), &mut len) };
    assert_eq!(status, ErLabStatus::Ok);
    assert_eq!(&sizes[..len], &[5]);

    let mut s1 = 0u64;
    assert_eq!(
        unsafe { er_lab_graph_component_size_containing(g, 1, &mut s1) },
        ErLabStatus::Ok
    );
    assert_eq!(s1, 5);

    unsafe { er_lab_graph_free(g) };
}

#[test]
fn edge_list_round_trip_through_files() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("ffi_roundtrip.edges");
    let cpath = CString::new(path.to_str().unwrap()).unwrap();

    let mut g: *mut ErLabGraph = ptr::null_mut();
    assert_eq!(unsafe { er_lab_graph_sample(40, 0.15, 7, &mut g) }, ErLabStatus::Ok);
    assert_eq!(unsafe { er_lab_graph_write_edge_list(g, cpath.as_ptr()) }, ErLabStatus::Ok);

    let mut back: *mut ErLabGraph = ptr::null_mut();
    assert_eq!(
        unsafe { er_lab_graph_read_edge_list(cpath.as_ptr(), &mut back) },
        ErLabStatus::Ok
    );
    let (mut m1, mut m2) = (0u64, 0u64);
    unsafe {
        er_lab_graph_edge_count(g, &mut m1);
        er_lab_graph_edge_count(back, &mut m2);
    }
    assert_eq!(m1, m2);
    unsafe {
        er_lab_graph_free(g);
        er_lab_graph_free(back);
    }
}

#[test]
fn status_codes_and_error_messages() {
    let mut g: *mut ErLabGraph = ptr::null_mut();
    // Invalid p.
    let status = unsafe { er_lab_graph_sample(5, 1.5, 0, &mut g) };
    assert_eq!(status, ErLabStatus::InvalidArgument);
    assert!(last_error().contains("p must lie in [0,1]"));
    // Null handle.
    let mut n = 0u64;
    assert_eq!(
        unsafe { er_lab_graph_vertex_count(ptr::null(), &mut n) },
        ErLabStatus::NullPointer
    );
    // Null out-pointer.
    assert_eq!(
        unsafe { er_lab_graph_sample(5, 0.5, 0, ptr::null_mut()) },
        ErLabStatus::NullPointer
    );
    // Buffer too small.
    assert_eq!(unsafe { er_lab_graph_sample(5, 1.0, 0, &mut g) }, ErLabStatus::Ok);
    let mut buf = [0u64; 3];
    let mut written = 0usize;
    let status = unsafe { er_lab_graph_copy_edges(g, buf.as_mut_ptr(), 3, &mut written) };
    assert_eq!(status, ErLabStatus::BufferTooSmall);
    assert!(last_error().contains("need 20"));
    unsafe { er_lab_graph_free(g) };
    // Free of null is a no-op.
    unsafe { er_lab_graph_free(ptr::null_mut()) };
    unsafe { er_lab_string_free(ptr::null_mut()) };
}

#[test]
fn bound_functions_match_core() {
    let mut v = 0.0f64;
    assert_eq!(unsafe { er_lab_tree_bound_log(4, 0.5, 2, &mut v) }, ErLabStatus::Ok);
    assert!((v - 0.125f64.ln()).abs() < 1e-12);

    assert_eq!(unsafe { er_lab_delta(20.085536923187668, 0.501, &mut v) }, ErLabStatus::Ok);
    assert!((v - 6.022682924670646).abs() < 1e-12);
    assert_eq!(
        unsafe { er_lab_delta(0.0, 0.501, &mut v) },
        ErLabStatus::InvalidArgument
    );

    assert_eq!(unsafe { er_lab_gamma(1.0, std::f64::consts::LN_2, &mut v) }, ErLabStatus::Ok);
    assert!((v - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { er_lab_gamma(1.0, -1.0, &mut v) }, ErLabStatus::InvalidArgument);

    assert_eq!(unsafe { er_lab_delta1(0.3, &mut v) }, ErLabStatus::Ok);
    assert!((v - 0.20397280432593612).abs() < 1e-12);
    assert_eq!(unsafe { er_lab_delta1(0.5, &mut v) }, ErLabStatus::InvalidArgument);

    let mut m = 0u64;
    assert_eq!(unsafe { er_lab_min_m(0.20397280432593612, 100, 10.0, &mut m) }, ErLabStatus::Ok);
    assert_eq!(m, 50);

    let (mut thr, mut pb) = (0.0f64, 0.0f64);
    assert_eq!(
        unsafe { er_lab_markov_bound(0.1, 1.0, 100, &mut thr, &mut pb) },
        ErLabStatus::Ok
    );
    assert!((thr - 20.0).abs() < 1e-12 && (pb - 0.5).abs() < 1e-12);

    assert!(er_lab_theorem2_c_passes(100.0));
    assert!(!er_lab_theorem2_c_passes(5.0));
    let mut t2 = ErLabTheorem2Constants {
        giant_lower: 0.0,
        prob_lower: 0.0,
        prob_lower_proof: 0.0,
        small_sum_upper: 0.0,
    };
    assert_eq!(unsafe { er_lab_theorem2_constants(25.0, 100_000, &mut t2) }, ErLabStatus::Ok);
    assert!((t2.prob_lower - 0.22119921692859512).abs() < 1e-12);
    assert!((t2.small_sum_upper - 4393.693362340742).abs() < 1e-9);

    assert_eq!(unsafe { er_lab_connectivity_probability(3, 0.5, &mut v) }, ErLabStatus::Ok);
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn exact_distribution_fills_buffer() {
    let mut probs = vec![0.0f64; 4];
    let status = unsafe { er_lab_exact_distribution(4, 0.5, probs.as_mut_ptr(), probs.len()) };
    assert_eq!(status, ErLabStatus::Ok);
    assert!((probs[1] - 0.09375).abs() < 1e-15);
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let status = unsafe { er_lab_exact_distribution(8, 0.5, probs.as_mut_ptr(), probs.len()) };
    assert_eq!(status, ErLabStatus::BufferTooSmall);
}

#[test]
fn experiment_json_produces_reproducible_csv() {
    let config = CString::new(
        r#"{"n": 300, "c": 0.3, "trials": 10, "master_seed": 5,
            "m_policy": "auto", "regime": "subcritical-T1"}"#,
    )
    .unwrap();
    let run = || -> (String, String) {
        let mut report: *mut std::ffi::c_char = ptr::null_mut();
        let mut trials: *mut std::ffi::c_char = ptr::null_mut();
        let status =
            unsafe { er_lab_experiment_run_json(config.as_ptr(), &mut report, &mut trials) };
        assert_eq!(status, ErLabStatus::Ok);
        let r = unsafe { CStr::from_ptr(report) }.to_string_lossy().into_owned();
        let t = unsafe { CStr::from_ptr(trials) }.to_string_lossy().into_owned();
        unsafe {
            er_lab_string_free(report);
            er_lab_string_free(trials);
        }
        (r, t)
    };
    let (r1, t1) = run();
    let (r2, t2) = run();
    assert_eq!(r1, r2);
    assert_eq!(t1, t2);
    assert!(r1.starts_with("event,empirical_freq"));
    assert_eq!(t1.lines().count(), 11);

    // Bad config surfaces as InvalidConfig.
    let bad = CString::new(r#"{"n": 10, "c": 99.0, "trials": 1, "master_seed": 0, "regime": "theorem2"}"#).unwrap();
    let mut report: *mut std::ffi::c_char = ptr::null_mut();
    let mut trials: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { er_lab_experiment_run_json(bad.as_ptr(), &mut report, &mut trials) };
    assert_eq!(status, ErLabStatus::InvalidConfig);
}

#[test]
fn generated_header_exists_and_names_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/er_lab.h");
    let text = std::fs::read_to_string(&header).expect("cbindgen header present");
    for needle in [
        "ER_LAB_H",
        "typedef struct ErLabGraph ErLabGraph;",
        "er_lab_graph_sample",
        "er_lab_tree_bound_log",
        "er_lab_experiment_run_json",
        "ErLabStatus",
        "ErLabTheorem2Constants",
    ] {
        assert!(text.contains(needle), "header missing {needle}");
    }
}
