use std::ffi::{CStr, CString};
use std::ptr;

use qubopress_ffi::*;

const EXAMPLE: [f64; 9] = [-1.0, 0.4, 1.0, 0.0, 0.4, -0.8, 0.0, 0.0, -1.5];

fn example() -> *mut QpQubo {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { qp_qubo_from_dense(3, EXAMPLE.as_ptr(), &mut q) }, QpStatus::Ok);
    q
}

fn last_error() -> String {
    let p = qp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn build_query_and_free() {
    let q = example();
    unsafe {
        let mut n = 0;
        assert_eq!(qp_qubo_dim(q, &mut n), QpStatus::Ok);
        assert_eq!(n, 3);
        let mut v = 0.0;
        assert_eq!(qp_qubo_get(q, 1, 2, &mut v), QpStatus::Ok);
        assert_eq!(v, -0.8);
        let x = [0u8, 1, 1];
        let mut e = 0.0;
        assert_eq!(qp_qubo_energy(q, x.as_ptr(), 3, &mut e), QpStatus::Ok);
        assert!((e + 1.9).abs() < 1e-12);

        let mut s = QpDiffStats::default();
        assert_eq!(qp_qubo_diff_stats(q, &mut s), QpStatus::Ok);
        assert!((s.dr_bits - 3.6439).abs() < 1e-3);
        assert_eq!(s.distinct_values, 6);
        assert!(!s.degenerate);

        assert_eq!(qp_qubo_set(q, 2, 1, 1.0), QpStatus::IndexOutOfRange);
        assert!(last_error().contains("below the diagonal"));
        assert_eq!(qp_qubo_set(q, 0, 0, f64::NAN), QpStatus::InvalidArgument);
        qp_qubo_free(q);
        qp_qubo_free(ptr::null_mut());
    }
}

#[test]
fn solve_reports_minimizers_and_short_buffers() {
    let q = example();
    unsafe {
        let mut min = 0.0;
        let mut count = 0;
        let mut masks = [0u64; 4];
        assert_eq!(qp_qubo_solve(q, &mut min, masks.as_mut_ptr(), 4, &mut count), QpStatus::Ok);
        assert_eq!((count, masks[0]), (1, 0b110));
        assert!((min + 1.9).abs() < 1e-12);

        let mut z = ptr::null_mut();
        assert_eq!(qp_qubo_new(3, &mut z), QpStatus::Ok);
        assert_eq!(qp_qubo_solve(z, &mut min, ptr::null_mut(), 0, &mut count), QpStatus::BufferTooSmall);
        assert_eq!(count, 8);
        let mut gap = QpSpectralGap::default();
        assert_eq!(qp_qubo_spectral_gap(z, &mut gap), QpStatus::Degenerate);
        assert_eq!(qp_qubo_spectral_gap(q, &mut gap), QpStatus::Ok);
        assert!((gap.gamma - 0.4).abs() < 1e-12);
        qp_qubo_free(z);
        qp_qubo_free(q);
    }
}

#[test]
fn compress_preserves_the_optimum() {
    let q = example();
    unsafe {
        let mut opts = qp_compress_options_default();
        opts.heuristic = QpHeuristic::M;
        opts.selection = QpSelection::GreedyImpact;
        opts.bound_method = QpBoundMethod::Exhaustive;
        opts.max_iterations = 1;
        let mut qc = ptr::null_mut();
        let mut dr = 0.0;
        assert_eq!(qp_compress(q, &opts, &mut qc, &mut dr), QpStatus::Ok);
        assert!((dr - 2.64).abs() < 0.01);
        let mut included = false;
        assert_eq!(qp_optimum_included(qc, q, &mut included), QpStatus::Ok);
        assert!(included);

        opts.max_iterations = 0;
        let mut bad = ptr::null_mut();
        assert_eq!(qp_compress(q, &opts, &mut bad, ptr::null_mut()), QpStatus::InvalidArgument);
        assert!(bad.is_null());
        qp_qubo_free(qc);
        qp_qubo_free(q);
    }
}

#[test]
fn file_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("q.txt").to_str().unwrap()).unwrap();
    let q = example();
    unsafe {
        assert_eq!(qp_qubo_write(q, path.as_ptr()), QpStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(qp_qubo_read(path.as_ptr(), &mut back), QpStatus::Ok);
        let mut v = 0.0;
        assert_eq!(qp_qubo_get(back, 0, 2, &mut v), QpStatus::Ok);
        assert_eq!(v, 1.0);

        let missing = CString::new(dir.path().join("none.txt").to_str().unwrap()).unwrap();
        let mut none = ptr::null_mut();
        assert_eq!(qp_qubo_read(missing.as_ptr(), &mut none), QpStatus::Io);
        std::fs::write(dir.path().join("bad.txt"), "2\n0 0 zz\n").unwrap();
        let bad = CString::new(dir.path().join("bad.txt").to_str().unwrap()).unwrap();
        assert_eq!(qp_qubo_read(bad.as_ptr(), &mut none), QpStatus::Parse);
        assert!(last_error().starts_with("line 2"));
        assert_eq!(qp_qubo_read(ptr::null(), &mut none), QpStatus::NullPointer);
        qp_qubo_free(back);
        qp_qubo_free(q);
    }
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        let mut n = 0;
        assert_eq!(qp_qubo_dim(ptr::null(), &mut n), QpStatus::NullPointer);
        let q = example();
        assert_eq!(qp_qubo_dim(q, ptr::null_mut()), QpStatus::NullPointer);
        qp_qubo_free(q);
    }
    let v = unsafe { CStr::from_ptr(qp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qubopress.h")).unwrap();
    for name in [
        "typedef struct QpQubo QpQubo;",
        "QP_STATUS_OK = 0",
        "qp_qubo_new(",
        "qp_qubo_from_dense(",
        "qp_qubo_free(",
        "qp_qubo_solve(",
        "qp_compress(",
        "qp_optimum_included(",
        "qp_last_error_message(",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

/// Compiles `examples/smoke.c` against the generated header and the static
/// library. Skipped when no C compiler is on the path.
#[test]
fn c_program_links_and_runs() {
    use std::path::Path;
    use std::process::Command;

    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libqubopress_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("examples/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("min -1.900"));
}
