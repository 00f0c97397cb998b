use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sizematch_ffi::*;

fn path_pair() -> *mut SmSizePair {
    let values = [0.0, 2.0, 1.0, 3.0, 0.0];
    let edges = [0usize, 1, 1, 2, 2, 3, 3, 4];
    let mut sp = ptr::null_mut();
    let status = unsafe { sm_sizepair_new(values.as_ptr(), 5, edges.as_ptr(), 4, &mut sp) };
    assert_eq!(status, SmStatus::Ok);
    sp
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn extract_and_inspect() {
    let sp = path_pair();
    unsafe {
        assert_eq!(sm_sizepair_len(sp), 5);
        let mut count = 0;
        assert_eq!(
            sm_reduced_size_function(sp, 1.0, 1.5, &mut count),
            SmStatus::Ok
        );
        assert_eq!(count, 3);

        let mut d = ptr::null_mut();
        assert_eq!(sm_diagram_extract(sp, &mut d), SmStatus::Ok);
        assert_eq!(sm_diagram_infinity_x(d), 0.0);
        assert_eq!(sm_diagram_point_count(d), 2);
        let (mut x, mut y, mut m) = (0.0, 0.0, 0);
        assert_eq!(sm_diagram_point(d, 1, &mut x, &mut y, &mut m), SmStatus::Ok);
        assert_eq!((x, y, m), (1.0, 2.0, 1));
        assert_eq!(
            sm_diagram_point(d, 2, &mut x, &mut y, &mut m),
            SmStatus::OutOfRange
        );

        let json = sm_diagram_to_json(d);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        sm_string_free(json);
        let c_text = CString::new(text).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(
            sm_diagram_from_json(c_text.as_ptr(), &mut back),
            SmStatus::Ok
        );
        let mut dist = -1.0;
        assert_eq!(sm_matching_distance(d, back, &mut dist), SmStatus::Ok);
        assert_eq!(dist, 0.0);
        assert_eq!(sm_earlier_bound(d, back, &mut dist), SmStatus::Ok);
        assert_eq!(dist, 0.0);

        sm_diagram_free(back);
        sm_diagram_free(d);
        sm_sizepair_free(sp);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let values = [0.0, 1.0, 2.0];
        let edges = [0usize, 1];
        let mut sp = ptr::null_mut();
        let status = sm_sizepair_new(values.as_ptr(), 3, edges.as_ptr(), 1, &mut sp);
        assert_eq!(status, SmStatus::Disconnected);
        assert!(sp.is_null());
        assert!(last_error().contains("2 components"));

        let edges = [0usize, 7];
        let status = sm_sizepair_new(values.as_ptr(), 3, edges.as_ptr(), 1, &mut sp);
        assert_eq!(status, SmStatus::InvalidGraph);

        let status = sm_sizepair_new(ptr::null(), 0, ptr::null(), 0, &mut sp);
        assert_eq!(status, SmStatus::EmptyGraph);

        let nan = [f64::NAN];
        let status = sm_sizepair_new(nan.as_ptr(), 1, ptr::null(), 0, &mut sp);
        assert_eq!(status, SmStatus::NonFinite);

        let status = sm_sizepair_new(ptr::null(), 2, ptr::null(), 0, &mut sp);
        assert_eq!(status, SmStatus::NullPointer);

        let bad = CString::new("{\"infinity_x\":0,\"points\":[[1,2,0]]}").unwrap();
        let mut d = ptr::null_mut();
        assert_eq!(
            sm_diagram_from_json(bad.as_ptr(), &mut d),
            SmStatus::InvalidDiagram
        );
        let junk = CString::new("not json").unwrap();
        assert_eq!(sm_diagram_from_json(junk.as_ptr(), &mut d), SmStatus::Parse);

        let mut out = 0.0;
        assert_eq!(
            sm_matching_distance(ptr::null(), ptr::null(), &mut out),
            SmStatus::NullPointer
        );
        assert!(sm_diagram_to_json(ptr::null()).is_null());
        assert!(sm_diagram_infinity_x(ptr::null()).is_nan());
        sm_diagram_free(ptr::null_mut());
        sm_sizepair_free(ptr::null_mut());
        sm_string_free(ptr::null_mut());
    }
}

#[test]
fn exact_pseudo_distance_through_handles() {
    let a = path_pair();
    unsafe {
        // the same path read backwards
        let values = [0.0, 3.0, 1.0, 2.0, 0.0];
        let edges = [0usize, 1, 1, 2, 2, 3, 3, 4];
        let mut b = ptr::null_mut();
        assert_eq!(
            sm_sizepair_new(values.as_ptr(), 5, edges.as_ptr(), 4, &mut b),
            SmStatus::Ok
        );
        let mut dist = -1.0;
        assert_eq!(
            sm_exact_graph_pseudo_distance(a, b, &mut dist),
            SmStatus::Ok
        );
        assert_eq!(dist, 0.0);

        let star = [0.0, 1.0, 1.0, 1.0, 1.0];
        let star_edges = [0usize, 1, 0, 2, 0, 3, 0, 4];
        let mut c = ptr::null_mut();
        assert_eq!(
            sm_sizepair_new(star.as_ptr(), 5, star_edges.as_ptr(), 4, &mut c),
            SmStatus::Ok
        );
        assert_eq!(
            sm_exact_graph_pseudo_distance(a, c, &mut dist),
            SmStatus::NonIsomorphic
        );
        sm_sizepair_free(a);
        sm_sizepair_free(b);
        sm_sizepair_free(c);
    }
}

fn static_lib() -> Option<PathBuf> {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libsizematch_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping link step");
        return;
    };
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let output = Command::new(&exe).output().unwrap();
    assert!(output.status.success(), "{output:?}");
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "ok");
}
