use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use perclab_ffi::*;

fn last_error() -> String {
    let p = perclab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_patch(family: &str, radius: usize) -> *mut PerclabPatch {
    let fam = CString::new(family).unwrap();
    let mut patch = ptr::null_mut();
    let st = unsafe { perclab_patch_new(fam.as_ptr(), radius, &mut patch) };
    assert_eq!(st, PerclabStatus::Ok);
    patch
}

#[test]
fn patch_lifecycle() {
    let patch = new_patch("hypercubic(2)", 3);
    let mut n = 0usize;
    unsafe {
        assert_eq!(perclab_patch_vertex_count(patch, &mut n), PerclabStatus::Ok);
        assert_eq!(n, 25);
        let mut g = 0u64;
        assert_eq!(perclab_patch_growth(patch, 2, &mut g), PerclabStatus::Ok);
        assert_eq!(g, 13);
        let mut d = 0usize;
        assert_eq!(perclab_patch_dist(patch, 24, &mut d), PerclabStatus::Ok);
        assert_eq!(d, 3);
        let mut text = ptr::null_mut();
        assert_eq!(perclab_patch_export(patch, &mut text), PerclabStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().starts_with("perclab-patch"));
        perclab_string_free(text);
        perclab_patch_free(patch);
    }
}

#[test]
fn error_codes_and_messages() {
    let fam = CString::new("nonsense(1)").unwrap();
    let mut patch = ptr::null_mut();
    let st = unsafe { perclab_patch_new(fam.as_ptr(), 2, &mut patch) };
    assert_eq!(st, PerclabStatus::Parse);
    assert!(patch.is_null());
    assert!(last_error().contains("nonsense"));

    let mut x = 0.0;
    assert_eq!(unsafe { perclab_sprinkle(1.5, 0.1, &mut x) }, PerclabStatus::Domain);
    assert_eq!(unsafe { perclab_sprinkle(0.5, 0.1, ptr::null_mut()) }, PerclabStatus::NullPointer);

    let patch = new_patch("hypercubic(2)", 2);
    let mut g = 0u64;
    assert_eq!(unsafe { perclab_patch_growth(patch, 5, &mut g) }, PerclabStatus::OutOfPatch);
    unsafe { perclab_patch_free(patch) };
    unsafe { perclab_patch_free(ptr::null_mut()) };
    unsafe { perclab_string_free(ptr::null_mut()) };
}

#[test]
fn estimates_match_core() {
    let patch = new_patch("hypercubic(2)", 4);
    let mut e = PerclabEstimate { mean: -1.0, ci_halfwidth: 0.0, replicas: 0 };
    unsafe {
        assert_eq!(perclab_two_point(patch, 1.0, 0, 3, 50, 1, &mut e), PerclabStatus::Ok);
        assert_eq!(e.mean, 1.0);
        assert_eq!(perclab_sphere_connection(patch, 0.6, 3, 200, 9, &mut e), PerclabStatus::Ok);
    }
    let core = perclab::estimators::est_sphere_connection(
        &perclab::GraphPatch::build(perclab::GraphFamily::HyperCubic(2), 4).unwrap(),
        0.6,
        3,
        200,
        9,
    )
    .unwrap();
    assert_eq!((e.mean, e.ci_halfwidth, e.replicas), (core.mean, core.ci_halfwidth, core.replicas));
    unsafe {
        assert_eq!(perclab_piv(patch, 0.5, 1, 3, 100, 2, &mut e), PerclabStatus::Ok);
        assert_eq!(perclab_piv(patch, 0.5, 3, 1, 100, 2, &mut e), PerclabStatus::Argument);
        perclab_patch_free(patch);
    }
    let mut d = 0.0;
    assert_eq!(unsafe { perclab_delta(0.5, 0.75, &mut d) }, PerclabStatus::Ok);
    assert!((d - 2f64.ln()).abs() < 1e-15);
}

#[test]
fn runs_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.toml");
    std::fs::write(
        &path,
        "experiment = \"walk-checks\"\nfamily = \"hypercubic(2)\"\nradius = 7\n\n[options]\nt_max = 6\n",
    )
    .unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { perclab_run_config(c.as_ptr(), &mut out) }, PerclabStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { perclab_string_free(out) };
    assert!(text.lines().count() >= 3);
    assert!(text.contains("\"varopoulos_carne\""));
    let missing = CString::new(dir.path().join("none.toml").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { perclab_run_config(missing.as_ptr(), &mut out) }, PerclabStatus::Io);
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/perclab.h");
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["perclab_patch_new", "perclab_patch_free", "perclab_last_error", "perclab_string_free", "PERCLAB_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from the header");
    }
}
