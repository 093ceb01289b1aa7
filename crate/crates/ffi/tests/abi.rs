use std::ffi::{CStr, CString};
use std::ptr;

use shallow_tunnel::config::REFERENCE_TOML;
use shallow_tunnel_ffi::*;

fn last_error() -> String {
    let p = st_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn build_query_and_free() {
    let text = CString::new(REFERENCE_TOML).unwrap();
    let mut model = ptr::null_mut();
    unsafe {
        assert_eq!(st_model_new_from_toml(text.as_ptr(), &mut model), StStatus::Ok);
        assert!(!model.is_null());

        let mut q = 0usize;
        assert_eq!(st_model_iterations(model, &mut q), StStatus::Ok);
        assert!(q > 0 && q <= 100);

        let mut n = 0usize;
        assert_eq!(st_model_order(model, &mut n), StStatus::Ok);
        assert_eq!(n, 200);
        let mut buf = vec![0.0; 2 * n + 1];
        assert_eq!(st_model_coefficients(model, buf.as_mut_ptr(), buf.len()), StStatus::Ok);
        assert!(buf.iter().any(|&v| v != 0.0));
        assert_eq!(st_model_coefficients(model, buf.as_mut_ptr(), 3), StStatus::Domain);

        let mut s = StFieldSample::default();
        assert_eq!(st_model_eval(model, 0.0, -10.0 + 5.0, 120.0, &mut s), StStatus::Ok);
        // the vault is traction-free at U = 1 and carries (1 - U) of the initial load before
        assert!(s.sigma_y_total.abs() < 0.02 * 200.0);

        assert_eq!(st_model_eval(model, 0.0, -10.0, 120.0, &mut s), StStatus::Domain);
        assert!(last_error().contains("outside"));
        assert_eq!(st_model_eval(model, 3.0, -2.0, 100.005, &mut s), StStatus::Domain);
        assert!(last_error().contains("off-grid"));

        st_model_free(model);
        st_model_free(ptr::null_mut());
    }
}

#[test]
fn reference_constructor_matches_toml() {
    let text = CString::new(REFERENCE_TOML).unwrap();
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(st_model_new_from_toml(text.as_ptr(), &mut a), StStatus::Ok);
        assert_eq!(st_model_new_reference(&mut b), StStatus::Ok);
        let (mut sa, mut sb) = (StFieldSample::default(), StFieldSample::default());
        assert_eq!(st_model_eval(a, 7.0, 0.0, 110.0, &mut sa), StStatus::Ok);
        assert_eq!(st_model_eval(b, 7.0, 0.0, 110.0, &mut sb), StStatus::Ok);
        assert_eq!(sa, sb);
        st_model_free(a);
        st_model_free(b);
    }
}

#[test]
fn error_codes() {
    let mut model = ptr::null_mut();
    unsafe {
        assert_eq!(st_model_new_from_toml(ptr::null(), &mut model), StStatus::NullPointer);
        assert!(model.is_null());
        assert_eq!(st_model_new_reference(ptr::null_mut()), StStatus::NullPointer);

        let bad = CString::new("[geometry").unwrap();
        assert_eq!(st_model_new_from_toml(bad.as_ptr(), &mut model), StStatus::Parse);

        let invalid = CString::new(REFERENCE_TOML.replace("nu = 0.3", "nu = 0.6")).unwrap();
        assert_eq!(st_model_new_from_toml(invalid.as_ptr(), &mut model), StStatus::Config);
        assert!(last_error().contains("nu"));
        assert!(model.is_null());

        let raw = [0xffu8, 0xfe, 0x00];
        assert_eq!(
            st_model_new_from_toml(raw.as_ptr().cast(), &mut model),
            StStatus::InvalidUtf8
        );

        let mut q = 0usize;
        assert_eq!(st_model_iterations(ptr::null(), &mut q), StStatus::NullPointer);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(st_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/shallow_tunnel.h")).unwrap();
    for name in [
        "st_model_new_from_toml",
        "st_model_new_reference",
        "st_model_free",
        "st_model_iterations",
        "st_model_order",
        "st_model_coefficients",
        "st_model_eval",
        "st_last_error_message",
        "st_version",
        "typedef struct StModel StModel",
        "ST_STATUS_NON_CONVERGENCE = 9",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/tests/c/smoke.c"))
        .status();
    match status {
        Ok(s) => assert!(s.success(), "C compiler rejected the header"),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}
