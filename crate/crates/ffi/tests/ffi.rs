use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use orderk_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(orderk_last_error()) }.to_str().unwrap().to_owned()
}

fn take_string(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { orderk_string_free(s) };
    out
}

fn parse(text: &str) -> (OrderkStatus, *mut OrderkPoints) {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    let status = unsafe { orderk_points_parse(c.as_ptr(), &mut p) };
    (status, p)
}

#[test]
fn triangle_round_trip() {
    let (status, pts) = parse("0 0\n4 0\n1 3\n");
    assert_eq!(status, OrderkStatus::Ok);
    assert_eq!(unsafe { orderk_points_len(pts) }, 3);
    assert_eq!(unsafe { orderk_points_dim(pts) }, 2);

    let mut res = ptr::null_mut();
    assert_eq!(unsafe { orderk_compute(pts, 2, &mut res) }, OrderkStatus::Ok);
    assert_eq!(unsafe { orderk_result_max_order(res) }, 2);

    let (mut v, mut c) = (0usize, 0usize);
    assert_eq!(unsafe { orderk_result_counts(res, 1, &mut v, &mut c) }, OrderkStatus::Ok);
    assert_eq!((v, c), (3, 1));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { orderk_result_mosaic_json(res, 2, &mut s) }, OrderkStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["order"], 2);
    assert_eq!(json["vertices"], serde_json::json!([[0, 1], [0, 2], [1, 2]]));

    let inf = CString::new("inf").unwrap();
    assert_eq!(unsafe { orderk_result_alpha_json(res, 1, inf.as_ptr(), &mut s) }, OrderkStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 7);
    assert_eq!(json["cells"][6]["value"], "5");

    assert_eq!(unsafe { orderk_result_alpha_json(res, 1, ptr::null(), &mut s) }, OrderkStatus::Ok);
    assert_eq!(take_string(s).matches("\"dimension\"").count(), 7);

    unsafe {
        orderk_result_free(res);
        orderk_points_free(pts);
    }
}

#[test]
fn ratios_match_parsed_text() {
    let num = [0i64, 0, 1, 0, 0, 1, 2, 3];
    let den = [1i64, 1, 2, 1, 1, 3, 5, 7];
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { orderk_points_from_ratios(num.as_ptr(), den.as_ptr(), 4, 2, &mut a) }, OrderkStatus::Ok);
    let (_, b) = parse("0 0\n1/2 0\n0 1/3\n2/5 3/7\n");
    let json = |p| {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { orderk_compute(p, 3, &mut r) }, OrderkStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { orderk_result_mosaic_json(r, 2, &mut s) }, OrderkStatus::Ok);
        unsafe { orderk_result_free(r) };
        take_string(s)
    };
    assert_eq!(json(a), json(b));
    unsafe {
        orderk_points_free(a);
        orderk_points_free(b);
    }

    let zero = [1i64, 0];
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { orderk_points_from_ratios(zero.as_ptr(), zero.as_ptr(), 1, 2, &mut c) },
        OrderkStatus::InvalidInput
    );
    assert!(c.is_null());
}

#[test]
fn errors_carry_codes_and_messages() {
    let (status, p) = parse("1 2\n3\n");
    assert_eq!(status, OrderkStatus::InvalidInput);
    assert!(p.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { orderk_points_parse(ptr::null(), &mut out) }, OrderkStatus::NullArgument);
    assert!(last_error().contains("null"));
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { orderk_compute(ptr::null(), 1, &mut res) }, OrderkStatus::NullArgument);

    let (_, square) = parse("0 0\n1 0\n0 1\n1 1\n");
    assert_eq!(unsafe { orderk_compute(square, 1, &mut res) }, OrderkStatus::Degenerate);
    assert!(res.is_null());
    assert_eq!(unsafe { orderk_compute(square, 0, &mut res) }, OrderkStatus::OutOfRange);
    unsafe { orderk_points_free(square) };

    let (_, tri) = parse("0 0\n1 0\n0 1\n");
    assert_eq!(unsafe { orderk_compute(tri, 1, &mut res) }, OrderkStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { orderk_result_mosaic_json(res, 5, &mut s) }, OrderkStatus::OutOfRange);
    let bad = CString::new("soon").unwrap();
    assert_eq!(unsafe { orderk_result_alpha_json(res, 1, bad.as_ptr(), &mut s) }, OrderkStatus::InvalidInput);
    assert_eq!(
        unsafe { orderk_result_counts(res, 1, ptr::null_mut(), ptr::null_mut()) },
        OrderkStatus::NullArgument
    );
    unsafe {
        orderk_result_free(res);
        orderk_points_free(tri);
        orderk_points_free(ptr::null_mut());
        orderk_result_free(ptr::null_mut());
        orderk_string_free(ptr::null_mut());
        assert_eq!(orderk_points_len(ptr::null()), 0);
        assert_eq!(orderk_result_max_order(ptr::null()), 0);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/orderk.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "ORDERK_STATUS_DEGENERATE",
        "typedef struct OrderkPoints OrderkPoints",
        "orderk_points_parse",
        "orderk_compute",
        "orderk_result_alpha_json",
        "orderk_string_free",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&header).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
