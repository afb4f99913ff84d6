use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bruhat_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    bruhat_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = bruhat_last_error_message();
    if p.is_null() {
        None
    } else {
        Some(unsafe { take(p) })
    }
}

#[test]
fn field_and_classify() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(bruhat_field_new(2, 2, 1, 24, &mut k), BRUHAT_OK);
        assert!(last_error().is_none());
        let m = CString::new("zeta(3), 0; 0, 1").unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(bruhat_classify_json(k, m.as_ptr(), &mut json), BRUHAT_OK);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["class"], "elliptic");
        assert_eq!(v["order"]["finite"], 3);

        let bad = CString::new("1, 2; 2, 4").unwrap();
        assert_eq!(bruhat_classify_json(k, bad.as_ptr(), &mut json), BRUHAT_ERR_INVALID);
        assert!(last_error().unwrap().contains("singular"));
        bruhat_field_free(k);
    }
}

#[test]
fn errors_at_the_boundary() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(bruhat_field_new(4, 1, 1, 10, &mut k), BRUHAT_ERR_INVALID);
        assert!(k.is_null());
        assert!(last_error().is_some());
        assert_eq!(bruhat_field_new(3, 1, 1, 10, ptr::null_mut()), BRUHAT_ERR_NULL);
        let mut json = ptr::null_mut();
        assert_eq!(bruhat_classify_json(ptr::null(), ptr::null(), &mut json), BRUHAT_ERR_NULL);
        let mut spec = ptr::null_mut();
        let junk = CString::new("{not json").unwrap();
        assert_eq!(bruhat_spec_from_json(junk.as_ptr(), &mut spec), BRUHAT_ERR_INVALID);
        assert_eq!(bruhat_spec_triangle(4, 3, 1, &mut spec), BRUHAT_ERR_INVALID);
        bruhat_string_free(ptr::null_mut());
        bruhat_spec_free(ptr::null_mut());
        assert!(!CStr::from_ptr(bruhat_version()).to_str().unwrap().is_empty());
    }
}

#[test]
fn spec_round_trip_and_reports() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(bruhat_spec_free_product(3, 2, 2, 1, &mut spec), BRUHAT_OK);
        let mut json = ptr::null_mut();
        assert_eq!(bruhat_spec_to_json(spec, &mut json), BRUHAT_OK);
        let text = CString::new(take(json)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(bruhat_spec_from_json(text.as_ptr(), &mut again), BRUHAT_OK);

        let mut overall = -1;
        assert_eq!(bruhat_check_json(again, 3, 5, &mut json, &mut overall), BRUHAT_OK);
        assert_eq!(overall, 0);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["bounds"]["radius"], 5);

        assert_eq!(bruhat_branch_report_json(again, 3, 0, &mut json), BRUHAT_OK);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["degrees"], serde_json::json!([2, 2, 2, 2]));

        let mut dot = ptr::null_mut();
        assert_eq!(bruhat_pipeline_json(spec, 2, 0, &mut json, &mut dot), BRUHAT_OK);
        assert!(take(dot).starts_with("graph"));
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["branch"]["genus"], 0);
        bruhat_spec_free(spec);
        bruhat_spec_free(again);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "bruhat.h"

int main(void) {
    BruhatSpec *spec = NULL;
    char *json = NULL;
    int overall = -1;
    if (bruhat_spec_triangle(3, 1, 1, &spec) != BRUHAT_OK) return 10;
    if (bruhat_check_json(spec, 3, 0, &json, &overall) != BRUHAT_OK) return 11;
    if (overall != 0 || strstr(json, "\"overall\": \"verified\"") == NULL) return 12;
    bruhat_string_free(json);
    if (bruhat_spec_triangle(2, 1, 1, &spec) != BRUHAT_ERR_INVALID) return 13;
    char *msg = bruhat_last_error_message();
    if (msg == NULL) return 14;
    bruhat_string_free(msg);
    bruhat_spec_free(spec);
    printf("ok %s\n", bruhat_version());
    return 0;
}
"#;

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .map(String::from)
}

#[test]
fn header_compiles_and_links_from_c() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let syntax = Command::new(&cc).arg("-fsyntax-only").arg("-Wall").arg("-I").arg(&include).arg(&src).status().unwrap();
    assert!(syntax.success());

    // the static library sits next to the deps directory holding this test
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    if !lib_dir.join("libbruhat_ffi.a").exists() {
        eprintln!("static library not built in {}; skipping link", lib_dir.display());
        return;
    }
    let bin = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(lib_dir.join("libbruhat_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
