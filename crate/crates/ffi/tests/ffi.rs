use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cylbench_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    cyl_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = cyl_last_error_message();
    (!p.is_null()).then(|| unsafe { take(p) })
}

fn powerset_json() -> CString {
    let ca = cylbench::kernel::powerset_structure(2, 2).unwrap();
    CString::new(cylbench::kernel::structure_to_string(&cylbench::kernel::AtomStructure::Ca(ca))).unwrap()
}

#[test]
fn load_count_and_round_trip() {
    unsafe {
        let json = powerset_json();
        let mut s = ptr::null_mut();
        assert_eq!(cyl_structure_load(json.as_ptr(), &mut s), CYL_OK);
        assert!(last_error().is_none());
        let mut n = 0usize;
        assert_eq!(cyl_structure_atom_count(s, &mut n), CYL_OK);
        assert_eq!(n, 4);
        let mut out = ptr::null_mut();
        assert_eq!(cyl_structure_to_json(s, &mut out), CYL_OK);
        assert_eq!(take(out), json.to_str().unwrap());
        cyl_structure_free(s);
    }
}

#[test]
fn axioms_and_solve() {
    unsafe {
        let preset = CString::new("finiteRainbow(3,2,1)").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(cyl_structure_rainbow(preset.as_ptr(), &mut s), CYL_OK);
        let mut passed = 0;
        let mut report = ptr::null_mut();
        assert_eq!(cyl_check_axioms(s, 16, &mut passed, &mut report), CYL_OK);
        assert_eq!(passed, 1);
        assert!(take(report).contains("\"checks\""));
        assert_eq!(cyl_check_axioms(s, 16, &mut passed, ptr::null_mut()), CYL_OK);

        let game = CString::new("Gmk(4,2)").unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(cyl_solve(s, game.as_ptr(), 0, 0, &mut report), CYL_OK);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["replayed"], true);
        cyl_structure_free(s);

        let ef = CString::new("EF(3,5,3,2)").unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(cyl_solve(ptr::null(), ef.as_ptr(), 0, 0, &mut report), CYL_OK);
        assert!(take(report).contains("\"Forall\""));
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cyl_structure_load(ptr::null(), &mut s), CYL_ERR_NULL);
        assert!(last_error().unwrap().contains("null"));

        let bad = CString::new("{ not json").unwrap();
        assert_eq!(cyl_structure_load(bad.as_ptr(), &mut s), CYL_ERR_FORMAT);
        assert!(last_error().unwrap().contains("line"));

        let unknown = CString::new("noSuchPreset(1)").unwrap();
        assert_eq!(cyl_structure_rainbow(unknown.as_ptr(), &mut s), CYL_ERR_USAGE);

        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(cyl_structure_rainbow(invalid.as_ptr() as *const c_char, &mut s), CYL_ERR_UTF8);

        let mut n = 0usize;
        assert_eq!(cyl_structure_atom_count(ptr::null(), &mut n), CYL_ERR_NULL);

        let game = CString::new("Gmk(4,2)").unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(cyl_solve(ptr::null(), game.as_ptr(), 0, 0, &mut report), CYL_ERR_USAGE);
        assert!(report.is_null());

        let preset = CString::new("finiteRainbow(3,4,3)").unwrap();
        assert_eq!(cyl_structure_rainbow(preset.as_ptr(), &mut s), CYL_OK);
        let big = CString::new("Gmk(6,4)").unwrap();
        assert_eq!(cyl_solve(s, big.as_ptr(), 20, 0, &mut report), CYL_OK);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["winner"], "Unknown");
        cyl_structure_free(s);

        cyl_structure_free(ptr::null_mut());
        cyl_string_free(ptr::null_mut());
    }
}

#[test]
fn scenario_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.json");
    std::fs::write(
        &p,
        r#"{"name":"t","construction":{"kind":"powerset","n":2,"base":2},
            "checks":[{"op":"game","game":{"variant":"Gmk","m":4,"k":3},"expect":"Forall"}]}"#,
    )
    .unwrap();
    let path = CString::new(p.to_str().unwrap()).unwrap();
    unsafe {
        let mut code = -1;
        let mut report = ptr::null_mut();
        assert_eq!(cyl_run_scenario(path.as_ptr(), &mut code, &mut report), CYL_OK);
        assert_eq!(code, 1);
        assert!(take(report).contains("\"matched\": false"));
    }
}

fn target_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target/debug")
}

#[test]
fn header_compiles_and_links_from_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "cylbench.h"
int main(void) {
    CylStructure *s = NULL;
    if (cyl_structure_rainbow("finiteRainbow(3,2,1)", &s) != CYL_OK) return 10;
    size_t n = 0;
    if (cyl_structure_atom_count(s, &n) != CYL_OK) return 11;
    cyl_structure_free(s);
    if (cyl_structure_load(NULL, &s) != CYL_ERR_NULL) return 12;
    char *msg = cyl_last_error_message();
    if (msg == NULL) return 13;
    cyl_string_free(msg);
    printf("%zu\n", n);
    return 0;
}
"#,
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let syntax = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status();
    let Ok(syntax) = syntax else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(syntax.success());

    let lib = target_dir().join("libcylbench_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built; link step skipped");
        return;
    }
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "99");
}
