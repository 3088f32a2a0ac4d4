use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use biclaw_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    biclaw_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = biclaw_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

unsafe fn generate(spec: &str) -> *mut BiclawGraph {
    let mut g = ptr::null_mut();
    assert_eq!(biclaw_graph_generate(cstr(spec).as_ptr(), &mut g), BiclawStatus::Ok);
    g
}

#[test]
fn build_from_edges_and_round_trip_text() {
    unsafe {
        let edges: [usize; 6] = [0, 0, 1, 0, 1, 1];
        let mut g = ptr::null_mut();
        assert_eq!(biclaw_graph_new(2, 2, edges.as_ptr(), 3, &mut g), BiclawStatus::Ok);
        assert_eq!((biclaw_graph_nx(g), biclaw_graph_ny(g), biclaw_graph_edge_count(g)), (2, 2, 3));

        let mut text = ptr::null_mut();
        assert_eq!(biclaw_graph_to_text(g, &mut text), BiclawStatus::Ok);
        let text = take(text);
        let mut h = ptr::null_mut();
        assert_eq!(biclaw_graph_parse(cstr(&text).as_ptr(), &mut h), BiclawStatus::Ok);
        assert_eq!(biclaw_graph_edge_count(h), 3);
        biclaw_graph_free(g);
        biclaw_graph_free(h);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(biclaw_graph_parse(cstr("bip 2 2 1\ne 5 0\n").as_ptr(), &mut g), BiclawStatus::ParseError);
        assert!(last_error().contains("out of range"));
        assert!(g.is_null());

        assert_eq!(biclaw_graph_parse(ptr::null(), &mut g), BiclawStatus::NullPointer);
        assert_eq!(biclaw_graph_generate(cstr("moebius:n=3").as_ptr(), &mut g), BiclawStatus::ParseError);

        let edges: [usize; 2] = [3, 0];
        assert_eq!(biclaw_graph_new(2, 2, edges.as_ptr(), 1, &mut g), BiclawStatus::InvalidArgument);

        let mut free = false;
        assert_eq!(biclaw_is_biclaw_free(ptr::null(), 1, 1, 0, &mut free), BiclawStatus::NullPointer);
        assert_eq!(biclaw_graph_nx(ptr::null()), 0);
        biclaw_graph_free(ptr::null_mut());
        biclaw_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_the_last_error() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(biclaw_graph_parse(cstr("nonsense").as_ptr(), &mut g), BiclawStatus::ParseError);
        let g = generate("complete:n=3");
        assert!(biclaw_last_error().is_null());
        biclaw_graph_free(g);
    }
}

#[test]
fn detection() {
    unsafe {
        let k33 = generate("named:name=k33");
        let mut free = false;
        assert_eq!(biclaw_is_biclaw_free(k33, 3, 3, 0, &mut free), BiclawStatus::Ok);
        assert!(free);

        let c6 = generate("cycle:n=3");
        let mut w = ptr::null_mut();
        assert_eq!(biclaw_find_induced_biclaw(c6, 1, 1, 0, &mut w), BiclawStatus::Ok);
        assert_eq!(take(w), "biclaw x=0 y=0 A=1 B=2");

        let mut w = cstr("sentinel").into_raw();
        assert_eq!(biclaw_find_induced_biclaw(k33, 1, 1, 0, &mut w), BiclawStatus::Ok);
        assert!(w.is_null());
        biclaw_graph_free(k33);
        biclaw_graph_free(c6);
    }
}

#[test]
fn hamiltonian_cycle_and_verification() {
    unsafe {
        let g = generate("complete_minus_sparse:n=20,removal=3,t=3,seed=4");
        let mut c = ptr::null_mut();
        assert_eq!(biclaw_hamiltonian_cycle(g, 0.01, &mut c), BiclawStatus::Ok);
        let cycle = take(c);
        assert_eq!(cycle.split_whitespace().count(), 40);
        let mut valid = false;
        assert_eq!(biclaw_verify_cycle(g, cstr(&cycle).as_ptr(), &mut valid), BiclawStatus::Ok);
        assert!(valid);
        assert_eq!(biclaw_verify_cycle(g, cstr("X0 Y0 X1 Y1").as_ptr(), &mut valid), BiclawStatus::Ok);
        assert!(!valid);
        assert!(!last_error().is_empty());
        biclaw_graph_free(g);

        let p4 = generate("named:name=p4");
        let mut c = ptr::null_mut();
        assert_eq!(biclaw_hamiltonian_cycle(p4, 0.01, &mut c), BiclawStatus::StageFailure);
        assert!(last_error().starts_with("escort_matching"));
        assert_eq!(biclaw_hamiltonian_cycle(p4, 1.5, &mut c), BiclawStatus::InvalidArgument);
        biclaw_graph_free(p4);
    }
}

#[test]
fn diameter_and_density() {
    unsafe {
        let c8 = generate("cycle:n=4");
        let mut d = 0i64;
        assert_eq!(biclaw_diameter(c8, &mut d), BiclawStatus::Ok);
        assert_eq!(d, 4);
        let split = {
            let edges: [usize; 4] = [0, 0, 1, 1];
            let mut g = ptr::null_mut();
            assert_eq!(biclaw_graph_new(2, 2, edges.as_ptr(), 2, &mut g), BiclawStatus::Ok);
            g
        };
        assert_eq!(biclaw_diameter(split, &mut d), BiclawStatus::Ok);
        assert_eq!(d, -1);

        let mut json = ptr::null_mut();
        assert_eq!(biclaw_density_report_json(c8, 0.01, 0, &mut json), BiclawStatus::Ok);
        let json = take(json);
        assert!(json.contains("\"edge_count\":8"), "{json}");
        biclaw_graph_free(c8);
        biclaw_graph_free(split);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    if !lib_dir.join("libbiclaw_ffi.so").exists() && !lib_dir.join("libbiclaw_ffi.dylib").exists() {
        eprintln!("shared library not built in {}, skipping", lib_dir.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "biclaw.h"

int main(void) {
    BiclawGraph *g = NULL;
    if (biclaw_graph_generate("complete:n=4", &g) != BICLAW_STATUS_OK) return 1;
    char *cycle = NULL;
    if (biclaw_hamiltonian_cycle(g, 0.01, &cycle) != BICLAW_STATUS_OK) return 2;
    bool valid = false;
    if (biclaw_verify_cycle(g, cycle, &valid) != BICLAW_STATUS_OK || !valid) return 3;
    printf("%s\n", cycle);
    biclaw_string_free(cycle);
    if (biclaw_graph_parse("bip 1 1 1\ne 0 4\n", &g) != BICLAW_STATUS_PARSE_ERROR) return 4;
    if (biclaw_last_error() == NULL) return 5;
    biclaw_graph_free(g);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lbiclaw_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .env("DYLD_LIBRARY_PATH", &lib_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.split_whitespace().count(), 8);
}

fn which_cc() -> Result<PathBuf, ()> {
    for cand in ["cc", "gcc", "clang"] {
        if Command::new(cand).arg("--version").output().is_ok() {
            return Ok(PathBuf::from(cand));
        }
    }
    Err(())
}
