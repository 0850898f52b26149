use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use symtest_ffi::*;

fn read(f: impl Fn(*mut c_char, usize, *mut usize) -> SymtestStatus) -> String {
    let mut need = 0usize;
    assert_eq!(f(ptr::null_mut(), 0, &mut need), SymtestStatus::Ok);
    let mut buf = vec![0 as c_char; need];
    assert_eq!(f(buf.as_mut_ptr(), buf.len(), &mut need), SymtestStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

fn last_error() -> String {
    read(|b, c, l| unsafe { symtest_last_error_message(b, c, l) })
}

#[test]
fn beta_values() {
    let mut x = 0.0;
    assert_eq!(unsafe { symtest_beta(SymtestSubgroup::Identity, 3, 0.0, false, &mut x) }, SymtestStatus::Ok);
    assert_eq!(x, 0.05);
    assert_eq!(unsafe { symtest_beta(SymtestSubgroup::Z, 2, 0.0, true, &mut x) }, SymtestStatus::Ok);
    assert!((x - 0.25).abs() < 1e-10);
    let eps = CString::new("1/2").unwrap();
    let s = read(|b, c, l| unsafe { symtest_beta_exact(SymtestSubgroup::Z, 2, eps.as_ptr(), b, c, l) });
    assert_eq!(s, "1/8 = 0.125000000000");
}

#[test]
fn errors_are_reported() {
    let mut x = 0.0;
    assert_eq!(
        unsafe { symtest_beta(SymtestSubgroup::T, 1, 2.0, false, &mut x) },
        SymtestStatus::InvalidArgument
    );
    assert!(last_error().contains("epsilon"));
    assert_eq!(unsafe { symtest_beta(SymtestSubgroup::T, 7, 0.0, true, &mut x) }, SymtestStatus::SizeGuard);
    assert_eq!(
        unsafe { symtest_beta(SymtestSubgroup::T, 1, 0.0, false, ptr::null_mut()) },
        SymtestStatus::NullPointer
    );
    assert_eq!(symtest_last_error_length(), last_error().len() + 1);
}

#[test]
fn small_buffer() {
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { symtest_table_new(SymtestSubgroup::T, 2, &mut table) }, SymtestStatus::Ok);
    let mut buf = [0 as c_char; 4];
    let mut need = 0;
    let st = unsafe { symtest_table_json(table, buf.as_mut_ptr(), buf.len(), &mut need) };
    assert_eq!(st, SymtestStatus::BufferTooSmall);
    assert!(need > 4);
    unsafe { symtest_table_free(table) };
}

#[test]
fn table_handle() {
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { symtest_table_new(SymtestSubgroup::Identity, 2, &mut table) }, SymtestStatus::Ok);
    let json = read(|b, c, l| unsafe { symtest_table_json(table, b, c, l) });
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(read(|b, c, l| unsafe { symtest_table_exp_dmax(table, b, c, l) }), "10 = 10.0000000000");
    unsafe { symtest_table_free(table) };
    unsafe { symtest_table_free(ptr::null_mut()) };
}

#[test]
fn protocol_handle() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { symtest_protocol_new(SymtestSubgroup::Z, 2, &mut p) }, SymtestStatus::Ok);
    let mut free = false;
    assert_eq!(unsafe { symtest_protocol_reference_free(p, &mut free) }, SymtestStatus::Ok);
    assert!(free);
    let mut sim = SymtestSimulation::default();
    assert_eq!(unsafe { symtest_protocol_simulate(p, 1000, 20_000, 4, 0, &mut sim) }, SymtestStatus::Ok);
    assert!(sim.type_i_worst <= 1e-9);
    assert!((sim.type_ii_mean - 0.25).abs() <= 4.0 * sim.type_ii_stderr);
    let json = read(|b, c, l| unsafe { symtest_protocol_json(p, b, c, l) });
    assert!(json.contains("\"input_state\""));
    unsafe { symtest_protocol_free(p) };

    assert_eq!(unsafe { symtest_protocol_new(SymtestSubgroup::Z, 9, &mut p) }, SymtestStatus::SizeGuard);
}

#[test]
fn sample_complexity() {
    let (mut n, mut beta) = (0u32, 0.0);
    assert_eq!(
        unsafe { symtest_sample_complexity(SymtestSubgroup::Identity, 0.05, &mut n, &mut beta) },
        SymtestStatus::Ok
    );
    assert_eq!((n, beta), (3, 0.05));
}

#[test]
fn header_declares_every_symbol() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/symtest.h")).unwrap();
    for name in [
        "symtest_last_error_message",
        "symtest_beta_exact",
        "symtest_sample_complexity",
        "symtest_table_new",
        "symtest_table_free",
        "symtest_protocol_simulate",
        "typedef struct SymtestTable SymtestTable",
        "SYMTEST_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "symtest.h"

int main(void) {
    double beta = 0.0;
    if (symtest_beta(SYMTEST_SUBGROUP_IDENTITY, 3, 0.0, false, &beta) != SYMTEST_STATUS_OK) return 1;
    SymtestTable *t = NULL;
    if (symtest_table_new(SYMTEST_SUBGROUP_T, 2, &t) != SYMTEST_STATUS_OK) return 2;
    char buf[64];
    size_t len = 0;
    if (symtest_table_exp_dmax(t, buf, sizeof buf, &len) != SYMTEST_STATUS_OK) return 3;
    symtest_table_free(t);
    printf("%.4f %s\n", beta, buf);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libsymtest_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = std::env::temp_dir().join(format!("symtest-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe: PathBuf = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.0500 3 = 3.00000000000\n");
}
