use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bitpath::fixtures::{CYCLIC_TSV, MOVIES_TSV};
use bitpath_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn build(tsv: &str) -> *mut BitpathIndex {
    let mut idx = ptr::null_mut();
    let status = unsafe { bitpath_index_build_from_tsv_text(c(tsv).as_ptr(), &mut idx) };
    assert_eq!(status, BitpathStatus::Ok);
    idx
}

fn query(
    idx: *const BitpathIndex,
    x: &str,
    y: &str,
    labels: &[&str],
    method: BitpathMethod,
) -> (BitpathStatus, BitpathQueryResult) {
    let owned: Vec<CString> = labels.iter().map(|l| c(l)).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|l| l.as_ptr()).collect();
    let mut out = BitpathQueryResult::default();
    let status = unsafe {
        bitpath_query(
            idx,
            c(x).as_ptr(),
            c(y).as_ptr(),
            ptrs.as_ptr(),
            ptrs.len(),
            method as u32,
            0,
            &mut out,
        )
    };
    (status, out)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(bitpath_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn every_method_answers_cyclic() {
    let idx = build(CYCLIC_TSV);
    assert_eq!(unsafe { bitpath_index_node_count(idx) }, 8);
    assert_eq!(unsafe { bitpath_index_label_count(idx) }, 4);
    for method in [
        BitpathMethod::Bitpath,
        BitpathMethod::Dfs,
        BitpathMethod::Fdfs,
        BitpathMethod::Bbfs,
    ] {
        let (status, yes) = query(idx, "3", "8", &["a", "b", "c"], method);
        assert_eq!((status, yes.answer), (BitpathStatus::Ok, 1), "{method:?}");
        let (_, no) = query(idx, "3", "8", &["a", "c", "b"], method);
        assert_eq!(no.answer, 0, "{method:?}");
    }
    let (_, r) = query(idx, "3", "8", &["a", "b", "c"], BitpathMethod::Bitpath);
    assert!(r.dnc_calls > 0 && r.intersections > 0);
    unsafe { bitpath_index_free(idx) };
}

#[test]
fn save_load_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = c(dir.path().join("m.bpi").to_str().unwrap());
    let idx = build(MOVIES_TSV);
    assert_eq!(unsafe { bitpath_index_save(idx, path.as_ptr()) }, BitpathStatus::Ok);
    unsafe { bitpath_index_free(idx) };

    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { bitpath_index_load(path.as_ptr(), &mut back) },
        BitpathStatus::Ok
    );
    assert_eq!(unsafe { bitpath_index_edge_count(back) }, 6);
    let (status, r) = query(
        back,
        ":the_thirteenth_floor",
        ":movie",
        &["rdf:type"],
        BitpathMethod::Bitpath,
    );
    assert_eq!((status, r.answer), (BitpathStatus::Ok, 1));

    let (status, _) = query(back, ":nobody", ":movie", &[], BitpathMethod::Bitpath);
    assert_eq!(status, BitpathStatus::UnknownNode);
    assert!(last_error().contains(":nobody"));

    let mut out = BitpathQueryResult::default();
    let bad_method = unsafe { bitpath_query(back, c("a").as_ptr(), c("b").as_ptr(), ptr::null(), 0, 17, 0, &mut out) };
    assert_eq!(bad_method, BitpathStatus::InvalidArgument);
    let null_labels = unsafe { bitpath_query(back, c("a").as_ptr(), c("b").as_ptr(), ptr::null(), 2, 0, 0, &mut out) };
    assert_eq!(null_labels, BitpathStatus::NullArgument);
    unsafe { bitpath_index_free(back) };

    let junk = dir.path().join("junk.bpi");
    std::fs::write(&junk, b"BPTH\x01\x00\x07\x00garbage").unwrap();
    let mut idx = ptr::null_mut();
    let status = unsafe { bitpath_index_load(c(junk.to_str().unwrap()).as_ptr(), &mut idx) };
    assert_eq!(status, BitpathStatus::CorruptIndex);
    assert!(idx.is_null());

    let missing = c(dir.path().join("absent.tsv").to_str().unwrap());
    assert_eq!(
        unsafe { bitpath_index_build_from_tsv(missing.as_ptr(), &mut idx) },
        BitpathStatus::Io
    );
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bitpath.h")).unwrap();
    for name in [
        "bitpath_index_build_from_tsv(",
        "bitpath_index_build_from_tsv_text(",
        "bitpath_index_load(",
        "bitpath_index_save(",
        "bitpath_index_free(",
        "bitpath_index_node_count(",
        "bitpath_index_edge_count(",
        "bitpath_index_label_count(",
        "bitpath_query(",
        "bitpath_last_error_message(",
        "bitpath_version(",
        "BITPATH_METHOD_BBFS = 3",
        "BITPATH_STATUS_PANIC = 9",
        "typedef struct BitpathIndex BitpathIndex;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "bitpath.h"

int main(void) {
    BitpathIndex *idx = NULL;
    if (bitpath_index_build_from_tsv_text("x\ta\ty\ny\tb\tz\n", &idx) != BITPATH_STATUS_OK) return 1;
    const char *seq[] = {"a", "b"};
    BitpathQueryResult r;
    if (bitpath_query(idx, "x", "z", seq, 2, BITPATH_METHOD_BITPATH, 1000, &r) != BITPATH_STATUS_OK) return 2;
    if (r.answer != 1) return 3;
    if (bitpath_query(idx, "z", "x", seq, 2, BITPATH_METHOD_BBFS, 0, &r) != BITPATH_STATUS_OK || r.answer != 0) return 4;
    if (bitpath_query(idx, "q", "x", NULL, 0, BITPATH_METHOD_DFS, 0, &r) != BITPATH_STATUS_UNKNOWN_NODE) return 5;
    if (strstr(bitpath_last_error_message(), "`q`") == NULL) return 6;
    bitpath_index_free(idx);
    printf("ok %s\n", bitpath_version());
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = target.join("libbitpath_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin: PathBuf = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "smoke program exited with {:?}",
        out.status.code()
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        format!("ok {}\n", env!("CARGO_PKG_VERSION"))
    );
}
