//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dualsteenrod.h"

int main(void) {
    DsQuotient *q = NULL;
    if (ds_quotient_new(2, 2, &q) != DS_STATUS_OK) return 1;
    uint64_t dim = 0;
    ds_quotient_total_dim(q, &dim);
    ds_quotient_free(q);
    if (dim != 35) return 2;
    if (ds_quotient_new(0, 1, &q) != DS_STATUS_INVALID_ARGUMENT) return 3;
    if (ds_last_error() == NULL) return 4;
    char *s = NULL;
    if (ds_zeta_json(3, 0, &s) != DS_STATUS_OK) return 5;
    int ok = strstr(s, "\"xi3\"") != NULL;
    ds_string_free(s);
    printf("ok\n");
    return ok ? 0 : 6;
}
"#;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn has_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn c_program_links_and_runs() {
    if !has_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let lib = target_dir().join("libdualsteenrod_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
