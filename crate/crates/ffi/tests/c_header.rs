//! Compiles and links a small C program against the generated header and
//! the static library. Skipped when no C compiler is on the path.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "wqed.h"

int main(void) {
    WqedEmitter *e = NULL;
    if (wqed_emitter_new(0.0, 0.0, 1.0, 1.0, &e) != WQED_STATUS_OK) return 1;
    WqedComplex t, r;
    if (wqed_emitter_amplitudes(e, 0.0, &t, &r) != WQED_STATUS_OK) return 2;
    if (fabs(r.re + 1.0) > 1e-15 || fabs(t.re) > 1e-15) return 3;
    wqed_emitter_free(e);
    if (wqed_emitter_new(0.0, -1.0, 1.0, 1.0, &e) != WQED_STATUS_INVALID_ARGUMENT) return 4;
    if (e != NULL || wqed_last_error() == NULL) return 5;
    printf("%s\n", wqed_version());
    return 0;
}
"#;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| cc)
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libwqed_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("wqed.h").exists(), "header not generated");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();

    let syntax = Command::new(&cc)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(syntax.success());

    let Some(lib) = static_lib() else {
        eprintln!("static library not built; header checked only");
        return;
    };
    let bin = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
