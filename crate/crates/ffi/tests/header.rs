use std::path::Path;
use std::process::Command;

const HEADER: &str = include_str!("../include/umbral_stats.h");
const SOURCE: &str = include_str!("../src/lib.rs");

#[test]
fn header_declares_every_exported_function() {
    let exported: Vec<&str> = SOURCE
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exported.len() > 10);
    for name in exported {
        assert!(HEADER.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .status()
    else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    assert!(status.success());
}
