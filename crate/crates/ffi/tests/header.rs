//! The generated header compiles as C99 and as C++.

use std::path::PathBuf;
use std::process::Command;

fn compile(compiler: &str, args: &[&str], source: &str) -> Option<bool> {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join(source);
    std::fs::write(
        &file,
        "#include \"markov_curves.h\"\n\
         int main(void) {\n\
           McGerm *g = 0;\n\
           McStatus s = mc_germ_builtin(\"cusp_2_3\", &g);\n\
           double d = mc_green_interval(2.0, 0.0);\n\
           mc_germ_free(g);\n\
           return (int)s + (int)d;\n\
         }\n",
    )
    .unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(compiler)
        .args(args)
        .arg("-I")
        .arg(include)
        .args(["-fsyntax-only", "-Wall", "-Werror"])
        .arg(&file)
        .status()
        .ok()?;
    Some(status.success())
}

#[test]
fn header_compiles() {
    match compile("cc", &["-std=c99", "-x", "c"], "check.c") {
        Some(ok) => assert!(ok, "C compile failed"),
        None => eprintln!("no C compiler; header check skipped"),
    }
    match compile("c++", &["-std=c++11", "-x", "c++"], "check.cpp") {
        Some(ok) => assert!(ok, "C++ compile failed"),
        None => eprintln!("no C++ compiler; header check skipped"),
    }
}
