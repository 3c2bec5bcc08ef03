use std::env;
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("CANMOD_H".into()),
        cpp_compat: true,
        documentation: true,
        ..Default::default()
    };
    match cbindgen::Builder::new().with_crate(&dir).with_config(config).generate() {
        Ok(bindings) => {
            bindings.write_to_file(dir.join("include").join("canmod.h"));
        }
        Err(e) => println!("cargo:warning=header generation failed: {e}"),
    }
}
