//! Generates the C header for the `bp_*` API into `include/ballprim.h`.

use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("BALLPRIM_H".into()),
        cpp_compat: true,
        documentation: true,
        header: Some(
            "/* C interface to the ballprim primitivity certification library. */".into(),
        ),
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation")
        .write_to_file(crate_dir.join("include").join("ballprim.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
}
