use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header_path = crate_dir.join("include").join("domino_denoise.h");

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let header = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).unwrap())
        .generate()
        .expect("header generation failed");

    let mut rendered = Vec::new();
    header.write(&mut rendered);

    // Rewrite only on change so the committed header does not churn.
    if fs::read(&header_path).ok().as_deref() != Some(rendered.as_slice()) {
        fs::create_dir_all(header_path.parent().unwrap()).unwrap();
        fs::write(&header_path, rendered).unwrap();
    }
}
