//! Writes the published JSON Schemas to a directory (default docs/schemas).
//!
//! cargo run --example export_schemas -- docs/schemas

use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "docs/schemas".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, schema) in radar::schema::published() {
        std::fs::write(dir.join(name), radar::schema::render(&schema))?;
        println!("{}", dir.join(name).display());
    }
    Ok(())
}
