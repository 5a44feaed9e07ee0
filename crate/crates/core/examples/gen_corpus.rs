//! Rewrites corpus/proofs from the proof generators.

use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/proofs");
    std::fs::create_dir_all(&dir)?;
    for (name, text) in ld_core::hilbert::golden::render_corpus() {
        std::fs::write(dir.join(&name), text)?;
        println!("wrote {name}");
    }
    Ok(())
}
