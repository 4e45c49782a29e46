//! Writes a synthetic dataset to disk and reads it back bit for bit.
//!
//! ```text
//! cargo run --example dataset_roundtrip -- [DIR]
//! ```

use dismetrics::grid::{load_dataset, save_dataset, DATA_FILE, SCHEMA_FILE};
use dismetrics::synth::{encode, EncoderKind, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("dismetrics-roundtrip"));

    let spec = GeneratorSpec::with_seed(42);
    let original = encode(EncoderKind::Redundancy, &spec)?;
    save_dataset(&original, &dir)?;
    let loaded = load_dataset(&dir)?;

    let sizes = original.grid().sizes();
    println!("{} -> {}", original.id, dir.display());
    println!("  grid {sizes:?}, code blocks {:?}", original.table.partition().block_dims());
    println!("  {} bytes schema, {} bytes data", std::fs::metadata(dir.join(SCHEMA_FILE))?.len(), std::fs::metadata(dir.join(DATA_FILE))?.len());
    println!("  provenance {:?}", loaded.provenance);
    println!("  identical after reload: {}", loaded == original);
    Ok(())
}
