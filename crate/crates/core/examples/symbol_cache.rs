//! Symbols stored on disk and reused across runs.

use std::time::Instant;

use trigshear::system::SymbolCache;
use trigshear::{Orientation, ShearletIndex, Window};

fn main() -> trigshear::Result<()> {
    let cache = SymbolCache::new("target/examples-out/symbols")?;
    let g = Window::standard();
    let idx = ShearletIndex::new(Orientation::Horizontal, 10, -7)?;
    for pass in 1..=2 {
        let t = Instant::now();
        let s = cache.load_or_sample(&g, &idx)?;
        println!("pass {pass}: {} samples in {:?}", s.len(), t.elapsed());
    }
    println!("stored at {}", cache.path_for(&g, &idx).display());
    Ok(())
}
