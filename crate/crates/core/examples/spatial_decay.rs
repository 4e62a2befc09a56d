//! Fits the spatial decay envelope of single shearlets at two scales.

use trigshear::verify::check_decay_scales;
use trigshear::{Orientation, ShearletIndex, Window};

fn main() -> trigshear::Result<()> {
    let g = Window::standard();
    let report = check_decay_scales(
        &g,
        |j| ShearletIndex::new(Orientation::Horizontal, j, 1),
        &[6, 8],
        7,
        2.0,
    )?;
    println!("passed: {}", report.passed());
    for (k, v) in &report.fitted_constants {
        println!("  {k}: {v:.4e}");
    }
    Ok(())
}
