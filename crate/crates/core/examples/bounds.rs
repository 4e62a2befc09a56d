//! Coefficient bounds for an ellipse: far-field decay across scales and the
//! size of coefficients aligned with the boundary.

use std::f64::consts::PI;

use trigshear::verify::{boundary_samples, far_field_profile, far_translate, BoundsConfig};
use trigshear::{EllipseRegion, Window};

fn main() -> trigshear::Result<()> {
    let g = Window::standard();
    let e = EllipseRegion::new(1.0, 3.0, PI / 6.0)?;
    let scales = [6, 8, 10];

    let far = far_translate(&e, 6)?;
    println!("far translate {:?} at distance {:.3}", far.y, far.distance);
    for f in far_field_profile(&e, &g, &far, &scales)? {
        println!(
            "  j={:>2} {:<18} |coeff| {:.3e} (max over shears {:.3e})",
            f.scale, f.index, f.aligned, f.max_over_shears
        );
    }

    println!("aligned boundary coefficients:");
    for s in boundary_samples(&e, &g, &scales, &BoundsConfig::default())? {
        println!(
            "  t={:.3} curvature {:.2} j={:>2} {:<19} |coeff| {:.4} control {:.2e}",
            s.t, s.curvature, s.scale, s.index, s.value, s.control
        );
    }
    Ok(())
}
