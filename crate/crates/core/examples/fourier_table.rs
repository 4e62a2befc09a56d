//! Custom test functions: a table of Fourier coefficients and a linear
//! combination of shifted ellipses.

use std::f64::consts::PI;

use num_complex::Complex64;
use trigshear::coeffs::coeff_map;
use trigshear::system::sample_symbol;
use trigshear::{EllipseRegion, FourierProvider, FourierTable, Orientation, ShearletIndex, Window};

fn main() -> trigshear::Result<()> {
    let idx = ShearletIndex::new(Orientation::Horizontal, 6, 0)?;
    let symbol = sample_symbol(&Window::standard(), &idx)?;

    // a single plane wave cos(40 x₁) seen by a horizontal shearlet
    let table = FourierTable::from_entries([
        ([40, 0], Complex64::new(0.5, 0.0)),
        ([-40, 0], Complex64::new(0.5, 0.0)),
    ])?;
    let wave = coeff_map(&symbol, &FourierProvider::Table(table), 6)?;
    println!("plane wave: max |coeff| {:.4e}", wave.max_abs());

    // two disjoint discs with opposite signs
    let a = EllipseRegion::new(0.8, 0.8, 0.0)?.with_center([-1.5, 0.0])?;
    let b = EllipseRegion::new(0.5, 1.2, PI / 4.0)?.with_center([1.5, 0.5])?;
    let combo = FourierProvider::Combination(vec![
        (1.0, FourierProvider::RotatedEllipse(a)),
        (-1.0, FourierProvider::RotatedEllipse(b)),
    ]);
    println!("{}", combo.describe());
    let map = coeff_map(&symbol, &combo, 6)?;
    println!("two regions: max |coeff| {:.4e}", map.max_abs());
    Ok(())
}
