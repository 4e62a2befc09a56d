//! Coefficients of one shearlet against a rotated ellipse on the full
//! translate grid, written as a 16-bit PGM, a CSV and a JSON sidecar.

use std::f64::consts::PI;
use std::path::Path;

use trigshear::coeffs::{coeff_direct, coeff_map, write_map_csv, write_pgm16, write_sidecar};
use trigshear::system::sample_symbol;
use trigshear::{EllipseRegion, FourierProvider, Orientation, ShearletIndex, Window};

fn main() -> trigshear::Result<()> {
    let out = Path::new("target/examples-out");
    std::fs::create_dir_all(out).map_err(|e| trigshear::Error::Io {
        path: out.into(),
        source: e,
    })?;

    let ellipse = EllipseRegion::new(1.0, 3.0, PI / 6.0)?;
    let provider = FourierProvider::RotatedEllipse(ellipse);
    let idx = ShearletIndex::new(Orientation::Horizontal, 8, -3)?;
    let symbol = sample_symbol(&Window::standard(), &idx)?;
    let s = 8;
    let map = coeff_map(&symbol, &provider, s)?;

    let scale = write_pgm16(&out.join("coeff.pgm"), &map.magnitudes(), map.size())?;
    write_map_csv(&out.join("coeff.csv"), map.values(), map.size())?;
    write_sidecar(&out.join("coeff.json"), &idx.to_string(), s, &scale)?;
    println!(
        "{idx}: max |coeff| {:.4e} -> {}",
        scale.max,
        out.join("coeff.pgm").display()
    );

    // the FFT map agrees with the direct sum at any grid point
    let m = [37, 201];
    let direct = coeff_direct(&symbol, &provider, map.translate(m));
    println!(
        "grid point {m:?}: map {:.6e}, direct {:.6e}",
        map.get(m).norm(),
        direct.norm()
    );
    Ok(())
}
