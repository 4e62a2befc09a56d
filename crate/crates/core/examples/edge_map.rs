//! Edge map of a rotated ellipse: coefficient magnitudes summed over all
//! interior shears of both orientations, plus the sorted magnitude curve.

use std::f64::consts::PI;
use std::path::Path;

use trigshear::coeffs::{edge_map, write_pgm16, ShearSelection};
use trigshear::{EllipseRegion, FourierProvider, Window};

fn main() -> trigshear::Result<()> {
    let out = Path::new("target/examples-out");
    std::fs::create_dir_all(out).map_err(|e| trigshear::Error::Io {
        path: out.into(),
        source: e,
    })?;

    let provider = FourierProvider::RotatedEllipse(EllipseRegion::new(1.0, 3.0, PI / 6.0)?);
    let (j, s) = (8, 8);
    let map = edge_map(
        &Window::standard(),
        j,
        s,
        &provider,
        &ShearSelection::default(),
    )?;
    write_pgm16(&out.join("edge.pgm"), map.values(), map.size())?;
    println!(
        "{} shearlets summed, total {:.4}",
        map.indices().len(),
        map.total()
    );

    let mut sorted = map.values().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    for rank in [1, 10, 100, 1000, 5000, 13107, 30000, 65536] {
        println!("rank {rank:>6}: {:.3e}", sorted[rank - 1]);
    }
    Ok(())
}
