//! Samples one shearlet symbol, checks its frequency cone and evaluates the
//! shearlet in space.

use trigshear::system::{
    cone_contains, discrete_angle, eval_shearlet_spatial, pattern, sample_symbol, shear_matrix,
    shifted_translate,
};
use trigshear::{Orientation, ShearletIndex, Window};

fn main() -> trigshear::Result<()> {
    let g = Window::standard();
    let idx = ShearletIndex::new(Orientation::Vertical, 8, 5)?;
    let symbol = sample_symbol(&g, &idx)?;
    let m = shear_matrix(&idx);
    println!(
        "{idx}: N = {:?}, det = {}, angle = {:.4} rad",
        m.0,
        m.det(),
        discrete_angle(&idx)
    );
    println!(
        "{} nonzero samples, sum {:.3}",
        symbol.len(),
        symbol.total()
    );

    let mut outside = 0;
    for (k, _) in symbol.entries() {
        if !cone_contains(&idx, [f64::from(k[0]), f64::from(k[1])])? {
            outside += 1;
        }
    }
    println!("samples outside the cone: {outside}");

    let grid = pattern(&idx);
    println!(
        "translate pattern: {:?} points, steps {:?}",
        grid.counts(),
        grid.steps()
    );

    // the real part peaks at x = 2πỹ and oscillates across the shear direction
    let y = grid.nearest([0.1, -0.2]);
    let yt = shifted_translate(y, &idx);
    let c = [std::f64::consts::TAU * yt[0], std::f64::consts::TAU * yt[1]];
    for step in [0.0, 0.005, 0.01, 0.02, 0.05] {
        let v = eval_shearlet_spatial(&symbol, y, [c[0], c[1] + step]);
        println!("psi at centre + (0, {step:<5}) = {:>12.4}", v.re);
    }
    Ok(())
}
