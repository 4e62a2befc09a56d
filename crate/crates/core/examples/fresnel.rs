//! The Fresnel-type integrals and the inequalities between F+ and F-.

use std::f64::consts::PI;

use trigshear::verify::{check_fresnel_lemma, fresnel, FRESNEL_SPEC};

fn main() -> trigshear::Result<()> {
    for x in [0.5, PI / 2.0, 0.75 * PI, 1.75 * PI, 10.0, 20.0] {
        let v = fresnel(x, &FRESNEL_SPEC)?;
        println!(
            "x = {x:>8.4}  Fc {:>9.6}  Fs {:>9.6}  F+ {:>9.6}  F- {:>9.6}",
            v.fc,
            v.fs,
            v.plus(),
            v.minus()
        );
    }
    let report = check_fresnel_lemma(1e-2, 20.0, &FRESNEL_SPEC)?;
    println!(
        "{} points, passed: {}",
        report.points.len(),
        report.passed()
    );
    for (k, v) in &report.fitted_constants {
        println!("  {k}: {v:.6}");
    }
    Ok(())
}
