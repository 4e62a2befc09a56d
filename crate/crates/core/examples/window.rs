//! The window `g_b` and the radial factor `g̃`, tabulated for a few rates.

use trigshear::window::{make_exp_window, PLATEAU_RADIUS, SUPPORT_RADIUS};

fn main() -> trigshear::Result<()> {
    let rates = [0.025, 0.1, 1.0];
    let windows: Vec<_> = rates
        .iter()
        .map(|&b| make_exp_window(b))
        .collect::<Result<_, _>>()?;

    println!("plateau |x| <= {PLATEAU_RADIUS:.4}, support |x| < {SUPPORT_RADIUS:.4}");
    println!(
        "{:>6} {}",
        "x",
        rates.map(|b| format!("{:>12}", format!("g_{b}"))).join("")
    );
    for i in 0..=16 {
        let x = 0.3 + 0.025 * f64::from(i);
        let row: String = windows
            .iter()
            .map(|g| format!("{:>12.6}", g.eval(x)))
            .collect();
        println!("{x:>6.3} {row}");
    }

    // Σ_z g(x + z) = 1
    for (b, g) in rates.iter().zip(&windows) {
        let worst = (0..1000)
            .map(|i| {
                let x = -0.5 + f64::from(i) / 1000.0;
                ((-2..=2).map(|z| g.eval(x + f64::from(z))).sum::<f64>() - 1.0).abs()
            })
            .fold(0.0, f64::max);
        println!(
            "b = {b:<6} partition of unity error {worst:.2e}, g~(2/3) = {:.15}",
            g.eval_tilde(2.0 / 3.0)
        );
    }
    Ok(())
}
