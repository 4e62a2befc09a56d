//! The oscillatory a/b integrals and the positivity of max(|P1|, |P2|).

use trigshear::verify::{ab_pair, check_ab_lemma, check_p_lemma, p1, p2, AbCache, PGrid, AB_SPEC};
use trigshear::Window;

fn main() -> trigshear::Result<()> {
    let g = Window::standard();
    for (lambda, p, a) in [(0.5, 0.0, 1.0), (1.0, 0.2, 0.1), (1.2, -0.25, 10.0)] {
        let (va, vb) = ab_pair(&g, lambda, p, a, &AB_SPEC)?;
        println!(
            "lambda {lambda:<4} p {p:<5} A {a:<4}: a = {:.6}, b = {:.6}",
            va.value, vb.value
        );
    }

    let cache = AbCache::new(&g, 0.0, 1.0, AbCache::DEFAULT_NODES)?;
    for d in [-2.0, 0.0, 1.0] {
        println!(
            "D = {d:>4}: P1 = {:>10.6}, P2 = {:>10.6}",
            p1(&g, &cache, d)?,
            p2(&g, &cache, d)?
        );
    }

    let ab = check_ab_lemma(&g, 100, 7)?;
    println!("a, b > 0 at 100 random points: {}", ab.passed());
    let p = check_p_lemma(&g, &PGrid::default())?;
    println!(
        "max(|P1|, |P2|) > 0 on the grid: {}, margin {:.4e}",
        p.passed(),
        p.fitted_constants["C_fit"]
    );
    Ok(())
}
