//! Checks of the window laws, the frequency support of sampled symbols and
//! the FFT fold against direct summation.

use rayon::prelude::*;
use serde_json::json;

use super::report::{ReportPoint, VerificationReport};
use crate::coeffs::{coeff_direct, coeff_map};
use crate::error::{Error, Result};
use crate::symbols::FourierProvider;
use crate::system::{cone_contains, sample_symbol, Orientation, ShearletIndex, SparseSymbol};
use crate::window::{make_exp_window, Window, PLATEAU_RADIUS};

/// Partition of unity, plateau and `g̃(2/3) = 1` for each rate in `rates`,
/// on `samples` equispaced points.
pub fn check_windows(rates: &[f64], samples: usize) -> Result<VerificationReport> {
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let mut report =
        VerificationReport::new("windows", json!({"rates": rates, "samples": samples}));
    for &b in rates {
        let g = make_exp_window(b)?;
        let mut unity: f64 = 0.0;
        let mut plateau: f64 = 0.0;
        let inner = PLATEAU_RADIUS - 1e-9;
        for i in 0..samples {
            let t = i as f64 / (samples - 1) as f64;
            let x = t - 0.5;
            let sum: f64 = (-2..=2).map(|z| g.eval(x + f64::from(z))).sum();
            unity = unity.max((sum - 1.0).abs());
            let p = -inner + 2.0 * inner * t;
            plateau = plateau.max((g.eval(p) - 1.0).abs());
        }
        let tilde = (g.eval_tilde(2.0 / 3.0) - 1.0).abs();
        report.push(ReportPoint::below(
            json!({"test": "partition of unity", "b": b}),
            unity,
            1e-12,
        ));
        report.push(ReportPoint::below(
            json!({"test": "plateau equals one", "b": b}),
            plateau,
            f64::MIN_POSITIVE,
        ));
        report.push(ReportPoint::below(
            json!({"test": "g~(2/3) = 1", "b": b}),
            tilde,
            1e-12,
        ));
        report.fit(&format!("b={b}.unity_error"), unity);
    }
    Ok(report)
}

/// Every frequency of every sampled symbol at scale `j` (all shears, both
/// orientations) lies in its cone. Symbols come from `symbol_for`.
pub fn check_support_with<F>(j: u32, symbol_for: F) -> Result<VerificationReport>
where
    F: Fn(&ShearletIndex) -> Result<SparseSymbol> + Sync,
{
    let indices: Vec<ShearletIndex> = Orientation::BOTH
        .iter()
        .map(|&o| ShearletIndex::all_shears(o, j))
        .collect::<Result<Vec<_>>>()?
        .concat();
    let counts: Vec<(usize, usize)> = indices
        .par_iter()
        .map(|idx| {
            let symbol = symbol_for(idx)?;
            let mut bad = 0;
            for (k, _) in symbol.entries() {
                let xi = [f64::from(k[0]), f64::from(k[1])];
                if !cone_contains(idx, xi)? {
                    bad += 1;
                }
            }
            Ok((symbol.len(), bad))
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::new("support", json!({"j": j, "symbols": indices.len()}));
    let mut total = 0;
    for (idx, (len, bad)) in indices.iter().zip(&counts) {
        total += len;
        report.push(ReportPoint::below(
            json!({"test": "violations", "index": idx.to_string(), "entries": len}),
            *bad as f64,
            0.5,
        ));
    }
    report.fit("symbols", indices.len() as f64);
    report.fit("entries", total as f64);
    report.fit(
        "violations",
        counts.iter().map(|c| c.1).sum::<usize>() as f64,
    );
    Ok(report)
}

pub fn check_support(g: &Window, j: u32) -> Result<VerificationReport> {
    check_support_with(j, |idx| sample_symbol(g, idx))
}

/// Shears `{0, 3, -2^{j/2}+1}` restricted to the valid range.
pub fn fold_test_shears(j: u32) -> Vec<i64> {
    let half = 1i64 << (j / 2);
    let mut out: Vec<i64> = [0, 3, -half + 1]
        .into_iter()
        .filter(|l| l.abs() <= half)
        .collect();
    out.dedup();
    out
}

/// `max_m |coeff_map - coeff_direct| / max_m |coeff_map|` for one symbol.
pub fn fold_deviation(symbol: &SparseSymbol, p: &FourierProvider, s: u32) -> Result<f64> {
    let map = coeff_map(symbol, p, s)?;
    let n = map.size();
    let scale = map.max_abs();
    let worst = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let m = [i % n, i / n];
            (coeff_direct(symbol, p, map.translate(m)) - map.get(m)).norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// FFT fold against direct summation for each `(j, s)` case, both
/// orientations and the shears of [`fold_test_shears`].
pub fn check_fftfold(
    g: &Window,
    p: &FourierProvider,
    cases: &[(u32, u32)],
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "fftfold",
        json!({"cases": cases, "tol": tol, "provider": p.describe()}),
    );
    let mut worst: f64 = 0.0;
    for &(j, s) in cases {
        for o in Orientation::BOTH {
            for l in fold_test_shears(j) {
                let idx = ShearletIndex::new(o, j, l)?;
                let dev = fold_deviation(&sample_symbol(g, &idx)?, p, s)?;
                worst = worst.max(dev);
                report.push(ReportPoint::below(
                    json!({"test": "max relative deviation", "index": idx.to_string(), "s": s}),
                    dev,
                    tol,
                ));
            }
        }
    }
    report.fit("max relative deviation", worst);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::EllipseRegion;
    use std::f64::consts::PI;

    #[test]
    fn windows_pass() {
        let r = check_windows(&[0.025, 0.1, 1.0], 10_000).unwrap();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert!(check_windows(&[-1.0], 100).is_err());
    }

    #[test]
    fn support_small_scale() {
        let r = check_support(&Window::standard(), 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.fitted_constants["symbols"], 34.0);
        assert_eq!(r.fitted_constants["violations"], 0.0);
    }

    #[test]
    fn support_detects_a_wrong_symbol() {
        // symbols of one shear checked against the cone of another
        let g = Window::standard();
        let r = check_support_with(4, |idx| {
            let other = ShearletIndex::new(idx.orientation(), 4, -idx.shear())?;
            sample_symbol(&g, &other)
        })
        .unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn fold_small_case() {
        let p = FourierProvider::RotatedEllipse(EllipseRegion::new(1.0, 3.0, PI / 6.0).unwrap());
        let r = check_fftfold(&Window::standard(), &p, &[(4, 4)], 1e-10).unwrap();
        assert!(r.passed(), "{:?}", r.failures().next());
        assert_eq!(fold_test_shears(4), vec![0, 3, -3]);
        assert_eq!(fold_test_shears(2), vec![0, -1]);
    }
}
