//! The window integrals `a(λ,p,A)`, `b(λ,p,A)` and the λ-integrals `P₁`, `P₂`
//! built from them.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::quad::{integrate, Quadrature, QuadratureSpec};
use super::report::{ReportPoint, VerificationReport};
use crate::error::{Error, Result};
use crate::window::Window;

/// Accuracy of single `a`/`b` evaluations.
pub const AB_SPEC: QuadratureSpec = QuadratureSpec::new(1e-8);

/// λ range of the P-integrals, equal to the support of `g̃` on the positive axis.
pub const LAMBDA_RANGE: (f64, f64) = (1.0 / 3.0, 4.0 / 3.0);

/// Beyond `v = r` both window terms vanish.
pub fn cutoff_radius(lambda: f64, p: f64, a: f64) -> f64 {
    let p = p.abs();
    p / (3.0 * a) + 1.0 / (9.0 * a * lambda) + p * p * lambda / (4.0 * a)
}

fn check_args(lambda: f64, p: f64, a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid(format!(
            "curvature parameter A must be positive, got {a}"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite() && p.is_finite()) {
        return Err(Error::invalid(format!(
            "invalid (lambda, p) = ({lambda}, {p})"
        )));
    }
    Ok(())
}

// After v = t²: 2 ∫₀^{√r} (g(2√(Aλ) t + pλ) + g(2√(Aλ) t - pλ)) trig(t²) dt.
fn ab_integral(
    g: &Window,
    lambda: f64,
    p: f64,
    a: f64,
    trig: fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    check_args(lambda, p, a)?;
    let c = 2.0 * (a * lambda).sqrt();
    let shift = p * lambda;
    let top = cutoff_radius(lambda, p, a).sqrt();
    integrate(
        |t| 2.0 * (g.eval(c * t + shift) + g.eval(c * t - shift)) * trig(t * t),
        0.0,
        top,
        spec,
    )
}

pub fn integral_a(g: &Window, lambda: f64, p: f64, a: f64) -> Result<f64> {
    ab_integral(g, lambda, p, a, f64::cos, &AB_SPEC).map(|q| q.value)
}

pub fn integral_b(g: &Window, lambda: f64, p: f64, a: f64) -> Result<f64> {
    ab_integral(g, lambda, p, a, f64::sin, &AB_SPEC).map(|q| q.value)
}

/// `a` and `b` at one point with explicit accuracy.
pub fn ab_pair(
    g: &Window,
    lambda: f64,
    p: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<(Quadrature, Quadrature)> {
    Ok((
        ab_integral(g, lambda, p, a, f64::cos, spec)?,
        ab_integral(g, lambda, p, a, f64::sin, spec)?,
    ))
}

/// `a`, `b` tabulated on an equispaced λ grid over [1/3, 4/3] for fixed
/// `(p, A)`, read back by four-point Lagrange interpolation.
#[derive(Clone, Debug)]
pub struct AbCache {
    p: f64,
    a_param: f64,
    h: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl AbCache {
    pub const DEFAULT_NODES: usize = 512;

    pub fn new(g: &Window, p: f64, a_param: f64, nodes: usize) -> Result<Self> {
        if nodes < 4 {
            return Err(Error::invalid("interpolation needs at least 4 nodes"));
        }
        let (lo, hi) = LAMBDA_RANGE;
        let h = (hi - lo) / (nodes - 1) as f64;
        let mut a = Vec::with_capacity(nodes);
        let mut b = Vec::with_capacity(nodes);
        for i in 0..nodes {
            let (qa, qb) = ab_pair(g, lo + i as f64 * h, p, a_param, &AB_SPEC)?;
            a.push(qa.value);
            b.push(qb.value);
        }
        Ok(Self {
            p,
            a_param,
            h,
            a,
            b,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn curvature(&self) -> f64 {
        self.a_param
    }

    /// Interpolated `(a, b)` at `λ ∈ [1/3, 4/3]`.
    pub fn eval(&self, lambda: f64) -> (f64, f64) {
        let n = self.a.len();
        let u = (lambda - LAMBDA_RANGE.0) / self.h;
        let i0 = (u.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let mut wa = 0.0;
        let mut wb = 0.0;
        for i in i0..i0 + 4 {
            let mut w = 1.0;
            for m in i0..i0 + 4 {
                if m != i {
                    w *= (u - m as f64) / (i as f64 - m as f64);
                }
            }
            wa += w * self.a[i];
            wb += w * self.b[i];
        }
        (wa, wb)
    }
}

const P_SPEC: QuadratureSpec = QuadratureSpec::new(1e-10);

fn p_integral(g: &Window, cache: &AbCache, d: f64, second: bool) -> Result<f64> {
    let (lo, hi) = LAMBDA_RANGE;
    integrate(
        |lambda| {
            let (a, b) = cache.eval(lambda);
            let (s, c) = (d * lambda).sin_cos();
            let w = g.eval_tilde(lambda) / lambda;
            if second {
                w * ((a + b) * s - (a - b) * c)
            } else {
                w * ((a + b) * c + (a - b) * s)
            }
        },
        lo,
        hi,
        &P_SPEC,
    )
    .map(|q| q.value)
}

/// `P₁(D, p, A)` from a cache built for `(p, A)`.
pub fn p1(g: &Window, cache: &AbCache, d: f64) -> Result<f64> {
    p_integral(g, cache, d, false)
}

/// `P₂(D, p, A)` from a cache built for `(p, A)`.
pub fn p2(g: &Window, cache: &AbCache, d: f64) -> Result<f64> {
    p_integral(g, cache, d, true)
}

/// Upper bound for `|∂P_i/∂D|`: `∫ g̃(λ)(|a+b| + |a-b|) dλ`.
fn lipschitz_bound(g: &Window, cache: &AbCache) -> Result<f64> {
    let (lo, hi) = LAMBDA_RANGE;
    integrate(
        |lambda| {
            let (a, b) = cache.eval(lambda);
            g.eval_tilde(lambda) * ((a + b).abs() + (a - b).abs())
        },
        lo,
        hi,
        &P_SPEC,
    )
    .map(|q| q.value)
}

/// Parameter grid for the P-lemma check.
#[derive(Clone, Debug, PartialEq)]
pub struct PGrid {
    pub d: Vec<f64>,
    pub p: Vec<f64>,
    pub a: Vec<f64>,
}

impl Default for PGrid {
    /// `D ∈ [-3π/4, 3π/4]` step π/16, `p ∈ [-1/4, 1/4]` step 1/16,
    /// `A ∈ {0.1, 1, 10}`.
    fn default() -> Self {
        Self {
            d: (-12..=12).map(|i| f64::from(i) * PI / 16.0).collect(),
            p: (-4..=4).map(|i| f64::from(i) / 16.0).collect(),
            a: vec![0.1, 1.0, 10.0],
        }
    }
}

/// Positivity and the alternative inequalities for `a`, `b` at `n` seeded
/// random admissible points, plus the `p ↦ -p` symmetry.
pub fn check_ab_lemma(g: &Window, n: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64, f64)> = (0..n)
        .map(|_| {
            let lambda = rng.random_range(LAMBDA_RANGE.0..=LAMBDA_RANGE.1);
            let p = rng.random_range(-0.25..=0.25);
            let a = 10f64.powf(rng.random_range(-2.0..=2.0));
            (lambda, p, a)
        })
        .collect();
    let values: Vec<_> = points
        .par_iter()
        .map(|&(lambda, p, a)| {
            let (qa, qb) = ab_pair(g, lambda, p, a, &AB_SPEC)?;
            let (ma, _) = ab_pair(g, lambda, -p, a, &AB_SPEC)?;
            Ok((qa, qb, ma))
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::new(
        "ab",
        json!({"samples": n, "seed": seed, "lambda": [1.0/3.0, 4.0/3.0], "p": [-0.25, 0.25], "A": [0.01, 100.0]}),
    );
    let ratio = 1.0 + 2f64.sqrt();
    let mut min_a = f64::INFINITY;
    let mut min_b = f64::INFINITY;
    for (&(lambda, p, a_param), (qa, qb, ma)) in points.iter().zip(&values) {
        let (a, b) = (qa.value, qb.value);
        let input = |t: &str| json!({"test": t, "lambda": lambda, "p": p, "A": a_param});
        report.push(ReportPoint::above(input("a > 0"), a, 0.0));
        report.push(ReportPoint::above(input("b > 0"), b, 0.0));
        // one of a - b > 0 or a + b > (1+√2)|a - b|
        let alt = (a - b).max(a + b - ratio * (a - b).abs());
        report.push(ReportPoint::above(input("alternative"), alt, 0.0));
        report.push(ReportPoint::below(
            input("a(p) = a(-p)"),
            (a - ma.value).abs(),
            2.0 * AB_SPEC.abs_tol,
        ));
        min_a = min_a.min(a);
        min_b = min_b.min(b);
    }
    report.fit("min a", min_a);
    report.fit("min b", min_b);
    Ok(report)
}

/// `max(|P₁|, |P₂|) > 0` over the grid, with `P₁(0,p,A) > 0`, interpolation
/// accuracy and continuity in `D` checked along the way. The smallest
/// `max(|P₁|, |P₂|)` is reported as `C_fit`.
pub fn check_p_lemma(g: &Window, grid: &PGrid) -> Result<VerificationReport> {
    let pairs: Vec<(f64, f64)> = grid
        .a
        .iter()
        .flat_map(|&a| grid.p.iter().map(move |&p| (p, a)))
        .collect();
    struct Row {
        p: f64,
        a: f64,
        values: Vec<(f64, f64, f64)>,
        p1_zero: f64,
        lipschitz: f64,
        interp_err: f64,
    }
    let rows: Vec<Row> = pairs
        .par_iter()
        .map(|&(p, a)| {
            let cache = AbCache::new(g, p, a, AbCache::DEFAULT_NODES)?;
            let mut values = Vec::with_capacity(grid.d.len());
            for &d in &grid.d {
                values.push((d, p1(g, &cache, d)?, p2(g, &cache, d)?));
            }
            let mut interp_err: f64 = 0.0;
            for i in 0..64 {
                // off-grid: midpoints shifted by an irrational fraction
                let t = (i as f64 + 0.5 + 0.1 * 2f64.sqrt()) / 64.0;
                let lambda = LAMBDA_RANGE.0 + t * (LAMBDA_RANGE.1 - LAMBDA_RANGE.0);
                let (qa, qb) = ab_pair(g, lambda, p, a, &AB_SPEC)?;
                let (ia, ib) = cache.eval(lambda);
                interp_err = interp_err
                    .max((ia - qa.value).abs())
                    .max((ib - qb.value).abs());
            }
            Ok(Row {
                p,
                a,
                values,
                p1_zero: p1(g, &cache, 0.0)?,
                lipschitz: lipschitz_bound(g, &cache)?,
                interp_err,
            })
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(
        "p12",
        json!({"D": grid.d, "p": grid.p, "A": grid.a, "lambda_nodes": AbCache::DEFAULT_NODES}),
    );
    let mut c_fit = f64::INFINITY;
    let mut worst_interp: f64 = 0.0;
    let mut lip_ratio: f64 = 0.0;
    for row in &rows {
        for &(d, v1, v2) in &row.values {
            let m = v1.abs().max(v2.abs());
            c_fit = c_fit.min(m);
            report.push(ReportPoint::above(
                json!({"test": "max(|P1|,|P2|) > 0", "D": d, "p": row.p, "A": row.a, "P1": v1, "P2": v2}),
                m,
                0.0,
            ));
        }
        report.push(ReportPoint::above(
            json!({"test": "P1(0) > 0", "p": row.p, "A": row.a}),
            row.p1_zero,
            0.0,
        ));
        report.push(ReportPoint::below(
            json!({"test": "interpolation error", "p": row.p, "A": row.a}),
            row.interp_err,
            1e-6,
        ));
        worst_interp = worst_interp.max(row.interp_err);
        for w in row.values.windows(2) {
            let step = (w[1].0 - w[0].0).abs();
            let jump = (w[1].1 - w[0].1).abs().max((w[1].2 - w[0].2).abs());
            lip_ratio = lip_ratio.max(jump / (step * row.lipschitz));
            report.push(ReportPoint::below(
                json!({"test": "continuity in D", "D": w[0].0, "p": row.p, "A": row.a}),
                jump,
                10.0 * step * row.lipschitz,
            ));
        }
    }
    report.fit("C_fit", c_fit);
    report.fit("max interpolation error", worst_interp);
    report.fit("max |dP/dD| / Lipschitz bound", lip_ratio);
    Ok(report)
}
