//! Upper and lower bounds for coefficients of an ellipse indicator: decay away
//! from the boundary, the boundary-sum shape of the upper estimate and the
//! scale-independent size of aligned boundary coefficients.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::report::{ReportPoint, VerificationReport};
use crate::coeffs::{coeff_direct, coeff_map, grid_translate};
use crate::error::{Error, Result};
use crate::symbols::{
    boundary_points, dyadic_squares, periodic_boundary_distance, EllipseRegion, FourierProvider,
};
use crate::system::{
    discrete_angle, sample_symbol, shear_angle, shifted_translate, Orientation, ShearletIndex,
    SparseSymbol,
};
use crate::window::Window;

/// Run parameters shared by both bound checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsConfig {
    /// Exponent of the grid searched for the far-field translate.
    pub far_search: u32,
    /// Exponent of the coefficient maps used for the upper-bound shape.
    pub map_exponent: u32,
    /// Boundary points used by the lower bound.
    pub boundary_points: usize,
    /// Radius factor `C` in `|x₀ - 2πỹ| ≤ C 2^{-j/2}`.
    pub radius: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            far_search: 6,
            map_exponent: 7,
            boundary_points: 8,
            radius: 1.0,
        }
    }
}

fn wrap(t: f64) -> f64 {
    (t + PI).rem_euclid(TAU) - PI
}

fn check_scales(j_list: &[u32]) -> Result<()> {
    if j_list.is_empty() {
        return Err(Error::invalid("need at least one scale"));
    }
    if let Some(j) = j_list.iter().find(|&&j| j < 2 || j % 2 != 0 || j > 12) {
        return Err(Error::invalid(format!(
            "bound checks need even 2 <= j <= 12, got {j}"
        )));
    }
    Ok(())
}

/// Shear of either orientation whose angle is closest to the normal
/// direction `gamma` (mod π); this is the nearer end of the bracketing pair
/// `θ_{j,ℓ*} ≤ γ ≤ θ_{j,ℓ*+1}`.
pub fn aligned_index(j: u32, gamma: f64) -> Result<ShearletIndex> {
    let half = 1i64 << (j / 2);
    let mut best: Option<(f64, Orientation, i64)> = None;
    for o in Orientation::BOTH {
        for l in -half..=half {
            let d = (shear_angle(o, j, l) - gamma).sin().abs();
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, o, l));
            }
        }
    }
    let (_, o, l) = best.expect("shear range is never empty");
    ShearletIndex::new(o, j, l)
}

/// The shear at `idx` moved by half the shear range, cyclically.
pub fn misaligned_index(idx: &ShearletIndex) -> Result<ShearletIndex> {
    let half = idx.half_scale();
    let mut l = idx.shear() + half / 2;
    if l > half {
        l -= 2 * half;
    }
    ShearletIndex::new(idx.orientation(), idx.scale(), l)
}

/// A translate far from the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FarTranslate {
    pub y: [f64; 2],
    /// Periodic distance from `2πy` to the boundary.
    pub distance: f64,
    /// Normal direction at the closest boundary point.
    pub normal_angle: f64,
}

/// Grid translate of exponent `s` maximizing the periodic distance to the
/// boundary (first in row-major order on ties).
pub fn far_translate(e: &EllipseRegion, s: u32) -> Result<FarTranslate> {
    if !(2..=9).contains(&s) {
        return Err(Error::invalid(format!(
            "far-field search grid needs 2 <= s <= 9, got {s}"
        )));
    }
    let n = 1usize << s;
    let found: Vec<(f64, f64, [f64; 2])> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let y = grid_translate(s, [i % n, i / n]);
            let (d, t) = periodic_boundary_distance(e, [TAU * y[0], TAU * y[1]]);
            (d, t, y)
        })
        .collect();
    let mut best = found[0];
    for &f in &found[1..] {
        if f.0 > best.0 {
            best = f;
        }
    }
    let (distance, t, y) = best;
    if !(distance > 1.0) {
        return Err(Error::invalid(format!(
            "no translate at distance > 1 from the boundary (best {distance:.3})"
        )));
    }
    Ok(FarTranslate {
        y,
        distance,
        normal_angle: e.boundary_point(t).normal_angle,
    })
}

/// Far-field coefficients at one scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FarFieldSample {
    pub scale: u32,
    pub index: String,
    /// `|coeff|` at the shear aligned with the nearest boundary normal.
    pub aligned: f64,
    /// `max |coeff|` over every shear of both orientations.
    pub max_over_shears: f64,
}

/// Coefficients at the far translate for each scale.
pub fn far_field_profile(
    e: &EllipseRegion,
    g: &Window,
    far: &FarTranslate,
    j_list: &[u32],
) -> Result<Vec<FarFieldSample>> {
    check_scales(j_list)?;
    let p = FourierProvider::RotatedEllipse(*e);
    j_list
        .iter()
        .map(|&j| {
            let idx = aligned_index(j, far.normal_angle)?;
            let aligned = coeff_direct(&sample_symbol(g, &idx)?, &p, far.y).norm();
            let all: Vec<ShearletIndex> = Orientation::BOTH
                .iter()
                .map(|&o| ShearletIndex::all_shears(o, j))
                .collect::<Result<Vec<_>>>()?
                .concat();
            let max_over_shears = all
                .par_iter()
                .map(|i| sample_symbol(g, i).map(|s| coeff_direct(&s, &p, far.y).norm()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(FarFieldSample {
                scale: j,
                index: idx.to_string(),
                aligned,
                max_over_shears,
            })
        })
        .collect()
}

/// Largest `|coeff|` over the translates `y ∈ 𝒫(M_j)` with
/// `|x₀ - 2πỹ| ≤ radius·2^{-j/2}`, and the maximizing translate.
pub fn boundary_coefficient(
    symbol: &SparseSymbol,
    p: &FourierProvider,
    x0: [f64; 2],
    radius: f64,
) -> (f64, [f64; 2]) {
    let idx = symbol.index();
    let j = idx.scale();
    let n = (1i64 << j) as f64;
    let r = radius * (-f64::from(j) / 2.0).exp2();
    let yt0 = shifted_translate([0.0, 0.0], idx);
    // ỹ = y - σ, so y ≈ x₀/2π + σ
    let c = [x0[0] / TAU - yt0[0], x0[1] / TAU - yt0[1]];
    let k = (r / TAU * n).ceil() as i64 + 1;
    let (c1, c2) = ((c[0] * n).round() as i64, (c[1] * n).round() as i64);
    let mut best = (0.0, [c1 as f64 / n, c2 as f64 / n]);
    for z2 in -k..=k {
        for z1 in -k..=k {
            let y = [(c1 + z1) as f64 / n, (c2 + z2) as f64 / n];
            let yt = shifted_translate(y, idx);
            let d = wrap(TAU * yt[0] - x0[0]).hypot(wrap(TAU * yt[1] - x0[1]));
            if d <= r {
                let v = coeff_direct(symbol, p, y).norm();
                if v > best.0 {
                    best = (v, y);
                }
            }
        }
    }
    best
}

/// One aligned boundary coefficient together with its misaligned control.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundarySample {
    pub t: f64,
    pub position: [f64; 2],
    pub curvature: f64,
    pub scale: u32,
    pub index: String,
    pub y: [f64; 2],
    pub value: f64,
    /// `|coeff|` at the same translate with the shear moved by half its range.
    pub control: f64,
}

/// Aligned boundary coefficients at equispaced boundary points for each scale.
pub fn boundary_samples(
    e: &EllipseRegion,
    g: &Window,
    j_list: &[u32],
    config: &BoundsConfig,
) -> Result<Vec<BoundarySample>> {
    check_scales(j_list)?;
    let p = FourierProvider::RotatedEllipse(*e);
    let points = boundary_points(e, config.boundary_points)?;
    let jobs: Vec<_> = j_list
        .iter()
        .flat_map(|&j| points.iter().map(move |bp| (j, *bp)))
        .collect();
    jobs.par_iter()
        .map(|&(j, bp)| {
            let idx = aligned_index(j, bp.normal_angle)?;
            let symbol = sample_symbol(g, &idx)?;
            let (value, y) = boundary_coefficient(&symbol, &p, bp.position, config.radius);
            let other = sample_symbol(g, &misaligned_index(&idx)?)?;
            Ok(BoundarySample {
                t: bp.t,
                position: bp.position,
                curvature: bp.curvature,
                scale: j,
                index: idx.to_string(),
                y,
                value,
                control: coeff_direct(&other, &p, y).norm(),
            })
        })
        .collect()
}

/// Boundary samples grouped by the dyadic square `Q ∈ 𝒬_j¹` containing them.
struct BoundaryCells {
    /// Per square: positions and normal directions of its samples.
    cells: Vec<Vec<([f64; 2], f64)>>,
}

impl BoundaryCells {
    fn new(e: &EllipseRegion, j: u32) -> Result<Self> {
        let part = dyadic_squares(j, e)?;
        let h = part.side();
        let per = part.per_axis;
        let mut slot = vec![usize::MAX; per * per];
        for (i, q) in part.boundary.iter().enumerate() {
            slot[q[1] * per + q[0]] = i;
        }
        let mut cells = vec![Vec::new(); part.boundary.len()];
        let perimeter_bound = TAU * e.a().max(e.b());
        let n = ((16.0 * perimeter_bound / h).ceil() as usize).max(256);
        let cell = |v: f64| (((v + PI) / h).floor() as i64).rem_euclid(per as i64) as usize;
        for i in 0..n {
            let bp = e.boundary_point(TAU * i as f64 / n as f64);
            let x = [wrap(bp.position[0]), wrap(bp.position[1])];
            let s = slot[cell(x[1]) * per + cell(x[0])];
            if s != usize::MAX {
                cells[s].push((x, bp.normal_angle));
            }
        }
        // a square clipped by a sliver of curve may miss every sample
        for (q, c) in part.boundary.iter().zip(cells.iter_mut()) {
            if c.is_empty() {
                let (_, t) = periodic_boundary_distance(e, part.square_center(*q));
                let bp = e.boundary_point(t);
                c.push((
                    [wrap(bp.position[0]), wrap(bp.position[1])],
                    bp.normal_angle,
                ));
            }
        }
        Ok(Self { cells })
    }

    /// `Σ_Q (1 + 2^j|x_Q - x|²)^{-q} (1 + 2^{j/2}|sin(θ - γ_Q)|)^{-5/2}` for
    /// each `q`, with `x_Q` the sample of `Q` closest to `x`.
    fn sums(&self, j: u32, theta: f64, x: [f64; 2], qs: &[f64]) -> Vec<f64> {
        let big = f64::from(j).exp2();
        let half = big.sqrt();
        let mut out = vec![0.0; qs.len()];
        for c in &self.cells {
            let (d2, gamma) = c
                .iter()
                .map(|(p, gamma)| {
                    (
                        wrap(p[0] - x[0]).powi(2) + wrap(p[1] - x[1]).powi(2),
                        *gamma,
                    )
                })
                .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
            let radial = (1.0 + big * d2).ln();
            let angular = (1.0 + half * (theta - gamma).sin().abs()).powf(-2.5);
            for (o, q) in out.iter_mut().zip(qs) {
                *o += (-q * radial).exp() * angular;
            }
        }
        out
    }
}

/// Shears used for the upper-bound shape: the ends, the quarter points and
/// zero for both orientations.
pub fn shape_shears(j: u32) -> Result<Vec<ShearletIndex>> {
    let h = 1i64 << (j / 2);
    let mut out = Vec::new();
    for o in Orientation::BOTH {
        let mut ls = vec![-h, -h / 2, 0, h / 2, h];
        ls.dedup();
        for l in ls {
            out.push(ShearletIndex::new(o, j, l)?);
        }
    }
    Ok(out)
}

/// `max |coeff| / RHS` over the coefficient maps of [`shape_shears`], where
/// RHS is the boundary sum of the upper estimate, for each exponent in `qs`.
/// Zero for the zero function.
pub fn fit_upper_constants(
    e: &EllipseRegion,
    provider: &FourierProvider,
    g: &Window,
    j: u32,
    s: u32,
    qs: &[f64],
) -> Result<Vec<f64>> {
    check_scales(&[j])?;
    let cells = BoundaryCells::new(e, j)?;
    let mut c_fit = vec![0.0; qs.len()];
    for idx in shape_shears(j)? {
        let map = coeff_map(&sample_symbol(g, &idx)?, provider, s)?;
        let theta = discrete_angle(&idx);
        let n = map.size();
        let worst = (0..n * n)
            .into_par_iter()
            .map(|i| {
                let m = [i % n, i / n];
                let yt = shifted_translate(map.translate(m), &idx);
                let v = map.get(m).norm();
                cells
                    .sums(j, theta, [TAU * yt[0], TAU * yt[1]], qs)
                    .into_iter()
                    .map(|rhs| v / rhs)
                    .collect::<Vec<f64>>()
            })
            .reduce(
                || vec![0.0; qs.len()],
                |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
            );
        for (c, w) in c_fit.iter_mut().zip(worst) {
            *c = f64::max(*c, w);
        }
    }
    Ok(c_fit)
}

/// [`fit_upper_constants`] at a single exponent.
pub fn fit_upper_constant(
    e: &EllipseRegion,
    provider: &FourierProvider,
    g: &Window,
    j: u32,
    s: u32,
    q: f64,
) -> Result<f64> {
    Ok(fit_upper_constants(e, provider, g, j, s, &[q])?[0])
}

/// Far-field decay across `j_list` and the j-stability of the fitted
/// upper-bound constant.
pub fn check_upper_bound(
    e: &EllipseRegion,
    g: &Window,
    j_list: &[u32],
    q_eff: f64,
    config: &BoundsConfig,
) -> Result<VerificationReport> {
    check_scales(j_list)?;
    if !(q_eff > 0.5) {
        return Err(Error::invalid("q_eff must exceed 1/2"));
    }
    let mut report = VerificationReport::new(
        "upper",
        json!({"ellipse": [e.a(), e.b(), e.gamma()], "scales": j_list, "q_eff": q_eff,
               "window_b": g.rate(), "config": config}),
    );
    let far = far_translate(e, config.far_search)?;
    report.fit("far.distance", far.distance);
    let profile = far_field_profile(e, g, &far, j_list)?;
    let required = q_eff - 0.5;
    for w in profile.windows(2) {
        let dj = f64::from(w[1].scale) - f64::from(w[0].scale);
        let drop = w[0].aligned.log2() - w[1].aligned.log2();
        report.push(ReportPoint::above(
            json!({"test": "far-field log2 drop", "from": w[0].scale, "to": w[1].scale,
                   "y": far.y, "index": w[1].index}),
            drop,
            required * dj,
        ));
        let drop_max = w[0].max_over_shears.log2() - w[1].max_over_shears.log2();
        report.fit(
            &format!("far.drop_max_over_shears.j{}-{}", w[0].scale, w[1].scale),
            drop_max,
        );
        if drop_max < required * dj {
            report.note(format!(
                "max over all shears at the far translate drops by only {drop_max:.2} in log2 from j={} to j={}",
                w[0].scale, w[1].scale
            ));
        }
    }
    if profile.len() >= 2 {
        let slope = fit_slope(
            &profile
                .iter()
                .map(|f| (f64::from(f.scale), f.aligned.log2()))
                .collect::<Vec<_>>(),
        );
        report.push(ReportPoint::below(
            json!({"test": "far-field log2 slope"}),
            slope,
            -required,
        ));
        report.fit("far.slope", slope);
    }
    for f in &profile {
        report.push(ReportPoint::above(
            json!({"test": "far-field coefficient resolved", "j": f.scale}),
            f.aligned,
            0.0,
        ));
        report.fit(&format!("far.j{}.aligned", f.scale), f.aligned);
        report.fit(
            &format!("far.j{}.max_over_shears", f.scale),
            f.max_over_shears,
        );
    }

    let p = FourierProvider::RotatedEllipse(*e);
    // the declared exponent plus a ladder of weaker ones for comparison
    let mut qs = vec![q_eff];
    qs.extend([0.5, 1.0, 1.5, 2.0].into_iter().filter(|&q| q != q_eff));
    let mut per_q: Vec<Vec<f64>> = vec![Vec::new(); qs.len()];
    for &j in j_list {
        let c = fit_upper_constants(e, &p, g, j, config.map_exponent, &qs)?;
        for (k, v) in c.into_iter().enumerate() {
            per_q[k].push(v);
        }
    }
    let spread = |v: &[f64]| {
        v.iter().copied().fold(0.0, f64::max) / v.iter().copied().fold(f64::INFINITY, f64::min)
    };
    for (&j, c) in j_list.iter().zip(&per_q[0]) {
        report.fit(&format!("C.j{j}"), *c);
    }
    let lo = per_q[0].iter().copied().fold(f64::INFINITY, f64::min);
    report.push(ReportPoint::above(
        json!({"test": "fitted C positive"}),
        lo,
        0.0,
    ));
    let ratio = spread(&per_q[0]);
    report.push(ReportPoint::below(
        json!({"test": "fitted C stable within x8", "q": q_eff}),
        ratio,
        8.0,
    ));
    report.fit("C ratio", ratio);
    for (q, c) in qs.iter().zip(&per_q).skip(1) {
        report.fit(&format!("C ratio at q={q}"), spread(c));
    }
    Ok(report)
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Aligned boundary coefficients: nonzero, within a factor 4 across scales
/// at each boundary point and far above the far-field coefficient.
pub fn check_lower_bound(
    e: &EllipseRegion,
    g: &Window,
    j_list: &[u32],
    config: &BoundsConfig,
) -> Result<VerificationReport> {
    check_scales(j_list)?;
    let mut report = VerificationReport::new(
        "lower",
        json!({"ellipse": [e.a(), e.b(), e.gamma()], "scales": j_list,
               "window_b": g.rate(), "config": config}),
    );
    let samples = boundary_samples(e, g, j_list, config)?;
    for s in &samples {
        report.push(ReportPoint::above(
            json!({"test": "aligned coefficient nonzero", "t": s.t, "j": s.scale, "index": s.index}),
            s.value,
            0.0,
        ));
    }
    let mut by_point: BTreeMap<u64, Vec<&BoundarySample>> = BTreeMap::new();
    for s in &samples {
        by_point.entry(s.t.to_bits()).or_default().push(s);
    }
    let mut worst_ratio: f64 = 1.0;
    for group in by_point.values() {
        let lo = group.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        let hi = group.iter().map(|s| s.value).fold(0.0, f64::max);
        worst_ratio = worst_ratio.max(hi / lo);
        report.push(ReportPoint::below(
            json!({"test": "stable across scales within x4", "t": group[0].t}),
            hi / lo,
            4.0,
        ));
    }
    report.fit("max ratio across scales", worst_ratio);

    let far = far_translate(e, config.far_search)?;
    let profile = far_field_profile(e, g, &far, j_list)?;
    let mut worst_control: f64 = f64::INFINITY;
    for f in &profile {
        let at_j: Vec<&BoundarySample> = samples.iter().filter(|s| s.scale == f.scale).collect();
        let min_value = at_j.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        report.push(ReportPoint::above(
            json!({"test": "boundary exceeds far field x1e3", "j": f.scale}),
            min_value,
            1e3 * f.aligned,
        ));
        report.fit(&format!("j{}.min_boundary", f.scale), min_value);
        report.fit(&format!("j{}.far_aligned", f.scale), f.aligned);
        report.fit(
            &format!("j{}.far_max_over_shears", f.scale),
            f.max_over_shears,
        );
        for s in at_j {
            let ratio = s.value / s.control;
            worst_control = worst_control.min(ratio);
            if !(ratio >= 10.0) {
                report.note(format!(
                    "misaligned control at t={:.3} (curvature {:.2}), j={} is only {ratio:.1}x smaller",
                    s.t, s.curvature, s.scale
                ));
            }
        }
    }
    report.fit("min control ratio", worst_control);
    Ok(report)
}
