//! Rotated ellipses: Fourier transform, boundary geometry and the dyadic
//! square partition used by the bound harnesses.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::bessel::bessel_j1_over_x;
use crate::error::{Error, Result};

/// `ℱ[χ_D](ξ) = J₁(|ξ|)/(2π|ξ|)` for the unit disc, with
/// `ℱf(ξ) = (2π)^{-2} ∫ f(x) e^{-i ξᵀx} dx`.
pub fn disc_ft(xi: [f64; 2]) -> f64 {
    bessel_j1_over_x(xi[0].hypot(xi[1])) / TAU
}

/// The region `c + R_γ {(x₁/a)² + (x₂/b)² ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipseRegion {
    a: f64,
    b: f64,
    gamma: f64,
    center: [f64; 2],
}

impl EllipseRegion {
    /// `γ` is reduced to `[0, 2π)`. Requires `0 < a, b < π`.
    pub fn new(a: f64, b: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "semi-axis {name} must be positive, got {v}"
                )));
            }
        }
        if a.max(b) >= PI {
            return Err(Error::invalid(format!(
                "ellipse ({a}, {b}) does not fit in (-pi, pi)^2"
            )));
        }
        if !gamma.is_finite() {
            return Err(Error::invalid("rotation angle must be finite"));
        }
        let mut gamma = gamma.rem_euclid(TAU);
        if gamma >= TAU {
            gamma = 0.0;
        }
        Ok(Self {
            a,
            b,
            gamma,
            center: [0.0, 0.0],
        })
    }

    /// Moves the ellipse; the rotated bounding box must stay inside `(-π, π)²`.
    pub fn with_center(mut self, center: [f64; 2]) -> Result<Self> {
        let [hx, hy] = self.half_extents();
        if !(center[0].abs() + hx < PI && center[1].abs() + hy < PI) {
            return Err(Error::invalid(format!(
                "ellipse centred at ({}, {}) leaves (-pi, pi)^2",
                center[0], center[1]
            )));
        }
        self.center = center;
        Ok(self)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn area(&self) -> f64 {
        PI * self.a * self.b
    }

    /// Half widths of the axis-aligned bounding box.
    pub fn half_extents(&self) -> [f64; 2] {
        let (s, c) = self.gamma.sin_cos();
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        [
            (a2 * c * c + b2 * s * s).sqrt(),
            (a2 * s * s + b2 * c * c).sqrt(),
        ]
    }

    /// `R_γᵀ v`.
    fn unrotate(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.gamma.sin_cos();
        [c * v[0] + s * v[1], -s * v[0] + c * v[1]]
    }

    fn rotate(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.gamma.sin_cos();
        [c * v[0] - s * v[1], s * v[0] + c * v[1]]
    }

    /// Negative inside, zero on the boundary, positive outside.
    pub fn implicit(&self, x: [f64; 2]) -> f64 {
        let u = self.unrotate([x[0] - self.center[0], x[1] - self.center[1]]);
        (u[0] / self.a).powi(2) + (u[1] / self.b).powi(2) - 1.0
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        self.implicit(x) <= 0.0
    }

    /// Fourier transform including the phase of the centre offset.
    pub fn fourier(&self, xi: [f64; 2]) -> Complex64 {
        let v = ellipse_ft(self, xi);
        let t = xi[0] * self.center[0] + xi[1] * self.center[1];
        if t == 0.0 {
            Complex64::new(v, 0.0)
        } else {
            Complex64::from_polar(v, -t)
        }
    }

    /// Boundary point at parameter `t`.
    pub fn boundary_point(&self, t: f64) -> BoundaryPoint {
        let (st, ct) = t.sin_cos();
        let p = self.rotate([self.a * ct, self.b * st]);
        let n = self.rotate([ct / self.a, st / self.b]);
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        BoundaryPoint {
            t,
            position: [p[0] + self.center[0], p[1] + self.center[1]],
            normal_angle: n[1].atan2(n[0]).rem_euclid(TAU),
            curvature: self.a * self.b / (a2 * st * st + b2 * ct * ct).powf(1.5),
        }
    }
}

/// Fourier transform of the centred rotated ellipse, real and even.
pub fn ellipse_ft(e: &EllipseRegion, xi: [f64; 2]) -> f64 {
    let eta = e.unrotate(xi);
    e.a * e.b * disc_ft([e.a * eta[0], e.b * eta[1]])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryPoint {
    /// Curve parameter in `[0, 2π)`.
    pub t: f64,
    pub position: [f64; 2],
    /// Direction of the outward unit normal, in `[0, 2π)`.
    pub normal_angle: f64,
    pub curvature: f64,
}

/// `n` boundary points at equispaced parameters.
pub fn boundary_points(e: &EllipseRegion, n: usize) -> Result<Vec<BoundaryPoint>> {
    if n < 4 {
        return Err(Error::invalid(format!(
            "need at least 4 boundary points, got {n}"
        )));
    }
    Ok((0..n)
        .map(|i| e.boundary_point(TAU * i as f64 / n as f64))
        .collect())
}

/// Euclidean distance from `x` to the ellipse boundary and the parameter of
/// the closest boundary point.
pub fn boundary_distance(e: &EllipseRegion, x: [f64; 2]) -> (f64, f64) {
    const COARSE: usize = 256;
    let dist2 = |t: f64| {
        let p = e.boundary_point(t).position;
        (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2)
    };
    let h = TAU / COARSE as f64;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..COARSE {
        let t = h * i as f64;
        let d = dist2(t);
        if d < best.0 {
            best = (d, t);
        }
    }
    // golden-section refinement on the bracketing cell
    let (mut lo, mut hi) = (best.1 - h, best.1 + h);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (dist2(c), dist2(d));
    for _ in 0..80 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = dist2(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = dist2(d);
        }
    }
    let t = 0.5 * (lo + hi);
    let dt = dist2(t);
    if dt < best.0 {
        (dt.sqrt(), t.rem_euclid(TAU))
    } else {
        (best.0.sqrt(), best.1)
    }
}

/// Same as [`boundary_distance`] but on the torus `ℝ²/(2πℤ)²`.
pub fn periodic_boundary_distance(e: &EllipseRegion, x: [f64; 2]) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    for dx in [-1.0, 0.0, 1.0] {
        for dy in [-1.0, 0.0, 1.0] {
            let r = boundary_distance(e, [x[0] + dx * TAU, x[1] + dy * TAU]);
            if r.0 < best.0 {
                best = r;
            }
        }
    }
    best
}

/// The `2^{j/2} × 2^{j/2}` squares of side `2π 2^{-j/2}` tiling `[-π, π)²`,
/// split by whether they meet the boundary.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicPartition {
    pub scale: u32,
    pub per_axis: usize,
    /// Squares meeting the boundary, as `(column, row)` from the lower left.
    pub boundary: Vec<[usize; 2]>,
    /// All remaining squares.
    pub interior: Vec<[usize; 2]>,
}

impl DyadicPartition {
    pub fn side(&self) -> f64 {
        TAU / self.per_axis as f64
    }

    pub fn square_center(&self, q: [usize; 2]) -> [f64; 2] {
        let h = self.side();
        [-PI + (q[0] as f64 + 0.5) * h, -PI + (q[1] as f64 + 0.5) * h]
    }

    pub fn total(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }
}

/// Classifies each dyadic square by a sign change of the implicit function on
/// a `17 × 17` node sub-grid, united with the squares hit by dense boundary
/// samples.
pub fn dyadic_squares(j: u32, e: &EllipseRegion) -> Result<DyadicPartition> {
    if j < 2 || !j.is_multiple_of(2) || j > 30 {
        return Err(Error::invalid(format!(
            "dyadic squares need even 2 <= j <= 30, got {j}"
        )));
    }
    const SUB: usize = 16;
    let per_axis = 1usize << (j / 2);
    let h = TAU / per_axis as f64;
    let mut hit = vec![false; per_axis * per_axis];
    for qy in 0..per_axis {
        for qx in 0..per_axis {
            let (x0, y0) = (-PI + qx as f64 * h, -PI + qy as f64 * h);
            let mut neg = false;
            let mut pos = false;
            'scan: for sy in 0..=SUB {
                for sx in 0..=SUB {
                    let p = [
                        x0 + h * sx as f64 / SUB as f64,
                        y0 + h * sy as f64 / SUB as f64,
                    ];
                    let v = e.implicit(p);
                    neg |= v <= 0.0;
                    pos |= v >= 0.0;
                    if neg && pos {
                        break 'scan;
                    }
                }
            }
            hit[qy * per_axis + qx] = neg && pos;
        }
    }
    let perimeter_bound = TAU * e.a.max(e.b);
    let samples = ((64.0 * perimeter_bound / h).ceil() as usize).max(256);
    for i in 0..samples {
        let p = e.boundary_point(TAU * i as f64 / samples as f64).position;
        let cell = |v: f64| (((v + PI) / h).floor() as i64).rem_euclid(per_axis as i64) as usize;
        hit[cell(p[1]) * per_axis + cell(p[0])] = true;
    }
    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    for qy in 0..per_axis {
        for qx in 0..per_axis {
            if hit[qy * per_axis + qx] {
                boundary.push([qx, qy]);
            } else {
                interior.push([qx, qy]);
            }
        }
    }
    Ok(DyadicPartition {
        scale: j,
        per_axis,
        boundary,
        interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::bessel::bessel_j1;

    fn sample() -> EllipseRegion {
        EllipseRegion::new(1.0, 3.0, PI / 6.0).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(EllipseRegion::new(0.0, 1.0, 0.0).is_err());
        assert!(EllipseRegion::new(1.0, PI, 0.0).is_err());
        assert!(EllipseRegion::new(1.0, 1.0, f64::NAN).is_err());
        let e = EllipseRegion::new(1.0, 2.0, -PI / 2.0).unwrap();
        assert!((e.gamma() - 1.5 * PI).abs() < 1e-15);
        assert!(sample().with_center([0.5, 0.0]).is_ok());
        assert!(sample().with_center([0.0, 1.0]).is_err());
    }

    #[test]
    fn disc_examples() {
        assert!((disc_ft([0.0, 0.0]) - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(disc_ft([4.2, 0.0]), disc_ft([0.0, 4.2]));
        assert!((disc_ft([10.0, 0.0]) - bessel_j1(10.0) / (20.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn ellipse_examples() {
        let e = sample();
        assert!((ellipse_ft(&e, [0.0, 0.0]) - 3.0 / (4.0 * PI)).abs() < 1e-15);
        let circle = EllipseRegion::new(1.0, 1.0, 0.77).unwrap();
        for xi in [[3.0, -1.0], [0.5, 12.0], [-40.0, 7.0]] {
            assert!((ellipse_ft(&circle, xi) - disc_ft(xi)).abs() < 1e-15);
        }
        let axis = EllipseRegion::new(1.0, 3.0, 0.0).unwrap();
        let xi = [7.0, -2.0];
        let (s, c) = (PI / 6.0).sin_cos();
        let rt = [c * xi[0] + s * xi[1], -s * xi[0] + c * xi[1]];
        assert!((ellipse_ft(&e, xi) - ellipse_ft(&axis, rt)).abs() < 1e-15);
    }

    #[test]
    fn fourier_transform_matches_quadrature_of_indicator() {
        // midpoint rule on a fine grid of the indicator, Gaussian-damped
        // frequencies where the rule is accurate
        let e = sample().with_center([0.3, -0.2]).unwrap();
        let n = 1200;
        let h = TAU / n as f64;
        for xi in [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [-1.0, 1.0]] {
            let mut acc = Complex64::new(0.0, 0.0);
            for iy in 0..n {
                for ix in 0..n {
                    let x = [-PI + (ix as f64 + 0.5) * h, -PI + (iy as f64 + 0.5) * h];
                    if e.contains(x) {
                        acc += Complex64::from_polar(1.0, -(xi[0] * x[0] + xi[1] * x[1]));
                    }
                }
            }
            let approx = acc * h * h / (TAU * TAU);
            assert!((approx - e.fourier(xi)).norm() < 2e-4, "{xi:?}");
        }
    }

    #[test]
    fn decay_envelope() {
        let e = sample();
        let mut c_fit: f64 = 0.0;
        for i in 0..2000 {
            let r = 10.0 * 300f64.powf(i as f64 / 1999.0);
            let phi = 0.37 * i as f64;
            let v = ellipse_ft(&e, [r * phi.cos(), r * phi.sin()]).abs();
            c_fit = c_fit.max(v * r.powf(1.5));
        }
        // J₁(ρ) ≤ 0.8 ρ^{-1/3} globally, and √(2/πρ) asymptotically
        assert!(c_fit > 0.0 && c_fit < 1.0, "{c_fit}");
    }

    #[test]
    fn boundary_geometry() {
        let circle = EllipseRegion::new(1.0, 1.0, 0.0).unwrap();
        for p in boundary_points(&circle, 16).unwrap() {
            assert!((p.curvature - 1.0).abs() < 1e-15);
            let dir = p.position[1].atan2(p.position[0]).rem_euclid(TAU);
            let diff = (dir - p.normal_angle).abs();
            assert!(diff < 1e-12 || (diff - TAU).abs() < 1e-12);
        }
        assert!(boundary_points(&circle, 3).is_err());

        let e = EllipseRegion::new(1.0, 3.0, 0.0).unwrap();
        let p = e.boundary_point(0.0);
        assert_eq!(p.position, [1.0, 0.0]);
        assert_eq!(p.normal_angle, 0.0);
        // curvature oracle: |x'y'' - y'x''| / |r'|³ by central differences
        for t in [0.0, 0.4, 1.3, 2.9, 4.4] {
            let e = sample();
            let h = 1e-4;
            let pos = |t: f64| e.boundary_point(t).position;
            let (pm, p0, pp) = (pos(t - h), pos(t), pos(t + h));
            let d1 = [(pp[0] - pm[0]) / (2.0 * h), (pp[1] - pm[1]) / (2.0 * h)];
            let d2 = [
                (pp[0] - 2.0 * p0[0] + pm[0]) / (h * h),
                (pp[1] - 2.0 * p0[1] + pm[1]) / (h * h),
            ];
            let k = (d1[0] * d2[1] - d1[1] * d2[0]).abs() / d1[0].hypot(d1[1]).powi(3);
            assert!((k - e.boundary_point(t).curvature).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn boundary_points_lie_on_curve() {
        let e = sample();
        for p in boundary_points(&e, 360).unwrap() {
            assert!(e.implicit(p.position).abs() < 1e-12);
            // outward: stepping along the normal leaves the region
            let step = [
                p.position[0] + 1e-6 * p.normal_angle.cos(),
                p.position[1] + 1e-6 * p.normal_angle.sin(),
            ];
            assert!(e.implicit(step) > 0.0);
        }
    }

    #[test]
    fn distance_to_boundary() {
        let circle = EllipseRegion::new(1.0, 1.0, 0.0).unwrap();
        let (d, t) = boundary_distance(&circle, [0.0, 2.5]);
        assert!((d - 1.5).abs() < 1e-9);
        assert!((t - PI / 2.0).abs() < 1e-6);
        let e = sample();
        for p in boundary_points(&e, 50).unwrap() {
            assert!(boundary_distance(&e, p.position).0 < 1e-9);
        }
        // periodic image is closer for points near the cell edge
        let (dp, _) = periodic_boundary_distance(&circle, [3.1, 0.0]);
        let (dn, _) = boundary_distance(&circle, [3.1, 0.0]);
        assert!(dp <= dn);
    }

    #[test]
    fn dyadic_partition() {
        let e = sample();
        let p = dyadic_squares(2, &e).unwrap();
        assert_eq!(p.total(), 4);
        assert!(dyadic_squares(3, &e).is_err());
        for j in [6u32, 8, 10] {
            let p = dyadic_squares(j, &e).unwrap();
            assert_eq!(p.total(), 1 << j);
            let ratio = p.boundary.len() as f64 / (1u64 << (j / 2)) as f64;
            assert!(ratio > 0.5 && ratio <= 8.0, "j={j} ratio={ratio}");
            let mut seen = vec![false; 1 << j];
            for q in p.boundary.iter().chain(&p.interior) {
                let id = q[1] * p.per_axis + q[0];
                assert!(!seen[id]);
                seen[id] = true;
            }
            // every boundary sample lies in a boundary square
            for b in boundary_points(&e, 4000).unwrap() {
                let cell = |v: f64| ((v + PI) / p.side()).floor() as usize;
                assert!(p
                    .boundary
                    .contains(&[cell(b.position[0]), cell(b.position[1])]));
            }
        }
    }
}
