//! Shearlet indexing: shear matrices, discrete angles, symbols sampled on
//! the integer lattice, support cones, translate patterns.

mod cache;
mod symbol;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::Window;

pub use cache::SymbolCache;
pub use symbol::{
    read_symbol, sample_symbol, sample_symbol_with_budget, write_symbol, SparseSymbol, SymbolRun,
    DEFAULT_MEMORY_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "h")]
    Horizontal,
    #[serde(rename = "v")]
    Vertical,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Horizontal, Orientation::Vertical];

    pub fn code(self) -> u32 {
        match self {
            Orientation::Horizontal => 0,
            Orientation::Vertical => 1,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(Orientation::Horizontal),
            1 => Some(Orientation::Vertical),
            _ => None,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Horizontal => "h",
            Orientation::Vertical => "v",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" | "horizontal" => Ok(Orientation::Horizontal),
            "v" | "vertical" => Ok(Orientation::Vertical),
            other => Err(Error::invalid(format!("unknown orientation {other:?}"))),
        }
    }
}

/// `(i, j, ℓ)` with `j` even and `|ℓ| ≤ 2^{j/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShearletIndex {
    orientation: Orientation,
    scale: u32,
    shear: i64,
}

/// Largest scale accepted by [`ShearletIndex::new`]; keeps `2^{3j/2}` inside `i64`.
pub const MAX_SCALE: u32 = 40;

impl ShearletIndex {
    pub fn new(orientation: Orientation, scale: u32, shear: i64) -> Result<Self> {
        if !scale.is_multiple_of(2) {
            return Err(Error::InvalidIndex(format!("scale j={scale} must be even")));
        }
        if scale > MAX_SCALE {
            return Err(Error::InvalidIndex(format!(
                "scale j={scale} exceeds {MAX_SCALE}"
            )));
        }
        let bound = 1i64 << (scale / 2);
        if shear.abs() > bound {
            return Err(Error::InvalidIndex(format!(
                "shear ℓ={shear} outside |ℓ| ≤ 2^(j/2) = {bound}"
            )));
        }
        Ok(Self {
            orientation,
            scale,
            shear,
        })
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn shear(&self) -> i64 {
        self.shear
    }

    /// `2^{j/2}` as an integer.
    pub fn half_scale(&self) -> i64 {
        1 << (self.scale / 2)
    }

    /// Every valid shear at this orientation and scale, ascending.
    pub fn all_shears(orientation: Orientation, scale: u32) -> Result<Vec<ShearletIndex>> {
        let bound = ShearletIndex::new(orientation, scale, 0)?.half_scale();
        (-bound..=bound)
            .map(|l| ShearletIndex::new(orientation, scale, l))
            .collect()
    }
}

impl fmt::Display for ShearletIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, j={}, l={})",
            self.orientation, self.scale, self.shear
        )
    }
}

/// `N_{j,ℓ}` as a row-major integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShearMatrix(pub [[i64; 2]; 2]);

impl ShearMatrix {
    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }
}

pub fn shear_matrix(idx: &ShearletIndex) -> ShearMatrix {
    let big = 1i64 << idx.scale;
    let half = idx.half_scale();
    let l = idx.shear;
    match idx.orientation {
        Orientation::Horizontal => ShearMatrix([[big, l * half], [0, half]]),
        Orientation::Vertical => ShearMatrix([[half, 0], [l * half, big]]),
    }
}

/// `θ_{j,ℓ}` for any integer `ℓ`; the cone `W_{j,ℓ}` needs `ℓ ± 2` beyond the
/// admissible shear range.
pub fn shear_angle(orientation: Orientation, scale: u32, shear: i64) -> f64 {
    let slope = shear as f64 * (-(f64::from(scale) / 2.0)).exp2();
    match orientation {
        Orientation::Horizontal => slope.atan(),
        // arccot with range (0, π)
        Orientation::Vertical => 1.0f64.atan2(slope),
    }
}

pub fn discrete_angle(idx: &ShearletIndex) -> f64 {
    shear_angle(idx.orientation, idx.scale, idx.shear)
}

#[inline]
pub(crate) fn symbol_value(g: &Window, idx: &ShearletIndex, xi: [f64; 2]) -> f64 {
    let inv_big = (-f64::from(idx.scale)).exp2();
    let inv_half = (-f64::from(idx.scale) / 2.0).exp2();
    let l = idx.shear as f64;
    match idx.orientation {
        Orientation::Horizontal => {
            g.eval_tilde(inv_big * xi[0]) * g.eval(inv_half * xi[1] - l * inv_big * xi[0])
        }
        Orientation::Vertical => {
            g.eval(inv_half * xi[0] - l * inv_big * xi[1]) * g.eval_tilde(inv_big * xi[1])
        }
    }
}

/// `Ψ^{(i)}_{j,ℓ}(ξ) = Ψ^{(i)}(N_{j,ℓ}^{-T} ξ)`.
pub fn eval_symbol(g: &Window, idx: &ShearletIndex, xi: [f64; 2]) -> f64 {
    symbol_value(g, idx, xi)
}

/// Membership of `ξ` in the polar cone `W^{(i)}_{j,ℓ}`.
pub fn cone_contains(idx: &ShearletIndex, xi: [f64; 2]) -> Result<bool> {
    if xi[0] == 0.0 && xi[1] == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let radius = xi[0].hypot(xi[1]);
    let big = (f64::from(idx.scale)).exp2();
    if !(radius > big / 3.0 && radius < 2.0 * big) {
        return Ok(false);
    }
    let (o, j, l) = (idx.orientation, idx.scale, idx.shear);
    let inside = match o {
        Orientation::Horizontal => {
            let (x, y) = if xi[0] < 0.0 {
                (-xi[0], -xi[1])
            } else {
                (xi[0], xi[1])
            };
            let theta = y.atan2(x);
            shear_angle(o, j, l - 2) < theta && theta < shear_angle(o, j, l + 2)
        }
        Orientation::Vertical => {
            let (x, y) = if xi[1] < 0.0 {
                (-xi[0], -xi[1])
            } else {
                (xi[0], xi[1])
            };
            let theta = y.atan2(x);
            shear_angle(o, j, l + 2) < theta && theta < shear_angle(o, j, l - 2)
        }
    };
    Ok(inside)
}

/// Translate lattice `𝒫(N_{j,ℓ})`: a tensor grid independent of `ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternGrid {
    orientation: Orientation,
    scale: u32,
}

impl PatternGrid {
    /// Exponents `(e1, e2)` with steps `2^{-e1}`, `2^{-e2}` per axis.
    pub fn exponents(&self) -> (u32, u32) {
        let (fine, coarse) = (self.scale, self.scale / 2);
        match self.orientation {
            Orientation::Horizontal => (fine, coarse),
            Orientation::Vertical => (coarse, fine),
        }
    }

    pub fn steps(&self) -> [f64; 2] {
        let (e1, e2) = self.exponents();
        [(-f64::from(e1)).exp2(), (-f64::from(e2)).exp2()]
    }

    pub fn counts(&self) -> [usize; 2] {
        let (e1, e2) = self.exponents();
        [1 << e1, 1 << e2]
    }

    pub fn len(&self) -> usize {
        let [a, b] = self.counts();
        a * b
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index ranges `z_i ∈ [-n_i/2, n_i/2 - 1]`.
    pub fn index_ranges(&self) -> [std::ops::RangeInclusive<i64>; 2] {
        let [a, b] = self.counts().map(|c| c as i64);
        [-(a / 2)..=a / 2 - 1, -(b / 2)..=b / 2 - 1]
    }

    pub fn point(&self, z: [i64; 2]) -> [f64; 2] {
        let s = self.steps();
        [z[0] as f64 * s[0], z[1] as f64 * s[1]]
    }

    /// All pattern points, first axis fastest.
    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        let [r1, r2] = self.index_ranges();
        r2.flat_map(move |z2| r1.clone().map(move |z1| self.point([z1, z2])))
    }

    /// Pattern point closest to `target` (componentwise, periodic in the unit cell).
    pub fn nearest(&self, target: [f64; 2]) -> [f64; 2] {
        let s = self.steps();
        let [n1, n2] = self.counts().map(|c| c as i64);
        let snap = |t: f64, step: f64, n: i64| {
            let z = (t / step).round() as i64;
            let z = (z + n / 2).rem_euclid(n) - n / 2;
            z as f64 * step
        };
        [snap(target[0], s[0], n1), snap(target[1], s[1], n2)]
    }
}

pub fn pattern(idx: &ShearletIndex) -> PatternGrid {
    PatternGrid {
        orientation: idx.orientation,
        scale: idx.scale,
    }
}

/// Orientation-dependent half-shift `σ` with `ỹ = y - σ`.
pub fn half_shift(idx: &ShearletIndex) -> [f64; 2] {
    let h = (-f64::from(idx.scale) - 1.0).exp2();
    match idx.orientation {
        Orientation::Horizontal => [h, 0.0],
        Orientation::Vertical => [0.0, h],
    }
}

pub fn shifted_translate(y: [f64; 2], idx: &ShearletIndex) -> [f64; 2] {
    let s = half_shift(idx);
    [y[0] - s[0], y[1] - s[1]]
}

/// `e^{2πi t}` with the argument reduced modulo one first.
#[inline]
pub(crate) fn unit_phase(t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * (t - t.round())).sin_cos();
    Complex64::new(c, s)
}

/// `ψ_{j,ℓ,y}(x) = Σ_k Ψ(k) e^{i kᵀ(x - 2πỹ)}` by direct summation.
pub fn eval_shearlet_spatial(symbol: &SparseSymbol, y: [f64; 2], x: [f64; 2]) -> Complex64 {
    let yt = shifted_translate(y, symbol.index());
    // kᵀ(x - 2πỹ) = 2π kᵀ(x/2π - ỹ)
    let u = [x[0] / (2.0 * PI) - yt[0], x[1] / (2.0 * PI) - yt[1]];
    symbol
        .entries()
        .map(|(k, v)| {
            let t = f64::from(k[0]) * u[0] + f64::from(k[1]) * u[1];
            unit_phase(t) * v
        })
        .sum()
}

/// Samples `ψ_{j,ℓ,y}` on the grid `x(m) = 2π (m - 2^{s-1}) 2^{-s}` by exact
/// periodic folding. Row-major with `m₂` as row index.
pub fn shearlet_on_grid(symbol: &SparseSymbol, y: [f64; 2], s: u32) -> Result<Vec<Complex64>> {
    let yt = shifted_translate(y, symbol.index());
    let terms = symbol.entries().map(|(k, v)| {
        let t = -(f64::from(k[0]) * yt[0] + f64::from(k[1]) * yt[1]);
        (k, unit_phase(t) * v)
    });
    crate::fold::fold_inverse(s, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn idx(o: Orientation, j: u32, l: i64) -> ShearletIndex {
        ShearletIndex::new(o, j, l).unwrap()
    }
    use Orientation::{Horizontal as H, Vertical as V};

    #[test]
    fn index_validation() {
        assert!(ShearletIndex::new(H, 3, 0).is_err());
        assert!(ShearletIndex::new(H, 6, 9).is_err());
        assert!(ShearletIndex::new(V, 6, -9).is_err());
        assert!(ShearletIndex::new(V, 6, -8).is_ok());
        assert_eq!(ShearletIndex::all_shears(H, 10).unwrap().len(), 65);
    }

    #[test]
    fn shear_matrix_examples() {
        let m = shear_matrix(&idx(H, 10, 5));
        assert_eq!(m, ShearMatrix([[1024, 160], [0, 32]]));
        assert_eq!(m.det(), 32768);
        assert_eq!(shear_matrix(&idx(V, 0, 0)), ShearMatrix([[1, 0], [0, 1]]));
        let m = shear_matrix(&idx(H, 6, -8));
        assert_eq!(m, ShearMatrix([[64, -64], [0, 8]]));
        assert_eq!(m.det(), 512);
    }

    #[test]
    fn determinant_is_exact_power() {
        for j in (0..=20).step_by(2) {
            for o in Orientation::BOTH {
                for ix in ShearletIndex::all_shears(o, j).unwrap() {
                    assert_eq!(shear_matrix(&ix).det(), 1i64 << (3 * j / 2));
                    assert_eq!(pattern(&ix).len() as i64, shear_matrix(&ix).det());
                }
            }
        }
    }

    #[test]
    fn discrete_angle_examples() {
        assert_eq!(discrete_angle(&idx(H, 8, 0)), 0.0);
        assert!((discrete_angle(&idx(H, 10, 32)) - FRAC_PI_4).abs() < 1e-15);
        assert!((discrete_angle(&idx(V, 10, 0)) - PI / 2.0).abs() < 1e-15);
        assert!((discrete_angle(&idx(V, 10, 32)) - FRAC_PI_4).abs() < 1e-15);
        assert!((discrete_angle(&idx(V, 10, -32)) - 3.0 * FRAC_PI_4).abs() < 1e-15);
        for l in -32..=32 {
            let h = discrete_angle(&idx(H, 10, l));
            let v = discrete_angle(&idx(V, 10, l));
            assert!((-FRAC_PI_4..=FRAC_PI_4).contains(&h));
            assert!((FRAC_PI_4..=3.0 * FRAC_PI_4).contains(&v));
        }
    }

    #[test]
    fn symbol_examples() {
        let g = Window::standard();
        let ix = idx(H, 10, 0);
        let v = eval_symbol(&g, &ix, [2.0 / 3.0 * 1024.0, 0.0]);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(eval_symbol(&g, &ix, [0.0, 17.0]), 0.0);
        let ix = idx(H, 10, 5);
        for xi in [[700.0, 100.0], [500.5, -3.25], [1200.0, 201.0]] {
            let a = eval_symbol(&g, &ix, xi);
            let b = eval_symbol(&g, &ix, [-xi[0], -xi[1]]);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cone_examples() {
        let ix = idx(H, 10, 0);
        assert!(cone_contains(&ix, [1500.0, 0.0]).unwrap());
        assert!(!cone_contains(&ix, [300.0, 0.0]).unwrap());
        assert!(cone_contains(&ix, [-1500.0, 0.0]).unwrap());
        assert!(matches!(
            cone_contains(&ix, [0.0, 0.0]),
            Err(Error::UndefinedAngle)
        ));
        let iv = idx(V, 10, 0);
        assert!(cone_contains(&iv, [0.0, 1500.0]).unwrap());
        assert!(cone_contains(&iv, [0.0, -1500.0]).unwrap());
        assert!(!cone_contains(&iv, [1500.0, 0.0]).unwrap());
    }

    #[test]
    fn pattern_examples() {
        let p = pattern(&idx(H, 6, 0));
        assert_eq!(p.steps(), [1.0 / 64.0, 1.0 / 8.0]);
        assert_eq!(p.counts(), [64, 8]);
        assert_eq!(p.len(), 512);
        assert_eq!(p, pattern(&idx(H, 6, 5)));
        let p = pattern(&idx(V, 2, 0));
        assert_eq!(p.steps(), [0.5, 0.25]);
        assert_eq!(p.counts(), [2, 4]);
        let pts: Vec<_> = p.points().collect();
        assert_eq!(pts.len(), 8);
        assert!(pts
            .iter()
            .all(|y| (-0.5..0.5).contains(&y[0]) && (-0.5..0.5).contains(&y[1])));
        assert_eq!(p.nearest([0.49, -0.3]), [-0.5, -0.25]);
    }

    #[test]
    fn translate_examples() {
        assert_eq!(
            shifted_translate([0.0, 0.0], &idx(H, 10, 0)),
            [-(2f64.powi(-11)), 0.0]
        );
        assert_eq!(
            shifted_translate([0.0, 0.0], &idx(V, 10, 0)),
            [0.0, -(2f64.powi(-11))]
        );
        assert_eq!(
            shifted_translate([2f64.powi(-6), 2f64.powi(-3)], &idx(H, 6, 0)),
            [2f64.powi(-6) - 2f64.powi(-7), 2f64.powi(-3)]
        );
    }

    #[test]
    fn spatial_peak_is_symbol_sum() {
        let g = Window::standard();
        let sym = sample_symbol(&g, &idx(H, 6, 2)).unwrap();
        let y = [3.0 / 64.0, -1.0 / 8.0];
        let yt = shifted_translate(y, sym.index());
        let x = [2.0 * PI * yt[0], 2.0 * PI * yt[1]];
        let v = eval_shearlet_spatial(&sym, y, x);
        let total: f64 = sym.entries().map(|(_, v)| v).sum();
        assert!(v.im.abs() < 1e-9 * total);
        assert!((v.re - total).abs() < 1e-9 * total);
        assert!(total > 0.0);
    }

    #[test]
    fn spatial_grid_matches_direct_sum() {
        let g = Window::standard();
        let sym = sample_symbol(&g, &idx(V, 6, -3)).unwrap();
        let y = [0.125, -0.25];
        let s = 5;
        let n = 1usize << s;
        let grid = shearlet_on_grid(&sym, y, s).unwrap();
        let scale = grid.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for m2 in (0..n).step_by(3) {
            for m1 in (0..n).step_by(5) {
                let x = [
                    2.0 * PI * (m1 as f64 - (n / 2) as f64) / n as f64,
                    2.0 * PI * (m2 as f64 - (n / 2) as f64) / n as f64,
                ];
                let direct = eval_shearlet_spatial(&sym, y, x);
                assert!((direct - grid[m2 * n + m1]).norm() < 1e-10 * scale);
            }
        }
    }
}
