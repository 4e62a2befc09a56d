//! Shearlet coefficients `⟨f, ψ_{j,ℓ,y}⟩ = Σ_k c_k Ψ_{j,ℓ}(k) e^{2πi kᵀỹ}` of
//! periodized test functions, single translates and full dyadic grids.

mod export;

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fold::fold_inverse;
use crate::symbols::FourierProvider;
use crate::system::{
    half_shift, sample_symbol, shifted_translate, unit_phase, Orientation, ShearletIndex,
    SparseSymbol,
};
use crate::window::Window;

pub use export::{write_edge_csv, write_map_csv, write_pgm16, write_sidecar, PgmScale};

/// Translate `y(m) = (m - 2^{s-1}) 2^{-s}` of grid cell `m`.
pub fn grid_translate(s: u32, m: [usize; 2]) -> [f64; 2] {
    let n = (1usize << s) as f64;
    [(m[0] as f64 - n / 2.0) / n, (m[1] as f64 - n / 2.0) / n]
}

/// Grid cell of a translate lying on the grid of exponent `s` (rounded, periodic).
pub fn grid_cell(s: u32, y: [f64; 2]) -> [usize; 2] {
    let n = 1i64 << s;
    let c = |t: f64| ((t * n as f64).round() as i64 + n / 2).rem_euclid(n) as usize;
    [c(y[0]), c(y[1])]
}

#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    // Neumaier's variant, componentwise
    fn add(&mut self, v: Complex64) {
        let step = |s: &mut f64, c: &mut f64, x: f64| {
            let t = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - t) + x;
            } else {
                *c += (x - t) + *s;
            }
            *s = t;
        };
        step(&mut self.sum.re, &mut self.carry.re, v.re);
        step(&mut self.sum.im, &mut self.carry.im, v.im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

/// Coefficient at one translate `y`, by compensated direct summation.
pub fn coeff_direct(symbol: &SparseSymbol, p: &FourierProvider, y: [f64; 2]) -> Complex64 {
    let yt = shifted_translate(y, symbol.index());
    let mut acc = Compensated::default();
    for (k, v) in symbol.entries() {
        let c = p.coefficient(k);
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let t = f64::from(k[0]) * yt[0] + f64::from(k[1]) * yt[1];
        acc.add(c * v * unit_phase(t));
    }
    acc.value()
}

/// Complex coefficients over the `2^s × 2^s` translate grid.
#[derive(Clone, Debug)]
pub struct CoefficientMap {
    index: ShearletIndex,
    s: u32,
    provider: String,
    values: Vec<Complex64>,
}

impl CoefficientMap {
    pub fn index(&self) -> &ShearletIndex {
        &self.index
    }

    pub fn grid_exponent(&self) -> u32 {
        self.s
    }

    /// Pixels per axis.
    pub fn size(&self) -> usize {
        1 << self.s
    }

    pub fn provider(&self) -> &str {
        &self.provider
    }

    /// Row-major values, `m₂` as row.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, m: [usize; 2]) -> Complex64 {
        self.values[m[1] * self.size() + m[0]]
    }

    pub fn translate(&self, m: [usize; 2]) -> [f64; 2] {
        grid_translate(self.s, m)
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients at every translate of the `2^s` grid by one inverse FFT.
///
/// The half-shift phase is applied per frequency, after which the sum is
/// periodic in `k` modulo `2^s` and folds exactly onto the FFT buffer.
pub fn coeff_map(symbol: &SparseSymbol, p: &FourierProvider, s: u32) -> Result<CoefficientMap> {
    if s < 2 {
        return Err(Error::invalid(format!(
            "grid exponent s must be at least 2, got {s}"
        )));
    }
    let sigma = half_shift(symbol.index());
    let terms = symbol.entries().filter_map(|(k, v)| {
        let c = p.coefficient(k);
        if c.re == 0.0 && c.im == 0.0 {
            return None;
        }
        let t = -(f64::from(k[0]) * sigma[0] + f64::from(k[1]) * sigma[1]);
        Some((k, c * v * unit_phase(t)))
    });
    let values = fold_inverse(s, terms)?;
    Ok(CoefficientMap {
        index: *symbol.index(),
        s,
        provider: p.describe(),
        values,
    })
}

/// Which `(i, ℓ)` contribute to an edge map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShearSelection {
    pub orientations: Vec<Orientation>,
    /// `None` selects `|ℓ| ≤ 2^{j/2} - 1`.
    pub shears: Option<RangeInclusive<i64>>,
}

impl Default for ShearSelection {
    fn default() -> Self {
        Self {
            orientations: Orientation::BOTH.to_vec(),
            shears: None,
        }
    }
}

impl ShearSelection {
    pub fn single(orientation: Orientation, shear: i64) -> Self {
        Self {
            orientations: vec![orientation],
            shears: Some(shear..=shear),
        }
    }

    /// Indices in reduction order: orientations as listed (horizontal first
    /// by default), shears ascending.
    pub fn indices(&self, j: u32) -> Result<Vec<ShearletIndex>> {
        let half = 1i64 << (j / 2);
        let range = self.shears.clone().unwrap_or(-(half - 1)..=half - 1);
        let mut orientations = self.orientations.clone();
        orientations.sort_by_key(|o| o.code());
        orientations.dedup();
        let mut out = Vec::new();
        for o in orientations {
            for l in range.clone() {
                out.push(ShearletIndex::new(o, j, l)?);
            }
        }
        Ok(out)
    }
}

/// Pixelwise `Σ_{i,ℓ} |⟨f, ψ^{(i)}_{j,ℓ,y}⟩|`.
#[derive(Clone, Debug)]
pub struct EdgeMap {
    scale: u32,
    s: u32,
    provider: String,
    indices: Vec<ShearletIndex>,
    values: Vec<f64>,
}

impl EdgeMap {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn grid_exponent(&self) -> u32 {
        self.s
    }

    pub fn size(&self) -> usize {
        1 << self.s
    }

    pub fn provider(&self) -> &str {
        &self.provider
    }

    pub fn indices(&self) -> &[ShearletIndex] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, m: [usize; 2]) -> f64 {
        self.values[m[1] * self.size() + m[0]]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Edge map with symbols sampled on the fly.
pub fn edge_map(
    g: &Window,
    j: u32,
    s: u32,
    provider: &FourierProvider,
    selection: &ShearSelection,
) -> Result<EdgeMap> {
    edge_map_with(j, s, provider, selection, |idx| sample_symbol(g, idx))
}

/// Edge map with symbols supplied by `symbol_for` (e.g. from a cache).
///
/// Maps are computed in parallel batches and accumulated in the fixed
/// selection order, so the result does not depend on the thread count.
pub fn edge_map_with<F>(
    j: u32,
    s: u32,
    provider: &FourierProvider,
    selection: &ShearSelection,
    symbol_for: F,
) -> Result<EdgeMap>
where
    F: Fn(&ShearletIndex) -> Result<SparseSymbol> + Sync,
{
    let indices = selection.indices(j)?;
    let n = crate::fold::check_grid(s, crate::system::DEFAULT_MEMORY_BUDGET)?;
    if s < 2 {
        return Err(Error::invalid(format!(
            "grid exponent s must be at least 2, got {s}"
        )));
    }
    let mut values = vec![0.0; n * n];
    let batch = rayon::current_num_threads().max(1);
    for chunk in indices.chunks(batch) {
        let maps: Vec<Vec<f64>> = chunk
            .par_iter()
            .map(|idx| {
                let symbol = symbol_for(idx)?;
                Ok(coeff_map(&symbol, provider, s)?.magnitudes())
            })
            .collect::<Result<_>>()?;
        for m in maps {
            for (acc, v) in values.iter_mut().zip(m) {
                *acc += v;
            }
        }
    }
    Ok(EdgeMap {
        scale: j,
        s,
        provider: provider.describe(),
        indices,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{EllipseRegion, FourierTable};
    use std::f64::consts::PI;

    fn ellipse() -> FourierProvider {
        FourierProvider::RotatedEllipse(EllipseRegion::new(1.0, 3.0, PI / 6.0).unwrap())
    }

    fn symbol(o: Orientation, j: u32, l: i64) -> SparseSymbol {
        sample_symbol(&Window::standard(), &ShearletIndex::new(o, j, l).unwrap()).unwrap()
    }

    fn max_rel_dev(sym: &SparseSymbol, p: &FourierProvider, s: u32) -> f64 {
        let map = coeff_map(sym, p, s).unwrap();
        let n = map.size();
        let scale = map.max_abs();
        let mut worst: f64 = 0.0;
        for m2 in 0..n {
            for m1 in 0..n {
                let d = coeff_direct(sym, p, map.translate([m1, m2]));
                worst = worst.max((d - map.get([m1, m2])).norm());
            }
        }
        worst / scale
    }

    #[test]
    fn fold_matches_direct_sum() {
        let p = ellipse();
        for o in Orientation::BOTH {
            for (j, s) in [(4u32, 5u32), (6, 5), (6, 6), (8, 6)] {
                let half = 1i64 << (j / 2);
                for l in [0, 3.min(half), -half + 1] {
                    let dev = max_rel_dev(&symbol(o, j, l), &p, s);
                    assert!(dev < 1e-10, "{o} j={j} l={l} s={s}: {dev:e}");
                }
            }
        }
    }

    #[test]
    fn single_term_and_zero_provider() {
        let sym = symbol(Orientation::Horizontal, 6, 1);
        let zero = FourierProvider::zero();
        assert_eq!(
            coeff_direct(&sym, &zero, [0.0, 0.0]),
            Complex64::new(0.0, 0.0)
        );
        assert!(coeff_map(&sym, &zero, 5).unwrap().max_abs() == 0.0);

        let (k0, v0) = sym.entries().nth(17).unwrap();
        let table = FourierTable::from_entries([(k0, Complex64::new(1.0, 0.0))]).unwrap();
        let p = FourierProvider::Table(table);
        let y = [0.125, -0.25];
        let yt = shifted_translate(y, sym.index());
        let t = f64::from(k0[0]) * yt[0] + f64::from(k0[1]) * yt[1];
        let expect = Complex64::from_polar(v0, 2.0 * PI * t);
        assert!((coeff_direct(&sym, &p, y) - expect).norm() < 1e-15);
        assert!(coeff_map(&sym, &p, 2).is_ok());
        assert!(coeff_map(&sym, &p, 1).is_err());
    }

    #[test]
    fn annihilates_constants_and_low_frequencies() {
        let j = 6;
        let radius = (1u64 << j) as f64 / 3.0;
        let mut entries = Vec::new();
        for k1 in -25i32..=25 {
            for k2 in -25i32..=25 {
                if f64::from(k1).hypot(f64::from(k2)) <= radius {
                    entries.push(([k1, k2], Complex64::new(1.0 + f64::from(k1), 0.5)));
                }
            }
        }
        let low = FourierProvider::Table(FourierTable::from_entries(entries).unwrap());
        let constant = FourierProvider::Table(
            FourierTable::from_entries([([0, 0], Complex64::new(1.0, 0.0))]).unwrap(),
        );
        for o in Orientation::BOTH {
            for l in [-7, 0, 4] {
                let sym = symbol(o, j, l);
                assert_eq!(coeff_map(&sym, &constant, 6).unwrap().max_abs(), 0.0);
                assert_eq!(coeff_map(&sym, &low, 6).unwrap().max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn brute_force_oracle() {
        // rebuilds Ψ from the window on the full box and sums in double-double
        let g = Window::standard();
        let (j, l) = (6u32, 0i64);
        let e = EllipseRegion::new(1.0, 3.0, PI / 6.0).unwrap();
        let big = f64::from(1u32 << j);
        let half = big.sqrt();
        let box_r = 2 * (1i32 << j);
        let sigma = 1.0 / (2.0 * big);
        let two_sum = |a: f64, b: f64| {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        };
        let (mut hi_re, mut lo_re, mut hi_im, mut lo_im) = (0.0, 0.0, 0.0, 0.0);
        for k1 in -box_r..=box_r {
            for k2 in -box_r..=box_r {
                let (x1, x2) = (f64::from(k1), f64::from(k2));
                let psi = (g.eval(x1 / (2.0 * big)) - g.eval(x1 / big))
                    * g.eval(x2 / half - l as f64 * x1 / big);
                if psi == 0.0 {
                    continue;
                }
                let c = crate::symbols::ellipse_ft(&e, [x1, x2]);
                let phase = -2.0 * PI * x1 * sigma;
                let w = c * psi;
                let (s, err) = two_sum(hi_re, w * phase.cos());
                hi_re = s;
                lo_re += err;
                let (s, err) = two_sum(hi_im, w * phase.sin());
                hi_im = s;
                lo_im += err;
            }
        }
        let oracle = Complex64::new(hi_re + lo_re, hi_im + lo_im);
        let sym = symbol(Orientation::Horizontal, j, l);
        let p = FourierProvider::RotatedEllipse(e);
        let direct = coeff_direct(&sym, &p, [0.0, 0.0]);
        assert!(
            (direct - oracle).norm() < 1e-10 * oracle.norm().max(1e-300),
            "{direct} {oracle}"
        );
        let map = coeff_map(&sym, &p, 6).unwrap();
        assert!((map.get(grid_cell(6, [0.0, 0.0])) - oracle).norm() < 1e-10 * oracle.norm());
    }

    #[test]
    fn reflection_symmetry_of_real_even_data() {
        // real even c_k and Ψ give a real map with coeff(y) = coeff(2σ - y)
        let p = ellipse();
        let s = 6;
        for o in Orientation::BOTH {
            let sym = symbol(o, 6, 2);
            let map = coeff_map(&sym, &p, s).unwrap();
            let scale = map.max_abs();
            let sigma = half_shift(sym.index());
            let n = map.size();
            for m2 in 0..n {
                for m1 in 0..n {
                    let v = map.get([m1, m2]);
                    assert!(v.im.abs() < 1e-10 * scale);
                    let y = map.translate([m1, m2]);
                    let mirror = grid_cell(s, [2.0 * sigma[0] - y[0], 2.0 * sigma[1] - y[1]]);
                    assert!((map.get(mirror).norm() - v.norm()).abs() < 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn edge_map_reductions() {
        let g = Window::standard();
        let p = ellipse();
        let zero = edge_map(
            &g,
            6,
            6,
            &FourierProvider::zero(),
            &ShearSelection::default(),
        )
        .unwrap();
        assert_eq!(zero.total(), 0.0);
        assert_eq!(zero.indices().len(), 2 * 15);

        let one = edge_map(
            &g,
            6,
            6,
            &p,
            &ShearSelection::single(Orientation::Vertical, -3),
        )
        .unwrap();
        let mags = coeff_map(&symbol(Orientation::Vertical, 6, -3), &p, 6)
            .unwrap()
            .magnitudes();
        assert_eq!(one.values(), &mags[..]);

        let full = edge_map(&g, 6, 6, &p, &ShearSelection::default()).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = single
            .install(|| edge_map(&g, 6, 6, &p, &ShearSelection::default()))
            .unwrap();
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(5)
            .build()
            .unwrap();
        let parallel = multi
            .install(|| edge_map(&g, 6, 6, &p, &ShearSelection::default()))
            .unwrap();
        assert_eq!(full.values(), serial.values());
        assert_eq!(serial.values(), parallel.values());
    }

    #[test]
    fn selection_order() {
        let sel = ShearSelection {
            orientations: vec![Orientation::Vertical, Orientation::Horizontal],
            shears: Some(-1..=1),
        };
        let idx = sel.indices(4).unwrap();
        let got: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        assert_eq!(idx.len(), 6);
        assert_eq!(idx[0].orientation(), Orientation::Horizontal);
        assert_eq!(idx[0].shear(), -1);
        assert_eq!(idx[5].orientation(), Orientation::Vertical);
        assert!(got.windows(2).all(|w| w[0] != w[1]));
        let too_wide = ShearSelection {
            orientations: vec![Orientation::Horizontal],
            shears: Some(-5..=5),
        };
        assert!(too_wide.indices(4).is_err());
    }
}
