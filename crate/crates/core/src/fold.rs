//! Periodic folding of lattice sums onto a dyadic grid.
//!
//! For the grid `y(m) = (m - 2^{s-1}) 2^{-s}` the exponential
//! `e^{2πi kᵀ y(m)}` only depends on `k mod 2^s`, so any finite sum
//! `Σ_k w_k e^{2πi kᵀ y(m)}` equals one inverse DFT of the buffer obtained by
//! adding every `w_k` into cell `k mod 2^s`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::system::DEFAULT_MEMORY_BUDGET;

/// Largest grid exponent accepted by [`fold_inverse`].
pub const MAX_GRID_EXPONENT: u32 = 14;

pub(crate) fn check_grid(s: u32, budget: u64) -> Result<usize> {
    if s < 1 {
        return Err(Error::invalid("grid exponent s must be at least 1"));
    }
    let required = 16u64.saturating_mul(1u64 << (2 * s.min(31)));
    if s > MAX_GRID_EXPONENT || required > budget {
        return Err(Error::Resource {
            what: format!("2^{s} x 2^{s} grid"),
            required,
            budget,
        });
    }
    Ok(1usize << s)
}

/// Evaluates `Σ_k w_k e^{2πi kᵀ y(m)}` for every `m ∈ {0..2^s-1}²`.
/// Output is row-major with `m₂` as the row index.
pub fn fold_inverse(
    s: u32,
    terms: impl Iterator<Item = ([i32; 2], Complex64)>,
) -> Result<Vec<Complex64>> {
    let n = check_grid(s, DEFAULT_MEMORY_BUDGET)?;
    let mask = n as i64 - 1;
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, w) in terms {
        let (k1, k2) = (i64::from(k[0]), i64::from(k[1]));
        // e^{2πi k (m - n/2)/n} = e^{2πi k m/n} (-1)^k
        let w = if (k1 + k2) & 1 == 0 { w } else { -w };
        let u1 = (k1 & mask) as usize;
        let u2 = (k2 & mask) as usize;
        buf[u2 * n + u1] += w;
    }
    inverse_dft_2d(&mut buf, n);
    Ok(buf)
}

/// Unnormalized 2-D inverse DFT in place, row-major `n × n`.
fn inverse_dft_2d(buf: &mut [Complex64], n: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_inverse(n);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for row in buf.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for (r, v) in col.iter_mut().enumerate() {
            *v = buf[r * n + c];
        }
        fft.process_with_scratch(&mut col, &mut scratch);
        for (r, v) in col.iter().enumerate() {
            buf[r * n + c] = *v;
        }
    }
}
