//! Bessel function of the first kind, order one.

use std::f64::consts::{FRAC_2_PI, PI};

/// Below this argument the power series is used, above it the Hankel
/// amplitude–phase expansion.
const SERIES_LIMIT: f64 = 12.0;

/// `J₁(x)`, odd in `x`.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x < SERIES_LIMIT {
        x * series_j1_over_x(x)
    } else {
        hankel_j1(x)
    }
}

/// `J₁(x)/x`, even in `x`, equal to `1/2` at the origin.
pub fn bessel_j1_over_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        series_j1_over_x(ax)
    } else {
        hankel_j1(ax) / ax
    }
}

// J₁(x)/x = ½ Σ_m (-x²/4)^m / (m! (m+1)!)
fn series_j1_over_x(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 0.5;
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && m * m > -q {
            return sum;
        }
    }
}

// J₁(x) = √(2/(πx)) (P cos χ - Q sin χ), χ = x - 3π/4, with the asymptotic
// series truncated at its smallest term.
fn hankel_j1(x: f64) -> f64 {
    const MU: f64 = 4.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut n = 0u32;
    loop {
        n += 1;
        let odd = f64::from(2 * n - 1);
        let next = term * (MU - odd * odd) / (8.0 * f64::from(n) * x);
        if next.abs() >= term.abs() || next.abs() < 1e-17 {
            break;
        }
        term = next;
        // terms alternate P, Q, P, ... with signs +, +, -, -, +, +, ...
        let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if n % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
    }
    let chi = x - 0.75 * PI;
    let (s, c) = chi.sin_cos();
    (FRAC_2_PI / x).sqrt() * (p * c - q * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_bigint::Sign;

    const BITS: u32 = 480;

    fn decode(x: f64) -> (u64, i32) {
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1 << 52) - 1);
        let mant = if exp == 0 {
            frac << 1
        } else {
            frac | (1 << 52)
        };
        (mant, exp - 1075)
    }

    fn shift(v: BigInt, by: i32) -> BigInt {
        if by >= 0 {
            v << by as u32
        } else {
            v >> (-by) as u32
        }
    }

    fn to_f64(v: &BigInt) -> f64 {
        let (sign, mag) = v.clone().into_parts();
        let top = (BigInt::from_biguint(Sign::Plus, mag) >> (BITS - 62)).to_string();
        let f = top.parse::<f64>().unwrap() * 2f64.powi(-62);
        if sign == Sign::Minus {
            -f
        } else {
            f
        }
    }

    /// Power series in 480-bit fixed point: Σ (-1)^m (x/2)^{2m+1}/(m!(m+1)!).
    fn series_oracle(x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let (mant, exp) = decode(x);
        let half_exp = exp - 1;
        let mant2 = BigInt::from(mant) * BigInt::from(mant);
        let mut term = shift(BigInt::from(mant), half_exp + BITS as i32);
        let mut sum = term.clone();
        let mut m: u64 = 0;
        loop {
            m += 1;
            term = shift(term * &mant2, 2 * half_exp) / BigInt::from(m * (m + 1));
            term = -term;
            sum += &term;
            if (m as f64) > x && term.bits() < 8 {
                break;
            }
        }
        to_f64(&sum)
    }

    /// Trapezoid rule on J₁(x) = (1/2π) ∫_{-π}^{π} cos(τ - x sin τ) dτ.
    fn integral_oracle(x: f64) -> f64 {
        let n = (1.2 * x) as usize + 128;
        let h = 2.0 * PI / n as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let t = -PI + i as f64 * h;
                (t - x * t.sin()).cos()
            })
            .sum();
        sum / n as f64
    }

    #[test]
    fn oracle_self_check() {
        // the two oracles agree where both are cheap
        for x in [0.5, 1.0, 7.3, 19.0, 42.0] {
            assert!((series_oracle(x) - integral_oracle(x)).abs() < 1e-13, "{x}");
        }
    }

    #[test]
    fn examples() {
        assert_eq!(bessel_j1(0.0), 0.0);
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j1(1.0) - series_oracle(1.0)).abs() < 1e-14);
        assert!(bessel_j1(3.831_706_0).abs() < 1e-6);
        assert!((bessel_j1(-2.5) + bessel_j1(2.5)).abs() == 0.0);
        assert_eq!(bessel_j1_over_x(0.0), 0.5);
    }

    #[test]
    fn agrees_with_series_on_small_arguments() {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let x = 50.0 * i as f64 / 999.0;
            worst = worst.max((bessel_j1(x) - series_oracle(x)).abs());
        }
        assert!(worst < 1e-8, "worst {worst:e}");
    }

    #[test]
    fn agrees_with_integral_on_large_arguments() {
        let mut worst: f64 = 0.0;
        for i in 0..300 {
            let x = 50.0 + 2950.0 * i as f64 / 299.0;
            worst = worst.max((bessel_j1(x) - integral_oracle(x)).abs());
        }
        assert!(worst < 1e-7, "worst {worst:e}");
        for x in [3000.0, 4000.0, 5000.0] {
            assert!((bessel_j1(x) - integral_oracle(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn ratio_near_origin() {
        for x in [1e-300f64, 1e-20, 1e-8, 1e-3] {
            let taylor = 0.5 - x * x / 16.0 + x.powi(4) / 384.0;
            assert!((bessel_j1_over_x(x) - taylor).abs() < 1e-16);
        }
        for x in [0.3, 5.0, 11.99, 12.01, 30.0] {
            assert!((bessel_j1_over_x(x) - bessel_j1(x) / x).abs() < 1e-15);
        }
    }

    #[test]
    fn first_zero() {
        // bisection on the series oracle
        let (mut lo, mut hi) = (3.5, 4.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if series_oracle(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 3.831_706).abs() < 1e-6);
        assert!(bessel_j1(lo).abs() < 1e-12);
    }
}
