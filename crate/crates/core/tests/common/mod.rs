//! Oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::{BigInt, Sign};

const BITS: u32 = 480;

fn decode(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1 << 52) - 1);
    let mant = if exp == 0 { frac << 1 } else { frac | (1 << 52) };
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

/// `J₁(x) = Σ (-1)^m (x/2)^{2m+1}/(m!(m+1)!)` summed in 480-bit fixed point,
/// exact up to the final rounding for `x ≥ 0`.
pub fn bessel_j1_series(x: f64) -> f64 {
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
        term = -(shift(term * &mant2, 2 * half_exp) / BigInt::from(m * (m + 1)));
        sum += &term;
        if (m as f64) > x && term.bits() < 8 {
            break;
        }
    }
    to_f64(&sum)
}
