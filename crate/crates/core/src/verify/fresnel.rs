//! Fresnel-type integrals `Fc(x) = ∫₀ˣ cos v/√v dv`, `Fs(x) = ∫₀ˣ sin v/√v dv`
//! and the inequalities between `F± = Fc ± Fs`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::json;

use super::quad::{integrate, QuadratureSpec};
use super::report::{ReportPoint, VerificationReport};
use crate::error::{Error, Result};

/// Default accuracy of the Fresnel evaluations.
pub const FRESNEL_SPEC: QuadratureSpec = QuadratureSpec::new(1e-10);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FresnelValue {
    pub fc: f64,
    pub fs: f64,
    /// Combined absolute error estimate of both integrals.
    pub error: f64,
}

impl FresnelValue {
    pub fn plus(&self) -> f64 {
        self.fc + self.fs
    }

    pub fn minus(&self) -> f64 {
        self.fc - self.fs
    }
}

/// Both integrals at `x ≥ 0`, via `v = t²`: `Fc(x) = 2∫₀^{√x} cos t² dt`.
/// The `t` range is cut near the zeros `√(kπ)` of `sin t²` and each piece is
/// integrated adaptively in a local variable that keeps the phase accurate.
pub fn fresnel(x: f64, spec: &QuadratureSpec) -> Result<FresnelValue> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!(
            "Fresnel argument must be >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(FresnelValue {
            fc: 0.0,
            fs: 0.0,
            error: 0.0,
        });
    }
    let top = x.sqrt();
    let pieces = (x / PI).floor() as usize + 1;
    let (mut fc, mut fs, mut error) = (0.0, 0.0, 0.0);
    for m in 0..pieces {
        let (lo, delta) = piece_start(m);
        let hi = ((m + 1) as f64 * PI).sqrt().min(top);
        if hi <= lo {
            continue;
        }
        // t = lo + u, t² = mπ + δ + u(2 lo + u); the sign of (-1)^m is exact
        let sign = if m % 2 == 0 { 2.0 } else { -2.0 };
        let phase = move |u: f64| delta + u * (2.0 * lo + u);
        // tolerance shared in proportion to piece length
        let piece_spec = spec.with_tolerance(0.5 * spec.abs_tol * (hi - lo) / top);
        let c = integrate(|u| sign * phase(u).cos(), 0.0, hi - lo, &piece_spec)?;
        let s = integrate(|u| sign * phase(u).sin(), 0.0, hi - lo, &piece_spec)?;
        fc += c.value;
        fs += s.value;
        error += c.error + s.error;
    }
    Ok(FresnelValue { fc, fs, error })
}

// `√(mπ)` and `√(mπ)² - mπ`, the latter without the cancellation of a
// naive square at large m.
fn piece_start(m: usize) -> (f64, f64) {
    const PI_LO: f64 = 1.224_646_799_147_353_2e-16;
    if m == 0 {
        return (0.0, 0.0);
    }
    let mf = m as f64;
    let t = (mf * PI).sqrt();
    let p = mf * PI;
    let p_err = mf.mul_add(PI, -p);
    let delta = t.mul_add(t, -p) - p_err - mf * PI_LO;
    (t, delta)
}

pub fn fresnel_fc(x: f64) -> Result<f64> {
    fresnel(x, &FRESNEL_SPEC).map(|v| v.fc)
}

pub fn fresnel_fs(x: f64) -> Result<f64> {
    fresnel(x, &FRESNEL_SPEC).map(|v| v.fs)
}

/// Checks `F⁺ > F⁻ > 0` on `(0, 3π/4)`, `F⁺ > (1+√2)|F⁻|` on `[3π/4, upper]`
/// and the numeric brackets at the extremal points.
pub fn check_fresnel_lemma(
    step: f64,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::invalid(format!(
            "grid step must lie in (0, 0.01], got {step}"
        )));
    }
    let split = 0.75 * PI;
    if !(upper > split) {
        return Err(Error::invalid("upper end must exceed 3pi/4"));
    }
    let mut report = VerificationReport::new(
        "fresnel",
        json!({"step": step, "upper": upper, "abs_tol": spec.abs_tol}),
    );
    let n = (upper / step).floor() as usize;
    let mut xs: Vec<f64> = (1..=n).map(|i| i as f64 * step).collect();
    xs.push(split);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let values: Vec<FresnelValue> = xs
        .par_iter()
        .map(|&x| fresnel(x, spec))
        .collect::<Result<_>>()?;

    let ratio = 1.0 + 2f64.sqrt();
    let mut minus_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst_err: f64 = 0.0;
    for (&x, v) in xs.iter().zip(&values) {
        worst_err = worst_err.max(v.error);
        if x < split {
            report.push(ReportPoint::above(
                json!({"test": "F+ > F-", "x": x}),
                v.plus(),
                v.minus(),
            ));
            report.push(ReportPoint::above(
                json!({"test": "F- > 0", "x": x}),
                v.minus(),
                0.0,
            ));
        } else {
            report.push(ReportPoint::above(
                json!({"test": "F+ > (1+sqrt2)|F-|", "x": x}),
                v.plus(),
                ratio * v.minus().abs(),
            ));
            report.push(ReportPoint::between(
                json!({"test": "F- in (-0.69, 0.53)", "x": x}),
                v.minus(),
                -0.69,
                0.53,
            ));
            minus_range = (minus_range.0.min(v.minus()), minus_range.1.max(v.minus()));
        }
    }

    let at = |x: f64| fresnel(x, spec);
    let v0 = at(split)?;
    let v1 = at(1.75 * PI)?;
    report.push(ReportPoint::between(
        json!({"test": "F+(3pi/4)"}),
        v0.plus(),
        3.36,
        3.37,
    ));
    report.push(ReportPoint::above(
        json!({"test": "F+(7pi/4)"}),
        v1.plus(),
        1.91,
    ));
    report.push(ReportPoint::above(
        json!({"test": "F-(3pi/4)"}),
        v0.minus(),
        0.14,
    ));
    report.push(ReportPoint::below(
        json!({"test": "quadrature error"}),
        worst_err,
        spec.abs_tol,
    ));
    report.fit("F+(3pi/4)", v0.plus());
    report.fit("F+(7pi/4)", v1.plus());
    report.fit("F-(3pi/4)", v0.minus());
    report.fit("min F- on [3pi/4, upper]", minus_range.0);
    report.fit("max F- on [3pi/4, upper]", minus_range.1);
    report.fit("max quadrature error", worst_err);
    Ok(report)
}
