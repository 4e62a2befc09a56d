//! One-dimensional window functions.
//!
//! A window `g` is an even bump supported in `(-2/3, 2/3)` whose integer
//! translates sum to one. It equals one on `[-1/3, 1/3]` and falls off
//! monotonically on `[1/3, 2/3]`. The difference window
//! `g̃(x) = g(x/2) - g(x)` is the radial band-pass factor of every
//! shearlet symbol.

use serde::Serialize;

use crate::error::{Error, Result};

/// Right end of the support of a window.
pub const SUPPORT_RADIUS: f64 = 2.0 / 3.0;

/// Right end of the plateau where a window equals one.
pub const PLATEAU_RADIUS: f64 = 1.0 / 3.0;

/// Declared differentiability of a window. Purely descriptive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum WindowFamily {
    /// `g_b = s / Σ_k s(· + k)` with `s(x) = r(2/3 + x) r(2/3 - x)` and
    /// `r(x) = exp(-b / x²)` for `x > 0`.
    Exponential { b: f64 },
}

/// A window function `g ∈ 𝒲^q`. Immutable and cheap to copy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    family: WindowFamily,
    smoothness: Smoothness,
}

/// `r(x) = exp(-b/x²)` for `x > 0`, zero otherwise.
pub fn mollifier_r(b: f64, x: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::invalid(format!(
            "mollifier rate b must be positive, got {b}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::invalid(format!(
            "mollifier argument must be finite, got {x}"
        )));
    }
    Ok(mollifier_unchecked(b, x))
}

// Past this exponent exp() underflows to zero anyway; cutting off early keeps
// b/x² from overflowing to inf for subnormal x.
const EXP_CUTOFF: f64 = 745.0;

#[inline]
fn mollifier_unchecked(b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let t = b / (x * x);
    if t > EXP_CUTOFF || !t.is_finite() {
        0.0
    } else {
        (-t).exp()
    }
}

/// Builds the exponential window `g_b`.
pub fn make_exp_window(b: f64) -> Result<Window> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::invalid(format!(
            "window rate b must be positive, got {b}"
        )));
    }
    Ok(Window {
        family: WindowFamily::Exponential { b },
        smoothness: Smoothness::Infinite,
    })
}

impl Window {
    /// The window used throughout the numerical illustrations, `g_{0.025}`.
    pub fn standard() -> Self {
        make_exp_window(0.025).expect("0.025 is a valid rate")
    }

    pub fn family(&self) -> WindowFamily {
        self.family
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Rate parameter `b` of the exponential family.
    pub fn rate(&self) -> f64 {
        match self.family {
            WindowFamily::Exponential { b } => b,
        }
    }

    /// Evaluates `g(x)`. Non-finite input yields NaN.
    pub fn eval(&self, x: f64) -> f64 {
        if !x.is_finite() {
            return f64::NAN;
        }
        let ax = x.abs();
        if ax >= SUPPORT_RADIUS {
            return 0.0;
        }
        if ax <= PLATEAU_RADIUS {
            return 1.0;
        }
        match self.family {
            WindowFamily::Exponential { b } => {
                let s = bump(b, x);
                // The periodized denominator is 1-periodic; all but five shifts
                // vanish on the reduced cell [-1/2, 1/2].
                let xr = x - x.round();
                let denom: f64 = (-2..=2).map(|k| bump(b, xr + f64::from(k))).sum();
                (s / denom).clamp(0.0, 1.0)
            }
        }
    }

    /// Evaluates `g̃(x) = g(x/2) - g(x)`, supported on `1/3 < |x| < 4/3`.
    pub fn eval_tilde(&self, x: f64) -> f64 {
        (self.eval(0.5 * x) - self.eval(x)).max(0.0)
    }
}

#[inline]
fn bump(b: f64, x: f64) -> f64 {
    mollifier_unchecked(b, SUPPORT_RADIUS + x) * mollifier_unchecked(b, SUPPORT_RADIUS - x)
}

/// Free-function form of [`Window::eval_tilde`].
pub fn eval_gtilde(g: &Window, x: f64) -> f64 {
    g.eval_tilde(x)
}
