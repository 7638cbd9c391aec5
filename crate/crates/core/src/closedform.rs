//! Closed forms of the three integrals.
//!
//! ```text
//! Δ(a)  = ∫₀^∞ ln(x² + a²) / cosh(πx) dx = 2 ln(√2 Γ(|a|/2 + 3/4) / Γ(|a|/2 + 1/4))
//! V     = ∫₀^∞ ln(x) sech(x) dx          = π ln(2π^{3/2} / Γ(1/4)²)
//! I(a,b)= ∫₀^∞ ln(ax) sech(bx) dx        = (π/b) ln(2√a π^{3/2} / (√b Γ(1/4)²))
//! ```
//!
//! Every logarithm of a product is expanded into a sum of logarithms.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::specfun::{digamma, gamma_ratio_log, ln_gamma};

/// Parameters `(a, b)` of `∫₀^∞ ln(ax) sech(bx) dx`, both real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalmstenParams {
    a: f64,
    b: f64,
}

impl MalmstenParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain("MalmstenParams.a", a, "finite and > 0"));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::domain("MalmstenParams.b", b, "finite and > 0"));
        }
        Ok(MalmstenParams { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Δ(a), finite for every real `a` including 0; depends on `|a|` only.
pub fn delta_closed(a: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::domain("delta_closed", a, "finite"));
    }
    let half = 0.5 * a.abs();
    Ok(LN_2 + 2.0 * gamma_ratio_log(half + 0.75, half + 0.25)?)
}

/// ln 2 + (3/2) ln π − 2 ln Γ(1/4), the logarithm shared by V and I(a, b).
fn vardi_log() -> f64 {
    let lg_quarter = ln_gamma(0.25).expect("0.25 is in the domain of ln_gamma");
    LN_2 + 1.5 * PI.ln() - 2.0 * lg_quarter
}

/// `∫₀^∞ ln(x) sech(x) dx = π ln(2π^{3/2}/Γ(1/4)²) ≈ −0.5208856`.
pub fn vardi_b_constant() -> f64 {
    PI * vardi_log()
}

/// `∫₀^∞ ln(ax) sech(bx) dx` for real `a, b > 0`.
pub fn malmsten_c(params: MalmstenParams) -> f64 {
    let MalmstenParams { a, b } = params;
    (PI / b) * (vardi_log() + 0.5 * a.ln() - 0.5 * b.ln())
}

/// dΔ/da = ψ(a/2 + 3/4) − ψ(a/2 + 1/4) for a > 0.
pub fn delta_derivative(a: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain("delta_derivative", a, "finite and > 0"));
    }
    let half = 0.5 * a;
    Ok(digamma(half + 0.75)? - digamma(half + 0.25)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 30-digit reference values.
    const DELTA_0: f64 = -1.476_335_965_973_618_9;
    const DELTA_1: f64 = 0.090_041_604_853_728_24;
    const VARDI: f64 = -0.520_885_612_601_976_9;

    #[test]
    fn delta_examples() {
        let d = delta_closed(0.5).unwrap();
        assert!((d - (2.0 / PI).ln()).abs() < 1e-15, "{d}");
        assert_eq!(delta_closed(-1.0).unwrap(), delta_closed(1.0).unwrap());
        assert!((delta_closed(0.0).unwrap() - DELTA_0).abs() < 1e-14);
        assert!((delta_closed(1.0).unwrap() - DELTA_1).abs() < 1e-14);

        // Both printed forms of Δ(0): 2 ln(√2 Γ(3/4)/Γ(1/4)) and 2 ln(2π/Γ(1/4)²).
        let lg = ln_gamma(0.25).unwrap();
        let second = 2.0 * ((2.0 * PI).ln() - 2.0 * lg);
        assert!((delta_closed(0.0).unwrap() - second).abs() < 1e-14);
    }

    #[test]
    fn delta_rejects_non_finite() {
        assert!(delta_closed(f64::NAN).is_err());
        assert!(delta_closed(f64::INFINITY).is_err());
        assert!(delta_closed(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn vardi_forms_agree() {
        let v = vardi_b_constant();
        assert!((v - VARDI).abs() < 1e-15);
        let first =
            PI * (0.5 * (2.0 * PI).ln() + ln_gamma(0.75).unwrap() - ln_gamma(0.25).unwrap());
        assert!((v - first).abs() < 1e-13);
        let via_delta = PI * (delta_closed(0.0).unwrap() / 2.0 + 0.5 * PI.ln());
        assert!((v - via_delta).abs() < 1e-13);
    }

    #[test]
    fn malmsten_examples() {
        let p = |a, b| MalmstenParams::new(a, b).unwrap();
        assert!((malmsten_c(p(1.0, 1.0)) - vardi_b_constant()).abs() < 1e-15);
        for c in [0.5, 2.0, 3.0] {
            let v = malmsten_c(p(c, c));
            assert!((v - vardi_b_constant() / c).abs() < 1e-14, "{c}");
        }
        let v = malmsten_c(p(4.0, 1.0));
        assert!((v - (vardi_b_constant() + PI / 2.0 * 4f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        for (a, b) in [
            (0.0, 1.0),
            (1.0, 0.0),
            (-1.0, 1.0),
            (1.0, -2.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(MalmstenParams::new(a, b).is_err(), "{a} {b}");
        }
    }

    #[test]
    fn derivative_examples() {
        let d = delta_derivative(0.5).unwrap();
        assert!((d - 2.0 * LN_2).abs() < 1e-14);
        // ψ(5/4) − ψ(3/4) = 4 − π
        assert!((delta_derivative(1.0).unwrap() - (4.0 - PI)).abs() < 1e-14);
        let mut last = f64::INFINITY;
        for a in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let d = delta_derivative(a).unwrap();
            assert!(d > 0.0 && d < last, "{a}: {d}");
            last = d;
        }
        assert!(delta_derivative(0.0).is_err());
        assert!(delta_derivative(-1.0).is_err());
    }

    #[test]
    fn large_a_approaches_ln_a() {
        // Δ(a) − ln a = 1/(8a²) + O(a⁻⁴)
        for a in [50.0, 100.0, 1000.0] {
            let excess = delta_closed(a).unwrap() - f64::ln(a);
            assert!(excess.abs() <= 1.0 / (2.0 * a * a), "{a}: {excess}");
            assert!(
                (excess - 1.0 / (8.0 * a * a)).abs() <= 1e-3 / (a * a),
                "{a}: {excess}"
            );
        }
    }
}
