//! Log-gamma, digamma and log-gamma differences on the positive real axis.
//!
//! `ln_gamma` combines three pieces:
//!
//! * on `[0.5, 2.5)` a Taylor expansion of `ln Γ(2 + ε)` whose coefficients are
//!   `(−1)^k (ζ(k) − 1) / k` (with `ln Γ(1 + ε) = ln Γ(2 + ε) − ln(1 + ε)`), so
//!   both zeros x = 1 and x = 2 come out exact;
//! * below 0.5 one upward step `ln Γ(x) = ln Γ(x + 1) − ln x`;
//! * on `[2.5, 10)` downward recurrence into the Taylor range, and from 10 on
//!   the Stirling series.
//!
//! `digamma` shifts small arguments up to 6 with `ψ(x) = ψ(x + 1) − 1/x` and
//! then uses the asymptotic expansion in `1/x²`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ½ ln(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// ζ(k) − 1 for k = 2..=30.
const ZETA_MINUS_ONE: [f64; 29] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
];

/// Stirling series coefficients B₂ₖ / (2k(2k − 1)), k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Digamma asymptotic coefficients B₂ₖ / (2k), k = 1..=10.
const DIGAMMA_ASYMP: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43_867.0 / 14_364.0,
    -174_611.0 / 6600.0,
];

const STIRLING_MIN: f64 = 10.0;
const DIGAMMA_ASYMP_MIN: f64 = 6.0;

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(what, x, "finite and > 0"))
    }
}

/// `ε(1 − γ) + Σ_{k≥2} (−1)^k (ζ(k) − 1) εᵏ / k`, which equals
/// `ln Γ(2 + ε)` for |ε| ≤ ½.
fn ln_gamma_two_plus(eps: f64) -> f64 {
    let mut acc = 0.0;
    // Horner from the highest power down; coefficient of ε^k is c_k.
    for (i, &z) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if (i + 2) % 2 == 0 { 1.0 } else { -1.0 };
        acc = (acc + sign * z / k) * eps;
    }
    // acc now holds Σ c_k ε^{k-1}; one more factor of ε.
    acc * eps + (1.0 - EULER_GAMMA) * eps
}

/// Sum of the Stirling correction terms Σ cₖ / x^{2k−1}.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let eps = x - 1.0;
        return ln_gamma_two_plus(eps) - eps.ln_1p();
    }
    if x < 2.5 {
        return ln_gamma_two_plus(x - 2.0);
    }
    if x < STIRLING_MIN {
        // ln Γ(x) = ln Γ(y) + ln(y (y+1) ... (x-1)), y ∈ [1.5, 2.5)
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return ln_gamma_two_plus(y - 2.0) + prod.ln();
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

/// ψ₀(x) = d/dx ln Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let mut shift = 0.0;
    let mut y = x;
    while y < DIGAMMA_ASYMP_MIN {
        shift += 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    for &c in DIGAMMA_ASYMP.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv2;
    Ok(y.ln() - 0.5 / y - series - shift)
}

/// `ln(Γ(p) / Γ(q))` without forming either gamma value.
///
/// When both arguments are large the leading Stirling terms are differenced
/// analytically, `(p−½)ln p − (q−½)ln q = (p−q) ln q + (p−½) ln(1 + (p−q)/q)`,
/// so nearby arguments do not cancel catastrophically.
pub fn gamma_ratio_log(p: f64, q: f64) -> Result<f64> {
    check_positive("gamma_ratio_log", p)?;
    check_positive("gamma_ratio_log", q)?;
    if p == q {
        return Ok(0.0);
    }
    if p.min(q) >= STIRLING_MIN {
        let d = p - q;
        let lead = d * q.ln() + (p - 0.5) * (d / q).ln_1p() - d;
        return Ok(lead + (stirling_tail(p) - stirling_tail(q)));
    }
    Ok(ln_gamma_unchecked(p) - ln_gamma_unchecked(q))
}
