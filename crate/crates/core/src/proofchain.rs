//! Numerical checks of each rewriting of Δ(a) between the integral and its
//! closed form, plus the reductions leading to the `ln(x) sech(x)` and
//! `ln(ax) sech(bx)` results.
//!
//! In order, with `L(a) = Δ(a) − ln|a|`:
//!
//! | step                    | identity                                                        |
//! |-------------------------|-----------------------------------------------------------------|
//! | `delta_quadrature`      | `∫₀^∞ ln(x² + a²) sech(πx) dx = Δ(a)`                           |
//! | `arctan_kernel`         | `L(a) = (4/π) ∫₀^∞ x arctan(e^{−πx}) / (x² + a²) dx`            |
//! | `sech_cosine_transform` | `∫₀^∞ cos(tx) / cosh(πx) dx = ½ sech(t/2)`                       |
//! | `t_domain`              | `L(a) = ∫₀^∞ e^{−|a|t} (1 − sech(t/2)) / t dt`                    |
//! | `z_domain`              | `L(a) = −∫₀¹ z^{2a−1} (1 − z)² / ((1 + z²) ln z) dz`              |
//! | `alt_series_digamma`    | `Σ_{k≥0} (−1)^k / (k + μ) = ½ (ψ((μ+1)/2) − ψ(μ/2))`              |
//! | `p_integral`            | `−¼ ∫₀¹ [ψ(A) − ψ(A+½) − ψ(B) + ψ(B+½)] dp = −ln(ΓΓ/ΓΓ)|₀¹`       |
//! | `c_quadrature`          | `∫₀^∞ ln(ax) sech(bx) dx = I(a, b)`                              |
//! | `b_reduction.*`         | quadrature of `ln(x) sech(x)`, of `sech(x)`, and the Δ(0) route  |
//!
//! with `A = (2a + p)/4`, `B = (2a + p + 1)/4`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::closedform::{delta_closed, malmsten_c, vardi_b_constant, MalmstenParams};
use crate::error::{Error, Result};
use crate::quad::{integrate_finite, integrate_semi_infinite, QuadratureResult, ToleranceSpec};
use crate::specfun::{digamma, gamma_ratio_log};

/// Default verification tolerance for multi-stage identities.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `|a|` at or below this is rejected by the t- and z-domain checks.
pub const SMALL_A_CUTOFF: f64 = 1e-3;

/// Term budget for the alternating series.
pub const MAX_SERIES_TERMS: usize = 10_000_000;

pub const DELTA_QUADRATURE: &str = "delta_quadrature";
pub const ARCTAN_KERNEL: &str = "arctan_kernel";
pub const SECH_COSINE_TRANSFORM: &str = "sech_cosine_transform";
pub const T_DOMAIN: &str = "t_domain";
pub const Z_DOMAIN: &str = "z_domain";
pub const ALT_SERIES_DIGAMMA: &str = "alt_series_digamma";
pub const P_INTEGRAL: &str = "p_integral";
pub const C_QUADRATURE: &str = "c_quadrature";
pub const B_REDUCTION_QUADRATURE: &str = "b_reduction.quadrature";
pub const B_REDUCTION_SECH_INTEGRAL: &str = "b_reduction.sech_integral";
pub const B_REDUCTION_CLOSED_FORMS: &str = "b_reduction.closed_forms";

/// One verified identity `lhs = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|`
    pub abs_err: f64,
    /// `abs_err / max(|lhs|, |rhs|)`, 0 when both sides are 0.
    pub rel_err: f64,
    pub tol: f64,
    /// Whether every quadrature (or series) behind the report converged.
    pub converged: bool,
    /// `converged && (abs_err <= tol || rel_err <= tol)`
    pub pass: bool,
    /// Integrand evaluations plus series terms spent on this report.
    pub evaluations: usize,
    pub diagnostic: Option<String>,
}

impl IdentityReport {
    fn new(
        name: &'static str,
        params: Vec<(&'static str, f64)>,
        lhs: f64,
        rhs: f64,
        tol: f64,
        converged: bool,
        evaluations: usize,
    ) -> Self {
        let abs_err = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale == 0.0 { 0.0 } else { abs_err / scale };
        let pass = converged && (abs_err <= tol || rel_err <= tol);
        IdentityReport {
            name,
            params,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            converged,
            pass,
            evaluations,
            diagnostic: None,
        }
    }

    fn from_quadrature(
        name: &'static str,
        params: Vec<(&'static str, f64)>,
        lhs: f64,
        rhs: f64,
        tol: f64,
        quad: &QuadratureResult,
    ) -> Self {
        let mut report = Self::new(
            name,
            params,
            lhs,
            rhs,
            tol,
            quad.converged,
            quad.evaluations,
        );
        if !quad.converged {
            report.diagnostic = Some(format!(
                "quadrature did not converge (error estimate {:e} after {} evaluations)",
                quad.error_estimate, quad.evaluations
            ));
        }
        report
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }
}

/// A step not run at a grid point because its precondition excludes it.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedStep {
    pub name: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub reason: String,
}

/// A step that aborted (non-finite integrand, exhausted series budget).
#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    pub name: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    /// Executed steps, grouped by grid point in grid order, each group in
    /// proof order, followed by the grid-independent `b_reduction` steps.
    pub steps: Vec<IdentityReport>,
    pub skipped: Vec<SkippedStep>,
    pub failures: Vec<StepFailure>,
    pub overall_pass: bool,
    pub total_evaluations: usize,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(format!(
            "verification tolerance {tol} must be finite and > 0"
        )))
    }
}

fn check_finite(what: &'static str, a: f64) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, a, "finite"))
    }
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// 1 − sech(y) without cancellation for small y.
fn one_minus_sech(y: f64) -> f64 {
    let y = y.abs();
    if y > 1.0 {
        1.0 - sech(y)
    } else {
        let s = (0.5 * y).sinh();
        2.0 * s * s / y.cosh()
    }
}

/// Δ(a) − ln|a| from the closed form.
fn shifted_delta(a: f64) -> Result<f64> {
    Ok(delta_closed(a)? - a.abs().ln())
}

/// `∫₀^∞ ln(x² + a²) / cosh(πx) dx` by quadrature against `delta_closed(a)`.
pub fn check_delta_quadrature(a: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    let closed = delta_closed(a)?;
    let q = integrate_semi_infinite(
        |x: f64| 2.0 * x.hypot(a).ln() * sech(PI * x),
        &ToleranceSpec::default(),
    )?;
    Ok(IdentityReport::from_quadrature(
        DELTA_QUADRATURE,
        vec![("a", a)],
        q.value,
        closed,
        tol,
        &q,
    ))
}

/// The integration-by-parts step, with the two conjugate complex integrals
/// combined: `Δ(a) − ln|a| = (4/π) ∫₀^∞ x arctan(e^{−πx}) / (x² + a²) dx`.
pub fn check_arctan_kernel(a: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    check_finite(ARCTAN_KERNEL, a)?;
    if a == 0.0 {
        return Err(Error::domain(ARCTAN_KERNEL, a, "a != 0"));
    }
    let lhs = shifted_delta(a)?;
    let q = integrate_semi_infinite(
        |x: f64| {
            let r = x.hypot(a);
            (x / r) / r * (-PI * x).exp().atan()
        },
        &ToleranceSpec::default(),
    )?;
    let rhs = 4.0 / PI * q.value;
    Ok(IdentityReport::from_quadrature(
        ARCTAN_KERNEL,
        vec![("a", a)],
        lhs,
        rhs,
        tol,
        &q,
    ))
}

/// `∫₀^∞ cos(tx) / cosh(πx) dx = ½ sech(t/2)`.
pub fn check_sech_cosine_transform(t: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(SECH_COSINE_TRANSFORM, t, "finite and >= 0"));
    }
    let q = integrate_semi_infinite(
        |x: f64| (t * x).cos() * sech(PI * x),
        &ToleranceSpec::default(),
    )?;
    let rhs = 0.5 * sech(0.5 * t);
    Ok(IdentityReport::from_quadrature(
        SECH_COSINE_TRANSFORM,
        vec![("t", t)],
        q.value,
        rhs,
        tol,
        &q,
    ))
}

fn check_small_a(what: &'static str, a: f64) -> Result<()> {
    if a.abs() <= SMALL_A_CUTOFF {
        return Err(Error::domain(
            what,
            a,
            "|a| > 1e-3 (ln|a| cancellation below this scale)",
        ));
    }
    Ok(())
}

/// `Δ(a) − ln|a| = ∫₀^∞ e^{−|a|t} (1 − sech(t/2)) / t dt`, the integrand
/// completed by its limit 0 at t = 0.
pub fn check_t_domain(a: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    check_finite(T_DOMAIN, a)?;
    check_small_a(T_DOMAIN, a)?;
    let lhs = shifted_delta(a)?;
    let rate = a.abs();
    let q = integrate_semi_infinite(
        |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                (-rate * t).exp() * one_minus_sech(0.5 * t) / t
            }
        },
        &ToleranceSpec::default(),
    )?;
    Ok(IdentityReport::from_quadrature(
        T_DOMAIN,
        vec![("a", a)],
        lhs,
        q.value,
        tol,
        &q,
    ))
}

/// After `z = e^{−t}`: `Δ(a) − ln a = −∫₀¹ z^{2a−1} (1 − z)² / ((1 + z²) ln z) dz`
/// for a > 1e-3. The integrand tends to 0 at z = 1.
pub fn check_z_domain(a: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(Z_DOMAIN, a, "finite and > 0"));
    }
    check_small_a(Z_DOMAIN, a)?;
    let lhs = shifted_delta(a)?;
    let exponent = 2.0 * a - 1.0;
    let q = integrate_finite(
        |z: f64| {
            let w = 1.0 - z;
            if w == 0.0 {
                return 0.0;
            }
            -z.powf(exponent) * w * w / ((1.0 + z * z) * z.ln())
        },
        0.0,
        1.0,
        &ToleranceSpec::default(),
    )?;
    Ok(IdentityReport::from_quadrature(
        Z_DOMAIN,
        vec![("a", a)],
        lhs,
        q.value,
        tol,
        &q,
    ))
}

/// `∫_s^∞ dj / ((2j + μ)(2j + μ + 1))`
fn pair_tail_integral(s: f64, mu: f64) -> f64 {
    0.5 * (1.0 / (2.0 * s + mu)).ln_1p()
}

/// Sums `Σ_{k≥0} (−1)^k / (k + μ)` by pairing `k = 2j, 2j+1` into
/// `g(j) = 1 / ((2j + μ)(2j + μ + 1))`. `g` is positive, decreasing and
/// convex for `j > −μ/2`, so after `J` pairs the tail satisfies
/// `∫_J^∞ g + g(J)/2 ≤ Σ_{j≥J} g(j) ≤ ∫_{J−½}^∞ g`.
/// Returns `(estimate, bracket width, terms used)`.
fn alternating_series(mu: f64, width_target: f64) -> Result<(f64, f64, usize)> {
    let g = |j: f64| 1.0 / ((2.0 * j + mu) * (2.0 * j + mu + 1.0));
    let mut partial = 0.0;
    let mut pairs = 0usize;
    loop {
        partial += g(pairs as f64);
        pairs += 1;
        let j = pairs as f64;
        let lower = pair_tail_integral(j, mu) + 0.5 * g(j);
        let upper = pair_tail_integral(j - 0.5, mu);
        let width = upper - lower;
        if width < width_target {
            return Ok((partial + 0.5 * (lower + upper), width, 2 * pairs));
        }
        if 2 * pairs >= MAX_SERIES_TERMS {
            return Err(Error::SeriesNotConverged { terms: 2 * pairs });
        }
    }
}

/// `Σ_{k≥0} (−1)^k / (k + μ) = ½ (ψ((μ+1)/2) − ψ(μ/2))`, the digamma form of
/// the alternating series produced by the termwise integration.
pub fn check_alt_series_digamma(mu: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::domain(ALT_SERIES_DIGAMMA, mu, "finite and > 0"));
    }
    let (lhs, width, terms) = alternating_series(mu, tol / 10.0)?;
    let rhs = 0.5 * (digamma(0.5 * (mu + 1.0))? - digamma(0.5 * mu)?);
    let mut report = IdentityReport::new(
        ALT_SERIES_DIGAMMA,
        vec![("mu", mu)],
        lhs,
        rhs,
        tol,
        true,
        terms,
    );
    report.diagnostic = Some(format!("tail bracket width {width:e}"));
    Ok(report)
}

/// The `p`-integral of the four-digamma combination against the log-gamma
/// bracket it integrates to.
pub fn check_p_integral(a: f64, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(P_INTEGRAL, a, "finite and > 0"));
    }
    let quarter = |p: f64| ((2.0 * a + p) / 4.0, (2.0 * a + p + 1.0) / 4.0);
    let integrand = |p: f64| -> Result<f64> {
        let (x, y) = quarter(p);
        Ok(-0.25 * (digamma(x)? - digamma(x + 0.5)? - digamma(y)? + digamma(y + 0.5)?))
    };
    let q = integrate_finite(
        |p| integrand(p).unwrap_or(f64::NAN),
        0.0,
        1.0,
        &ToleranceSpec::default(),
    )?;

    // ln(Γ(A) Γ(B+½) / (Γ(A+½) Γ(B))) at p
    let bracket = |p: f64| -> Result<f64> {
        let (x, y) = quarter(p);
        Ok(gamma_ratio_log(x, x + 0.5)? - gamma_ratio_log(y, y + 0.5)?)
    };
    let rhs = -(bracket(1.0)? - bracket(0.0)?);
    Ok(IdentityReport::from_quadrature(
        P_INTEGRAL,
        vec![("a", a)],
        q.value,
        rhs,
        tol,
        &q,
    ))
}

/// The reduction to `∫₀^∞ ln(x) sech(x) dx`:
/// (i) its quadrature against the closed form, (ii) `∫₀^∞ sech = π/2`,
/// (iii) `π Δ(0)/2 + (π/2) ln π` against the closed form.
pub fn check_b_reduction(tol: f64) -> Result<[IdentityReport; 3]> {
    check_tol(tol)?;
    let vardi = vardi_b_constant();
    let quad_tol = ToleranceSpec::default();

    let q = integrate_semi_infinite(|x: f64| x.ln() * sech(x), &quad_tol)?;
    let direct =
        IdentityReport::from_quadrature(B_REDUCTION_QUADRATURE, vec![], q.value, vardi, tol, &q);

    let q = integrate_semi_infinite(sech, &quad_tol)?;
    let sech_integral = IdentityReport::from_quadrature(
        B_REDUCTION_SECH_INTEGRAL,
        vec![],
        q.value,
        FRAC_PI_2,
        tol,
        &q,
    );

    let route = PI * (delta_closed(0.0)? / 2.0) + FRAC_PI_2 * PI.ln();
    let closed_forms =
        IdentityReport::new(B_REDUCTION_CLOSED_FORMS, vec![], route, vardi, tol, true, 0);

    Ok([direct, sech_integral, closed_forms])
}

/// `∫₀^∞ ln(ax) sech(bx) dx` by quadrature against `malmsten_c`.
pub fn check_c_quadrature(params: MalmstenParams, tol: f64) -> Result<IdentityReport> {
    check_tol(tol)?;
    let (a, b) = (params.a(), params.b());
    let ln_a = a.ln();
    let q = integrate_semi_infinite(
        |x: f64| (ln_a + x.ln()) * sech(b * x),
        &ToleranceSpec::default(),
    )?;
    Ok(IdentityReport::from_quadrature(
        C_QUADRATURE,
        vec![("a", a), ("b", b)],
        q.value,
        malmsten_c(params),
        tol,
        &q,
    ))
}

#[derive(Default)]
struct PointOutcome {
    steps: Vec<IdentityReport>,
    skipped: Vec<SkippedStep>,
    failures: Vec<StepFailure>,
}

impl PointOutcome {
    fn record(
        &mut self,
        name: &'static str,
        params: Vec<(&'static str, f64)>,
        outcome: Result<IdentityReport>,
    ) {
        match outcome {
            Ok(report) => self.steps.push(report),
            Err(e) if e.is_precondition() => self.skipped.push(SkippedStep {
                name,
                params,
                reason: e.to_string(),
            }),
            Err(error) => self.failures.push(StepFailure {
                name,
                params,
                error,
            }),
        }
    }
}

fn run_point(a: f64, tol: f64) -> PointOutcome {
    let mut out = PointOutcome::default();
    let at = |a| vec![("a", a)];
    out.record(DELTA_QUADRATURE, at(a), check_delta_quadrature(a, tol));
    out.record(ARCTAN_KERNEL, at(a), check_arctan_kernel(a, tol));
    out.record(
        SECH_COSINE_TRANSFORM,
        vec![("t", a.abs())],
        check_sech_cosine_transform(a.abs(), tol),
    );
    out.record(T_DOMAIN, at(a), check_t_domain(a, tol));
    out.record(Z_DOMAIN, at(a), check_z_domain(a, tol));
    // The two series met at p = 1: μ = |a| + 1/2 and μ = |a| + 1.
    for mu in [a.abs() + 0.5, a.abs() + 1.0] {
        out.record(
            ALT_SERIES_DIGAMMA,
            vec![("mu", mu)],
            check_alt_series_digamma(mu, tol),
        );
    }
    out.record(P_INTEGRAL, at(a), check_p_integral(a, tol));
    let c_params = vec![("a", a), ("b", 1.0)];
    let c = MalmstenParams::new(a, 1.0).and_then(|p| check_c_quadrature(p, tol));
    out.record(C_QUADRATURE, c_params, c);
    out
}

/// Runs every applicable step at every grid point, then the grid-independent
/// reduction steps. Grid points are evaluated in parallel; the report order
/// is deterministic.
pub fn run_full_chain(a_grid: &[f64], tol: f64) -> Result<ChainReport> {
    if a_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_tol(tol)?;

    let outcomes: Vec<PointOutcome> = a_grid.par_iter().map(|&a| run_point(a, tol)).collect();

    let mut chain = PointOutcome::default();
    for point in outcomes {
        chain.steps.extend(point.steps);
        chain.skipped.extend(point.skipped);
        chain.failures.extend(point.failures);
    }
    match check_b_reduction(tol) {
        Ok(reports) => chain.steps.extend(reports),
        Err(error) => chain.failures.push(StepFailure {
            name: "b_reduction",
            params: vec![],
            error,
        }),
    }

    let overall_pass = chain.failures.is_empty() && chain.steps.iter().all(|s| s.pass);
    let total_evaluations = chain.steps.iter().map(|s| s.evaluations).sum();
    Ok(ChainReport {
        steps: chain.steps,
        skipped: chain.skipped,
        failures: chain.failures,
        overall_pass,
        total_evaluations,
    })
}
