//! Double-exponential quadrature.
//!
//! Finite intervals use the tanh-sinh map
//! `x = c + d·tanh(π/2·sinh t)`, the half line `[0, ∞)` uses the exp-sinh map
//! `x = exp(π/2·sinh t)`. Both turn the integral into a trapezoidal sum in `t`
//! whose terms decay double-exponentially, which also absorbs integrable
//! endpoint singularities (`ln x`, `x^{-α}` with α < 1).
//!
//! The step starts at `h = 1` and is halved per level, reusing every previous
//! node. A level is accepted once it agrees with the previous one within
//! `max(abs_tol, rel_tol·|I|)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Smallest relative tolerance accepted; below this binary64 cannot resolve
/// the difference between levels.
pub const MIN_REL_TOL: f64 = 1e-14;

const MAX_LEVEL_LIMIT: u32 = 20;

/// Levels below this never declare convergence (h ≥ 1/8 can agree by luck).
const MIN_LEVEL: u32 = 3;

/// Nodes whose transformed weight falls below this are dropped.
const WEIGHT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    rel_tol: f64,
    abs_tol: f64,
    max_level: u32,
}

impl ToleranceSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_level: u32) -> Result<Self> {
        if !(rel_tol.is_finite() && rel_tol >= MIN_REL_TOL) {
            return Err(Error::InvalidTolerance(format!(
                "rel_tol {rel_tol} must be finite and >= {MIN_REL_TOL:e}"
            )));
        }
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "abs_tol {abs_tol} must be finite and > 0"
            )));
        }
        if max_level == 0 || max_level > MAX_LEVEL_LIMIT {
            return Err(Error::InvalidTolerance(format!(
                "max_level {max_level} must be in 1..={MAX_LEVEL_LIMIT}"
            )));
        }
        Ok(ToleranceSpec {
            rel_tol,
            abs_tol,
            max_level,
        })
    }

    /// Default tolerances with a different relative tolerance.
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let d = Self::default();
        Self::new(rel_tol, d.abs_tol, d.max_level)
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Absolute error target for an integral of magnitude `|value|`.
    pub fn scale(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_level: 12,
        }
    }
}

/// Outcome of one quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    weight: f64,
}

/// A double-exponential change of variables `x = φ(t)`, `weight = φ'(t)`.
/// Returns `None` where the node is unusable (weight underflow, overflow, or
/// the abscissa rounds onto an endpoint). The usable set must be an interval
/// in `t` containing 0.
trait DeMap {
    fn node(&self, t: f64) -> Option<Node>;
}

struct TanhSinh {
    lo: f64,
    hi: f64,
    center: f64,
    half_width: f64,
}

impl DeMap for TanhSinh {
    fn node(&self, t: f64) -> Option<Node> {
        if t == 0.0 {
            return Some(Node {
                x: self.center,
                weight: self.half_width * FRAC_PI_2,
            });
        }
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // 1 − tanh|u| = 2e/(1+e), sech²u = 4e/(1+e)²
        let dist = self.half_width * 2.0 * e / (1.0 + e);
        let weight = self.half_width * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if !(weight >= WEIGHT_FLOOR && weight.is_finite()) {
            return None;
        }
        let x = if t > 0.0 {
            self.hi - dist
        } else {
            self.lo + dist
        };
        if x <= self.lo || x >= self.hi {
            return None;
        }
        Some(Node { x, weight })
    }
}

struct ExpSinh;

impl DeMap for ExpSinh {
    fn node(&self, t: f64) -> Option<Node> {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let weight = x * FRAC_PI_2 * t.cosh();
        if !(weight >= WEIGHT_FLOOR && weight.is_finite() && x > 0.0) {
            return None;
        }
        Some(Node { x, weight })
    }
}

struct Accumulator<'f, F> {
    f: &'f F,
    sum: f64,
    abs_sum: f64,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Accumulator<'_, F> {
    /// Adds the node at `t`; `Ok(false)` once the map leaves its usable range.
    fn add<M: DeMap>(&mut self, map: &M, t: f64) -> Result<bool> {
        let Some(node) = map.node(t) else {
            return Ok(false);
        };
        let fx = (self.f)(node.x);
        self.evaluations += 1;
        let term = fx * node.weight;
        if !fx.is_finite() || !term.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                x: node.x,
                value: fx,
            });
        }
        self.sum += term;
        self.abs_sum += term.abs();
        Ok(true)
    }

    /// Adds nodes `t = first·h, (first+stride)·h, ...` on both sides of 0.
    fn sweep<M: DeMap>(&mut self, map: &M, h: f64, first: u64, stride: u64) -> Result<()> {
        for side in [1.0, -1.0] {
            let mut k = first;
            while self.add(map, side * k as f64 * h)? {
                k += stride;
            }
        }
        Ok(())
    }
}

fn integrate_de<M: DeMap, F: Fn(f64) -> f64>(
    map: &M,
    f: &F,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult> {
    let mut acc = Accumulator {
        f,
        sum: 0.0,
        abs_sum: 0.0,
        evaluations: 0,
    };
    let mut h = 1.0;
    acc.add(map, 0.0)?;
    acc.sweep(map, h, 1, 1)?;
    let mut previous = h * acc.sum;
    let mut result = QuadratureResult {
        value: previous,
        error_estimate: f64::INFINITY,
        evaluations: acc.evaluations,
        converged: false,
    };

    for level in 1..=tol.max_level {
        h *= 0.5;
        acc.sweep(map, h, 1, 2)?;
        let value = h * acc.sum;
        let roundoff = 8.0 * f64::EPSILON * h * acc.abs_sum;
        let error_estimate = (value - previous).abs() + roundoff;
        result = QuadratureResult {
            value,
            error_estimate,
            evaluations: acc.evaluations,
            converged: false,
        };
        if level >= MIN_LEVEL && error_estimate <= tol.scale(value) {
            result.converged = true;
            break;
        }
        previous = value;
    }
    Ok(result)
}

/// ∫ₗₒ^ₕᵢ f(x) dx by tanh-sinh quadrature.
///
/// `f` is never evaluated at `lo` or `hi`. Near `lo` nodes come within about
/// 1e-300 of the endpoint, near `hi` only within the binary64 spacing of
/// `hi`, so a singular endpoint should be placed at `lo`.
pub fn integrate_finite<F>(f: F, lo: f64, hi: f64, tol: &ToleranceSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !lo.is_finite() {
        return Err(Error::domain("integrate_finite", lo, "finite lower limit"));
    }
    if !(hi.is_finite() && hi > lo) {
        return Err(Error::domain(
            "integrate_finite",
            hi,
            "finite upper limit > lower limit",
        ));
    }
    let map = TanhSinh {
        lo,
        hi,
        center: 0.5 * (lo + hi),
        half_width: 0.5 * (hi - lo),
    };
    integrate_de(&map, &f, tol)
}

/// ∫₀^∞ f(x) dx by exp-sinh quadrature.
///
/// Suited to integrands decaying at least like `e^{-cx}` or `x^{-2}`, with at
/// worst a logarithmic or weak power singularity at 0. Arguments range from
/// roughly 1e-300 to 1e300; `f` must stay finite there (use `hypot` rather
/// than `x*x`, `exp(-x)` forms of `sech`, and so on).
pub fn integrate_semi_infinite<F>(f: F, tol: &ToleranceSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    integrate_de(&ExpSinh, &f, tol)
}
