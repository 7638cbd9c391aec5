//! Malmsten-type logarithmic integrals.
//!
//! The crate evaluates
//!
//! * `Δ(a) = ∫₀^∞ ln(x² + a²) / cosh(πx) dx`,
//! * `∫₀^∞ ln(x) sech(x) dx`,
//! * `∫₀^∞ ln(ax) sech(bx) dx` for real `a, b > 0`
//!
//! in closed form ([`closedform`]), recomputes them with double-exponential
//! quadrature ([`quad`]), and checks every intermediate rewriting of `Δ(a)`
//! (arctan kernel, cosine transform, Laplace-domain integral, `z = e^{-t}`
//! form, alternating series, digamma integral) as a numerical identity
//! ([`proofchain`]).

pub mod closedform;
pub mod error;
pub mod proofchain;
pub mod quad;
pub mod specfun;

pub use closedform::{
    delta_closed, delta_derivative, malmsten_c, vardi_b_constant, MalmstenParams,
};
pub use error::{Error, Result};
pub use proofchain::{run_full_chain, ChainReport, IdentityReport};
pub use quad::{integrate_finite, integrate_semi_infinite, QuadratureResult, ToleranceSpec};
pub use specfun::{digamma, gamma_ratio_log, ln_gamma};
