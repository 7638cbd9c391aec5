use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use clap::{Args, ValueEnum};
use malmsten::proofchain::{ChainReport, IdentityReport, DEFAULT_TOL};
use malmsten::quad::MIN_REL_TOL;
use malmsten::{
    delta_closed, integrate_semi_infinite, malmsten_c, run_full_chain, vardi_b_constant,
    MalmstenParams, QuadratureResult, ToleranceSpec,
};
use thiserror::Error;

use crate::output::{
    ChainOut, Num, OutputRecord, Parameters, QuadratureOut, Results, SkipOut, StepOut, TableRow,
    Tolerances,
};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] malmsten::Error),
}

impl CommandError {
    fn usage(msg: impl Into<String>) -> Self {
        CommandError::Usage(msg.into())
    }
}

/// What a successful command produced and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub record: OutputRecord,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    NotConverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    A,
    B,
    C,
}

impl Which {
    fn label(self) -> &'static str {
        match self {
            Which::A => "a",
            Which::B => "b",
            Which::C => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn label(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// Which integral: a = ∫ ln(x²+a²)/cosh(πx), b = ∫ ln(x) sech(x), c = ∫ ln(ax) sech(bx)
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct QuadArgs {
    #[command(flatten)]
    pub target: EvalArgs,
    /// Relative tolerance of the quadrature (>= 1e-14)
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Comma-separated values of a
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Verification tolerance (>= 1e-14)
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TableArgs {
    #[arg(long)]
    pub a_min: f64,
    #[arg(long)]
    pub a_max: f64,
    /// Number of grid points, including both ends (>= 2)
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// The integral selected by `--which` with validated parameters.
enum Target {
    Delta(f64),
    Vardi,
    Malmsten(MalmstenParams),
}

fn finite(name: &str, v: f64) -> Result<f64, CommandError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CommandError::usage(format!(
            "--{name} must be finite, got {v}"
        )))
    }
}

fn required(name: &str, v: Option<f64>, which: Which) -> Result<f64, CommandError> {
    let v = v.ok_or_else(|| {
        CommandError::usage(format!("--which {} requires --{name}", which.label()))
    })?;
    finite(name, v)
}

fn unused(name: &str, v: Option<f64>, which: Which) -> Result<(), CommandError> {
    match v {
        Some(_) => Err(CommandError::usage(format!(
            "--{name} is not used by --which {}",
            which.label()
        ))),
        None => Ok(()),
    }
}

impl EvalArgs {
    fn target(&self) -> Result<Target, CommandError> {
        match self.which {
            Which::A => {
                unused("b", self.b, self.which)?;
                Ok(Target::Delta(required("a", self.a, self.which)?))
            }
            Which::B => {
                unused("a", self.a, self.which)?;
                unused("b", self.b, self.which)?;
                Ok(Target::Vardi)
            }
            Which::C => {
                let a = required("a", self.a, self.which)?;
                let b = required("b", self.b, self.which)?;
                MalmstenParams::new(a, b)
                    .map(Target::Malmsten)
                    .map_err(|e| {
                        CommandError::usage(format!("--which c needs a > 0 and b > 0: {e}"))
                    })
            }
        }
    }

    fn parameters(&self) -> Parameters {
        Parameters {
            which: Some(self.which.label().to_string()),
            a: self.a.map(Num),
            b: self.b.map(Num),
            format: self.format.label().to_string(),
            ..Default::default()
        }
    }
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

impl Target {
    fn closed_form(&self) -> Result<f64, CommandError> {
        Ok(match *self {
            Target::Delta(a) => delta_closed(a)?,
            Target::Vardi => vardi_b_constant(),
            Target::Malmsten(p) => malmsten_c(p),
        })
    }

    fn quadrature(&self, tol: &ToleranceSpec) -> Result<QuadratureResult, CommandError> {
        let r = match *self {
            Target::Delta(a) => {
                integrate_semi_infinite(|x: f64| 2.0 * x.hypot(a).ln() * sech(PI * x), tol)?
            }
            Target::Vardi => integrate_semi_infinite(|x: f64| x.ln() * sech(x), tol)?,
            Target::Malmsten(p) => {
                let (ln_a, b) = (p.a().ln(), p.b());
                integrate_semi_infinite(|x: f64| (ln_a + x.ln()) * sech(b * x), tol)?
            }
        };
        Ok(r)
    }
}

fn elapsed_ms(start: Instant) -> Num {
    Num(start.elapsed().as_secs_f64() * 1e3)
}

pub fn eval(args: &EvalArgs) -> Result<Outcome, CommandError> {
    let start = Instant::now();
    let value = args.target()?.closed_form()?;
    Ok(Outcome {
        record: OutputRecord {
            command: "eval".into(),
            parameters: args.parameters(),
            tolerances: Tolerances::default(),
            results: Results::Value { value: Num(value) },
            timing_ms: elapsed_ms(start),
        },
        status: Status::Ok,
    })
}

pub fn quad(args: &QuadArgs) -> Result<Outcome, CommandError> {
    let start = Instant::now();
    let target = args.target.target()?;
    let tol = ToleranceSpec::with_rel_tol(args.rel_tol)
        .map_err(|e| CommandError::usage(format!("--rel-tol: {e}")))?;
    let closed = target.closed_form()?;
    let q = target.quadrature(&tol)?;
    Ok(Outcome {
        record: OutputRecord {
            command: "quad".into(),
            parameters: args.target.parameters(),
            tolerances: Tolerances {
                rel_tol: Some(Num(tol.rel_tol())),
                abs_tol: Some(Num(tol.abs_tol())),
                max_level: Some(tol.max_level()),
                tol: None,
            },
            results: Results::Quadrature(QuadratureOut {
                value: Num(q.value),
                error_estimate: Num(q.error_estimate),
                evaluations: q.evaluations,
                converged: q.converged,
                closed_form: Num(closed),
                abs_diff: Num((q.value - closed).abs()),
            }),
            timing_ms: elapsed_ms(start),
        },
        status: if q.converged {
            Status::Ok
        } else {
            Status::NotConverged
        },
    })
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CommandError> {
    if text.trim().is_empty() {
        return Err(CommandError::usage("--grid must list at least one value"));
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let v: f64 = item.parse().map_err(|_| {
                CommandError::usage(format!("--grid entry {item:?} is not a number"))
            })?;
            finite("grid", v)
        })
        .collect()
}

fn params_map(params: &[(&'static str, f64)]) -> BTreeMap<String, Num> {
    params
        .iter()
        .map(|&(k, v)| (k.to_string(), Num(v)))
        .collect()
}

fn step_out(s: &IdentityReport) -> StepOut {
    StepOut {
        name: s.name.to_string(),
        params: params_map(&s.params),
        lhs: Num(s.lhs),
        rhs: Num(s.rhs),
        abs_err: Num(s.abs_err),
        rel_err: Num(s.rel_err),
        tol: Num(s.tol),
        converged: s.converged,
        pass: s.pass,
        evaluations: s.evaluations,
        diagnostic: s.diagnostic.clone(),
    }
}

fn chain_out(chain: &ChainReport) -> ChainOut {
    ChainOut {
        overall_pass: chain.overall_pass,
        total_evaluations: chain.total_evaluations,
        steps: chain.steps.iter().map(step_out).collect(),
        skipped: chain
            .skipped
            .iter()
            .map(|s| SkipOut {
                name: s.name.to_string(),
                params: params_map(&s.params),
                reason: s.reason.clone(),
            })
            .collect(),
        failures: chain
            .failures
            .iter()
            .map(|f| SkipOut {
                name: f.name.to_string(),
                params: params_map(&f.params),
                reason: f.error.to_string(),
            })
            .collect(),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CommandError> {
    let start = Instant::now();
    let grid = parse_grid(&args.grid)?;
    if !(args.tol.is_finite() && args.tol >= MIN_REL_TOL) {
        return Err(CommandError::usage(format!(
            "--tol must be finite and >= {MIN_REL_TOL:e}, got {}",
            args.tol
        )));
    }
    let chain = run_full_chain(&grid, args.tol)?;
    Ok(Outcome {
        record: OutputRecord {
            command: "verify".into(),
            parameters: Parameters {
                grid: Some(grid.iter().copied().map(Num).collect()),
                format: args.format.label().to_string(),
                ..Default::default()
            },
            tolerances: Tolerances {
                tol: Some(Num(args.tol)),
                ..Default::default()
            },
            results: Results::Chain(chain_out(&chain)),
            timing_ms: elapsed_ms(start),
        },
        status: if chain.overall_pass {
            Status::Ok
        } else {
            Status::VerificationFailed
        },
    })
}

pub fn table(args: &TableArgs) -> Result<Outcome, CommandError> {
    let start = Instant::now();
    let lo = finite("a-min", args.a_min)?;
    let hi = finite("a-max", args.a_max)?;
    if lo >= hi {
        return Err(CommandError::usage(format!(
            "--a-min ({lo}) must be below --a-max ({hi})"
        )));
    }
    if args.steps < 2 {
        return Err(CommandError::usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    let tol = ToleranceSpec::default();
    let last = (args.steps - 1) as f64;
    let mut rows = Vec::with_capacity(args.steps);
    for i in 0..args.steps {
        let a = if i + 1 == args.steps {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / last)
        };
        let target = Target::Delta(a);
        let closed = target.closed_form()?;
        let q = target.quadrature(&tol)?;
        rows.push(TableRow {
            a: Num(a),
            delta_closed: Num(closed),
            delta_quadrature: Num(q.value),
            abs_err: Num((q.value - closed).abs()),
            converged: q.converged,
        });
    }
    Ok(Outcome {
        record: OutputRecord {
            command: "table".into(),
            parameters: Parameters {
                a_min: Some(Num(lo)),
                a_max: Some(Num(hi)),
                steps: Some(args.steps),
                format: args.format.label().to_string(),
                ..Default::default()
            },
            tolerances: Tolerances {
                rel_tol: Some(Num(tol.rel_tol())),
                abs_tol: Some(Num(tol.abs_tol())),
                max_level: Some(tol.max_level()),
                tol: None,
            },
            results: Results::Table { rows },
            timing_ms: elapsed_ms(start),
        },
        status: Status::Ok,
    })
}
