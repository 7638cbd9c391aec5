//! Machine-readable output: one JSON object per invocation, or CSV rows.
//!
//! Every floating-point field is written with 17 significant digits
//! (`{:.16e}`), which round-trips binary64 exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A binary64 value serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite number {}", self.0)));
        }
        let number = serde_json::Number::from_str(&self.to_string()).map_err(S::Error::custom)?;
        number.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let number = serde_json::Number::deserialize(deserializer)?;
        number
            .as_f64()
            .map(Num)
            .ok_or_else(|| de::Error::custom(format!("{number} is not representable as f64")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_min: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_max: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOut {
    pub value: Num,
    pub error_estimate: Num,
    pub evaluations: usize,
    pub converged: bool,
    pub closed_form: Num,
    pub abs_diff: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOut {
    pub name: String,
    pub params: BTreeMap<String, Num>,
    pub lhs: Num,
    pub rhs: Num,
    pub abs_err: Num,
    pub rel_err: Num,
    pub tol: Num,
    pub converged: bool,
    pub pass: bool,
    pub evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipOut {
    pub name: String,
    pub params: BTreeMap<String, Num>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOut {
    pub overall_pass: bool,
    pub total_evaluations: usize,
    pub steps: Vec<StepOut>,
    pub skipped: Vec<SkipOut>,
    pub failures: Vec<SkipOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub a: Num,
    pub delta_closed: Num,
    pub delta_quadrature: Num,
    pub abs_err: Num,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Results {
    Value { value: Num },
    Quadrature(QuadratureOut),
    Chain(ChainOut),
    Table { rows: Vec<TableRow> },
}

/// Everything one invocation reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Parameters,
    pub tolerances: Tolerances,
    pub results: Results,
    pub timing_ms: Num,
}

impl OutputRecord {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Writes the results as CSV: a header row, then one record per row.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let opt = |v: Option<Num>| v.map(|n| n.to_string()).unwrap_or_default();
        let p = &self.parameters;
        match &self.results {
            Results::Value { value } => {
                w.write_record(["which", "a", "b", "value"])?;
                w.write_record([
                    p.which.clone().unwrap_or_default(),
                    opt(p.a),
                    opt(p.b),
                    value.to_string(),
                ])?;
            }
            Results::Quadrature(q) => {
                w.write_record([
                    "which",
                    "a",
                    "b",
                    "rel_tol",
                    "value",
                    "error_estimate",
                    "evaluations",
                    "converged",
                    "closed_form",
                    "abs_diff",
                ])?;
                w.write_record([
                    p.which.clone().unwrap_or_default(),
                    opt(p.a),
                    opt(p.b),
                    opt(self.tolerances.rel_tol),
                    q.value.to_string(),
                    q.error_estimate.to_string(),
                    q.evaluations.to_string(),
                    q.converged.to_string(),
                    q.closed_form.to_string(),
                    q.abs_diff.to_string(),
                ])?;
            }
            Results::Chain(chain) => {
                w.write_record([
                    "name",
                    "params",
                    "status",
                    "lhs",
                    "rhs",
                    "abs_err",
                    "rel_err",
                    "tol",
                    "evaluations",
                    "detail",
                ])?;
                let params = |m: &BTreeMap<String, Num>| {
                    m.iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(";")
                };
                for s in &chain.steps {
                    w.write_record([
                        s.name.clone(),
                        params(&s.params),
                        if s.pass { "pass" } else { "fail" }.to_string(),
                        s.lhs.to_string(),
                        s.rhs.to_string(),
                        s.abs_err.to_string(),
                        s.rel_err.to_string(),
                        s.tol.to_string(),
                        s.evaluations.to_string(),
                        s.diagnostic.clone().unwrap_or_default(),
                    ])?;
                }
                for (status, list) in [("skipped", &chain.skipped), ("error", &chain.failures)] {
                    for s in list {
                        let mut row = vec![s.name.clone(), params(&s.params), status.to_string()];
                        row.extend(std::iter::repeat_n(String::new(), 6));
                        row.push(s.reason.clone());
                        w.write_record(row)?;
                    }
                }
            }
            Results::Table { rows } => {
                w.write_record([
                    "a",
                    "delta_closed",
                    "delta_quadrature",
                    "abs_err",
                    "converged",
                ])?;
                for r in rows {
                    w.write_record([
                        r.a.to_string(),
                        r.delta_closed.to_string(),
                        r.delta_quadrature.to_string(),
                        r.abs_err.to_string(),
                        r.converged.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn finite() -> impl Strategy<Value = f64> {
        any::<f64>().prop_filter("finite", |v| v.is_finite())
    }

    fn sample(value: f64, a: f64) -> OutputRecord {
        OutputRecord {
            command: "quad".into(),
            parameters: Parameters {
                which: Some("a".into()),
                a: Some(Num(a)),
                format: "json".into(),
                ..Default::default()
            },
            tolerances: Tolerances {
                rel_tol: Some(Num(1e-12)),
                ..Default::default()
            },
            results: Results::Quadrature(QuadratureOut {
                value: Num(value),
                error_estimate: Num(1.5e-14),
                evaluations: 417,
                converged: true,
                closed_form: Num(value),
                abs_diff: Num(0.0),
            }),
            timing_ms: Num(0.25),
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(Num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(Num(-1.5).to_string(), "-1.5000000000000000e0");
        let json = serde_json::to_string(&Num(2.0)).unwrap();
        assert!(json.starts_with("2.0000000000000000e"), "{json}");
        assert_eq!(serde_json::from_str::<Num>(&json).unwrap(), Num(2.0));
    }

    #[test]
    fn non_finite_is_rejected() {
        assert!(serde_json::to_string(&Num(f64::NAN)).is_err());
        assert!(serde_json::to_string(&Num(f64::INFINITY)).is_err());
    }

    #[test]
    fn stable_key_order() {
        let json = sample(1.0, 0.5).to_json().unwrap();
        let keys = [
            "\"command\"",
            "\"parameters\"",
            "\"tolerances\"",
            "\"results\"",
            "\"timing_ms\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
    }

    #[test]
    fn csv_quotes_fields() {
        let record = OutputRecord {
            command: "verify".into(),
            parameters: Parameters::default(),
            tolerances: Tolerances::default(),
            results: Results::Chain(ChainOut {
                overall_pass: false,
                total_evaluations: 0,
                steps: vec![],
                skipped: vec![SkipOut {
                    name: "z_domain".into(),
                    params: BTreeMap::from([("a".to_string(), Num(0.0))]),
                    reason: "needs \"a > 0\", got 0".into(),
                }],
                failures: vec![],
            }),
            timing_ms: Num(0.0),
        };
        let mut buf = Vec::new();
        record.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"needs \"\"a > 0\"\", got 0\""), "{text}");
        assert_eq!(text.lines().count(), 2);
    }

    proptest! {
        #[test]
        fn json_round_trip(value in finite(), a in finite()) {
            let record = sample(value, a);
            let parsed = OutputRecord::from_json(&record.to_json().unwrap()).unwrap();
            prop_assert_eq!(parsed, record);
        }
    }
}
