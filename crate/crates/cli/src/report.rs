//! The report envelope written by every verb.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Assertion, Basis, ExperimentConfig, Format, Op, Task};
use crate::tasks::TaskOutput;

#[derive(Clone, Debug, Serialize)]
pub struct AssertionOutcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub metric: String,
    pub op: Op,
    pub value: f64,
    pub tol: f64,
    pub basis: Basis,
    /// Absent when the task did not produce the metric; that counts as a failure.
    pub actual: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: Task,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub seed: u64,
    /// Seconds since the Unix epoch; the only field that differs between
    /// identical runs.
    pub generated_at: u64,
    pub result: serde_json::Value,
    pub metrics: BTreeMap<String, f64>,
    pub assertions: Vec<AssertionOutcome>,
    pub passed: bool,
    #[serde(skip)]
    pub trace: Option<Vec<spectral_cover::spectral::TracePoint>>,
}

/// Evaluates the assertions that apply to `task`.
pub fn evaluate(assertions: &[Assertion], task: Task, metrics: &BTreeMap<String, f64>) -> Vec<AssertionOutcome> {
    assertions
        .iter()
        .filter(|a| a.task.is_none_or(|t| t == task))
        .map(|a| {
            let actual = metrics.get(&a.metric).copied();
            AssertionOutcome {
                task: a.task,
                metric: a.metric.clone(),
                op: a.op,
                value: a.value,
                tol: a.tol,
                basis: a.basis.clone(),
                actual,
                passed: actual.is_some_and(|x| a.check(x)),
            }
        })
        .collect()
}

impl Report {
    pub fn new(config: &ExperimentConfig, task: Task, out: TaskOutput) -> Report {
        let assertions = evaluate(&config.assertions, task, &out.metrics);
        let passed = out.passed && assertions.iter().all(|a| a.passed);
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            task,
            name: config.name.clone(),
            seed: config.seed,
            generated_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            result: out.result,
            metrics: out.metrics,
            assertions,
            passed,
            trace: out.trace,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// The JSON report without the timestamp, for comparing runs.
    pub fn comparable(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("generated_at");
        serde_json::to_string_pretty(&v).unwrap()
    }

    /// Exhaustion traces as `radius,lambda0,residual`; any other task as
    /// `metric,value`.
    pub fn write_csv<W: Write>(&self, w: W) -> anyhow::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        match &self.trace {
            Some(trace) => {
                out.write_record(["radius", "lambda0", "residual"])?;
                for t in trace {
                    out.write_record([t.radius.to_string(), fmt(t.value), fmt(t.residual)])?;
                }
            }
            None => {
                out.write_record(["metric", "value"])?;
                for (k, v) in &self.metrics {
                    out.write_record([k.clone(), fmt(*v)])?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> anyhow::Result<()> {
        match format {
            Format::Json => w.write_all(self.to_json().as_bytes())?,
            Format::Csv => self.write_csv(w)?,
        }
        Ok(())
    }
}

// shortest text that parses back to the same f64
fn fmt(x: f64) -> String {
    format!("{x:?}")
}
