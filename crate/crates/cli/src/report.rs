use std::fs;
use std::io::Write;

use anyhow::Context;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::{OutputFormat, RunConfig};

#[derive(Serialize, Debug, Clone)]
pub struct Check {
    pub check: String,
    pub dim: Option<usize>,
    pub seed: Option<u64>,
    pub kappa: Option<f64>,
    pub values: Map<String, Value>,
    pub pass: bool,
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn symbolic(name: impl Into<String>, pass: bool) -> Self {
        Self {
            check: name.into(),
            dim: None,
            seed: None,
            kappa: None,
            values: Map::new(),
            pass,
            tolerance: Some(0.0),
        }
    }

    pub fn numeric(
        name: impl Into<String>,
        cfg: &RunConfig,
        kappa: Option<f64>,
        tolerance: f64,
    ) -> Self {
        Self {
            check: name.into(),
            dim: Some(cfg.dim),
            seed: Some(cfg.seed),
            kappa,
            values: Map::new(),
            pass: true,
            tolerance: Some(tolerance),
        }
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    /// Records `key = x` and requires `x <= tolerance`.
    pub fn bounded(mut self, key: &str, x: f64) -> Self {
        let tol = self.tolerance.unwrap_or(0.0);
        self.pass &= x <= tol;
        self.value(key, x)
    }

    /// Records `key = x` and requires `|x - target| <= tolerance`.
    pub fn near(mut self, key: &str, x: f64, target: f64) -> Self {
        let tol = self.tolerance.unwrap_or(0.0);
        self.pass &= (x - target).abs() <= tol;
        self.value(key, x).value("target", target)
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, checks: Vec<Check>) -> Self {
        Self {
            command: command.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let values: Vec<String> = c
                .values
                .iter()
                .map(|(k, v)| format!("{k}={}", render(v)))
                .collect();
            out.push_str(&format!(
                "{} {} {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.check,
                values.join(" ")
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "{}: {} checks, {failed} failed\n",
            self.command,
            self.checks.len()
        ));
        out
    }

    /// Report to `--output-path` in the chosen format with a text summary on stdout, or to
    /// stdout in the chosen format when no path is given.
    pub fn emit(&self, cfg: &RunConfig) -> anyhow::Result<bool> {
        let body = match cfg.output_format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => self.to_text(),
        };
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        match &cfg.output_path {
            Some(path) => {
                fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
                lock.write_all(self.to_text().as_bytes())?;
            }
            None => lock.write_all(body.as_bytes())?,
        }
        Ok(self.pass)
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
