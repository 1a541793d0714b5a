//! Check records, summaries and their JSON / CSV encodings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{CampaignConfig, ConfigError, ValueMode};
use crate::algebra::CycloValue;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// everything needed to reproduce the check
    pub inputs: BTreeMap<String, String>,
    pub values: BTreeMap<String, Value>,
    pub pass: bool,
    pub micros: u64,
}

impl CheckRecord {
    pub fn new(name: &str) -> CheckRecord {
        CheckRecord { name: name.to_string(), inputs: BTreeMap::new(), values: BTreeMap::new(), pass: true, micros: 0 }
    }

    pub fn input(mut self, key: &str, v: impl ToString) -> CheckRecord {
        self.inputs.insert(key.to_string(), v.to_string());
        self
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> CheckRecord {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn cyclo(self, key: &str, v: &CycloValue) -> CheckRecord {
        self.value(key, encode(v))
    }

    /// Records `lhs == rhs` under `key`; in float mode the two sides must
    /// also agree as complex doubles.
    pub fn identity(mut self, key: &str, lhs: &CycloValue, rhs: &CycloValue, mode: ValueMode) -> CheckRecord {
        let exact = lhs == rhs;
        self.values.insert(key.to_string(), exact.into());
        if mode == ValueMode::Float {
            let ok = float_agrees(lhs, rhs) && self.values.get("float_agrees").map_or(true, |v| v == &Value::Bool(true));
            self.values.insert("float_agrees".into(), ok.into());
            self.pass &= ok;
        }
        self
    }

    pub fn pass(mut self, ok: bool) -> CheckRecord {
        self.pass &= ok;
        self
    }
}

fn float_agrees(a: &CycloValue, b: &CycloValue) -> bool {
    let (x, y) = (a.to_complex(), b.to_complex());
    (x - y).norm() <= 1e-9 * (1.0 + y.norm())
}

fn render(x: f64) -> String {
    let x = if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{x:.9}")
}

/// Exact coefficients in the power basis of zeta_{4p} plus an advisory float.
pub fn encode(v: &CycloValue) -> Value {
    let z = v.to_complex();
    let im = render(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    json!({ "exact": v.coeff_strings(), "float": format!("{}{sign}{im}i", render(z.re)) })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Counts {
    fn add(&mut self, pass: bool) {
        self.total += 1;
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub all: Counts,
    pub campaigns: BTreeMap<String, Counts>,
}

#[derive(Clone, Debug, Serialize)]
struct ConfigEcho {
    p: u32,
    m: u32,
    q: u32,
    r: usize,
    vmax: u32,
    alpha: String,
    mode: ValueMode,
    identity: super::Identity,
    campaigns: Vec<String>,
    seed: u64,
    threads: usize,
    samples: Option<usize>,
    timing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(c: &CampaignConfig, checks: Vec<CheckRecord>) -> Report {
        let mut summary = Summary::default();
        for ch in &checks {
            summary.all.add(ch.pass);
            summary.campaigns.entry(ch.name.clone()).or_default().add(ch.pass);
        }
        let config = ConfigEcho {
            p: c.p,
            m: c.m,
            q: c.q(),
            r: c.r,
            vmax: c.vmax,
            alpha: c.alpha_policy().to_string(),
            mode: c.mode,
            identity: c.identity,
            campaigns: c.campaigns.iter().map(|x| x.name().to_string()).collect(),
            seed: c.seed,
            threads: c.threads,
            samples: c.samples,
            timing: c.timing,
        };
        Report { config, checks, summary }
    }

    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.all.failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check: inputs and values as `key=json` lists.
    pub fn to_csv(&self) -> Result<String, ConfigError> {
        let mut w = csv::Writer::from_writer(vec![]);
        let io = |e: csv::Error| ConfigError::Io(e.to_string());
        w.write_record(["index", "name", "pass", "micros", "inputs", "values"]).map_err(io)?;
        for (i, c) in self.checks.iter().enumerate() {
            let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let values: Vec<String> = c.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            w.write_record([i.to_string(), c.name.clone(), c.pass.to_string(), c.micros.to_string(), inputs.join("; "), values.join("; ")])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ConfigError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ConfigError::Io(e.to_string()))
    }

    /// Writes `path` (JSON) and `path` with extension csv.
    pub fn write(&self, path: &Path) -> Result<(), ConfigError> {
        let io = |e: std::io::Error| ConfigError::Io(format!("{}: {e}", path.display()));
        std::fs::write(path, self.to_json() + "\n").map_err(io)?;
        std::fs::write(path.with_extension("csv"), self.to_csv()?).map_err(io)?;
        Ok(())
    }
}
