//! Verification reports, solution CSV files and atomic output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::config::{JetOrders, Tolerances};
use super::CliError;
use crate::field::SampleGrid;
use crate::numkit::C64;

pub const SOLUTION_HEADER: &str = "x,t,re_u,im_u,re_v,im_v";
pub const ENERGY_HEADER: &str = "t,raw_energy,normalized_energy";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// `None` when no point could be evaluated.
    pub max_defect: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// `(x, t)` of the largest defect, for gridded checks.
    pub at: Option<[f64; 2]>,
}

impl Check {
    pub fn new(name: &str, max_defect: Option<f64>, tolerance: f64, at: Option<(f64, f64)>) -> Self {
        Check {
            name: name.to_string(),
            max_defect,
            tolerance,
            pass: max_defect.is_some_and(|d| d <= tolerance),
            at: at.map(|(x, t)| [x, t]),
        }
    }

    pub fn from_worst(name: &str, worst: &Worst, tolerance: f64) -> Self {
        Self::new(name, worst.value, tolerance, worst.at)
    }
}

/// Running maximum that remembers where it occurred; NaN counts as worst.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Worst {
    pub value: Option<f64>,
    pub at: Option<(f64, f64)>,
}

impl Worst {
    pub fn update(&mut self, d: f64, x: f64, t: f64) {
        let replace = match self.value {
            None => true,
            Some(w) => !w.is_nan() && (d.is_nan() || d > w),
        };
        if replace {
            self.value = Some(d);
            self.at = Some((x, t));
        }
    }

    pub fn set(&mut self, d: f64) {
        self.update(d, f64::NAN, f64::NAN);
        self.at = None;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub x: f64,
    pub t: f64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub version: String,
    pub pass: bool,
    pub tolerances: Tolerances,
    pub jet_orders: JetOrders,
    pub grid: SampleGrid,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub metadata: BTreeMap<String, Value>,
    pub singular_points: Vec<SingularPoint>,
    pub outputs: Vec<String>,
}

impl VerificationReport {
    pub fn new(command: &str, tolerances: Tolerances, jet_orders: JetOrders, grid: SampleGrid, parameters: Value) -> Self {
        VerificationReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            pass: true,
            tolerances,
            jet_orders,
            grid,
            parameters,
            checks: Vec::new(),
            metadata: BTreeMap::new(),
            singular_points: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metadata.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let res = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res.map_err(|e| CliError::io(path, e))
}

/// A value with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn solution_csv(rows: &[(f64, f64, C64, C64)]) -> String {
    let mut s = String::with_capacity(rows.len() * 150 + 32);
    s.push_str(SOLUTION_HEADER);
    s.push('\n');
    for (x, t, u, v) in rows {
        let cells = [*x, *t, u.re, u.im, v.re, v.im].map(fmt17);
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn parse_solution_csv(text: &str) -> Result<Vec<(f64, f64, C64, C64)>, CliError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == SOLUTION_HEADER => {}
        _ => return Err(CliError::Parse(format!("expected header `{SOLUTION_HEADER}`"))),
    }
    let rows = lines
        .map(|(n, line)| {
            let vals: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Parse(format!("line {}: {e}", n + 1)))?;
            match vals.as_slice() {
                &[x, t, a, b, c, d] if x.is_finite() && t.is_finite() => Ok((x, t, C64::new(a, b), C64::new(c, d))),
                _ => Err(CliError::Parse(format!("line {}: expected six values with finite x, t", n + 1))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(CliError::Parse("no sample rows".into()));
    }
    Ok(rows)
}
