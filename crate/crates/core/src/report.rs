//! Command reports: an ordered list of dotted keys with values plus named
//! pass/fail checks, rendered either for people or as flat `key=value`
//! lines for scripts.
//!
//! Both renderings format numbers through the same function, so a value
//! printed in one mode is character-for-character the value in the other.

use std::fmt::Write as _;

use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Value {
    /// Shortest representation that parses back to the same f64.
    pub fn render(&self) -> String {
        match self {
            Value::Num(x) => format!("{x:?}"),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(format!("unknown format `{other}` (expected human or machine)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub task: String,
    pub entries: Vec<(String, Value)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(task: impl Into<String>) -> Self {
        Self {
            task: task.into(),
            entries: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn num(&mut self, key: impl Into<String>, x: f64) -> &mut Self {
        self.entries.push((key.into(), Value::Num(x)));
        self
    }

    pub fn int(&mut self, key: impl Into<String>, i: u64) -> &mut Self {
        self.entries.push((key.into(), Value::Int(i)));
        self
    }

    pub fn flag(&mut self, key: impl Into<String>, b: bool) -> &mut Self {
        self.entries.push((key.into(), Value::Bool(b)));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, s: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), Value::Text(s.into())));
        self
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
        self
    }

    pub fn tolerances(&mut self, tol: &Tolerances) -> &mut Self {
        self.num("tolerance.epr", tol.epr).num("tolerance.maximal", tol.maximal)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_num(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Value::Num(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    /// True when every check passed (vacuously true without checks).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.render_human(),
            Format::Machine => self.render_machine(),
        }
    }

    fn render_human(&self) -> String {
        let mut out = String::new();
        writeln!(out, "task: {}", self.task).unwrap();
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.entries {
            writeln!(out, "  {k:<width$}  {}", v.render()).unwrap();
        }
        if !self.checks.is_empty() {
            writeln!(out, "checks:").unwrap();
            for c in &self.checks {
                writeln!(out, "  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name).unwrap();
            }
        }
        writeln!(out, "result: {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }

    fn render_machine(&self) -> String {
        let mut out = String::new();
        writeln!(out, "task={}", self.task).unwrap();
        for (k, v) in &self.entries {
            writeln!(out, "{k}={}", v.render()).unwrap();
        }
        for c in &self.checks {
            writeln!(out, "check.{}={}", slug(&c.name), if c.passed { "pass" } else { "fail" }).unwrap();
        }
        writeln!(out, "result={}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }
}

/// Check names as single tokens: anything but letters, digits, `.`, `-`
/// and `+` becomes `-`.
fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '+') { c } else { '-' })
        .collect()
}

/// Parses a machine rendering back into (key, raw value) pairs.
pub fn parse_machine(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|line| line.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("check-epr");
        r.num("epr.defectE", 1.0 / 3.0)
            .num("epr.dispersion1", 1e-17)
            .int("seed", 7)
            .flag("epr.verdict", true)
            .tolerances(&Tolerances::default())
            .check("verdict", true);
        r
    }

    #[test]
    fn numbers_round_trip_through_machine_format() {
        let r = sample();
        let parsed = parse_machine(&r.render(Format::Machine));
        let defect: f64 = parsed.iter().find(|(k, _)| k == "epr.defectE").unwrap().1.parse().unwrap();
        assert_eq!(defect.to_bits(), (1.0f64 / 3.0).to_bits());
        assert!(parsed.contains(&("result".into(), "pass".into())));
    }

    #[test]
    fn human_and_machine_agree_on_numbers() {
        let r = sample();
        let human = r.render(Format::Human);
        for (k, v) in parse_machine(&r.render(Format::Machine)) {
            if k.starts_with("check.") || k == "result" || k == "task" {
                continue;
            }
            let line = human.lines().find(|l| l.trim_start().starts_with(&k)).unwrap();
            assert_eq!(line.split_whitespace().last().unwrap(), v);
        }
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = sample();
        r.check("extra check", false);
        assert!(!r.passed());
        assert!(r.render(Format::Human).contains("[FAIL] extra check"));
        assert!(r.render(Format::Machine).contains("check.extra-check=fail"));
    }
}
