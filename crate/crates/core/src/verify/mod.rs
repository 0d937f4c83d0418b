//! Named invariant batteries producing deterministic reports.

mod suites;

use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};

pub use suites::run_one;

pub const SUITES: [&str; 11] = ["qcore", "stab", "weights", "metric", "cohomology", "sp1", "sp11", "flex", "weil", "bending", "hull"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Gt,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Eq => "==",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub value: Value,
    pub relation: Relation,
    pub tol: Value,
}

impl Check {
    pub fn lt(id: &str, value: f64, tol: f64) -> Check {
        Check { id: id.into(), pass: value.is_finite() && value < tol, value: json!(value), relation: Relation::Lt, tol: json!(tol) }
    }

    pub fn gt(id: &str, value: f64, bound: f64) -> Check {
        Check { id: id.into(), pass: value.is_finite() && value > bound, value: json!(value), relation: Relation::Gt, tol: json!(bound) }
    }

    pub fn equals(id: &str, value: Value, expected: Value) -> Check {
        Check { id: id.into(), pass: value == expected, value, relation: Relation::Eq, tol: expected }
    }

    pub fn flag(id: &str, ok: bool) -> Check {
        Check::equals(id, json!(ok), json!(true))
    }

    pub fn failed(id: &str, err: &Error) -> Check {
        Check { id: id.into(), pass: false, value: err.to_json(), relation: Relation::Eq, tol: Value::Null }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "status": if self.pass { "pass" } else { "fail" },
            "value": self.value,
            "relation": self.relation.symbol(),
            "tol": self.tol,
        })
    }

    pub fn line(&self) -> String {
        format!("{} {} {} {} {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.value, self.relation.symbol(), self.tol)
    }
}

/// Run a fallible check body; an error becomes a failing check.
pub fn attempt(id: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(id, &e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub config: Config,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "pass": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "config": self.config.to_json(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!("{}: {} checks, {} failed\n", self.suite, self.checks.len(), failed));
        out
    }
}

/// `all` runs every suite in order with ids prefixed by suite name.
pub fn run_suite(name: &str, cfg: &Config) -> Result<Report> {
    let checks = if name == "all" {
        SUITES
            .iter()
            .flat_map(|s| {
                run_one(s, cfg).expect("known suite").into_iter().map(move |mut c| {
                    c.id = format!("{s}.{}", c.id);
                    c
                })
            })
            .collect()
    } else {
        run_one(name, cfg)?
    };
    Ok(Report { suite: name.into(), checks, config: *cfg })
}
