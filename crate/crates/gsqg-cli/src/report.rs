//! Per-criterion verdicts and the run summary.

use serde::Serialize;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Below(f64),
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

impl Bound {
    pub fn holds(&self, x: f64) -> bool {
        match *self {
            Bound::Below(b) => x < b,
            Bound::AtMost(b) => x <= b,
            Bound::AtLeast(b) => x >= b,
            Bound::Within(lo, hi) => (lo..=hi).contains(&x),
        }
    }

    fn describe(&self) -> String {
        match *self {
            Bound::Below(b) => format!("< {b:e}"),
            Bound::AtMost(b) => format!("<= {b}"),
            Bound::AtLeast(b) => format!(">= {b}"),
            Bound::Within(lo, hi) => format!("in [{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub measured: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn new(quantity: impl Into<String>, measured: f64, bound: Bound) -> Self {
        Self {
            quantity: quantity.into(),
            measured,
            passed: bound.holds(measured),
            bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn new(id: u8, title: impl Into<String>, checks: Vec<Check>) -> Self {
        Self {
            id,
            title: title.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    /// One line: verdict, id, title and each measured quantity.
    pub fn line(&self) -> String {
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{} = {:.6e} ({})", c.quantity, c.measured, c.bound.describe()))
            .collect();
        format!(
            "{} criterion {}: {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            checks.join("; ")
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub criteria: Vec<CriterionReport>,
    pub artifacts: Vec<String>,
    pub passed: bool,
}
