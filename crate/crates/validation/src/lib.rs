//! The twelve acceptance criteria. Each returns a [`Verdict`] made of
//! named checks; a criterion passes when every check does.

pub mod criteria;

use std::fmt::Write as _;

/// One measured quantity and its bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verdict {
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    /// `|value| <= bound`.
    pub fn at_most(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        let pass = value.abs() <= bound;
        self.check(name, pass, format!("{value:.3e} (bound {bound:.1e})"));
    }

    /// Record a computation that errored as a failed check.
    pub fn error(&mut self, name: impl Into<String>, e: ginlab::Error) {
        self.check(name, false, format!("error: {e}"));
    }

    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "    [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        out
    }
}

/// A numbered criterion and the function that evaluates it.
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub run: fn() -> ginlab::Result<Verdict>,
}

impl Criterion {
    /// Errors become a failed verdict rather than aborting the suite.
    pub fn evaluate(&self) -> Verdict {
        match (self.run)() {
            Ok(v) => v,
            Err(e) => {
                let mut v = Verdict::default();
                v.error("evaluation", e);
                v
            }
        }
    }
}

/// Worker count for the Monte Carlo criteria. Results do not depend on it.
pub fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}
