use std::time::Duration;

use serde_json::{json, Value};

use crate::error::Error;

pub const SCHEMA: &str = "sigma-dyn/1";

/// How a command ended; ordered by exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok,
    CheckFailed,
    Incomplete,
    InputError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::CheckFailed => 2,
            Outcome::Incomplete => 3,
            Outcome::InputError => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Ok => "ok",
            Outcome::CheckFailed => "check-failed",
            Outcome::Incomplete => "incomplete",
            Outcome::InputError => "input-error",
        }
    }

    pub fn of_error(e: &Error) -> Outcome {
        match e {
            Error::ResourceLimit { .. } | Error::IncompleteSearch(_) => Outcome::Incomplete,
            Error::IdentityFails { .. }
            | Error::PresentationIncomplete(_)
            | Error::NotFound(_)
            | Error::FibreMismatch
            | Error::NonAffineRho
            | Error::NotInH0(_) => Outcome::CheckFailed,
            _ => Outcome::InputError,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub line: usize,
    pub inputs: Value,
    pub result: Value,
    pub certificates: Value,
    pub flags: Value,
    pub outcome: Outcome,
    /// Human-readable lines.
    pub text: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    /// Everything except timing; identical for identical scripts.
    pub fn payload(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "line": self.line,
            "inputs": self.inputs,
            "result": self.result,
            "certificates": self.certificates,
            "flags": self.flags,
            "status": self.outcome.label(),
            "exit_code": self.outcome.exit_code(),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.payload();
        v["timing"] = json!({ "elapsed_ms": self.elapsed.as_secs_f64() * 1000.0 });
        v
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("== {} (line {}) ==\n", self.command, self.line);
        for l in &self.text {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("status: {} [{:.1} ms]\n", self.outcome.label(), self.elapsed.as_secs_f64() * 1000.0));
        out
    }
}
