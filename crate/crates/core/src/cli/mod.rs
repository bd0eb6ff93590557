//! Batch surface: session scripts, command dispatch and reports.

pub mod commands;
pub mod dsl;
pub mod report;
pub mod session;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::TermOrder;
use crate::config::Config;

pub use commands::run_command;
pub use dsl::{parse_session, Command, Script, ScriptError, Stmt};
pub use report::{Outcome, Report, SCHEMA};
pub use session::Session;

#[derive(Parser, Debug)]
#[command(name = "sigma-dyn", version, about = "Exact computation with rational sigma-varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Runs every command of a session script.
    Run {
        script: PathBuf,
        /// One JSON document per command instead of text.
        #[arg(long)]
        json: bool,
        /// Maximum S-pair reductions per Gröbner basis.
        #[arg(long, default_value_t = 50_000)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    Grevlex,
    Lex,
}

impl From<OrderArg> for TermOrder {
    fn from(o: OrderArg) -> TermOrder {
        match o {
            OrderArg::Grevlex => TermOrder::Grevlex,
            OrderArg::Lex => TermOrder::Lex,
        }
    }
}

/// Output of a whole run.
pub struct RunOutput {
    pub reports: Vec<Report>,
    /// Set when the script did not parse or a declaration did not build.
    pub input_error: Option<String>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.input_error.is_some() {
            return Outcome::InputError.exit_code();
        }
        self.reports.iter().map(|r| r.outcome.exit_code()).max().unwrap_or(0)
    }

    pub fn render(&self, as_json: bool) -> String {
        let mut out = String::new();
        if let Some(e) = &self.input_error {
            if as_json {
                let doc = json!({ "schema": SCHEMA, "command": null, "error": e, "status": "input-error", "exit_code": 4 });
                out.push_str(&doc.to_string());
                out.push('\n');
            } else {
                out.push_str(&format!("input error: {e}\n"));
            }
            return out;
        }
        for r in &self.reports {
            if as_json {
                out.push_str(&r.to_json().to_string());
                out.push('\n');
            } else {
                out.push_str(&r.render_text());
            }
        }
        out
    }
}

/// Parses, builds and runs a script.
pub fn run_script(text: &str, cfg: Config) -> RunOutput {
    let script = match parse_session(text) {
        Ok(s) => s,
        Err(e) => return RunOutput { reports: Vec::new(), input_error: Some(e.to_string()) },
    };
    let mut session = match Session::build(&script, cfg) {
        Ok(s) => s,
        Err(e) => {
            return RunOutput {
                reports: Vec::new(),
                input_error: Some(format!("{}: `{}`: {}", e.line, e.name, e.error)),
            }
        }
    };
    let reports = script.commands().map(|(line, c)| run_command(&mut session, c, line)).collect();
    RunOutput { reports, input_error: None }
}

/// Entry point behind the binary; returns the exit code.
pub fn main_with(cli: Cli) -> i32 {
    match cli.cmd {
        Cmd::Run { script, json, budget, order } => {
            let text = match std::fs::read_to_string(&script) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", script.display());
                    return Outcome::InputError.exit_code();
                }
            };
            let cfg = Config::default().with_budget(budget).with_order(order.into());
            let out = run_script(&text, cfg);
            print!("{}", out.render(json));
            out.exit_code()
        }
    }
}
